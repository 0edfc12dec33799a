//! Successive-cancellation decoding.
//!
//! The decoder walks the natural-order code tree depth first. Stage `s`
//! (node size `2^s`) keeps its LLRs in `llr[2^s .. 2^(s+1)]` and its
//! re-encoded partial sums in `bits[2^s .. 2^(s+1)]`; the root stage holds
//! the channel LLRs. Memory is `O(N)` and every decode performs exactly
//! `N·log2(N)` check/variable node evaluations.

use crate::channels::LLR_MAX;
use crate::polar::{log2_exact, CodeConfig, Slot};
use crate::{Error, Result};

/// Check-node rule `f(α, β)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CheckRule {
    /// `sign(α)·sign(β)·min(|α|, |β|)`
    #[default]
    MinSum,
    /// `2·atanh(tanh(α/2)·tanh(β/2))`
    Exact,
}

impl CheckRule {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            CheckRule::MinSum => {
                let m = a.abs().min(b.abs());
                if (a < 0.0) != (b < 0.0) {
                    -m
                } else {
                    m
                }
            }
            CheckRule::Exact => {
                let p = (0.5 * a).tanh() * (0.5 * b).tanh();
                // keep atanh finite for saturated inputs
                let p = p.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                (2.0 * p.atanh()).clamp(-LLR_MAX, LLR_MAX)
            }
        }
    }
}

/// Variable-node update `g(α, β, û) = β + (1 − 2û)·α`.
#[inline]
pub fn variable_update(a: f64, b: f64, u: u8) -> f64 {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScOutput {
    /// Decoded information bits (length `K`).
    pub info: Vec<u8>,
    /// Re-encoded codeword estimate (length `N`).
    pub codeword: Vec<u8>,
    /// Full decision sequence `û` (length `N`).
    pub decisions: Vec<u8>,
}

/// Reusable SC decoder with preallocated stage buffers.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    rule: CheckRule,
    llr: Vec<f64>,
    bits: Vec<u8>,
    ops: u64,
}

impl Default for ScDecoder {
    fn default() -> Self {
        Self::new(CheckRule::MinSum)
    }
}

impl ScDecoder {
    pub fn new(rule: CheckRule) -> Self {
        Self {
            rule,
            llr: Vec::new(),
            bits: Vec::new(),
            ops: 0,
        }
    }

    pub fn rule(&self) -> CheckRule {
        self.rule
    }

    /// Number of `f`/`g` evaluations performed by the last call to [`decode`](Self::decode).
    pub fn ops(&self) -> u64 {
        self.ops
    }

    pub fn decode(&mut self, llrs: &[f64], config: &CodeConfig) -> Result<ScOutput> {
        let len = config.block_len();
        if llrs.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: llrs.len(),
            });
        }
        let n = log2_exact(len)?;
        self.llr.clear();
        self.llr.resize(2 * len, 0.0);
        self.bits.clear();
        self.bits.resize(2 * len, 0);
        self.llr[len..].copy_from_slice(llrs);
        self.ops = 0;

        let mut decisions = vec![0u8; len];
        self.node(n, 0, config.slots(), &mut decisions);

        Ok(ScOutput {
            info: config.gather(&decisions),
            codeword: self.bits[len..].to_vec(),
            decisions,
        })
    }

    fn node(&mut self, stage: u32, first: usize, slots: &[Slot], decisions: &mut [u8]) {
        if stage == 0 {
            let bit = match slots[first] {
                Slot::Frozen(v) => v,
                Slot::Info(_) => u8::from(self.llr[1] < 0.0),
            };
            self.bits[1] = bit;
            decisions[first] = bit;
            return;
        }
        let half = 1usize << (stage - 1);
        let (lo, hi) = (2 * half, 3 * half);

        for j in 0..half {
            self.llr[half + j] = self.rule.apply(self.llr[lo + j], self.llr[hi + j]);
        }
        self.ops += half as u64;
        self.node(stage - 1, first, slots, decisions);

        for j in 0..half {
            let left = self.bits[half + j];
            self.bits[lo + j] = left;
            self.llr[half + j] = variable_update(self.llr[lo + j], self.llr[hi + j], left);
        }
        self.ops += half as u64;
        self.node(stage - 1, first + half, slots, decisions);

        for j in 0..half {
            let right = self.bits[half + j];
            self.bits[lo + j] ^= right;
            self.bits[hi + j] = right;
        }
    }
}

/// One-shot SC decode with the default min-sum rule.
pub fn sc_decode(llrs: &[f64], config: &CodeConfig) -> Result<ScOutput> {
    ScDecoder::default().decode(llrs, config)
}
