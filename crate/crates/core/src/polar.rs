//! Polar encoding with the natural-order Kronecker power of `G_2 = [[1,0],[1,1]]`.
//!
//! No bit-reversal permutation is applied anywhere in the crate: bit-channel
//! `i` of the construction, position `i` of the encoder input and decision `i`
//! of the SC decoder all refer to the same index.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest exponent for which [`generator_matrix`] will materialize `G_N`.
pub const MAX_EXPLICIT_EXPONENT: u32 = 16;

/// Role of one position of the encoder input `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Carries information bit number `.0`.
    Info(usize),
    /// Frozen to the given bit value.
    Frozen(u8),
}

/// One polar code instance: block length `2^n`, information set and frozen values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCodeConfig", into = "RawCodeConfig")]
pub struct CodeConfig {
    n: u32,
    info_set: Vec<usize>,
    frozen_values: Vec<u8>,
    slots: Vec<Slot>,
}

impl CodeConfig {
    /// Builds a code with all frozen bits set to zero.
    pub fn new(n: u32, info_set: Vec<usize>) -> Result<Self> {
        let len = checked_block_len(n)?;
        let frozen = vec![0; len.saturating_sub(info_set.len())];
        Self::with_frozen_values(n, info_set, frozen)
    }

    pub fn with_frozen_values(n: u32, mut info_set: Vec<usize>, frozen_values: Vec<u8>) -> Result<Self> {
        let len = checked_block_len(n)?;
        if info_set.len() > len {
            return Err(Error::InvalidConfig(format!(
                "K = {} exceeds N = {len}",
                info_set.len()
            )));
        }
        info_set.sort_unstable();
        if let Some(w) = info_set.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig(format!("duplicate index {}", w[0])));
        }
        if let Some(&bad) = info_set.iter().find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index: bad, len });
        }
        if frozen_values.len() != len - info_set.len() {
            return Err(Error::InvalidConfig(format!(
                "expected {} frozen values, got {}",
                len - info_set.len(),
                frozen_values.len()
            )));
        }
        check_bits(&frozen_values)?;

        let mut slots = Vec::with_capacity(len);
        let (mut next_info, mut next_frozen) = (0, 0);
        for i in 0..len {
            if info_set.get(next_info) == Some(&i) {
                slots.push(Slot::Info(next_info));
                next_info += 1;
            } else {
                slots.push(Slot::Frozen(frozen_values[next_frozen]));
                next_frozen += 1;
            }
        }
        Ok(Self {
            n,
            info_set,
            frozen_values,
            slots,
        })
    }

    /// Exponent `n` with `N = 2^n`.
    pub fn exponent(&self) -> u32 {
        self.n
    }

    /// Block length `N`.
    pub fn block_len(&self) -> usize {
        1 << self.n
    }

    /// Information length `K`.
    pub fn info_len(&self) -> usize {
        self.info_set.len()
    }

    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.block_len() as f64
    }

    /// Sorted information set `A`.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// Frozen bit values, in increasing order of their positions.
    pub fn frozen_values(&self) -> &[u8] {
        &self.frozen_values
    }

    /// Per-position role table, length `N`.
    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Places `info` on `A` and the frozen values on `A^c`.
    pub fn scatter(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.info_len() {
            return Err(Error::LengthMismatch {
                expected: self.info_len(),
                actual: info.len(),
            });
        }
        Ok(self
            .slots
            .iter()
            .map(|slot| match *slot {
                Slot::Info(j) => info[j] & 1,
                Slot::Frozen(v) => v,
            })
            .collect())
    }

    /// Reads the information bits back out of a full `u` vector.
    pub fn gather(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i]).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RawCodeConfig {
    n: u32,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "A")]
    a: Vec<usize>,
    frozen_values: String,
}

impl TryFrom<RawCodeConfig> for CodeConfig {
    type Error = Error;

    fn try_from(raw: RawCodeConfig) -> Result<Self> {
        if raw.a.len() != raw.k {
            return Err(Error::InvalidConfig(format!(
                "K = {} but A has {} entries",
                raw.k,
                raw.a.len()
            )));
        }
        if raw.a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("A must be strictly increasing".into()));
        }
        let frozen = raw
            .frozen_values
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidConfig(format!("bad frozen bit {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        CodeConfig::with_frozen_values(raw.n, raw.a, frozen)
    }
}

impl From<CodeConfig> for RawCodeConfig {
    fn from(cfg: CodeConfig) -> Self {
        RawCodeConfig {
            n: cfg.n,
            k: cfg.info_set.len(),
            frozen_values: cfg.frozen_values.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect(),
            a: cfg.info_set,
        }
    }
}

fn checked_block_len(n: u32) -> Result<usize> {
    if n >= usize::BITS - 1 {
        return Err(Error::InvalidConfig(format!("exponent {n} is too large")));
    }
    Ok(1usize << n)
}

pub(crate) fn check_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::InvalidParameter(format!("bit value {b} is not 0 or 1"))),
        None => Ok(()),
    }
}

/// Returns `log2(len)` if `len` is a power of two.
pub fn log2_exact(len: usize) -> Result<u32> {
    if len.is_power_of_two() {
        Ok(len.trailing_zeros())
    } else {
        Err(Error::NotPowerOfTwo(len))
    }
}

/// `G_2^{⊗n}` in natural row order, as rows of 0/1 bytes.
pub fn generator_matrix(n: u32) -> Result<Vec<Vec<u8>>> {
    if n > MAX_EXPLICIT_EXPONENT {
        return Err(Error::ExponentTooLarge(n));
    }
    let mut g = vec![vec![1u8]];
    for _ in 0..n {
        let half = g.len();
        let mut next = vec![vec![0u8; 2 * half]; 2 * half];
        for (r, row) in g.iter().enumerate() {
            next[r][..half].copy_from_slice(row);
            next[half + r][..half].copy_from_slice(row);
            next[half + r][half..].copy_from_slice(row);
        }
        g = next;
    }
    Ok(g)
}

/// In-place `x = u · G_N` over GF(2).
///
/// The transform is its own inverse, so the same routine recovers `u` from a
/// codeword.
pub fn transform_in_place(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// Encodes a full length-`N` input vector.
pub fn encode(u: &[u8]) -> Result<Vec<u8>> {
    log2_exact(u.len())?;
    check_bits(u)?;
    let mut x = u.to_vec();
    transform_in_place(&mut x);
    Ok(x)
}

/// Encodes `K` information bits under `config`, filling `A^c` with the frozen values.
pub fn encode_split(info: &[u8], config: &CodeConfig) -> Result<Vec<u8>> {
    check_bits(info)?;
    let mut u = config.scatter(info)?;
    transform_in_place(&mut u);
    Ok(u)
}
