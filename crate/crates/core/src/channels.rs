//! BPSK modulation, channel simulation and LLR demodulation.
//!
//! Sign convention: bit 0 is sent as −1 and bit 1 as +1, and an LLR is
//! `ln(W(y|0) / W(y|1))`, so a positive LLR favours bit 0.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// LLR saturation magnitude.
pub const LLR_MAX: f64 = 100.0;

/// Scaling factor that makes the mean fading power `2K²` close to one.
pub const DEFAULT_K_FACTOR: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Bec { epsilon: f64 },
    AwgnBpsk { sigma: f64 },
    RayleighBpsk { k: f64, sigma: f64 },
}

impl ChannelSpec {
    pub fn awgn_from_snr_db(snr_db: f64) -> Self {
        ChannelSpec::AwgnBpsk {
            sigma: snr_db_to_sigma2(snr_db).sqrt(),
        }
    }

    pub fn rayleigh_from_snr_db(k: f64, snr_db: f64) -> Self {
        ChannelSpec::RayleighBpsk {
            k,
            sigma: snr_db_to_sigma2(snr_db).sqrt(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelSpec::Bec { epsilon } if !(0.0..=1.0).contains(&epsilon) => Err(
                Error::InvalidParameter(format!("erasure probability {epsilon} outside [0, 1]")),
            ),
            ChannelSpec::AwgnBpsk { sigma } | ChannelSpec::RayleighBpsk { sigma, .. }
                if !(sigma > 0.0 && sigma.is_finite()) =>
            {
                Err(Error::InvalidParameter(format!("noise std {sigma} must be positive")))
            }
            ChannelSpec::RayleighBpsk { k, .. } if !(k > 0.0 && k.is_finite()) => Err(
                Error::InvalidParameter(format!("scaling factor {k} must be positive")),
            ),
            _ => Ok(()),
        }
    }

    /// Noise variance, if the channel is Gaussian.
    pub fn sigma2(&self) -> Option<f64> {
        match *self {
            ChannelSpec::Bec { .. } => None,
            ChannelSpec::AwgnBpsk { sigma } | ChannelSpec::RayleighBpsk { sigma, .. } => Some(sigma * sigma),
        }
    }
}

/// `σ² = (10^{S/10})^{-1}`.
pub fn snr_db_to_sigma2(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

pub fn sigma2_to_snr_db(sigma2: f64) -> f64 {
    -10.0 * sigma2.log10()
}

/// Seedable simulation RNG (ChaCha8).
///
/// Workers and frames get independent streams through [`SimRng::split`],
/// which hashes the parent seed together with the child index.
#[derive(Debug, Clone)]
pub struct SimRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child stream number `index`; depends only on the seed, not on how
    /// much of this stream has been consumed.
    pub fn split(&self, index: u64) -> SimRng {
        SimRng::new(split_seed(self.seed, index))
    }

    pub fn bit(&mut self) -> u8 {
        (self.inner.next_u32() & 1) as u8
    }

    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    pub fn fill_bits(&mut self, out: &mut [u8]) {
        for chunk in out.chunks_mut(64) {
            let word = self.inner.next_u64();
            for (i, b) in chunk.iter_mut().enumerate() {
                *b = ((word >> i) & 1) as u8;
            }
        }
    }
}

/// `splitmix64(seed ⊕ splitmix64(index))`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Channel output for one block.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    /// BEC output: `Some(bit)` or `None` for an erasure.
    Erasure(Vec<Option<u8>>),
    /// AWGN output samples.
    Real(Vec<f64>),
    /// Rayleigh output samples together with the realized fading amplitudes.
    Faded { y: Vec<f64>, gain: Vec<f64> },
}

impl Observation {
    pub fn len(&self) -> usize {
        match self {
            Observation::Erasure(v) => v.len(),
            Observation::Real(y) => y.len(),
            Observation::Faded { y, .. } => y.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Maps bit `b` to `2b − 1`.
pub fn modulate_bpsk(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { -1.0 } else { 1.0 }).collect()
}

/// Passes `symbols` through `channel`.
///
/// Gaussian channels expect BPSK symbols (±1); the BEC expects raw bits (0/1).
pub fn transmit(symbols: &[f64], channel: &ChannelSpec, rng: &mut SimRng) -> Result<Observation> {
    channel.validate()?;
    match *channel {
        ChannelSpec::Bec { epsilon } => {
            let out = symbols
                .iter()
                .map(|&s| {
                    let bit = if s == 0.0 {
                        0
                    } else if s == 1.0 {
                        1
                    } else {
                        return Err(Error::AlphabetMismatch(s));
                    };
                    Ok(if rng.uniform() < epsilon { None } else { Some(bit) })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Observation::Erasure(out))
        }
        ChannelSpec::AwgnBpsk { sigma } => {
            check_bpsk(symbols)?;
            Ok(Observation::Real(
                symbols.iter().map(|&s| s + sigma * rng.standard_normal()).collect(),
            ))
        }
        ChannelSpec::RayleighBpsk { k, sigma } => {
            check_bpsk(symbols)?;
            let mut y = Vec::with_capacity(symbols.len());
            let mut gain = Vec::with_capacity(symbols.len());
            for &s in symbols {
                let a = rayleigh_amplitude(k, rng);
                gain.push(a);
                y.push(a * s + sigma * rng.standard_normal());
            }
            Ok(Observation::Faded { y, gain })
        }
    }
}

/// Convenience wrapper: modulates (if needed) and transmits a bit vector.
pub fn transmit_bits(bits: &[u8], channel: &ChannelSpec, rng: &mut SimRng) -> Result<Observation> {
    match channel {
        ChannelSpec::Bec { .. } => {
            let raw: Vec<f64> = bits.iter().map(|&b| b as f64).collect();
            transmit(&raw, channel, rng)
        }
        _ => transmit(&modulate_bpsk(bits), channel, rng),
    }
}

/// One draw of `a = K·sqrt(x² + y²)` with standard normal `x`, `y`.
pub fn rayleigh_amplitude(k: f64, rng: &mut SimRng) -> f64 {
    let x = rng.standard_normal();
    let y = rng.standard_normal();
    k * x.hypot(y)
}

fn check_bpsk(symbols: &[f64]) -> Result<()> {
    match symbols.iter().find(|&&s| s != 1.0 && s != -1.0) {
        Some(&s) => Err(Error::AlphabetMismatch(s)),
        None => Ok(()),
    }
}

/// Per-symbol LLRs, saturated to `±LLR_MAX`.
///
/// Rayleigh demodulation assumes the receiver knows the fading amplitude.
pub fn llr(obs: &Observation, channel: &ChannelSpec) -> Result<Vec<f64>> {
    let clamp = |v: f64| v.clamp(-LLR_MAX, LLR_MAX);
    match (obs, channel) {
        (Observation::Erasure(r), ChannelSpec::Bec { .. }) => Ok(r
            .iter()
            .map(|v| match v {
                Some(0) => LLR_MAX,
                Some(_) => -LLR_MAX,
                None => 0.0,
            })
            .collect()),
        (Observation::Real(y), ChannelSpec::AwgnBpsk { sigma }) => {
            let scale = -2.0 / (sigma * sigma);
            Ok(y.iter().map(|&v| clamp(scale * v)).collect())
        }
        (Observation::Faded { y, gain }, ChannelSpec::RayleighBpsk { sigma, .. }) => {
            let scale = -2.0 / (sigma * sigma);
            Ok(y.iter().zip(gain).map(|(&v, &a)| clamp(scale * a * v)).collect())
        }
        _ => Err(Error::VariantMismatch),
    }
}
