//! Bhattacharyya-parameter code construction.
//!
//! The reliability of the raw channel is measured by
//! `Z(W) = ∫ sqrt(W(y|0) W(y|1)) dy`, evaluated numerically for the Gaussian
//! (AWGN) and Gaussian-surrogate (Rayleigh) channels. A single scalar `Z_0` is
//! then expanded into `N` bit-channel parameters by `n` levels of the
//! polarization recursion: the even child `2i` takes the "minus" value of the
//! chosen [`RecursionRule`], the odd child `2i + 1` takes `z²`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::{snr_db_to_sigma2, ChannelSpec};
use crate::polar::CodeConfig;
use crate::{Error, Result};

/// Absolute tolerance of [`bhattacharyya_numeric`].
pub const QUADRATURE_ABS_TOL: f64 = 1e-8;
/// Normalization tolerance accepted for a density pair.
pub const DENSITY_NORM_TOL: f64 = 1e-6;
/// Support half-width beyond the outermost mean, in units of σ.
pub const SUPPORT_SIGMAS: f64 = 10.0;
/// SNR above which the hybrid policy switches to the constant `Z_0 = 0.5`.
pub const HYBRID_SWITCH_SNR_DB: f64 = 1.0;

/// Bit-channel Bhattacharyya parameters `Z(W_N^{(i)})`, indexed naturally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReliabilityVector(Vec<f64>);

impl ReliabilityVector {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if let Some(bad) = z.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidParameter(format!("Bhattacharyya value {bad} outside [0, 1]")));
        }
        Ok(Self(z))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Minus-branch rule of the polarization recursion; the plus branch is always `z²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecursionRule {
    /// `2z − z²`
    Type1,
    /// `z`
    Type2,
    /// `(2z − z² + z) / 2`
    Type3,
    /// Exact erasure-channel rule, numerically identical to `Type1`.
    BecExact,
}

impl RecursionRule {
    pub const COMPARED: [RecursionRule; 3] = [RecursionRule::Type1, RecursionRule::Type2, RecursionRule::Type3];

    pub fn minus(self, z: f64) -> f64 {
        match self {
            RecursionRule::Type1 | RecursionRule::BecExact => 2.0 * z - z * z,
            RecursionRule::Type2 => z,
            RecursionRule::Type3 => 0.5 * (2.0 * z - z * z + z),
        }
    }

    pub fn plus(self, z: f64) -> f64 {
        z * z
    }

    pub fn name(self) -> &'static str {
        match self {
            RecursionRule::Type1 => "type1",
            RecursionRule::Type2 => "type2",
            RecursionRule::Type3 => "type3",
            RecursionRule::BecExact => "bec",
        }
    }
}

impl fmt::Display for RecursionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RecursionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "type1" => Ok(RecursionRule::Type1),
            "type2" => Ok(RecursionRule::Type2),
            "type3" => Ok(RecursionRule::Type3),
            "bec" | "bec_exact" | "becexact" => Ok(RecursionRule::BecExact),
            other => Err(Error::InvalidParameter(format!("unknown recursion rule {other:?}"))),
        }
    }
}

/// How the scalar starting value `Z_0` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Z0Policy {
    /// Bhattacharyya parameter of the actual channel.
    Proposed,
    /// A fixed value regardless of the channel.
    Constant(f64),
    /// Rayleigh only: `Constant(0.5)` above 1 dB SNR, `Proposed` otherwise.
    PaperHybrid,
}

impl fmt::Display for Z0Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Z0Policy::Proposed => f.write_str("proposed"),
            Z0Policy::Constant(v) => write!(f, "constant:{v}"),
            Z0Policy::PaperHybrid => f.write_str("hybrid"),
        }
    }
}

impl FromStr for Z0Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "proposed" => Ok(Z0Policy::Proposed),
            "hybrid" => Ok(Z0Policy::PaperHybrid),
            _ => {
                let v = lower
                    .strip_prefix("constant:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown z0 policy {s:?}")))?;
                Ok(Z0Policy::Constant(v))
            }
        }
    }
}

type Density = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// The two conditional output densities `W(y|0)`, `W(y|1)` of a binary-input channel.
pub struct ConditionalDensityPair {
    w0: Density,
    w1: Density,
    support: (f64, f64),
}

impl fmt::Debug for ConditionalDensityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConditionalDensityPair")
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl ConditionalDensityPair {
    pub fn new(
        w0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        w1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support: (f64, f64),
    ) -> Result<Self> {
        let (lo, hi) = support;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!("bad support [{lo}, {hi}]")));
        }
        Ok(Self {
            w0: Box::new(w0),
            w1: Box::new(w1),
            support,
        })
    }

    /// Gaussians of standard deviation `sigma` centred at `−amplitude` (bit 0)
    /// and `+amplitude` (bit 1).
    pub fn antipodal_gaussian(amplitude: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma {sigma} must be positive")));
        }
        let half_width = amplitude.abs() + SUPPORT_SIGMAS * sigma;
        Self::new(
            move |y| gaussian_pdf(y, -amplitude, sigma),
            move |y| gaussian_pdf(y, amplitude, sigma),
            (-half_width, half_width),
        )
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn w0(&self, y: f64) -> f64 {
        (self.w0)(y)
    }

    pub fn w1(&self, y: f64) -> f64 {
        (self.w1)(y)
    }

    /// Checks that both densities integrate to one over the support.
    pub fn check_normalized(&self) -> Result<()> {
        let (lo, hi) = self.support;
        for (label, w) in [("W(y|0)", &self.w0), ("W(y|1)", &self.w1)] {
            let mass = integrate(|y| finite(w(y), y), lo, hi, QUADRATURE_ABS_TOL)?;
            if (mass - 1.0).abs() > DENSITY_NORM_TOL {
                return Err(Error::InvalidParameter(format!("{label} integrates to {mass}, not 1")));
            }
        }
        Ok(())
    }
}

fn gaussian_pdf(y: f64, mean: f64, sigma: f64) -> f64 {
    let t = (y - mean) / sigma;
    (-0.5 * t * t).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

fn finite(v: f64, y: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::NonFiniteDensity(y))
    }
}

/// `Z(W) = ∫ sqrt(W(y|0) W(y|1)) dy` by adaptive Gauss–Kronrod quadrature.
pub fn bhattacharyya_numeric(densities: &ConditionalDensityPair) -> Result<f64> {
    densities.check_normalized()?;
    let (lo, hi) = densities.support;
    let z = integrate(
        |y| Ok(finite(densities.w0(y), y)?.sqrt() * finite(densities.w1(y), y)?.sqrt()),
        lo,
        hi,
        QUADRATURE_ABS_TOL,
    )?;
    Ok(z.clamp(0.0, 1.0))
}

/// Initial `Z` of the BPSK AWGN channel with noise std `sigma`.
pub fn initial_z_awgn(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma {sigma} must be positive")));
    }
    bhattacharyya_numeric(&ConditionalDensityPair::antipodal_gaussian(1.0, sigma)?)
}

/// Mean amplitude `sqrt(2 ln 4)·K` of the Rayleigh construction surrogate.
pub fn rayleigh_surrogate_mean(k: f64) -> f64 {
    (2.0 * 4f64.ln()).sqrt() * k
}

/// Initial `Z` of the Rayleigh channel with scaling factor `k` at `snr_db`.
pub fn initial_z_rayleigh(k: f64, snr_db: f64) -> Result<f64> {
    initial_z_rayleigh_sigma(k, snr_db_to_sigma2(snr_db).sqrt())
}

fn initial_z_rayleigh_sigma(k: f64, sigma: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("scaling factor {k} must be positive")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma {sigma} must be positive")));
    }
    bhattacharyya_numeric(&ConditionalDensityPair::antipodal_gaussian(
        rayleigh_surrogate_mean(k),
        sigma,
    )?)
}

/// Starting value `Z_0` for `channel` under `policy`.
pub fn initial_z(channel: &ChannelSpec, policy: Z0Policy) -> Result<f64> {
    channel.validate()?;
    match policy {
        Z0Policy::Constant(z0) => {
            if !(0.0..=1.0).contains(&z0) {
                return Err(Error::InvalidParameter(format!("z0 {z0} outside [0, 1]")));
            }
            Ok(z0)
        }
        Z0Policy::Proposed => match *channel {
            ChannelSpec::Bec { epsilon } => Ok(epsilon),
            ChannelSpec::AwgnBpsk { sigma } => initial_z_awgn(sigma),
            ChannelSpec::RayleighBpsk { k, sigma } => initial_z_rayleigh_sigma(k, sigma),
        },
        Z0Policy::PaperHybrid => match *channel {
            ChannelSpec::RayleighBpsk { k, sigma } => {
                // SNR > 1 dB  <=>  σ² < 10^{-1/10}
                if sigma * sigma < snr_db_to_sigma2(HYBRID_SWITCH_SNR_DB) {
                    Ok(0.5)
                } else {
                    initial_z_rayleigh_sigma(k, sigma)
                }
            }
            _ => Err(Error::InvalidParameter(
                "the hybrid z0 policy is defined for Rayleigh channels only".into(),
            )),
        },
    }
}

/// Expands `z0` through `n` polarization levels.
pub fn evolve(z0: f64, n: u32, rule: RecursionRule) -> Result<ReliabilityVector> {
    if !(0.0..=1.0).contains(&z0) {
        return Err(Error::InvalidParameter(format!("z0 {z0} outside [0, 1]")));
    }
    if n > 30 {
        return Err(Error::InvalidParameter(format!("exponent {n} too large")));
    }
    let mut z = Vec::with_capacity(1 << n);
    z.push(z0);
    for _ in 0..n {
        let next: Vec<f64> = z
            .iter()
            .flat_map(|&p| [rule.minus(p).clamp(0.0, 1.0), rule.plus(p).clamp(0.0, 1.0)])
            .collect();
        z = next;
    }
    Ok(ReliabilityVector(z))
}

/// Indices of the `k` smallest entries of `z` (lowest index wins ties), sorted ascending.
pub fn select_information_set(z: &ReliabilityVector, k: usize) -> Result<Vec<usize>> {
    if k > z.len() {
        return Err(Error::InvalidParameter(format!("K = {k} exceeds N = {}", z.len())));
    }
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| z.0[a].total_cmp(&z.0[b]).then(a.cmp(&b)));
    let mut chosen = order[..k].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// `Σ_{i∈A} z_i`, an upper bound on the block error probability.
pub fn union_bound(z: &ReliabilityVector, a: &[usize]) -> Result<f64> {
    a.iter()
        .map(|&i| {
            z.0.get(i).copied().ok_or(Error::IndexOutOfRange { index: i, len: z.len() })
        })
        .sum()
}

/// Number of information bits for rate `rate` at block length `2^n`.
pub fn info_len_for_rate(n: u32, rate: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidParameter(format!("rate {rate} outside [0, 1]")));
    }
    Ok(((1u64 << n) as f64 * rate).round() as usize)
}

/// Full construction: `Z_0` from the channel, recursion, then information-set selection.
pub fn construct(
    channel: &ChannelSpec,
    policy: Z0Policy,
    rule: RecursionRule,
    n: u32,
    k: usize,
) -> Result<(CodeConfig, ReliabilityVector)> {
    let z0 = initial_z(channel, policy)?;
    let z = evolve(z0, n, rule)?;
    let a = select_information_set(&z, k)?;
    Ok((CodeConfig::new(n, a)?, z))
}

// Gauss–Kronrod 7/15 nodes and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const INITIAL_PANELS: usize = 32;
const MAX_PANELS: usize = 4096;

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
pub(crate) fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let width = (b - a) / INITIAL_PANELS as f64;
    let mut panels = Vec::with_capacity(MAX_PANELS);
    for i in 0..INITIAL_PANELS {
        let lo = a + width * i as f64;
        let hi = if i + 1 == INITIAL_PANELS { b } else { lo + width };
        let (v, e) = gk15(&f, lo, hi)?;
        panels.push((lo, hi, v, e));
    }
    loop {
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol {
            break;
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::QuadratureDiverged(err));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid)?;
        let (v2, e2) = gk15(&f, mid, hi)?;
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
    Ok(panels.iter().map(|p| p.2).sum())
}
