//! Monte Carlo engine: BER/FER sweeps, recursion-rule comparison and media
//! transmission runs.
//!
//! Every frame (or media block) draws its randomness from a stream derived
//! only from the run seed and its own index, and per-frame results are reduced
//! by integer summation. Results therefore do not depend on the number of
//! worker threads.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{llr, split_seed, transmit_bits, ChannelSpec, SimRng};
use crate::construction::{construct, info_len_for_rate, RecursionRule, Z0Policy};
use crate::ldpc::{generate_regular_ldpc, ldpc_encode, BpDecoder, LdpcCode, DEFAULT_MAX_ITERS};
use crate::media::{
    bits_to_image, bits_to_pcm, image_to_bits, max_finite_psnr, pcm_to_bits, psnr, spectral_distortion_frames,
    GrayImage, PcmSignal,
};
use crate::polar::{encode_split, CodeConfig};
use crate::sc::ScDecoder;
use crate::{Error, Result};

/// Version written into the `# schema=` header of every CSV.
pub const CSV_SCHEMA: u32 = 1;
/// Frames per batch; early stopping is only checked at batch boundaries.
pub const BATCH_FRAMES: u64 = 1000;
/// Block-error count that ends a grid point when early stopping is on.
pub const DEFAULT_EARLY_STOP_ERRORS: u64 = 100;
/// Width of the header that carries the padding length of a media stream.
pub const HEADER_BITS: usize = 32;

/// A code ready to encode and decode blocks.
#[derive(Debug, Clone)]
pub enum Codec {
    Polar(CodeConfig),
    Ldpc(LdpcCode),
}

impl Codec {
    pub fn block_len(&self) -> usize {
        match self {
            Codec::Polar(c) => c.block_len(),
            Codec::Ldpc(c) => c.block_len(),
        }
    }

    pub fn info_len(&self) -> usize {
        match self {
            Codec::Polar(c) => c.info_len(),
            Codec::Ldpc(c) => c.info_len(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Codec::Polar(_) => "polar",
            Codec::Ldpc(_) => "ldpc",
        }
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        match self {
            Codec::Polar(c) => encode_split(info, c),
            Codec::Ldpc(c) => ldpc_encode(info, c),
        }
    }

    /// Per-thread decoder state.
    pub fn worker(&self) -> CodecWorker {
        match self {
            Codec::Polar(_) => CodecWorker::Polar(ScDecoder::default()),
            Codec::Ldpc(c) => CodecWorker::Ldpc(BpDecoder::new(c.parity_check())),
        }
    }
}

pub enum CodecWorker {
    Polar(ScDecoder),
    Ldpc(BpDecoder),
}

impl CodecWorker {
    /// Decodes one block and returns the information bit estimate.
    pub fn decode_info(&mut self, codec: &Codec, llrs: &[f64]) -> Result<Vec<u8>> {
        match (self, codec) {
            (CodecWorker::Polar(dec), Codec::Polar(cfg)) => Ok(dec.decode(llrs, cfg)?.info),
            (CodecWorker::Ldpc(dec), Codec::Ldpc(code)) => {
                let out = dec.decode(llrs, DEFAULT_MAX_ITERS)?;
                Ok(code.extract_info(&out.codeword))
            }
            _ => Err(Error::InvalidConfig("decoder does not match codec".into())),
        }
    }
}

/// Where the code for a run comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeSource {
    /// A fixed polar code, e.g. loaded from JSON.
    Polar { config: CodeConfig },
    /// A polar code constructed for each channel point.
    PolarConstruct {
        n: u32,
        rate: f64,
        rule: RecursionRule,
        z0: Z0Policy,
    },
    /// A random regular LDPC code, generated once.
    Ldpc { n: usize, dv: usize, dc: usize, seed: u64 },
}

impl CodeSource {
    pub fn codec_name(&self) -> &'static str {
        match self {
            CodeSource::Ldpc { .. } => "ldpc",
            _ => "polar",
        }
    }

    /// Resolves the code for one channel point.
    pub fn resolve(&self, channel: &ChannelSpec) -> Result<Codec> {
        match self {
            CodeSource::Polar { config } => Ok(Codec::Polar(config.clone())),
            CodeSource::PolarConstruct { n, rate, rule, z0 } => {
                let k = info_len_for_rate(*n, *rate)?;
                Ok(Codec::Polar(construct(channel, *z0, *rule, *n, k)?.0))
            }
            CodeSource::Ldpc { n, dv, dc, seed } => Ok(Codec::Ldpc(generate_regular_ldpc(*n, *dv, *dc, *seed)?)),
        }
    }

    fn depends_on_channel(&self) -> bool {
        matches!(self, CodeSource::PolarConstruct { .. })
    }
}

/// Channel family swept over a one-dimensional grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelFamily {
    /// Grid values are erasure probabilities.
    Bec,
    /// Grid values are SNRs in dB.
    Awgn,
    /// Grid values are SNRs in dB.
    Rayleigh { k: f64 },
}

impl ChannelFamily {
    pub fn at(&self, param: f64) -> ChannelSpec {
        match *self {
            ChannelFamily::Bec => ChannelSpec::Bec { epsilon: param },
            ChannelFamily::Awgn => ChannelSpec::awgn_from_snr_db(param),
            ChannelFamily::Rayleigh { k } => ChannelSpec::rayleigh_from_snr_db(k, param),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Bec => "bec",
            ChannelFamily::Awgn => "awgn",
            ChannelFamily::Rayleigh { .. } => "rayleigh",
        }
    }

    pub fn param_name(&self) -> &'static str {
        match self {
            ChannelFamily::Bec => "epsilon",
            _ => "snr_db",
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses `bec`, `awgn` or `rayleigh` (the latter with the default scaling factor).
impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bec" => Ok(ChannelFamily::Bec),
            "awgn" => Ok(ChannelFamily::Awgn),
            "rayleigh" => Ok(ChannelFamily::Rayleigh {
                k: crate::channels::DEFAULT_K_FACTOR,
            }),
            other => Err(Error::InvalidParameter(format!("unknown channel {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub code: CodeSource,
    pub channel: ChannelFamily,
    pub grid: Vec<f64>,
    pub frames: u64,
    pub seed: u64,
    /// Stop a grid point once this many block errors have been seen.
    #[serde(default)]
    pub early_stop: Option<u64>,
    /// Worker threads; 0 uses all available cores.
    #[serde(default)]
    pub workers: usize,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::InvalidConfig("frames must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidConfig("parameter grid is empty".into()));
        }
        if let Some(bad) = self.grid.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("grid value {bad} is not finite")));
        }
        if self.early_stop == Some(0) {
            return Err(Error::InvalidConfig("early-stop threshold must be positive".into()));
        }
        for &p in &self.grid {
            self.channel.at(p).validate()?;
        }
        Ok(())
    }
}

/// Result of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub param: f64,
    pub frames: u64,
    pub info_len: usize,
    pub bit_errors: u64,
    pub block_errors: u64,
    /// Sum over frames of the squared per-frame bit-error count.
    pub bit_errors_sq: u64,
    pub ber: f64,
    pub fer: f64,
    pub elapsed_secs: f64,
    pub seed: u64,
}

impl SimRecord {
    fn from_counts(param: f64, seed: u64, info_len: usize, counts: Counts, elapsed_secs: f64) -> Self {
        let bits = (counts.frames * info_len as u64).max(1) as f64;
        SimRecord {
            param,
            frames: counts.frames,
            info_len,
            bit_errors: counts.bit_errors,
            block_errors: counts.block_errors,
            bit_errors_sq: counts.bit_errors_sq,
            ber: if info_len == 0 { 0.0 } else { counts.bit_errors as f64 / bits },
            fer: counts.block_errors as f64 / counts.frames.max(1) as f64,
            elapsed_secs,
            seed,
        }
    }

    /// Standard error of the BER estimate, treating frames as the independent unit.
    pub fn ber_std_error(&self) -> f64 {
        if self.frames < 2 || self.info_len == 0 {
            return 0.0;
        }
        let f = self.frames as f64;
        let mean = self.bit_errors as f64 / f;
        let var = (self.bit_errors_sq as f64 / f - mean * mean).max(0.0) * f / (f - 1.0);
        (var / f).sqrt() / self.info_len as f64
    }

    pub fn fer_std_error(&self) -> f64 {
        (self.fer * (1.0 - self.fer) / self.frames.max(1) as f64).sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    frames: u64,
    bit_errors: u64,
    block_errors: u64,
    bit_errors_sq: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts {
            frames: self.frames + o.frames,
            bit_errors: self.bit_errors + o.bit_errors,
            block_errors: self.block_errors + o.block_errors,
            bit_errors_sq: self.bit_errors_sq + o.bit_errors_sq,
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

fn run_frame(codec: &Codec, channel: &ChannelSpec, worker: &mut CodecWorker, mut rng: SimRng) -> Result<Counts> {
    let mut info = vec![0u8; codec.info_len()];
    rng.fill_bits(&mut info);
    let x = codec.encode(&info)?;
    let obs = transmit_bits(&x, channel, &mut rng)?;
    let decoded = worker.decode_info(codec, &llr(&obs, channel)?)?;
    let errors = info.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64;
    Ok(Counts {
        frames: 1,
        bit_errors: errors,
        block_errors: u64::from(errors > 0),
        bit_errors_sq: errors * errors,
    })
}

/// Simulates one channel point; frame `f` uses stream `split(point_seed, f)`.
fn simulate_point(
    codec: &Codec,
    channel: &ChannelSpec,
    frames: u64,
    point_seed: u64,
    early_stop: Option<u64>,
) -> Result<Counts> {
    let base = SimRng::new(point_seed);
    let mut total = Counts::default();
    let mut start = 0;
    while start < frames {
        let end = (start + BATCH_FRAMES).min(frames);
        let batch = (start..end)
            .into_par_iter()
            .map_init(|| codec.worker(), |w, f| run_frame(codec, channel, w, base.split(f)))
            .try_reduce(Counts::default, |a, b| Ok(a + b))?;
        total = total + batch;
        start = end;
        if early_stop.is_some_and(|limit| total.block_errors >= limit) {
            break;
        }
    }
    Ok(total)
}

/// Runs every grid point of `cfg`.
pub fn run_ber_sweep(cfg: &SweepConfig) -> Result<Vec<SimRecord>> {
    cfg.validate()?;
    let pool = pool(cfg.workers)?;
    let fixed = if cfg.code.depends_on_channel() {
        None
    } else {
        Some(cfg.code.resolve(&cfg.channel.at(cfg.grid[0]))?)
    };
    pool.install(|| {
        cfg.grid
            .iter()
            .enumerate()
            .map(|(i, &param)| {
                let started = Instant::now();
                let channel = cfg.channel.at(param);
                let codec = match &fixed {
                    Some(c) => c.clone(),
                    None => cfg.code.resolve(&channel)?,
                };
                let counts = simulate_point(&codec, &channel, cfg.frames, split_seed(cfg.seed, i as u64), cfg.early_stop)?;
                Ok(SimRecord::from_counts(
                    param,
                    cfg.seed,
                    codec.info_len(),
                    counts,
                    started.elapsed().as_secs_f64(),
                ))
            })
            .collect()
    })
}

fn csv_float(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

/// Writes sweep records as CSV. Timing is left out so that reruns are byte-identical.
pub fn write_sweep_csv(mut out: impl Write, cfg: &SweepConfig, records: &[SimRecord]) -> Result<()> {
    writeln!(out, "# schema={CSV_SCHEMA}")?;
    writeln!(
        out,
        "# codec={} channel={} frames={} seed={}",
        cfg.code.codec_name(),
        cfg.channel,
        cfg.frames,
        cfg.seed
    )?;
    writeln!(out, "{},frames,k,bit_errors,block_errors,ber,fer,seed", cfg.channel.param_name())?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_float(r.param),
            r.frames,
            r.info_len,
            r.bit_errors,
            r.block_errors,
            csv_float(r.ber),
            csv_float(r.fer),
            r.seed
        )?;
    }
    Ok(())
}

/// Polar-only comparison of the three minus-branch rules on AWGN and Rayleigh.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleComparisonConfig {
    pub n: u32,
    pub rate: f64,
    pub snr_db: Vec<f64>,
    pub frames: u64,
    pub seed: u64,
    pub k_factor: f64,
    pub z0: Z0Policy,
    #[serde(default)]
    pub early_stop: Option<u64>,
    #[serde(default)]
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleRow {
    pub channel: ChannelFamily,
    pub rule: RecursionRule,
    pub record: SimRecord,
}

pub fn run_rule_comparison(cfg: &RuleComparisonConfig) -> Result<Vec<RuleRow>> {
    let mut rows = Vec::new();
    for family in [ChannelFamily::Awgn, ChannelFamily::Rayleigh { k: cfg.k_factor }] {
        for rule in RecursionRule::COMPARED {
            let sweep = SweepConfig {
                code: CodeSource::PolarConstruct {
                    n: cfg.n,
                    rate: cfg.rate,
                    rule,
                    z0: cfg.z0,
                },
                channel: family,
                grid: cfg.snr_db.clone(),
                frames: cfg.frames,
                seed: cfg.seed,
                early_stop: cfg.early_stop,
                workers: cfg.workers,
            };
            rows.extend(run_ber_sweep(&sweep)?.into_iter().map(|record| RuleRow {
                channel: family,
                rule,
                record,
            }));
        }
    }
    Ok(rows)
}

/// Long-format CSV `channel,rule,snr_db,ber,fer,frames,seed`.
pub fn write_rule_csv(mut out: impl Write, rows: &[RuleRow]) -> Result<()> {
    writeln!(out, "# schema={CSV_SCHEMA}")?;
    writeln!(out, "channel,rule,snr_db,ber,fer,frames,seed")?;
    for row in rows {
        let r = &row.record;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.channel,
            row.rule,
            csv_float(r.param),
            csv_float(r.ber),
            csv_float(r.fer),
            r.frames,
            r.seed
        )?;
    }
    Ok(())
}

/// Block-level statistics of one payload transmission.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransportStats {
    pub blocks: usize,
    pub block_errors: usize,
    pub bit_errors: usize,
    /// The decoded padding header disagreed with the sender's.
    pub header_corrupted: bool,
}

/// Sends `payload` through `codec` and `channel` in `K`-bit blocks.
///
/// The stream is a 32-bit header holding the padding length, then the payload,
/// then zero padding up to a multiple of `K`. The receiver knows the payload
/// length, so a corrupted header is reported but does not misalign the output.
pub fn transmit_payload(
    payload: &[u8],
    codec: &Codec,
    channel: &ChannelSpec,
    seed: u64,
) -> Result<(Vec<u8>, TransportStats)> {
    let k = codec.info_len();
    if k == 0 {
        return Err(Error::InvalidConfig("code carries no information bits".into()));
    }
    let pad = (k - (HEADER_BITS + payload.len()) % k) % k;
    let mut stream = Vec::with_capacity(HEADER_BITS + payload.len() + pad);
    stream.extend((0..HEADER_BITS).rev().map(|s| ((pad as u64 >> s) & 1) as u8));
    stream.extend_from_slice(payload);
    stream.resize(HEADER_BITS + payload.len() + pad, 0);

    let base = SimRng::new(seed);
    let decoded: Vec<(Vec<u8>, usize)> = stream
        .par_chunks(k)
        .enumerate()
        .map_init(
            || codec.worker(),
            |worker, (b, block)| {
                let mut rng = base.split(b as u64);
                let x = codec.encode(block)?;
                let obs = transmit_bits(&x, channel, &mut rng)?;
                let info = worker.decode_info(codec, &llr(&obs, channel)?)?;
                let errors = info.iter().zip(block).filter(|(a, b)| a != b).count();
                Ok((info, errors))
            },
        )
        .collect::<Result<_>>()?;

    let mut stats = TransportStats {
        blocks: decoded.len(),
        ..Default::default()
    };
    let mut received = Vec::with_capacity(stream.len());
    for (info, errors) in decoded {
        stats.block_errors += usize::from(errors > 0);
        stats.bit_errors += errors;
        received.extend(info);
    }
    let header = received[..HEADER_BITS].iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
    stats.header_corrupted = header != pad as u64;
    received.truncate(HEADER_BITS + payload.len());
    received.drain(..HEADER_BITS);
    Ok((received, stats))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Media {
    Image(GrayImage),
    Speech(PcmSignal),
}

impl Media {
    pub fn kind(&self) -> &'static str {
        match self {
            Media::Image(_) => "image",
            Media::Speech(_) => "speech",
        }
    }

    /// Name of the fidelity metric reported for this media kind.
    pub fn metric_name(&self) -> &'static str {
        match self {
            Media::Image(_) => "psnr",
            Media::Speech(_) => "sd",
        }
    }

    fn to_bits(&self) -> Vec<u8> {
        match self {
            Media::Image(img) => image_to_bits(img),
            Media::Speech(sig) => pcm_to_bits(sig),
        }
    }

    fn rebuild(&self, bits: &[u8]) -> Result<Media> {
        match self {
            Media::Image(img) => Ok(Media::Image(bits_to_image(bits, img.width(), img.height())?)),
            Media::Speech(sig) => Ok(Media::Speech(bits_to_pcm(bits, sig)?)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MediaJob {
    pub source: Media,
    pub channel: ChannelSpec,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

#[derive(Debug, Clone)]
pub struct MediaTrial {
    /// PSNR in dB (`+∞` when error free) or spectral distortion in dB.
    pub metric: f64,
    pub stats: TransportStats,
}

#[derive(Debug, Clone)]
pub struct MediaReport {
    pub kind: &'static str,
    pub codec: &'static str,
    pub trials: Vec<MediaTrial>,
    /// Reconstruction from the final trial.
    pub reconstruction: Media,
    /// Per-frame SD of the final trial (speech only).
    pub final_frame_sd: Vec<f64>,
    /// Value substituted for `+∞` PSNR when averaging.
    pub psnr_cap: Option<f64>,
}

impl MediaReport {
    fn finite_metrics(&self) -> Vec<f64> {
        self.trials
            .iter()
            .map(|t| match self.psnr_cap {
                Some(cap) => t.metric.min(cap),
                None => t.metric,
            })
            .collect()
    }

    /// Mean metric over trials, with infinite PSNR capped at [`max_finite_psnr`].
    pub fn mean(&self) -> f64 {
        let v = self.finite_metrics();
        v.iter().sum::<f64>() / v.len().max(1) as f64
    }

    /// Standard error of [`mean`](Self::mean).
    pub fn std_error(&self) -> f64 {
        let v = self.finite_metrics();
        if v.len() < 2 {
            return 0.0;
        }
        let m = self.mean();
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64;
        (var / v.len() as f64).sqrt()
    }

    /// Mean of the raw per-trial metrics; `+∞` if any image trial was error free.
    pub fn raw_mean(&self) -> f64 {
        self.trials.iter().map(|t| t.metric).sum::<f64>() / self.trials.len().max(1) as f64
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        let metric = if self.kind == "image" { "psnr" } else { "sd" };
        writeln!(out, "# schema={CSV_SCHEMA}")?;
        writeln!(
            out,
            "# kind={} codec={} trials={} mean_{metric}={} std_error={}",
            self.kind,
            self.codec,
            self.trials.len(),
            csv_float(self.mean()),
            csv_float(self.std_error())
        )?;
        writeln!(out, "trial,{metric},blocks,block_errors,bit_errors")?;
        for (i, t) in self.trials.iter().enumerate() {
            writeln!(
                out,
                "{i},{},{},{},{}",
                csv_float(t.metric),
                t.stats.blocks,
                t.stats.block_errors,
                t.stats.bit_errors
            )?;
        }
        Ok(())
    }

    /// `frame,sd` for the final trial.
    pub fn write_frame_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "# schema={CSV_SCHEMA}")?;
        writeln!(out, "frame,sd")?;
        for (j, sd) in self.final_frame_sd.iter().enumerate() {
            writeln!(out, "{j},{}", csv_float(*sd))?;
        }
        Ok(())
    }
}

/// Transmits `job.source` `job.trials` times and scores each reconstruction.
pub fn run_media_pipeline(job: &MediaJob, codec: &Codec) -> Result<MediaReport> {
    if job.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    job.channel.validate()?;
    let payload = job.source.to_bits();
    let pool = pool(job.workers)?;
    let mut trials = Vec::with_capacity(job.trials);
    let mut last = None;
    let mut final_frame_sd = Vec::new();
    for t in 0..job.trials {
        let (bits, stats) = pool.install(|| transmit_payload(&payload, codec, &job.channel, split_seed(job.seed, t as u64)))?;
        let recon = job.source.rebuild(&bits)?;
        let metric = match (&job.source, &recon) {
            (Media::Image(a), Media::Image(b)) => psnr(a, b)?,
            (Media::Speech(a), Media::Speech(b)) => {
                let frames = spectral_distortion_frames(a, b)?;
                let mean = frames.iter().sum::<f64>() / frames.len().max(1) as f64;
                final_frame_sd = frames;
                mean
            }
            _ => unreachable!("reconstruction has the source's kind"),
        };
        trials.push(MediaTrial { metric, stats });
        last = Some(recon);
    }
    let psnr_cap = match &job.source {
        Media::Image(img) => Some(max_finite_psnr(img.width(), img.height())),
        Media::Speech(_) => None,
    };
    Ok(MediaReport {
        kind: job.source.kind(),
        codec: codec.name(),
        trials,
        reconstruction: last.expect("at least one trial"),
        final_frame_sd,
        psnr_cap,
    })
}
