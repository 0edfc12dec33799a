//! `polarlink` command-line front end.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use polarlink::channels::{ChannelSpec, DEFAULT_K_FACTOR};
use polarlink::construction::{construct, evolve, info_len_for_rate, initial_z, RecursionRule, ReliabilityVector, Z0Policy};
use polarlink::media::{GrayImage, PcmSignal};
use polarlink::polar::CodeConfig;
use polarlink::sim::{
    run_ber_sweep, run_media_pipeline, run_rule_comparison, write_rule_csv, write_sweep_csv, ChannelFamily, Codec,
    CodeSource, Media, MediaJob, RuleComparisonConfig, SweepConfig,
};

const SEED_ENV: &str = "POLARLINK_SEED";
const FALLBACK_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "polarlink", version, about = "Polar code construction, simulation and media transmission")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polar code and write it as JSON, with a sidecar `index,z` CSV.
    Construct(ConstructArgs),
    /// Monte Carlo BER/FER sweep over a channel parameter grid.
    Simulate(SimulateArgs),
    /// Compare the three recursion rules on AWGN and Rayleigh channels.
    CompareRules(CompareArgs),
    /// Send a PGM image through a coded channel.
    TransmitImage(ImageArgs),
    /// Send a WAV recording through a coded channel.
    TransmitSpeech(SpeechArgs),
    /// Write the full Bhattacharyya vector as `index,z` CSV.
    ExportZvector(ZvectorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelKind {
    Bec,
    Awgn,
    Rayleigh,
}

impl ChannelKind {
    fn family(self, k: f64) -> ChannelFamily {
        match self {
            ChannelKind::Bec => ChannelFamily::Bec,
            ChannelKind::Awgn => ChannelFamily::Awgn,
            ChannelKind::Rayleigh => ChannelFamily::Rayleigh { k },
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum CodecKind {
    Polar,
    Ldpc,
}

/// Channel given the way `construct` takes it: ε for BEC, σ for AWGN, SNR in dB for Rayleigh.
#[derive(Args)]
struct ChannelArgs {
    #[arg(long, value_enum)]
    channel: ChannelKind,
    /// ε (bec), σ (awgn) or SNR in dB (rayleigh).
    #[arg(long)]
    param: f64,
    #[arg(long, default_value_t = DEFAULT_K_FACTOR)]
    k_factor: f64,
}

impl ChannelArgs {
    fn spec(&self) -> ChannelSpec {
        match self.channel {
            ChannelKind::Bec => ChannelSpec::Bec { epsilon: self.param },
            ChannelKind::Awgn => ChannelSpec::AwgnBpsk { sigma: self.param },
            ChannelKind::Rayleigh => ChannelSpec::rayleigh_from_snr_db(self.k_factor, self.param),
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Exponent n of the block length N = 2^n.
    #[arg(long)]
    n: u32,
    #[arg(long)]
    rate: f64,
    #[arg(long, default_value = "type1")]
    rule: RecursionRule,
    #[arg(long, default_value = "proposed")]
    z0: Z0Policy,
    /// Output JSON path; the Z vector goes next to it as `<stem>.z.csv`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ZvectorArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value = "type1")]
    rule: RecursionRule,
    #[arg(long, default_value = "proposed")]
    z0: Z0Policy,
    /// Output CSV; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Sweep settings; each can also come from the TOML file given by `--config`.
#[derive(Args, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct SimulateArgs {
    /// TOML file with any of the options below (flags take precedence).
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Fixed polar code from a `construct` JSON file.
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long, value_enum)]
    codec: Option<CodecKind>,
    #[arg(long, value_enum)]
    #[serde(skip)]
    channel: Option<ChannelKind>,
    #[arg(skip)]
    #[serde(rename = "channel")]
    channel_name: Option<String>,
    #[arg(long)]
    k_factor: Option<f64>,
    /// Comma-separated SNR grid in dB (awgn, rayleigh).
    #[arg(long, value_delimiter = ',')]
    snr_db: Option<Vec<f64>>,
    /// Comma-separated erasure probabilities (bec).
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    /// Exponent n of N = 2^n for constructed codes.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    #[serde(default, deserialize_with = "parsed")]
    rule: Option<RecursionRule>,
    #[arg(long)]
    #[serde(default, deserialize_with = "parsed")]
    z0: Option<Z0Policy>,
    #[arg(long)]
    ldpc_dv: Option<usize>,
    #[arg(long)]
    ldpc_dc: Option<usize>,
    #[arg(long)]
    ldpc_seed: Option<u64>,
    #[arg(long)]
    frames: Option<u64>,
    /// Defaults to $POLARLINK_SEED, then 1.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Stop a point after this many block errors.
    #[arg(long, num_args = 0..=1, default_missing_value = "100")]
    early_stop: Option<u64>,
    /// Output CSV; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Reads an optional value through its `FromStr` form, e.g. `z0 = "constant:0.3"`.
fn parsed<'de, D, T>(d: D) -> std::result::Result<Option<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    Option::<String>::deserialize(d)?
        .map(|s| s.parse().map_err(serde::de::Error::custom))
        .transpose()
}

macro_rules! merge_fields {
    ($flags:expr, $file:expr, $($field:ident),*) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field.take(); } )*
    };
}

impl SimulateArgs {
    fn with_config_file(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let mut file: SimulateArgs = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if self.channel.is_none() {
            if let Some(name) = file.channel_name.take() {
                self.channel = Some(ChannelKind::from_str(&name, true).map_err(|e| anyhow::anyhow!(e))?);
            }
        }
        merge_fields!(
            self, file, code, codec, k_factor, snr_db, epsilon, n, rate, rule, z0, ldpc_dv, ldpc_dc, ldpc_seed, frames,
            seed, workers, early_stop, out
        );
        Ok(self)
    }

    fn sweep(&self) -> Result<SweepConfig> {
        let kind = self.channel.context("--channel is required")?;
        let family = kind.family(self.k_factor.unwrap_or(DEFAULT_K_FACTOR));
        let grid = match kind {
            ChannelKind::Bec => self.epsilon.clone().context("--epsilon grid is required for bec")?,
            _ => self.snr_db.clone().context("--snr-db grid is required")?,
        };
        let codec = self.codec.unwrap_or(CodecKind::Polar);
        let code = match (codec, &self.code) {
            (CodecKind::Polar, Some(path)) => CodeSource::Polar {
                config: read_code(path)?,
            },
            (CodecKind::Polar, None) => CodeSource::PolarConstruct {
                n: self.n.unwrap_or(8),
                rate: self.rate.unwrap_or(0.5),
                rule: self.rule.unwrap_or(RecursionRule::Type1),
                z0: self.z0.unwrap_or(Z0Policy::Proposed),
            },
            (CodecKind::Ldpc, Some(_)) => bail!("--code loads a polar code and cannot be combined with --codec ldpc"),
            (CodecKind::Ldpc, None) => CodeSource::Ldpc {
                n: 1usize << self.n.unwrap_or(8),
                dv: self.ldpc_dv.unwrap_or(3),
                dc: self.ldpc_dc.unwrap_or(6),
                seed: self.ldpc_seed.unwrap_or(0),
            },
        };
        Ok(SweepConfig {
            code,
            channel: family,
            grid,
            frames: self.frames.unwrap_or(10_000),
            seed: resolve_seed(self.seed)?,
            early_stop: self.early_stop,
            workers: self.workers.unwrap_or(0),
        })
    }
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 8)]
    n: u32,
    #[arg(long, default_value_t = 0.25)]
    rate: f64,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5")]
    snr_db: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_K_FACTOR)]
    k_factor: f64,
    #[arg(long, default_value = "proposed")]
    z0: Z0Policy,
    #[arg(long, num_args = 0..=1, default_missing_value = "100")]
    early_stop: Option<u64>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Code and channel options shared by the media commands.
#[derive(Args)]
struct MediaArgs {
    #[arg(long, value_enum, default_value = "polar")]
    codec: CodecKind,
    #[arg(long, value_enum, default_value = "rayleigh")]
    channel: ChannelKind,
    /// SNR in dB (awgn, rayleigh).
    #[arg(long, default_value_t = 6.0)]
    snr_db: f64,
    /// Erasure probability (bec).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_K_FACTOR)]
    k_factor: f64,
    /// Exponent n of N = 2^n.
    #[arg(long, default_value_t = 11)]
    n: u32,
    #[arg(long, default_value_t = 0.5)]
    rate: f64,
    #[arg(long, default_value = "type1")]
    rule: RecursionRule,
    #[arg(long, default_value = "hybrid")]
    z0: Z0Policy,
    #[arg(long, default_value_t = 3)]
    ldpc_dv: usize,
    #[arg(long, default_value_t = 6)]
    ldpc_dc: usize,
    #[arg(long, default_value_t = 0)]
    ldpc_seed: u64,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Per-trial metrics CSV.
    #[arg(long)]
    metrics: PathBuf,
}

impl MediaArgs {
    fn channel(&self) -> Result<ChannelSpec> {
        let spec = match self.channel {
            ChannelKind::Bec => ChannelSpec::Bec {
                epsilon: self.epsilon.context("--epsilon is required for bec")?,
            },
            ChannelKind::Awgn => ChannelSpec::awgn_from_snr_db(self.snr_db),
            ChannelKind::Rayleigh => ChannelSpec::rayleigh_from_snr_db(self.k_factor, self.snr_db),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn codec(&self, channel: &ChannelSpec) -> Result<Codec> {
        let source = match self.codec {
            CodecKind::Polar => CodeSource::PolarConstruct {
                n: self.n,
                rate: self.rate,
                rule: self.rule,
                z0: self.z0,
            },
            CodecKind::Ldpc => CodeSource::Ldpc {
                n: 1usize << self.n,
                dv: self.ldpc_dv,
                dc: self.ldpc_dc,
                seed: self.ldpc_seed,
            },
        };
        Ok(source.resolve(channel)?)
    }

    fn run(&self, source: Media) -> Result<polarlink::sim::MediaReport> {
        let channel = self.channel()?;
        let codec = self.codec(&channel)?;
        let job = MediaJob {
            source,
            channel,
            trials: self.trials,
            seed: resolve_seed(self.seed)?,
            workers: self.workers,
        };
        let report = run_media_pipeline(&job, &codec)?;
        report.write_csv(create(&self.metrics)?)?;
        Ok(report)
    }
}

#[derive(Args)]
struct ImageArgs {
    /// Input binary PGM (P5).
    #[arg(long)]
    input: PathBuf,
    /// Reconstruction from the final trial.
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    media: MediaArgs,
}

#[derive(Args)]
struct SpeechArgs {
    /// Input PCM WAV; mixed to mono and requantized to 8 bits.
    #[arg(long)]
    input: PathBuf,
    /// Reconstruction from the final trial.
    #[arg(long)]
    output: PathBuf,
    /// Per-frame spectral distortion of the final trial.
    #[arg(long)]
    frames_csv: Option<PathBuf>,
    #[command(flatten)]
    media: MediaArgs,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(FALLBACK_SEED),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_code(path: &Path) -> Result<CodeConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing code file {}", path.display()))
}

fn write_zvector(mut out: impl Write, z: &ReliabilityVector) -> Result<()> {
    writeln!(out, "# schema={}", polarlink::sim::CSV_SCHEMA)?;
    writeln!(out, "index,z")?;
    for (i, v) in z.as_slice().iter().enumerate() {
        writeln!(out, "{i},{v:e}")?;
    }
    out.flush()?;
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.z.csv"))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Construct(args) => {
            let channel = args.channel.spec();
            let k = info_len_for_rate(args.n, args.rate)?;
            let (code, z) = construct(&channel, args.z0, args.rule, args.n, k)?;
            let mut out = create(&args.out)?;
            serde_json::to_writer_pretty(&mut out, &code)?;
            writeln!(out)?;
            out.flush()?;
            write_zvector(create(&sidecar(&args.out))?, &z)?;
        }
        Command::ExportZvector(args) => {
            let channel = args.channel.spec();
            let z0 = initial_z(&channel, args.z0)?;
            write_zvector(output(args.out.as_deref())?, &evolve(z0, args.n, args.rule)?)?;
        }
        Command::Simulate(args) => {
            let args = args.with_config_file()?;
            let cfg = args.sweep()?;
            let records = run_ber_sweep(&cfg)?;
            let mut out = output(args.out.as_deref())?;
            write_sweep_csv(&mut out, &cfg, &records)?;
            out.flush()?;
        }
        Command::CompareRules(args) => {
            let cfg = RuleComparisonConfig {
                n: args.n,
                rate: args.rate,
                snr_db: args.snr_db,
                frames: args.frames,
                seed: resolve_seed(args.seed)?,
                k_factor: args.k_factor,
                z0: args.z0,
                early_stop: args.early_stop,
                workers: args.workers,
            };
            let rows = run_rule_comparison(&cfg)?;
            let mut out = output(args.out.as_deref())?;
            write_rule_csv(&mut out, &rows)?;
            out.flush()?;
        }
        Command::TransmitImage(args) => {
            let image = GrayImage::read_pgm(&args.input)?;
            let report = args.media.run(Media::Image(image))?;
            match &report.reconstruction {
                Media::Image(img) => img.write_pgm(&args.output)?,
                Media::Speech(_) => unreachable!("image job produced speech"),
            }
            eprintln!("mean PSNR {:.3} dB over {} trials", report.mean(), report.trials.len());
        }
        Command::TransmitSpeech(args) => {
            let speech = PcmSignal::read_wav(&args.input)?;
            let report = args.media.run(Media::Speech(speech))?;
            match &report.reconstruction {
                Media::Speech(sig) => sig.write_wav(&args.output)?,
                Media::Image(_) => unreachable!("speech job produced an image"),
            }
            if let Some(path) = &args.frames_csv {
                let mut out = create(path)?;
                report.write_frame_csv(&mut out)?;
                out.flush()?;
            }
            eprintln!("mean SD {:.4} dB over {} trials", report.mean(), report.trials.len());
        }
    }
    Ok(())
}
