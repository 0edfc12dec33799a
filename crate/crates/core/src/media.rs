//! Image and speech payloads: PGM/WAV I/O, bit packing, PSNR and spectral distortion.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Samples per speech analysis frame.
pub const DEFAULT_FRAME_LENGTH: usize = 160;
/// FFT size of the per-frame periodogram.
pub const SD_FFT_SIZE: usize = 256;
/// Power floor applied before taking logarithms.
pub const SPECTRAL_FLOOR: f64 = 1e-10;

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        Self::decode_pgm(BufReader::new(std::fs::File::open(path)?))
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.encode_pgm(&mut f)?;
        f.flush()?;
        Ok(())
    }

    /// Binary PGM (`P5`) with maxval 255.
    pub fn encode_pgm(&self, mut out: impl Write) -> Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.pixels)?;
        Ok(())
    }

    pub fn decode_pgm(mut input: impl BufRead) -> Result<Self> {
        let bad = |reason: &str| Error::Format {
            format: "PGM",
            reason: reason.to_string(),
        };
        let mut fields = Vec::with_capacity(4);
        let mut token = Vec::new();
        while fields.len() < 4 {
            let mut byte = [0u8; 1];
            if input.read(&mut byte)? == 0 {
                return Err(bad("truncated header"));
            }
            match byte[0] {
                b'#' if token.is_empty() => {
                    let mut comment = Vec::new();
                    input.read_until(b'\n', &mut comment)?;
                }
                c if c.is_ascii_whitespace() => {
                    if !token.is_empty() {
                        fields.push(String::from_utf8_lossy(&token).into_owned());
                        token.clear();
                    }
                }
                c => token.push(c),
            }
        }
        if fields[0] != "P5" {
            return Err(bad("only binary P5 images are supported"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
        let (width, height, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
        if maxval != 255 {
            return Err(bad("maxval must be 255"));
        }
        let mut pixels = vec![0u8; width * height];
        input.read_exact(&mut pixels).map_err(|_| bad("truncated pixel data"))?;
        Self::new(width, height, pixels)
    }
}

/// Speech samples after uniform PCM quantization.
///
/// Samples are signed and live in `[-2^(b-1), 2^(b-1) - 1]` for bit depth `b`;
/// on the wire they are sent offset-binary, MSB first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmSignal {
    samples: Vec<i16>,
    bit_depth: u8,
    sample_rate: u32,
    frame_length: usize,
}

impl PcmSignal {
    pub fn new(samples: Vec<i16>, bit_depth: u8, sample_rate: u32, frame_length: usize) -> Result<Self> {
        if !(1..=16).contains(&bit_depth) {
            return Err(Error::InvalidParameter(format!("bit depth {bit_depth} outside 1..=16")));
        }
        if frame_length == 0 {
            return Err(Error::InvalidParameter("frame length must be positive".into()));
        }
        let (lo, hi) = sample_range(bit_depth);
        if let Some(&s) = samples.iter().find(|&&s| (s as i32) < lo || (s as i32) > hi) {
            return Err(Error::InvalidParameter(format!("sample {s} outside {bit_depth}-bit range")));
        }
        Ok(Self {
            samples,
            bit_depth,
            sample_rate,
            frame_length,
        })
    }

    /// 8-bit PCM with the default frame length.
    pub fn from_8bit(samples: Vec<i16>, sample_rate: u32) -> Result<Self> {
        Self::new(samples, 8, sample_rate, DEFAULT_FRAME_LENGTH)
    }

    pub fn samples(&self) -> &[i16] {
        &self.samples
    }

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn frame_length(&self) -> usize {
        self.frame_length
    }

    pub fn frame_count(&self) -> usize {
        self.samples.len().div_ceil(self.frame_length)
    }

    /// Same framing and rate, different samples.
    pub fn with_samples(&self, samples: Vec<i16>) -> Result<Self> {
        Self::new(samples, self.bit_depth, self.sample_rate, self.frame_length)
    }

    /// Reads a PCM WAV file, mixes it down to mono and requantizes to 8 bits.
    pub fn read_wav(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = hound::WavReader::open(path)?;
        let spec = reader.spec();
        let channels = spec.channels.max(1) as usize;
        let raw: Vec<f64> = match spec.sample_format {
            hound::SampleFormat::Int => {
                let scale = 2f64.powi(spec.bits_per_sample as i32 - 1);
                reader
                    .samples::<i32>()
                    .map(|s| s.map(|v| v as f64 / scale))
                    .collect::<std::result::Result<_, _>>()?
            }
            hound::SampleFormat::Float => reader
                .samples::<f32>()
                .map(|s| s.map(f64::from))
                .collect::<std::result::Result<_, _>>()?,
        };
        let samples = raw
            .chunks(channels)
            .map(|frame| {
                let mono = frame.iter().sum::<f64>() / frame.len() as f64;
                (mono * 128.0).round().clamp(-128.0, 127.0) as i16
            })
            .collect();
        Self::from_8bit(samples, spec.sample_rate)
    }

    /// Writes a mono PCM WAV at this signal's bit depth (8 or 16).
    pub fn write_wav(&self, path: impl AsRef<Path>) -> Result<()> {
        let bits = if self.bit_depth <= 8 { 8 } else { 16 };
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: self.sample_rate,
            bits_per_sample: bits,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(path, spec)?;
        let shift = bits as u32 - self.bit_depth as u32;
        for &s in &self.samples {
            if bits == 8 {
                w.write_sample((s << shift) as i8)?;
            } else {
                w.write_sample(s << shift)?;
            }
        }
        w.finalize()?;
        Ok(())
    }
}

fn sample_range(bit_depth: u8) -> (i32, i32) {
    let half = 1i32 << (bit_depth - 1);
    (-half, half - 1)
}

fn push_msb_first(out: &mut Vec<u8>, value: u32, width: u32) {
    for shift in (0..width).rev() {
        out.push(((value >> shift) & 1) as u8);
    }
}

fn read_msb_first(bits: &[u8]) -> u32 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as u32)
}

/// MSB-first serialization of the pixel bytes, row-major.
pub fn image_to_bits(img: &GrayImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(img.pixels.len() * 8);
    for &p in &img.pixels {
        push_msb_first(&mut out, p as u32, 8);
    }
    out
}

pub fn bits_to_image(bits: &[u8], width: usize, height: usize) -> Result<GrayImage> {
    if bits.len() != 8 * width * height {
        return Err(Error::LengthMismatch {
            expected: 8 * width * height,
            actual: bits.len(),
        });
    }
    let pixels = bits.chunks_exact(8).map(|c| read_msb_first(c) as u8).collect();
    GrayImage::new(width, height, pixels)
}

/// Offset-binary, MSB-first serialization of the samples.
pub fn pcm_to_bits(sig: &PcmSignal) -> Vec<u8> {
    let width = sig.bit_depth as u32;
    let offset = 1i32 << (width - 1);
    let mut out = Vec::with_capacity(sig.samples.len() * width as usize);
    for &s in &sig.samples {
        push_msb_first(&mut out, (s as i32 + offset) as u32, width);
    }
    out
}

/// Inverse of [`pcm_to_bits`]; the framing parameters come from `template`.
pub fn bits_to_pcm(bits: &[u8], template: &PcmSignal) -> Result<PcmSignal> {
    let width = template.bit_depth as usize;
    if !bits.len().is_multiple_of(width) {
        return Err(Error::LengthMismatch {
            expected: bits.len() / width * width,
            actual: bits.len(),
        });
    }
    let offset = 1i32 << (width - 1);
    let samples = bits
        .chunks_exact(width)
        .map(|c| (read_msb_first(c) as i32 - offset) as i16)
        .collect();
    template.with_samples(samples)
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::InvalidParameter(format!(
            "image sizes differ: {}x{} vs {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    let sum: u64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    Ok(sum as f64 / a.pixels.len().max(1) as f64)
}

/// `10·log10(255² / MSE)`; `+∞` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let m = mse(a, b)?;
    Ok(if m == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / m).log10()
    })
}

/// Largest finite PSNR possible at this size (a single pixel off by one).
pub fn max_finite_psnr(width: usize, height: usize) -> f64 {
    10.0 * (255.0f64 * 255.0 * (width * height) as f64).log10()
}

/// Log-spectral distortion of each frame, in dB.
pub fn spectral_distortion_frames(orig: &PcmSignal, recon: &PcmSignal) -> Result<Vec<f64>> {
    if orig.frame_length != recon.frame_length || orig.samples.len() != recon.samples.len() {
        return Err(Error::InvalidParameter("signals differ in length or framing".into()));
    }
    let analyzer = FrameSpectrum::new(orig.frame_length);
    let mut a = analyzer.scratch();
    let mut b = analyzer.scratch();
    Ok(orig
        .samples
        .chunks(orig.frame_length)
        .zip(recon.samples.chunks(recon.frame_length))
        .map(|(fa, fb)| {
            analyzer.log_power(fa, &mut a);
            analyzer.log_power(fb, &mut b);
            let mean_sq = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64;
            mean_sq.sqrt()
        })
        .collect())
}

/// Frame-averaged log-spectral distortion in dB.
pub fn spectral_distortion(orig: &PcmSignal, recon: &PcmSignal) -> Result<f64> {
    let frames = spectral_distortion_frames(orig, recon)?;
    Ok(if frames.is_empty() {
        0.0
    } else {
        frames.iter().sum::<f64>() / frames.len() as f64
    })
}

struct FrameSpectrum {
    window: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    size: usize,
}

impl FrameSpectrum {
    fn new(frame_length: usize) -> Self {
        let size = SD_FFT_SIZE.max(frame_length.next_power_of_two());
        let window = hamming(frame_length);
        let fft = FftPlanner::new().plan_fft_forward(size);
        Self { window, fft, size }
    }

    fn scratch(&self) -> Vec<f64> {
        vec![0.0; self.size]
    }

    /// `10·log10` of the floored, Hamming-windowed periodogram on all FFT bins.
    fn log_power(&self, frame: &[i16], out: &mut [f64]) {
        let mut buf = vec![Complex::new(0.0, 0.0); self.size];
        for ((slot, &s), &w) in buf.iter_mut().zip(frame).zip(&self.window) {
            slot.re = s as f64 * w;
        }
        self.fft.process(&mut buf);
        let norm = self.window.iter().map(|w| w * w).sum::<f64>();
        for (o, x) in out.iter_mut().zip(&buf) {
            *o = 10.0 * (x.norm_sqr() / norm).max(SPECTRAL_FLOOR).log10();
        }
    }
}

fn hamming(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    (0..len)
        .map(|i| 0.54 - 0.46 * (2.0 * std::f64::consts::PI * i as f64 / (len - 1) as f64).cos())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::SimRng;
    use proptest::prelude::*;

    #[test]
    fn image_bit_examples() {
        let one = |p| GrayImage::new(1, 1, vec![p]).unwrap();
        assert_eq!(image_to_bits(&one(255)), vec![1; 8]);
        assert_eq!(image_to_bits(&one(0)), vec![0; 8]);
        let two = GrayImage::new(2, 1, vec![1, 128]).unwrap();
        let bits = image_to_bits(&two);
        assert_eq!(bits, vec![0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(bits_to_image(&bits, 2, 1).unwrap(), two);
        assert_eq!(bits_to_image(&[1; 8], 1, 1).unwrap(), one(255));
        assert_eq!(bits_to_image(&[0; 8], 1, 1).unwrap(), one(0));
        assert!(bits_to_image(&bits, 1, 1).is_err());
    }

    #[test]
    fn pcm_bit_examples() {
        let sig = PcmSignal::from_8bit(vec![-128, 127, 0, -1], 8000).unwrap();
        let bits = pcm_to_bits(&sig);
        assert_eq!(&bits[..8], &[0; 8]);
        assert_eq!(&bits[8..16], &[1; 8]);
        assert_eq!(&bits[16..24], &[1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&bits[24..32], &[0, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(bits_to_pcm(&bits, &sig).unwrap(), sig);
        assert!(bits_to_pcm(&bits[..7], &sig).is_err());
        assert!(PcmSignal::from_8bit(vec![128], 8000).is_err());
    }

    #[test]
    fn psnr_examples() {
        let a = GrayImage::new(256, 256, vec![0; 65536]).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        let mut px = vec![0; 65536];
        px[12345] = 255;
        let b = GrayImage::new(256, 256, px).unwrap();
        assert!((psnr(&a, &b).unwrap() - 48.165).abs() < 1e-3);
        assert!((psnr(&a, &b).unwrap() - 10.0 * 65536f64.log10()).abs() < 1e-12);
        let white = GrayImage::new(256, 256, vec![255; 65536]).unwrap();
        assert_eq!(psnr(&a, &white).unwrap(), 0.0);
        let small = GrayImage::new(2, 2, vec![0; 4]).unwrap();
        assert!(psnr(&a, &small).is_err());
    }

    #[test]
    fn pgm_round_trip_is_bit_exact() {
        let img = GrayImage::new(3, 2, vec![0, 10, 20, 200, 250, 255]).unwrap();
        let mut buf = Vec::new();
        img.encode_pgm(&mut buf).unwrap();
        assert_eq!(&buf[..11], b"P5\n3 2\n255\n");
        assert_eq!(GrayImage::decode_pgm(&buf[..]).unwrap(), img);
        let with_comment = b"P5 # made by hand\n3 2\n# another\n255\n\x00\x0a\x14\xc8\xfa\xff";
        assert_eq!(GrayImage::decode_pgm(&with_comment[..]).unwrap(), img);
        assert!(GrayImage::decode_pgm(&b"P2\n1 1\n255\n0"[..]).is_err());
        assert!(GrayImage::decode_pgm(&b"P5\n2 2\n255\n\x00"[..]).is_err());
        assert!(GrayImage::decode_pgm(&b"P5\n1 1\n65535\n\x00\x00"[..]).is_err());
    }

    #[test]
    fn wav_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.wav");
        let sig = PcmSignal::from_8bit(vec![-128, -5, 0, 7, 127], 8000).unwrap();
        sig.write_wav(&path).unwrap();
        assert_eq!(PcmSignal::read_wav(&path).unwrap(), sig);
    }

    #[test]
    fn sixteen_bit_wav_is_requantized() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s16.wav");
        let spec = hound::WavSpec {
            channels: 2,
            sample_rate: 16000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(&path, spec).unwrap();
        for s in [256i16, 256, -32768, -32768, 32767, 32767] {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
        let sig = PcmSignal::read_wav(&path).unwrap();
        assert_eq!(sig.samples(), &[1, -128, 127]);
        assert_eq!(sig.sample_rate(), 16000);
    }

    fn noise_signal(seed: u64, len: usize, amp: f64) -> PcmSignal {
        let mut rng = SimRng::new(seed);
        let s = (0..len)
            .map(|_| (amp * rng.standard_normal()).round().clamp(-64.0, 63.0) as i16)
            .collect();
        PcmSignal::from_8bit(s, 8000).unwrap()
    }

    #[test]
    fn sd_examples() {
        let orig = noise_signal(1, 1600, 20.0);
        assert_eq!(spectral_distortion(&orig, &orig).unwrap(), 0.0);
        let doubled = orig.with_samples(orig.samples().iter().map(|s| 2 * s).collect()).unwrap();
        assert!((spectral_distortion(&orig, &doubled).unwrap() - 20.0 * 2f64.log10()).abs() < 1e-3);
        let other = noise_signal(2, 1600, 20.0);
        assert!(spectral_distortion(&orig, &other).unwrap() > 0.0);
        assert!(spectral_distortion(&orig, &noise_signal(1, 1500, 20.0)).is_err());
    }

    #[test]
    fn silent_frames_are_floored() {
        let silent = PcmSignal::from_8bit(vec![0; 400], 8000).unwrap();
        assert_eq!(silent.frame_count(), 3);
        assert_eq!(spectral_distortion(&silent, &silent).unwrap(), 0.0);
        let frames = spectral_distortion_frames(&silent, &noise_signal(3, 400, 10.0)).unwrap();
        assert_eq!(frames.len(), 3);
        assert!(frames.iter().all(|&d| d > 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn image_bits_round_trip(w in 1usize..9, h in 1usize..9, seed in any::<u64>()) {
            let mut rng = SimRng::new(seed);
            let px = (0..w * h).map(|_| (rng.uniform() * 256.0) as u8).collect();
            let img = GrayImage::new(w, h, px).unwrap();
            prop_assert_eq!(bits_to_image(&image_to_bits(&img), w, h).unwrap(), img);
        }

        #[test]
        fn pcm_bits_round_trip(samples in proptest::collection::vec(-128i16..=127, 0..200)) {
            let sig = PcmSignal::from_8bit(samples, 8000).unwrap();
            prop_assert_eq!(bits_to_pcm(&pcm_to_bits(&sig), &sig).unwrap(), sig);
        }

        #[test]
        fn psnr_is_symmetric(a in proptest::collection::vec(any::<u8>(), 16), b in proptest::collection::vec(any::<u8>(), 16)) {
            let ia = GrayImage::new(4, 4, a).unwrap();
            let ib = GrayImage::new(4, 4, b).unwrap();
            prop_assert_eq!(psnr(&ia, &ib).unwrap(), psnr(&ib, &ia).unwrap());
        }

        #[test]
        fn sd_non_negative(a in proptest::collection::vec(-128i16..=127, 1..400), seed in any::<u64>()) {
            let sig = PcmSignal::from_8bit(a, 8000).unwrap();
            let mut rng = SimRng::new(seed);
            let other = sig.with_samples(sig.samples().iter().map(|_| (rng.uniform() * 255.0 - 128.0) as i16).collect()).unwrap();
            prop_assert!(spectral_distortion(&sig, &other).unwrap() >= 0.0);
        }
    }
}
