//! Polar codes over continuous channels.
//!
//! The crate covers the full experimental chain:
//!
//! * [`polar`]: Kronecker-power encoding and code parameters.
//! * [`construction`]: Bhattacharyya parameters for BEC, AWGN and Rayleigh
//!   channels, polarization recursions and information-set selection.
//! * [`channels`]: BPSK modulation, channel simulation and LLR demodulation.
//! * [`sc`]: successive-cancellation decoding.
//! * [`ldpc`]: a regular (3,6) LDPC baseline with sum-product decoding.
//! * [`media`]: PGM/WAV ingestion, bit packing, PSNR and spectral distortion.
//! * [`sim`]: reproducible Monte Carlo sweeps and media transmission runs.

pub mod channels;
pub mod construction;
mod error;
pub mod ldpc;
pub mod media;
pub mod polar;
pub mod sc;
pub mod sim;

pub use error::{Error, Result};
