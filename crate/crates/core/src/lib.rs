//! Near-field wideband beamforming for extremely large uniform linear arrays.
//!
//! The crate models a ULA serving a single-antenna user over an OFDM band and
//! provides:
//!
//! - spherical-wave, planar-wave and piecewise-far-field channel responses
//!   ([`channel`]),
//! - narrowband focusing, far-field steering, a far-field delay-phase
//!   precoder and the phase-delay focusing (PDF) design ([`beamform`]),
//! - exact and closed-form beamforming-gain analysis ([`analysis`]),
//! - classical and effective Rayleigh distances ([`rayleigh`]),
//! - the sub-array sizing rule ([`sizing`]) and OFDM rates ([`rate`]).
//!
//! Everything is `no_std` + `alloc`; IO and parallel drivers live in the
//! `beamsim` crate. Units are SI throughout (meters, Hz, radians), gains are
//! linear and normalized to `[0, 1]`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod beamform;
pub mod channel;
mod error;
pub mod geometry;
pub mod rate;
pub mod rayleigh;
pub mod sizing;

pub use num_complex::Complex64;

pub use crate::analysis::{dirichlet_sinc, gain, GainMap, GainMapAxes};
pub use crate::beamform::{Beamformer, Design, PdfWeights, WeightVector};
pub use crate::channel::{ArrayResponse, PathGain};
pub use crate::error::{Error, Result};
pub use crate::geometry::{ArrayGeometry, Location, OfdmGrid, SubArrayPartition};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
