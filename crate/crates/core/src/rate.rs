//! OFDM achievable rate under equal per-subcarrier SNR (power control folds
//! the large-scale path loss into the SNR).

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::subcarrier_gains;
use crate::beamform::Beamformer;
use crate::geometry::{ArrayGeometry, Location, OfdmGrid};
use crate::{Error, Result};

/// Name of the generator behind [`sample_location`], for output metadata.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64(seed), stream = sample index";

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateConfig {
    pub snr_db: f64,
    pub grid: OfdmGrid,
}

impl RateConfig {
    pub fn new(snr_db: f64, grid: OfdmGrid) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::param("snr_db", "must be finite"));
        }
        Ok(Self { snr_db, grid })
    }

    pub fn snr_linear(&self) -> f64 {
        db_to_linear(self.snr_db)
    }
}

/// `(1/M) Σ log₂(1 + snr·G_m²)`.
pub fn average_rate(gains: &[f64], snr: f64) -> Result<f64> {
    if gains.is_empty() {
        return Err(Error::param("gains", "need at least one subcarrier"));
    }
    if !(snr >= 0.0) {
        return Err(Error::param("snr", "must be >= 0"));
    }
    let sum: f64 = gains.iter().map(|g| (1.0 + snr * g * g).log2()).sum();
    Ok(sum / gains.len() as f64)
}

/// Rate with every subcarrier at unit gain.
pub fn ideal_rate(snr: f64) -> Result<f64> {
    if !(snr >= 0.0) {
        return Err(Error::param("snr", "must be >= 0"));
    }
    Ok((1.0 + snr).log2())
}

/// Rate of `beamformer` designed for and evaluated at `loc`.
pub fn location_rate(
    geom: &ArrayGeometry,
    beamformer: &Beamformer,
    loc: &Location,
    cfg: &RateConfig,
) -> Result<f64> {
    let design = beamformer.design(geom, loc)?;
    let gains = subcarrier_gains(geom, &design, &cfg.grid, loc);
    average_rate(&gains, cfg.snr_linear())
}

/// Uniform user region: `r ~ U[r_lo, r_hi]`, `θ ~ U[θ_lo, θ_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserRegion {
    pub r: (f64, f64),
    pub theta: (f64, f64),
}

impl UserRegion {
    pub fn validate(&self) -> Result<()> {
        let (r0, r1) = self.r;
        let (t0, t1) = self.theta;
        if !(r0 > 0.0 && r0 <= r1 && r1.is_finite()) {
            return Err(Error::param("distance range", "need 0 < lo <= hi < inf"));
        }
        let half = core::f64::consts::FRAC_PI_2;
        if !(t0 <= t1 && t0 > -half && t1 < half) {
            return Err(Error::param("angle range", "need -π/2 < lo <= hi < π/2"));
        }
        Ok(())
    }
}

fn unit_draw(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The `index`-th location drawn for `seed`. Each index owns its own
/// ChaCha stream, so samples can be evaluated in any order.
pub fn sample_location(seed: u64, index: u64, region: &UserRegion) -> Result<Location> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let (r0, r1) = region.r;
    let (t0, t1) = region.theta;
    let r = r0 + (r1 - r0) * unit_draw(&mut rng);
    let theta = t0 + (t1 - t0) * unit_draw(&mut rng);
    Location::new(r, theta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSummary {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl MonteCarloSummary {
    /// Summary of per-sample values, summed in index order.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::param("n_samples", "must be >= 1"));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self { mean, std_error, n })
    }
}

/// Mean rate over `n_samples` seeded user draws. Sequential reference; the
/// CLI crate has a parallel variant with identical output.
pub fn monte_carlo_rate(
    geom: &ArrayGeometry,
    beamformer: &Beamformer,
    region: &UserRegion,
    n_samples: usize,
    seed: u64,
    cfg: &RateConfig,
) -> Result<MonteCarloSummary> {
    region.validate()?;
    let samples = (0..n_samples as u64)
        .map(|i| {
            let loc = sample_location(seed, i, region)?;
            location_rate(geom, beamformer, &loc, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    MonteCarloSummary::from_samples(&samples)
}
