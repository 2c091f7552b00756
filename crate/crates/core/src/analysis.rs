//! Beamforming-gain evaluation: the exact inner-product gain, the closed
//! forms for phase-delay focusing, and dense gain maps.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::beamform::{Beamformer, Design, PdfWeights, WeightVector};
use crate::channel::{near_field_from_distances, ArrayResponse};
use crate::geometry::{wavenumber, ArrayGeometry, Location, OfdmGrid, SubArrayPartition};
use crate::{Error, Result};

/// Below this `|sin(πx/2)|` the Dirichlet sinc takes its limit value.
const SINC_SINGULAR: f64 = 1e-12;

/// Normalized beamforming gain `|a · w|` (no conjugation).
pub fn gain(a: &ArrayResponse, w: &WeightVector) -> Result<f64> {
    gain_of(a.entries(), w.entries())
}

pub fn gain_of(a: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if a.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: w.len(),
        });
    }
    Ok(a.iter().zip(w).map(|(x, y)| x * y).sum::<Complex64>().norm())
}

/// Dirichlet sinc `Ξ_P(x) = sin(Pπx/2) / (P sin(πx/2))`.
///
/// The argument is reduced by the period-2 symmetry first, so the removable
/// singularities at even integers evaluate to their limit `(-1)^{(P-1)j}`
/// at `x = 2j`.
pub fn dirichlet_sinc(p: usize, x: f64) -> f64 {
    assert!(p >= 1, "Dirichlet sinc order must be >= 1");
    if p == 1 {
        return 1.0;
    }
    let j = (x / 2.0).round();
    let t = x - 2.0 * j;
    // (-1)^{(P-1) j}
    let sign = if (p - 1) % 2 == 1 && (j as i64).rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    };
    let den = (PI * t / 2.0).sin();
    if den.abs() < SINC_SINGULAR {
        return sign;
    }
    sign * (p as f64 * PI * t / 2.0).sin() / (p as f64 * den)
}

/// `Ξ_P(x)` for a real-valued order, restricted to the main period `|x| < 2`.
/// Used when solving for a continuous sub-array size.
pub fn dirichlet_sinc_real(p: f64, x: f64) -> f64 {
    let den = (PI * x / 2.0).sin();
    if den.abs() < SINC_SINGULAR {
        return 1.0;
    }
    (p * PI * x / 2.0).sin() / (p * den)
}

/// Gain of the delay-phase weights `w` under the piecewise-far-field channel
/// at `freq`:
/// `(1/K) |Σ_k exp(-j k_f (r_k' + r_k)) Ξ_P(s (β_k' + η sin θ_k))|`.
pub fn pdf_gain_closed(
    part: &SubArrayPartition,
    loc: &Location,
    w: &PdfWeights,
    freq: f64,
) -> Result<f64> {
    let views = part.subarray_geometry(loc)?;
    if w.delays().len() != views.len() {
        return Err(Error::LengthMismatch {
            left: w.delays().len(),
            right: views.len(),
        });
    }
    let geom = part.geometry();
    let k = wavenumber(freq);
    let eta = freq / geom.carrier_freq();
    let s = geom.spacing_ratio();
    let sum: Complex64 = views
        .iter()
        .zip(w.delays().iter().zip(w.phase_slopes()))
        .map(|(v, (&delay, &beta))| {
            let amp = dirichlet_sinc(part.size(), s * (beta + eta * v.sin_theta));
            Complex64::from_polar(amp, -k * (delay + v.distance))
        })
        .sum();
    Ok(sum.norm() / part.subarrays() as f64)
}

/// Average over subcarriers of the PDF gain with optimal delays:
/// `(1/(MK)) Σ_m Σ_k Ξ_P(s ε_m sin θ_k)`.
pub fn avg_gain_exact(part: &SubArrayPartition, loc: &Location, grid: &OfdmGrid) -> Result<f64> {
    let views = part.subarray_geometry(loc)?;
    let s = part.geometry().spacing_ratio();
    let mut total = 0.0;
    for m in 0..grid.n_subcarriers() {
        let eps = grid.epsilon(m);
        total += views
            .iter()
            .map(|v| dirichlet_sinc(part.size(), s * eps * v.sin_theta))
            .sum::<f64>();
    }
    Ok(total / (grid.n_subcarriers() * part.subarrays()) as f64)
}

/// Five-point quadratic fit of `Ξ_P(ab)` over `|a| ≤ B/(2f_c)`, `|b| ≤ 1`:
/// `1 - (1 - Ξ_P(B/(2f_c))) (a / (B/(2f_c)))² b²`.
pub fn quadratic_sinc_fit(p: usize, bandwidth: f64, carrier: f64, a: f64, b: f64) -> f64 {
    let edge = bandwidth / (2.0 * carrier);
    if edge == 0.0 {
        return 1.0;
    }
    1.0 - (1.0 - dirichlet_sinc(p, edge)) * (a / edge).powi(2) * b * b
}

/// Closed-form average PDF gain from the quadratic sinc fit.
///
/// Requires `|ε_m| ≤ 2/P` on every subcarrier (main lobe of `Ξ_P`).
pub fn avg_gain_quadratic(part: &SubArrayPartition, loc: &Location, grid: &OfdmGrid) -> Result<f64> {
    let s = part.geometry().spacing_ratio();
    let edge = s * grid.max_epsilon();
    if edge > 2.0 / part.size() as f64 {
        return Err(Error::Precondition(
            "max |ε_m| exceeds 2/P, subcarriers leave the sinc main lobe",
        ));
    }
    if edge == 0.0 {
        return Ok(1.0);
    }
    let views = part.subarray_geometry(loc)?;
    let m = grid.n_subcarriers();
    let wideband: f64 = (0..m).map(|i| grid.position(i).powi(2)).sum();
    let geometric: f64 = views.iter().map(|v| v.sin_theta * v.sin_theta).sum();
    let loss = 1.0 - dirichlet_sinc(part.size(), edge);
    Ok(1.0 - loss / (m * part.subarrays()) as f64 * wideband * geometric)
}

/// `Σ_m (2m/(M-1) - 1)² = M(M+1) / (3(M-1))`.
pub fn eps_sum_identity(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::param("subcarrier count", "must be at least 2"));
    }
    let m = m as f64;
    Ok(m * (m + 1.0) / (3.0 * (m - 1.0)))
}

/// Geometric loss factor `ξ(r, θ, D)`: the large-`K` limit of
/// `(1/K) Σ_k sin² θ_k` for an aperture `D`.
///
/// The indicator-plus-arctan form is evaluated as a single `atan2`, which
/// also covers `r = D/2`.
pub fn xi_factor(r: f64, theta: f64, aperture: f64) -> f64 {
    let rc = r * theta.cos();
    1.0 - rc / aperture * (aperture * rc).atan2(r * r - aperture * aperture / 4.0)
}

/// Intra-sub-array wideband loss `γ(B, f_c, P) = (1 - Ξ_P(B/(2f_c))) / 3`.
pub fn gamma_factor(bandwidth: f64, carrier: f64, p: usize) -> f64 {
    (1.0 - dirichlet_sinc(p, bandwidth / (2.0 * carrier))) / 3.0
}

/// Large-`K`, large-`M` average PDF gain `1 - γ ξ`.
pub fn avg_gain_asymptotic(
    bandwidth: f64,
    carrier: f64,
    p: usize,
    r: f64,
    theta: f64,
    aperture: f64,
) -> f64 {
    1.0 - gamma_factor(bandwidth, carrier, p) * xi_factor(r, theta, aperture)
}

/// Per-subcarrier gains of `design` at `eval` under the exact spherical-wave
/// channel.
pub fn subcarrier_gains(
    geom: &ArrayGeometry,
    design: &Design,
    grid: &OfdmGrid,
    eval: &Location,
) -> Vec<f64> {
    let distances: Vec<f64> = (0..geom.n_antennas())
        .map(|n| eval.distance_to(geom.offset(n)))
        .collect();
    grid.freqs()
        .into_iter()
        .map(|f| {
            let a = near_field_from_distances(&distances, f);
            gain_of(a.entries(), design.weights(f).entries()).expect("equal lengths")
        })
        .collect()
}

/// Evaluation axes of a [`GainMap`].
#[derive(Debug, Clone, PartialEq)]
pub struct GainMapAxes {
    /// Evaluation distances `r̂`, meters.
    pub distances: Vec<f64>,
    /// Evaluation angles `θ̂`, radians, within `[-π/2, π/2]`.
    pub angles: Vec<f64>,
    /// Frequencies, Hz.
    pub freqs: Vec<f64>,
}

impl GainMapAxes {
    pub fn validate(&self) -> Result<()> {
        if self.distances.is_empty() || self.angles.is_empty() || self.freqs.is_empty() {
            return Err(Error::param("gain map axes", "every axis needs at least one point"));
        }
        if !self.distances.iter().all(|r| r.is_finite() && *r > 0.0) {
            return Err(Error::param("gain map distances", "must be finite and > 0"));
        }
        if !self
            .angles
            .iter()
            .all(|t| t.is_finite() && t.abs() <= core::f64::consts::FRAC_PI_2)
        {
            return Err(Error::param("gain map angles", "must lie within [-π/2, π/2]"));
        }
        if !self.freqs.iter().all(|f| f.is_finite() && *f > 0.0) {
            return Err(Error::param("gain map frequencies", "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.distances.len() * self.angles.len()
    }
}

/// Gains over a (distance, angle, frequency) grid, stored row-major in that
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct GainMap {
    axes: GainMapAxes,
    values: Vec<f64>,
}

impl GainMap {
    /// Assembles a map from per-cell gain rows in (distance, angle) order.
    pub fn from_cells(axes: GainMapAxes, cells: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(cells.len(), axes.cells());
        let values: Vec<f64> = cells.into_iter().flatten().collect();
        debug_assert_eq!(values.len(), axes.cells() * axes.freqs.len());
        Self { axes, values }
    }

    pub fn axes(&self) -> &GainMapAxes {
        &self.axes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, distance: usize, angle: usize, freq: usize) -> f64 {
        let (na, nf) = (self.axes.angles.len(), self.axes.freqs.len());
        self.values[(distance * na + angle) * nf + freq]
    }

    /// `(distance index, angle index, gain)` of the peak at frequency `freq`.
    pub fn argmax(&self, freq: usize) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for i in 0..self.axes.distances.len() {
            for j in 0..self.axes.angles.len() {
                let g = self.get(i, j, freq);
                if g > best.2 {
                    best = (i, j, g);
                }
            }
        }
        best
    }
}

/// Gains of every frequency's weights at the point `(r̂, θ̂)`.
pub fn gain_map_cell(
    geom: &ArrayGeometry,
    weights: &[WeightVector],
    freqs: &[f64],
    distance: f64,
    angle: f64,
) -> Vec<f64> {
    let (x, y) = (distance * angle.cos(), distance * angle.sin());
    let distances: Vec<f64> = (0..geom.n_antennas())
        .map(|n| x.hypot(y - geom.offset(n)))
        .collect();
    freqs
        .iter()
        .zip(weights)
        .map(|(&f, w)| {
            let a = near_field_from_distances(&distances, f);
            gain_of(a.entries(), w.entries()).expect("equal lengths")
        })
        .collect()
}

/// Dense gain map of `beamformer` designed for `user`.
pub fn gain_map(
    geom: &ArrayGeometry,
    user: &Location,
    beamformer: Beamformer,
    axes: GainMapAxes,
) -> Result<GainMap> {
    axes.validate()?;
    let design = beamformer.design(geom, user)?;
    let weights: Vec<WeightVector> = axes.freqs.iter().map(|&f| design.weights(f)).collect();
    let mut cells = Vec::with_capacity(axes.cells());
    for &r in &axes.distances {
        for &t in &axes.angles {
            cells.push(gain_map_cell(geom, &weights, &axes.freqs, r, t));
        }
    }
    Ok(GainMap::from_cells(axes, cells))
}
