//! Choosing the sub-array size `P` (and with it the delayer count `K = N/P`).
//!
//! Three upper bounds apply:
//!
//! 1. `P ≤ 4 f_c / B` keeps every subcarrier inside the main lobe of `Ξ_P`;
//! 2. `P ≤ sqrt(2 ρ_l / (C_Δ λ_c))` keeps the closest user outside each
//!    sub-array's effective Rayleigh distance;
//! 3. `P ≤ P_δ` keeps the worst-case closed-form average gain above `δ`.
//!
//! The chosen size is the largest divisor of `N` below all three.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::analysis::{dirichlet_sinc_real, xi_factor};
use crate::geometry::ArrayGeometry;
use crate::rayleigh::solve_beta_delta;
use crate::{Error, Result};

const GRID_POINTS: usize = 1000;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Deployment constraints for the sizing rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizingSpec {
    pub geom: ArrayGeometry,
    /// Bandwidth `B`, Hz.
    pub bandwidth: f64,
    /// Closest user distance `ρ_l`, meters.
    pub rho_l: f64,
    /// Cell radius `ρ_h`, meters.
    pub rho_h: f64,
    /// Sector half-width `θ_h`, radians.
    pub theta_h: f64,
    /// Tolerated coherence loss `Δ` of a sub-array.
    pub delta_cap: f64,
    /// Required worst-case average gain `δ`.
    pub delta_gain: f64,
}

impl SizingSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth.is_finite() && self.bandwidth >= 0.0) {
            return Err(Error::param("bandwidth", "must be finite and >= 0"));
        }
        if !(self.rho_l > 0.0 && self.rho_l <= self.rho_h && self.rho_h.is_finite()) {
            return Err(Error::param("activity range", "need 0 < rho_l <= rho_h < inf"));
        }
        if !(self.theta_h > 0.0 && self.theta_h < core::f64::consts::FRAC_PI_2) {
            return Err(Error::param("sector half-width", "must lie in (0, π/2)"));
        }
        if !(self.delta_cap > 0.0 && self.delta_cap < 0.5) {
            return Err(Error::param("coherence-loss threshold", "must lie in (0, 0.5)"));
        }
        if !(self.delta_gain > 0.5 && self.delta_gain < 1.0) {
            return Err(Error::param("gain threshold", "must lie in (0.5, 1)"));
        }
        Ok(())
    }
}

/// Outcome of [`size_subarrays`]. Bounds may be `+∞` when a constraint is
/// slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizingResult {
    /// `4 f_c / B`.
    pub bound_wideband: f64,
    /// `sqrt(2 ρ_l / (C_Δ λ_c))`.
    pub bound_farfield: f64,
    /// `P_δ`.
    pub bound_gain: f64,
    pub chosen_p: usize,
    pub k: usize,
    /// Worst-case geometric factor `ξ*` and where it occurs.
    pub max_xi: f64,
    pub max_xi_distance: f64,
    pub c_delta: f64,
}

impl SizingResult {
    pub fn min_bound(&self) -> f64 {
        self.bound_wideband
            .min(self.bound_farfield)
            .min(self.bound_gain)
    }
}

/// Maximizer of `ξ(r, θ_h, D)` over `r ∈ [ρ_l, ρ_h]`: a log-spaced scan
/// followed by golden-section refinement around the best grid point.
pub fn max_xi_over_range(theta_h: f64, aperture: f64, rho_l: f64, rho_h: f64) -> (f64, f64) {
    let xi = |r: f64| xi_factor(r, theta_h, aperture);
    if rho_h <= rho_l {
        return (rho_l, xi(rho_l));
    }
    let ratio = rho_h / rho_l;
    let at = |i: usize| {
        if i + 1 == GRID_POINTS {
            rho_h
        } else {
            rho_l * ratio.powf(i as f64 / (GRID_POINTS - 1) as f64)
        }
    };
    let (mut best_i, mut best) = (0, xi(rho_l));
    for i in 1..GRID_POINTS {
        let v = xi(at(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut a = at(best_i.saturating_sub(1));
    let mut b = at((best_i + 1).min(GRID_POINTS - 1));
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (xi(c), xi(d));
    while (b - a) > 1e-6 * a.abs().max(1e-300) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = xi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = xi(d);
        }
    }
    let mid = 0.5 * (a + b);
    let refined = xi(mid);
    let grid_r = at(best_i);
    if refined >= best {
        (mid, refined)
    } else {
        (grid_r, best)
    }
}

/// Largest continuous `P ∈ [1, 4f_c/B]` with
/// `Ξ_P(B/(2f_c)) = 1 - 3(1-δ)/ξ*`, to `1e-3` in `P`.
///
/// Returns `+∞` when the constraint is slack over the whole interval.
pub fn solve_p_delta(bandwidth: f64, carrier: f64, delta_gain: f64, xi_star: f64) -> Result<f64> {
    let edge = bandwidth / (2.0 * carrier);
    if edge == 0.0 || xi_star <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let target = 1.0 - 3.0 * (1.0 - delta_gain) / xi_star;
    if target > 1.0 {
        return Err(Error::param("gain threshold", "target exceeds the range of Ξ_P"));
    }
    // Ξ_P(edge) falls monotonically from 1 at P = 1 to 0 at P = 2/edge.
    let p_max = 2.0 / edge;
    if target <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let h = |p: f64| dirichlet_sinc_real(p, edge) - target;
    let (mut lo, mut hi) = (1.0, p_max);
    if h(lo) <= 0.0 {
        return Ok(1.0);
    }
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if h(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Applies the three bounds and rounds down to a divisor of `N`.
pub fn size_subarrays(spec: &SizingSpec) -> Result<SizingResult> {
    spec.validate()?;
    let geom = &spec.geom;
    let carrier = geom.carrier_freq();
    let bound_wideband = if spec.bandwidth == 0.0 {
        f64::INFINITY
    } else {
        4.0 * carrier / spec.bandwidth
    };
    let c_delta = solve_beta_delta(spec.delta_cap)?.c_delta;
    let bound_farfield = (2.0 * spec.rho_l / (c_delta * geom.wavelength())).sqrt();
    let (max_xi_distance, max_xi) =
        max_xi_over_range(spec.theta_h, geom.span(), spec.rho_l, spec.rho_h);
    let bound_gain = solve_p_delta(spec.bandwidth, carrier, spec.delta_gain, max_xi)?;

    let mut result = SizingResult {
        bound_wideband,
        bound_farfield,
        bound_gain,
        chosen_p: 0,
        k: 0,
        max_xi,
        max_xi_distance,
        c_delta,
    };
    let n = geom.n_antennas();
    let cap = result.min_bound();
    if cap < 1.0 {
        return Err(Error::Infeasible("sub-array size bound is below one antenna"));
    }
    let cap = if cap >= n as f64 { n } else { cap.floor() as usize };
    let p = (1..=cap).rev().find(|p| n % p == 0).unwrap_or(1);
    result.chosen_p = p;
    result.k = n / p;
    Ok(result)
}
