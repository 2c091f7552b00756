//! Near-field boundaries: the classical Rayleigh distance from the π/8
//! phase-error criterion, and the effective Rayleigh distance at which
//! far-field beamforming loses a fraction `Δ` of its gain.
//!
//! The effective distance rests on the Fresnel kernel
//! `G(β) = |∫₀^β exp(-jπt²/2) dt| / β`, which this module evaluates by
//! adaptive Gauss–Kronrod quadrature on the complex integrand.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::analysis::gain;
use crate::beamform::far_field_steer;
use crate::channel::near_field_response;
use crate::geometry::{ArrayGeometry, Location};
use crate::{Error, Result};

/// `2D² / λ`.
pub fn classical_rayleigh(aperture: f64, wavelength: f64) -> f64 {
    2.0 * aperture * aperture / wavelength
}

/// Largest planar-vs-spherical phase error over the aperture at distance `r`,
/// `πD² / (4 r λ)` (second-order expansion, worst case `θ = 0`).
pub fn max_phase_error(aperture: f64, wavelength: f64, r: f64) -> f64 {
    aperture * aperture * PI / (4.0 * r * wavelength)
}

/// Gain of far-field steering towards `loc.theta()` at the carrier, for a
/// user at `loc`. Evaluated as the exact `N`-term sum.
pub fn coherence(geom: &ArrayGeometry, loc: &Location) -> f64 {
    let a = near_field_response(geom, loc, geom.carrier_freq());
    let w = far_field_steer(geom, loc.theta());
    gain(&a, &w).expect("equal lengths")
}

/// Fresnel-kernel argument `β = sqrt(D² cos²θ / (2 λ r))` for which
/// [`fresnel_g`] approximates [`coherence`].
pub fn fresnel_beta(aperture: f64, wavelength: f64, theta: f64, r: f64) -> f64 {
    (aperture * aperture * theta.cos().powi(2) / (2.0 * wavelength * r)).sqrt()
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 4096;

/// Adaptive quadrature of `exp(-jπt²/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelKernel {
    tolerance: f64,
}

impl Default for FresnelKernel {
    fn default() -> Self {
        Self { tolerance: 1e-10 }
    }
}

/// Root of `G(β) = 1 - Δ` and the resulting `C_Δ = 1 / (4β²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaDelta {
    pub beta: f64,
    pub c_delta: f64,
}

impl FresnelKernel {
    /// Kernel with absolute error bound `tolerance` on `G(β)`.
    pub fn new(tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::param("quadrature tolerance", "must be finite and > 0"));
        }
        Ok(Self { tolerance })
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn describe(&self) -> &'static str {
        "adaptive Gauss-Kronrod (7/15) on exp(-j pi t^2 / 2)"
    }

    fn kronrod(a: f64, b: f64) -> (Complex64, f64) {
        let f = |t: f64| Complex64::cis(-PI * t * t / 2.0);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut k = fc * WGK[7];
        let mut g = fc * WG[3];
        for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
            let pair = f(c - h * x) + f(c + h * x);
            k += pair * w;
            if i % 2 == 1 {
                g += pair * WG[i / 2];
            }
        }
        (k * h, ((k - g) * h).norm())
    }

    /// `∫₀^β exp(-jπt²/2) dt` to absolute accuracy `tol`.
    fn integrate(&self, beta: f64, tol: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut stack: Vec<(f64, f64)> = alloc::vec![(0.0, beta)];
        let mut segments = 0;
        while let Some((a, b)) = stack.pop() {
            let (val, err) = Self::kronrod(a, b);
            segments += 1;
            let local = tol * (b - a) / beta;
            if err <= local || segments >= MAX_SEGMENTS || b - a < 1e-12 {
                total += val;
            } else {
                let mid = 0.5 * (a + b);
                stack.push((mid, b));
                stack.push((a, mid));
            }
        }
        total
    }

    /// Complex Fresnel integral `F(β) = C(β) - j S(β)`.
    pub fn integral(&self, beta: f64) -> Complex64 {
        if beta == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let sign = beta.signum();
        let b = beta.abs();
        self.integrate(b, self.tolerance * b.min(1.0)) * sign
    }

    /// `G(β) = |F(β)| / β`, with `G(0) = 1`.
    pub fn g(&self, beta: f64) -> Result<f64> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::param("beta", "must be finite and >= 0"));
        }
        if beta == 0.0 {
            return Ok(1.0);
        }
        Ok(self.integral(beta).norm() / beta)
    }

    /// `(G(β), G'(β))` for `β > 0`, using `F'(β) = exp(-jπβ²/2)`.
    fn g_with_derivative(&self, beta: f64) -> (f64, f64) {
        let f = self.integral(beta);
        let mag = f.norm();
        let df = Complex64::cis(-PI * beta * beta / 2.0);
        let dmag = (f.conj() * df).re / mag;
        (mag / beta, (dmag * beta - mag) / (beta * beta))
    }

    /// Smallest `β` in `(0, 3]` with `G(β) = 1 - Δ`.
    ///
    /// A forward scan brackets the first crossing, bisection narrows it and
    /// Newton steps polish the root to `|G(β) - (1 - Δ)| ≤ 1e-9`.
    pub fn solve_beta_delta(&self, delta: f64) -> Result<BetaDelta> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::param("delta", "must lie in (0, 0.5)"));
        }
        let target = 1.0 - delta;
        let h = |b: f64| self.g(b).map(|g| g - target);

        const LO: f64 = 1e-6;
        const HI: f64 = 3.0;
        const SCAN: usize = 300;
        let mut lo = LO;
        let mut h_lo = h(lo)?;
        let mut hi = f64::NAN;
        for i in 1..=SCAN {
            let b = LO + (HI - LO) * i as f64 / SCAN as f64;
            let hb = h(b)?;
            if hb <= 0.0 {
                hi = b;
                break;
            }
            lo = b;
            h_lo = hb;
        }
        if hi.is_nan() || h_lo < 0.0 {
            return Err(Error::NoRoot("G(beta) = 1 - delta"));
        }

        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if h(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-10 {
                break;
            }
        }

        let mut beta = 0.5 * (lo + hi);
        for _ in 0..20 {
            let (g, dg) = self.g_with_derivative(beta);
            let resid = g - target;
            if resid.abs() <= 1e-12 || dg == 0.0 {
                break;
            }
            let next = beta - resid / dg;
            // Stay inside the bracket; fall back to the current point otherwise.
            if !(next > lo && next < hi) {
                break;
            }
            beta = next;
        }
        if (self.g(beta)? - target).abs() > 1e-9 {
            return Err(Error::NoRoot("G(beta) = 1 - delta"));
        }
        Ok(BetaDelta {
            beta,
            c_delta: 1.0 / (4.0 * beta * beta),
        })
    }
}

/// `G(β)` with the default kernel.
pub fn fresnel_g(beta: f64) -> Result<f64> {
    FresnelKernel::default().g(beta)
}

/// `β_Δ` and `C_Δ` with the default kernel.
pub fn solve_beta_delta(delta: f64) -> Result<BetaDelta> {
    FresnelKernel::default().solve_beta_delta(delta)
}

/// `C_Δ cos²θ · 2D² / λ`.
pub fn effective_rayleigh(aperture: f64, wavelength: f64, theta: f64, delta: f64) -> Result<f64> {
    let BetaDelta { c_delta, .. } = solve_beta_delta(delta)?;
    Ok(c_delta * theta.cos().powi(2) * classical_rayleigh(aperture, wavelength))
}
