//! Line-of-sight channel models.
//!
//! Propagation phase is `exp(-j k r)`. Responses are normalized so every
//! entry has magnitude `1/√N`; the large-scale path loss is kept separately
//! in [`PathGain`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::geometry::{wavenumber, ArrayGeometry, Location, SubArrayPartition};
use crate::{Error, Result, SPEED_OF_LIGHT};

/// Normalized array response vector at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayResponse {
    entries: Vec<Complex64>,
    freq: f64,
}

impl ArrayResponse {
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }
}

/// Free-space amplitude `c / (4π f r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathGain {
    pub magnitude: f64,
    pub freq: f64,
}

/// Distance from antenna `n` to the user.
///
/// # Panics
///
/// If `n` is not a valid antenna index.
pub fn element_distance(geom: &ArrayGeometry, loc: &Location, n: usize) -> f64 {
    assert!(n < geom.n_antennas(), "antenna index {n} out of range");
    loc.distance_to(geom.offset(n))
}

pub fn element_distances(geom: &ArrayGeometry, loc: &Location) -> Vec<f64> {
    (0..geom.n_antennas())
        .map(|n| loc.distance_to(geom.offset(n)))
        .collect()
}

fn unit_phasors(phases: impl Iterator<Item = f64>, n: usize) -> Vec<Complex64> {
    let scale = 1.0 / (n as f64).sqrt();
    phases.map(|phi| Complex64::from_polar(scale, phi)).collect()
}

/// Spherical-wave response, entry `n` = `exp(-j k r_n) / √N`.
pub fn near_field_response(geom: &ArrayGeometry, loc: &Location, freq: f64) -> ArrayResponse {
    let k = wavenumber(freq);
    let n = geom.n_antennas();
    ArrayResponse {
        entries: unit_phasors(
            (0..n).map(|i| -k * loc.distance_to(geom.offset(i))),
            n,
        ),
        freq,
    }
}

/// Spherical-wave response from precomputed element distances.
pub fn near_field_from_distances(distances: &[f64], freq: f64) -> ArrayResponse {
    let k = wavenumber(freq);
    ArrayResponse {
        entries: unit_phasors(distances.iter().map(|r| -k * r), distances.len()),
        freq,
    }
}

/// Planar-wave steering vector, entry `n` = `exp(+j k δ_n d sin θ) / √N`.
/// The distance-dependent common phase is omitted.
pub fn far_field_response(geom: &ArrayGeometry, theta: f64, freq: f64) -> ArrayResponse {
    let k = wavenumber(freq);
    let s = theta.sin();
    let n = geom.n_antennas();
    ArrayResponse {
        entries: unit_phasors((0..n).map(|i| k * geom.offset(i) * s), n),
        freq,
    }
}

pub fn path_gain(freq: f64, r: f64) -> Result<PathGain> {
    if !(freq.is_finite() && freq > 0.0) {
        return Err(Error::param("frequency", "must be finite and > 0"));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::param("distance", "must be finite and > 0"));
    }
    Ok(PathGain {
        magnitude: SPEED_OF_LIGHT / (4.0 * PI * freq * r),
        freq,
    })
}

/// Piecewise-far-field response: spherical phase across sub-array centers,
/// planar phase within each sub-array. Laid out sub-array-major.
///
/// Entry `(k, p)` = `exp(-j k_f r_k) · exp(+j π s η δ_P^(p) sin θ_k) / √N`
/// where `s = 2d/λ_c` (1 for half-wavelength spacing) and `η = f / f_c`.
pub fn piecewise_response(
    part: &SubArrayPartition,
    loc: &Location,
    freq: f64,
) -> Result<ArrayResponse> {
    let geom = part.geometry();
    let k = wavenumber(freq);
    let views = part.subarray_geometry(loc)?;
    let intra = PI * geom.spacing_ratio() * freq / geom.carrier_freq();
    let n = geom.n_antennas();
    let phases = views.iter().flat_map(|v| {
        (0..part.size()).map(move |p| {
            let local = crate::geometry::centered_index(p, part.size());
            -k * v.distance + intra * local * v.sin_theta
        })
    });
    Ok(ArrayResponse {
        entries: unit_phasors(phases, n),
        freq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn norm(v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn distance_triangles() {
        let g = ArrayGeometry::with_spacing(9, 1e11, 1.0).unwrap();
        let loc = Location::new(3.0, 0.0).unwrap();
        assert_eq!(element_distance(&g, &loc, 4), 3.0);
        // δ d = 4 for n = 8
        assert!((element_distance(&g, &loc, 8) - 5.0).abs() < 1e-14);

        let g = ArrayGeometry::with_spacing(7, 1e11, 1.0).unwrap();
        let loc = Location::new(4.0, FRAC_PI_2 - 1e-9).unwrap();
        assert!((element_distance(&g, &loc, 6) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_antenna_response() {
        let g = ArrayGeometry::new(1, 1e11).unwrap();
        let loc = Location::new(7.0, 0.2).unwrap();
        let a = near_field_response(&g, &loc, 1e11);
        assert_eq!(a.len(), 1);
        assert!((a.entries()[0].norm() - 1.0).abs() < 1e-15);
        let expect = -wavenumber(1e11) * 7.0;
        let diff = (a.entries()[0] * Complex64::from_polar(1.0, -expect)).arg();
        assert!(diff.abs() < 1e-9);
    }

    #[test]
    fn responses_are_unit_norm() {
        let g = ArrayGeometry::new(128, 1e11).unwrap();
        let loc = Location::new(4.0, -0.6).unwrap();
        let part = SubArrayPartition::new(g, 8).unwrap();
        for f in [97.5e9, 1e11, 102.5e9] {
            for a in [
                near_field_response(&g, &loc, f),
                far_field_response(&g, loc.theta(), f),
                piecewise_response(&part, &loc, f).unwrap(),
            ] {
                assert!((norm(a.entries()) - 1.0).abs() < 1e-12);
                let m = 1.0 / (128f64).sqrt();
                assert!(a.entries().iter().all(|z| (z.norm() - m).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn broadside_far_field_is_uniform() {
        let g = ArrayGeometry::new(16, 1e11).unwrap();
        let a = far_field_response(&g, 0.0, 1e11);
        for z in a.entries() {
            assert!((z - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn far_field_phase_is_linear() {
        let g = ArrayGeometry::new(16, 1e11).unwrap();
        let theta = 0.3;
        let a = far_field_response(&g, theta, 1e11);
        let slope = g.wavenumber() * g.spacing() * theta.sin();
        for w in a.entries().windows(2) {
            let step = (w[1] / w[0]).arg();
            assert!((step - slope).abs() < 1e-12);
        }
    }

    #[test]
    fn path_gain_law() {
        let g = path_gain(SPEED_OF_LIGHT / (4.0 * PI), 1.0).unwrap();
        assert!((g.magnitude - 1.0).abs() < 1e-15);
        let a = path_gain(1e11, 5.0).unwrap().magnitude;
        let b = path_gain(1e11, 10.0).unwrap().magnitude;
        assert!((a / b - 2.0).abs() < 1e-14);
        assert!((b - 2.387e-5).abs() < 2e-3 * 2.387e-5);
        assert!(path_gain(0.0, 1.0).is_err());
        assert!(path_gain(1e9, -1.0).is_err());
    }

    #[test]
    fn finest_partition_equals_near_field() {
        let g = ArrayGeometry::new(32, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 32).unwrap();
        let loc = Location::new(1.5, 0.7).unwrap();
        let f = 101e9;
        let a = near_field_response(&g, &loc, f);
        let b = piecewise_response(&part, &loc, f).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn coarsest_partition_at_carrier_is_steering_vector() {
        let g = ArrayGeometry::new(32, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 1).unwrap();
        let loc = Location::new(12.0, -0.4).unwrap();
        let a = piecewise_response(&part, &loc, 1e11).unwrap();
        let b = far_field_response(&g, loc.theta(), 1e11);
        let global = Complex64::from_polar(1.0, -g.wavenumber() * loc.r());
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert!((x - y * global).norm() < 1e-9);
        }
    }
}
