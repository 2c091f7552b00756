//! Analog beamformer weight families.
//!
//! All weights are unit-modulus with entries of magnitude `1/√N`, matching a
//! phase-shifter (optionally time-delayer fed) analog front end. Gains are
//! taken as `|a · w|` without conjugation, so a matched weight is the
//! conjugate of the channel response.
//!
//! The delay-phase designs ([`pdf_design`], [`far_field_dpp_design`]) put one
//! time delayer in front of each sub-array of `P` phase shifters. A delay
//! distance `r'` produces the frequency-proportional phase `exp(-j k_f r')`;
//! the phase shifters apply the frequency-flat progression
//! `exp(+j π s δ_P^(p) β')` with `s = 2d/λ_c`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::geometry::{centered_index, wavenumber, ArrayGeometry, Location, SubArrayPartition};
use crate::Result;

/// Unit-modulus weight vector at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    entries: Vec<Complex64>,
    freq: f64,
}

impl WeightVector {
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Frequency the weights were generated for.
    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiplies every entry by `exp(j phase)`.
    pub fn rotated(mut self, phase: f64) -> Self {
        let z = Complex64::cis(phase);
        self.entries.iter_mut().for_each(|e| *e *= z);
        self
    }
}

fn unit_weights(phases: impl Iterator<Item = f64>, n: usize, freq: f64) -> WeightVector {
    let scale = 1.0 / (n as f64).sqrt();
    WeightVector {
        entries: phases.map(|phi| Complex64::from_polar(scale, phi)).collect(),
        freq,
    }
}

/// Phase-shifter-only focusing on `loc` at the carrier:
/// entry `n` = `exp(+j k_c r_n) / √N`.
pub fn narrowband_focus(geom: &ArrayGeometry, loc: &Location) -> WeightVector {
    let k = geom.wavenumber();
    let n = geom.n_antennas();
    unit_weights(
        (0..n).map(|i| k * loc.distance_to(geom.offset(i))),
        n,
        geom.carrier_freq(),
    )
}

/// Phase-shifter-only steering towards `theta`:
/// entry `n` = `exp(-j k_c δ_n d sin θ) / √N`.
pub fn far_field_steer(geom: &ArrayGeometry, theta: f64) -> WeightVector {
    let k = geom.wavenumber();
    let s = theta.sin();
    let n = geom.n_antennas();
    unit_weights((0..n).map(|i| -k * geom.offset(i) * s), n, geom.carrier_freq())
}

/// Delay-phase precoder parameters: one delay distance `r_k' = c τ_k'` and
/// one phase slope `β_k'` per sub-array.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfWeights {
    delays: Vec<f64>,
    phase_slopes: Vec<f64>,
    partition: SubArrayPartition,
    global_l: f64,
}

impl PdfWeights {
    /// Delay distances `r_k'` in meters.
    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    /// Time delays `τ_k' = r_k' / c` in seconds.
    pub fn time_delays(&self) -> Vec<f64> {
        self.delays
            .iter()
            .map(|r| r / crate::SPEED_OF_LIGHT)
            .collect()
    }

    pub fn phase_slopes(&self) -> &[f64] {
        &self.phase_slopes
    }

    pub fn partition(&self) -> &SubArrayPartition {
        &self.partition
    }

    /// The common offset `L` that keeps every delay non-negative.
    pub fn global_l(&self) -> f64 {
        self.global_l
    }

    /// Weight vector at `freq`, sub-array-major.
    pub fn expand(&self, freq: f64) -> WeightVector {
        let part = &self.partition;
        let geom = part.geometry();
        let k = wavenumber(freq);
        let ps = PI * geom.spacing_ratio();
        let size = part.size();
        let phases = self
            .delays
            .iter()
            .zip(&self.phase_slopes)
            .flat_map(move |(&delay, &beta)| {
                (0..size).map(move |p| -k * delay + ps * centered_index(p, size) * beta)
            });
        unit_weights(phases, geom.n_antennas(), freq)
    }
}

/// Phase-delay focusing on `loc`.
///
/// Each sub-array's phase shifters steer towards its own direction
/// (`β_k' = -sin θ_k`) while its delayer equalizes the spherical path
/// difference to the sub-array center (`r_k' = L - r_k`, `L = max_k r_k`).
pub fn pdf_design(part: &SubArrayPartition, loc: &Location) -> Result<PdfWeights> {
    let views = part.subarray_geometry(loc)?;
    let global_l = views
        .iter()
        .map(|v| v.distance)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PdfWeights {
        delays: views.iter().map(|v| global_l - v.distance).collect(),
        phase_slopes: views.iter().map(|v| -v.sin_theta).collect(),
        partition: *part,
        global_l,
    })
}

/// Expands `w` at `freq`. Same as [`PdfWeights::expand`].
pub fn pdf_expand(w: &PdfWeights, freq: f64) -> WeightVector {
    w.expand(freq)
}

/// Far-field delay-phase precoder towards `theta`: the planar-wave limit of
/// [`pdf_design`]. Delays follow the linear progression
/// `r_k' = L + δ_K^(k) P d sin θ` and every sub-array shares `β' = -sin θ`.
pub fn far_field_dpp_design(part: &SubArrayPartition, theta: f64) -> PdfWeights {
    let s = theta.sin();
    let raw: Vec<f64> = (0..part.subarrays())
        .map(|k| part.center_offset(k) * s)
        .collect();
    let global_l = raw.iter().fold(0.0f64, |acc, &x| acc.max(-x));
    PdfWeights {
        delays: raw.iter().map(|x| global_l + x).collect(),
        phase_slopes: alloc::vec![-s; part.subarrays()],
        partition: *part,
        global_l,
    }
}

/// Beamformer families compared by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Beamformer {
    /// Phase-shifter focusing designed at the carrier.
    NarrowbandFocus,
    /// Phase-shifter steering designed at the carrier.
    FarFieldSteer,
    /// Far-field delay-phase precoding with `subarrays` delayers.
    FarFieldDpp { subarrays: usize },
    /// Phase-delay focusing with `subarrays` delayers.
    PhaseDelayFocus { subarrays: usize },
}

impl Beamformer {
    pub fn name(&self) -> &'static str {
        match self {
            Beamformer::NarrowbandFocus => "narrowband-focus",
            Beamformer::FarFieldSteer => "far-field-steer",
            Beamformer::FarFieldDpp { .. } => "far-field-dpp",
            Beamformer::PhaseDelayFocus { .. } => "pdf",
        }
    }

    /// Designs weights that target `loc`.
    pub fn design(&self, geom: &ArrayGeometry, loc: &Location) -> Result<Design> {
        Ok(match *self {
            Beamformer::NarrowbandFocus => Design::FrequencyFlat(narrowband_focus(geom, loc)),
            Beamformer::FarFieldSteer => Design::FrequencyFlat(far_field_steer(geom, loc.theta())),
            Beamformer::FarFieldDpp { subarrays } => {
                let part = SubArrayPartition::new(*geom, subarrays)?;
                Design::DelayPhase(far_field_dpp_design(&part, loc.theta()))
            }
            Beamformer::PhaseDelayFocus { subarrays } => {
                let part = SubArrayPartition::new(*geom, subarrays)?;
                Design::DelayPhase(pdf_design(&part, loc)?)
            }
        })
    }
}

/// A designed beamformer, ready to be evaluated at any frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    /// Phase shifters only: the same weights at every frequency.
    FrequencyFlat(WeightVector),
    /// One delayer per sub-array.
    DelayPhase(PdfWeights),
}

impl Design {
    pub fn weights(&self, freq: f64) -> WeightVector {
        match self {
            Design::FrequencyFlat(w) => WeightVector {
                entries: w.entries.clone(),
                freq,
            },
            Design::DelayPhase(w) => w.expand(freq),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::gain;
    use crate::channel::{far_field_response, near_field_response};

    #[test]
    fn narrowband_matches_channel_at_carrier() {
        let g = ArrayGeometry::new(128, 1e11).unwrap();
        let loc = Location::new(3.0, 0.5).unwrap();
        let w = narrowband_focus(&g, &loc);
        assert_eq!(w.freq(), 1e11);
        let a = near_field_response(&g, &loc, 1e11);
        assert!((gain(&a, &w).unwrap() - 1.0).abs() < 1e-12);

        let g1 = ArrayGeometry::new(1, 1e11).unwrap();
        let w1 = narrowband_focus(&g1, &loc);
        assert!((w1.entries()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn far_field_steer_matches_steering_vector() {
        let g = ArrayGeometry::new(64, 1e11).unwrap();
        let w = far_field_steer(&g, 0.0);
        assert!(w.entries().iter().all(|z| (z.re - 0.125).abs() < 1e-15 && z.im.abs() < 1e-15));
        let w = far_field_steer(&g, -0.7);
        let a = far_field_response(&g, -0.7, 1e11);
        assert!((gain(&a, &w).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_subarray_pdf() {
        let g = ArrayGeometry::new(32, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 1).unwrap();
        let loc = Location::new(5.0, 0.3).unwrap();
        let w = pdf_design(&part, &loc).unwrap();
        assert_eq!(w.delays(), &[0.0]);
        assert!((w.phase_slopes()[0] + 0.3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn pdf_invariants() {
        let g = ArrayGeometry::new(256, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 8).unwrap();
        let loc = Location::new(2.0, 0.9).unwrap();
        let w = pdf_design(&part, &loc).unwrap();
        assert!(w.delays().iter().all(|&d| d >= 0.0));
        assert_eq!(w.delays().iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
        assert!(w.phase_slopes().iter().all(|b| b.abs() <= 1.0));
        assert_eq!(w.time_delays().len(), 8);
    }

    #[test]
    fn broadside_pdf_is_symmetric() {
        let g = ArrayGeometry::new(256, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 8).unwrap();
        let loc = Location::new(1.5, 0.0).unwrap();
        let w = pdf_design(&part, &loc).unwrap();
        for k in 0..8 {
            assert!((w.delays()[k] - w.delays()[7 - k]).abs() < 1e-14);
            assert!((w.phase_slopes()[k] + w.phase_slopes()[7 - k]).abs() < 1e-14);
        }
    }

    #[test]
    fn mirrored_user_mirrors_design() {
        let g = ArrayGeometry::new(128, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 8).unwrap();
        let a = pdf_design(&part, &Location::new(4.0, 0.6).unwrap()).unwrap();
        let b = pdf_design(&part, &Location::new(4.0, -0.6).unwrap()).unwrap();
        for k in 0..8 {
            assert!((a.delays()[k] - b.delays()[7 - k]).abs() < 1e-12);
            assert!((a.phase_slopes()[k] + b.phase_slopes()[7 - k]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_parameters_give_uniform_weights() {
        let g = ArrayGeometry::new(64, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 4).unwrap();
        let w = far_field_dpp_design(&part, 0.0);
        assert!(w.delays().iter().all(|&d| d == 0.0));
        assert!(w.phase_slopes().iter().all(|&b| b == 0.0));
        for f in [9e10, 1e11, 1.1e11] {
            let v = w.expand(f);
            assert!(v.entries().iter().all(|z| (z - Complex64::new(0.125, 0.0)).norm() < 1e-15));
        }
    }

    #[test]
    fn expansion_phase_structure() {
        let g = ArrayGeometry::new(64, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 4).unwrap();
        let loc = Location::new(1.0, -0.5).unwrap();
        let w = pdf_design(&part, &loc).unwrap();
        // PS part: linear in p with slope π β_k', independent of frequency.
        for f in [97.5e9, 102.5e9] {
            let v = w.expand(f);
            for k in 0..4 {
                let sub = &v.entries()[k * 16..(k + 1) * 16];
                for p in 1..16 {
                    let step = (sub[p] / sub[p - 1]).arg();
                    assert!((step - PI * w.phase_slopes()[k]).abs() < 1e-9);
                }
            }
        }
        // TD part: entry (k, 0) across frequency has slope -2π r_k' / c.
        let (f1, f2) = (99e9, 99.001e9);
        let (v1, v2) = (w.expand(f1), w.expand(f2));
        for k in 0..4 {
            let dphi = (v2.entries()[k * 16] / v1.entries()[k * 16]).arg();
            let expect = -2.0 * PI * w.delays()[k] / crate::SPEED_OF_LIGHT * (f2 - f1);
            assert!((dphi - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn dpp_delays_nonnegative_for_negative_angles() {
        let g = ArrayGeometry::new(64, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 8).unwrap();
        for theta in [-1.2, -0.3, 0.4, 1.3] {
            let w = far_field_dpp_design(&part, theta);
            let min = w.delays().iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min.abs() < 1e-15, "theta={theta} min={min}");
        }
    }

    #[test]
    fn pdf_tends_to_far_field_dpp() {
        let g = ArrayGeometry::new(256, 1e11).unwrap();
        let part = SubArrayPartition::new(g, 8).unwrap();
        for theta in [-0.8, 0.0, 0.3, 1.0] {
            let near = pdf_design(&part, &Location::new(1e6, theta).unwrap()).unwrap();
            let far = far_field_dpp_design(&part, theta);
            for (a, b) in near.delays().iter().zip(far.delays()) {
                assert!((a - b).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn design_dispatch() {
        let g = ArrayGeometry::new(64, 1e11).unwrap();
        let loc = Location::new(3.0, 0.2).unwrap();
        assert!(Beamformer::PhaseDelayFocus { subarrays: 5 }.design(&g, &loc).is_err());
        let d = Beamformer::NarrowbandFocus.design(&g, &loc).unwrap();
        let w = d.weights(1.01e11);
        assert_eq!(w.freq(), 1.01e11);
        assert_eq!(w.entries(), narrowband_focus(&g, &loc).entries());
        assert_eq!(Beamformer::PhaseDelayFocus { subarrays: 8 }.name(), "pdf");
    }
}
