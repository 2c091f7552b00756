//! Experiment configuration.
//!
//! A config file is TOML. Top-level keys apply to every experiment; a table
//! named after the experiment (e.g. `[rate-vs-distance]`) overrides them.
//! Frequencies are in Hz, distances in meters, angles in degrees.

use std::fmt;
use std::path::Path;

use beamsim_core::{ArrayGeometry, Beamformer, OfdmGrid};
use serde::Deserialize;

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    GainMap,
    GainVsDirection,
    AvgGainVsTheta,
    AvgGainVsBandwidth,
    RateVsDistance,
    RateVsAntennas,
    RateVsSnr,
    RayleighReport,
    SizeReport,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::GainMap,
        Experiment::GainVsDirection,
        Experiment::AvgGainVsTheta,
        Experiment::AvgGainVsBandwidth,
        Experiment::RateVsDistance,
        Experiment::RateVsAntennas,
        Experiment::RateVsSnr,
        Experiment::RayleighReport,
        Experiment::SizeReport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::GainMap => "gain-map",
            Experiment::GainVsDirection => "gain-vs-direction",
            Experiment::AvgGainVsTheta => "avg-gain-vs-theta",
            Experiment::AvgGainVsBandwidth => "avg-gain-vs-bandwidth",
            Experiment::RateVsDistance => "rate-vs-distance",
            Experiment::RateVsAntennas => "rate-vs-antennas",
            Experiment::RateVsSnr => "rate-vs-snr",
            Experiment::RayleighReport => "rayleigh-report",
            Experiment::SizeReport => "size-report",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fully resolved parameters. Every experiment reads the subset it needs;
/// all of them are echoed into the output.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub n_antennas: usize,
    pub carrier_freq: f64,
    pub bandwidth: f64,
    pub subcarriers: usize,
    pub subarrays: usize,
    /// Element spacing in meters; `None` means half a carrier wavelength.
    pub antenna_spacing: Option<f64>,
    pub user_distance: f64,
    pub user_angle_deg: f64,
    pub methods: Vec<String>,
    pub snr_db: f64,
    pub seed: u64,
    pub samples: usize,
    pub distance_min: f64,
    pub distance_max: f64,
    pub distance_points: usize,
    pub angle_min_deg: f64,
    pub angle_max_deg: f64,
    pub angle_step_deg: f64,
    pub bandwidths: Vec<f64>,
    pub antennas: Vec<usize>,
    pub snrs_db: Vec<f64>,
    pub mc_distance_min: f64,
    pub mc_distance_max: f64,
    pub mc_angle_min_deg: f64,
    pub mc_angle_max_deg: f64,
    pub rho_l: f64,
    pub rho_h: f64,
    pub theta_h_deg: f64,
    pub delta_cap: f64,
    pub delta_gain: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n_antennas: Option<usize>,
    carrier_freq: Option<f64>,
    bandwidth: Option<f64>,
    subcarriers: Option<usize>,
    subarrays: Option<usize>,
    antenna_spacing: Option<f64>,
    user_distance: Option<f64>,
    user_angle_deg: Option<f64>,
    methods: Option<Vec<String>>,
    snr_db: Option<f64>,
    seed: Option<u64>,
    samples: Option<usize>,
    distance_min: Option<f64>,
    distance_max: Option<f64>,
    distance_points: Option<usize>,
    angle_min_deg: Option<f64>,
    angle_max_deg: Option<f64>,
    angle_step_deg: Option<f64>,
    bandwidths: Option<Vec<f64>>,
    antennas: Option<Vec<usize>>,
    snrs_db: Option<Vec<f64>>,
    mc_distance_min: Option<f64>,
    mc_distance_max: Option<f64>,
    mc_angle_min_deg: Option<f64>,
    mc_angle_max_deg: Option<f64>,
    rho_l: Option<f64>,
    rho_h: Option<f64>,
    theta_h_deg: Option<f64>,
    delta_cap: Option<f64>,
    delta_gain: Option<f64>,
}

macro_rules! overlay {
    ($raw:expr, $params:expr, $($field:ident),* $(,)?) => {
        $(if let Some(v) = $raw.$field { $params.$field = v; })*
    };
}

fn steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

impl Params {
    /// System defaults, adjusted per experiment to the setting each one
    /// is meant to reproduce.
    pub fn defaults(experiment: Experiment) -> Self {
        let mut p = Params {
            n_antennas: 256,
            carrier_freq: 100e9,
            bandwidth: 5e9,
            subcarriers: 256,
            subarrays: 8,
            antenna_spacing: None,
            user_distance: 10.0,
            user_angle_deg: 22.5,
            methods: ["narrowband-focus", "far-field-dpp", "pdf"]
                .map(String::from)
                .to_vec(),
            snr_db: 10.0,
            seed: 0,
            samples: 1000,
            distance_min: 1.0,
            distance_max: 100.0,
            distance_points: 100,
            angle_min_deg: -60.0,
            angle_max_deg: 60.0,
            angle_step_deg: 1.0,
            bandwidths: (1..=100).map(|i| i as f64 * 100e6).collect(),
            antennas: (1..=50).map(|i| i * 16).collect(),
            snrs_db: steps(-10.0, 20.0, 2.5),
            mc_distance_min: 1.0,
            mc_distance_max: 30.0,
            mc_angle_min_deg: -60.0,
            mc_angle_max_deg: 60.0,
            rho_l: 1.0,
            rho_h: 100.0,
            theta_h_deg: 60.0,
            delta_cap: 0.05,
            delta_gain: 0.9,
        };
        match experiment {
            Experiment::GainMap => {
                p.user_distance = 2.0;
                p.methods = vec!["narrowband-focus".into(), "pdf".into()];
                p.distance_min = 0.5;
                p.distance_max = 5.0;
                p.distance_points = 46;
                p.angle_min_deg = 0.0;
                p.angle_max_deg = 45.0;
                p.angle_step_deg = 0.25;
            }
            Experiment::GainVsDirection => {
                p.user_distance = 2.0;
                p.methods = vec!["narrowband-focus".into(), "pdf".into()];
                p.angle_min_deg = -90.0;
                p.angle_max_deg = 90.0;
                p.angle_step_deg = 0.25;
            }
            Experiment::AvgGainVsBandwidth => {
                p.user_angle_deg = 45.0;
            }
            Experiment::RateVsAntennas => {
                p.subarrays = 16;
                p.user_distance = 30.0;
                p.snr_db = -10.0;
            }
            Experiment::RateVsSnr => {
                p.methods.insert(2, "far-field-steer".into());
            }
            Experiment::RayleighReport => {
                p.angle_min_deg = 0.0;
                p.angle_max_deg = 60.0;
                p.angle_step_deg = 7.5;
            }
            Experiment::SizeReport => {
                p.antennas = vec![p.n_antennas];
            }
            Experiment::AvgGainVsTheta | Experiment::RateVsDistance => {}
        }
        p
    }

    fn apply(&mut self, raw: RawParams) {
        if raw.antenna_spacing.is_some() {
            self.antenna_spacing = raw.antenna_spacing;
        }
        overlay!(
            raw, self, n_antennas, carrier_freq, bandwidth, subcarriers, subarrays,
            user_distance, user_angle_deg, methods, snr_db, seed, samples, distance_min,
            distance_max, distance_points, angle_min_deg, angle_max_deg, angle_step_deg,
            bandwidths, antennas, snrs_db, mc_distance_min, mc_distance_max,
            mc_angle_min_deg, mc_angle_max_deg, rho_l, rho_h, theta_h_deg, delta_cap,
            delta_gain,
        );
    }

    pub fn geometry(&self) -> AppResult<ArrayGeometry> {
        self.geometry_with(self.n_antennas)
    }

    pub fn geometry_with(&self, n: usize) -> AppResult<ArrayGeometry> {
        Ok(match self.antenna_spacing {
            Some(d) => ArrayGeometry::with_spacing(n, self.carrier_freq, d)?,
            None => ArrayGeometry::new(n, self.carrier_freq)?,
        })
    }

    pub fn grid(&self) -> AppResult<OfdmGrid> {
        self.grid_with(self.bandwidth)
    }

    pub fn grid_with(&self, bandwidth: f64) -> AppResult<OfdmGrid> {
        Ok(OfdmGrid::new(self.subcarriers, bandwidth, self.carrier_freq)?)
    }

    pub fn user_angle(&self) -> f64 {
        self.user_angle_deg.to_radians()
    }

    /// Angle axis in degrees, inclusive of both ends when the step divides.
    pub fn angle_axis_deg(&self) -> Vec<f64> {
        steps(self.angle_min_deg, self.angle_max_deg, self.angle_step_deg)
    }

    /// Distance axis, `distance_points` evenly spaced values.
    pub fn distance_axis(&self) -> Vec<f64> {
        let n = self.distance_points;
        if n == 1 {
            return vec![self.distance_min];
        }
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.distance_max
                } else {
                    let t = i as f64 / (n - 1) as f64;
                    self.distance_min + (self.distance_max - self.distance_min) * t
                }
            })
            .collect()
    }

    pub fn beamformers(&self, subarrays: usize) -> AppResult<Vec<Beamformer>> {
        self.methods
            .iter()
            .map(|m| parse_method(m, subarrays))
            .collect()
    }

    /// Field-level checks; physical preconditions are rechecked by the
    /// core constructors.
    pub fn validate(&self, experiment: Experiment) -> AppResult<()> {
        fn check(ok: bool, field: &str, reason: &str) -> AppResult<()> {
            if ok {
                Ok(())
            } else {
                Err(AppError::config(format!("{field}: {reason}")))
            }
        }
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        check(self.n_antennas >= 1, "n_antennas", "must be >= 1")?;
        check(finite_pos(self.carrier_freq), "carrier_freq", "must be finite and > 0")?;
        check(
            self.bandwidth.is_finite() && self.bandwidth >= 0.0 && self.bandwidth < 2.0 * self.carrier_freq,
            "bandwidth",
            "must lie in [0, 2*carrier_freq)",
        )?;
        check(self.subcarriers >= 1, "subcarriers", "must be >= 1")?;
        check(self.subarrays >= 1, "subarrays", "must be >= 1")?;
        if let Some(d) = self.antenna_spacing {
            check(finite_pos(d), "antenna_spacing", "must be finite and > 0")?;
        }
        check(finite_pos(self.user_distance), "user_distance", "must be finite and > 0")?;
        check(self.user_angle_deg.abs() < 90.0, "user_angle_deg", "must lie in (-90, 90)")?;
        check(!self.methods.is_empty(), "methods", "need at least one method")?;
        for m in &self.methods {
            parse_method(m, 1)?;
        }
        check(self.snr_db.is_finite(), "snr_db", "must be finite")?;
        check(self.samples >= 1, "samples", "must be >= 1")?;
        check(finite_pos(self.distance_min), "distance_min", "must be finite and > 0")?;
        check(
            self.distance_max.is_finite() && self.distance_max >= self.distance_min,
            "distance_max",
            "must be finite and >= distance_min",
        )?;
        check(self.distance_points >= 1, "distance_points", "must be >= 1")?;
        check(
            self.distance_points == 1 || self.distance_max > self.distance_min,
            "distance_points",
            "several points need distance_max > distance_min",
        )?;
        check(
            self.angle_min_deg >= -90.0 && self.angle_max_deg <= 90.0 && self.angle_min_deg <= self.angle_max_deg,
            "angle_min_deg/angle_max_deg",
            "need -90 <= min <= max <= 90",
        )?;
        check(finite_pos(self.angle_step_deg), "angle_step_deg", "must be finite and > 0")?;
        check(
            self.bandwidths.iter().all(|b| b.is_finite() && *b >= 0.0 && *b < 2.0 * self.carrier_freq),
            "bandwidths",
            "every value must lie in [0, 2*carrier_freq)",
        )?;
        check(self.antennas.iter().all(|&n| n >= 1), "antennas", "every value must be >= 1")?;
        check(self.snrs_db.iter().all(|s| s.is_finite()), "snrs_db", "values must be finite")?;
        check(
            finite_pos(self.mc_distance_min) && self.mc_distance_max.is_finite() && self.mc_distance_max >= self.mc_distance_min,
            "mc_distance_min/mc_distance_max",
            "need 0 < min <= max < inf",
        )?;
        check(
            self.mc_angle_min_deg > -90.0 && self.mc_angle_max_deg < 90.0 && self.mc_angle_min_deg <= self.mc_angle_max_deg,
            "mc_angle_min_deg/mc_angle_max_deg",
            "need -90 < min <= max < 90",
        )?;
        check(
            finite_pos(self.rho_l) && self.rho_h.is_finite() && self.rho_h >= self.rho_l,
            "rho_l/rho_h",
            "need 0 < rho_l <= rho_h < inf",
        )?;
        check(self.theta_h_deg > 0.0 && self.theta_h_deg < 90.0, "theta_h_deg", "must lie in (0, 90)")?;
        check(self.delta_cap > 0.0 && self.delta_cap < 0.5, "delta_cap", "must lie in (0, 0.5)")?;
        check(self.delta_gain > 0.5 && self.delta_gain < 1.0, "delta_gain", "must lie in (0.5, 1)")?;

        match experiment {
            Experiment::RateVsAntennas => {
                check(!self.antennas.is_empty(), "antennas", "need at least one value")?;
                for &n in &self.antennas {
                    check(
                        n % self.subarrays == 0,
                        "antennas",
                        &format!("{n} is not a multiple of subarrays = {}", self.subarrays),
                    )?;
                }
            }
            Experiment::SizeReport => {
                check(!self.antennas.is_empty(), "antennas", "need at least one value")?;
            }
            Experiment::AvgGainVsBandwidth => {
                check(!self.bandwidths.is_empty(), "bandwidths", "need at least one value")?;
                check(
                    self.n_antennas % self.subarrays == 0,
                    "subarrays",
                    "must divide n_antennas",
                )?;
            }
            Experiment::RateVsSnr => {
                check(!self.snrs_db.is_empty(), "snrs_db", "need at least one value")?;
                check(
                    self.n_antennas % self.subarrays == 0,
                    "subarrays",
                    "must divide n_antennas",
                )?;
            }
            Experiment::RayleighReport => {}
            _ => check(
                self.n_antennas % self.subarrays == 0,
                "subarrays",
                "must divide n_antennas",
            )?,
        }
        Ok(())
    }

    /// `(key, value)` pairs in declaration order, values in TOML syntax.
    pub fn echo(&self) -> Vec<(String, String)> {
        fn list<T: fmt::Debug>(v: &[T]) -> String {
            let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
            format!("[{}]", items.join(", "))
        }
        let mut out: Vec<(&str, String)> = vec![
            ("n_antennas", self.n_antennas.to_string()),
            ("carrier_freq", format!("{:?}", self.carrier_freq)),
            ("bandwidth", format!("{:?}", self.bandwidth)),
            ("subcarriers", self.subcarriers.to_string()),
            ("subarrays", self.subarrays.to_string()),
        ];
        out.push((
            "antenna_spacing",
            match self.antenna_spacing {
                Some(d) => format!("{d:?}"),
                None => "\"half-wavelength\"".into(),
            },
        ));
        out.extend([
            ("user_distance", format!("{:?}", self.user_distance)),
            ("user_angle_deg", format!("{:?}", self.user_angle_deg)),
            ("methods", list(&self.methods)),
            ("snr_db", format!("{:?}", self.snr_db)),
            ("seed", self.seed.to_string()),
            ("samples", self.samples.to_string()),
            ("distance_min", format!("{:?}", self.distance_min)),
            ("distance_max", format!("{:?}", self.distance_max)),
            ("distance_points", self.distance_points.to_string()),
            ("angle_min_deg", format!("{:?}", self.angle_min_deg)),
            ("angle_max_deg", format!("{:?}", self.angle_max_deg)),
            ("angle_step_deg", format!("{:?}", self.angle_step_deg)),
            ("bandwidths", list(&self.bandwidths)),
            ("antennas", list(&self.antennas)),
            ("snrs_db", list(&self.snrs_db)),
            ("mc_distance_min", format!("{:?}", self.mc_distance_min)),
            ("mc_distance_max", format!("{:?}", self.mc_distance_max)),
            ("mc_angle_min_deg", format!("{:?}", self.mc_angle_min_deg)),
            ("mc_angle_max_deg", format!("{:?}", self.mc_angle_max_deg)),
            ("rho_l", format!("{:?}", self.rho_l)),
            ("rho_h", format!("{:?}", self.rho_h)),
            ("theta_h_deg", format!("{:?}", self.theta_h_deg)),
            ("delta_cap", format!("{:?}", self.delta_cap)),
            ("delta_gain", format!("{:?}", self.delta_gain)),
        ]);
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

/// Maps a method name onto a beamformer with `subarrays` delayers.
pub fn parse_method(name: &str, subarrays: usize) -> AppResult<Beamformer> {
    Ok(match name {
        "narrowband-focus" => Beamformer::NarrowbandFocus,
        "far-field-steer" => Beamformer::FarFieldSteer,
        "far-field-dpp" => Beamformer::FarFieldDpp { subarrays },
        "pdf" => Beamformer::PhaseDelayFocus { subarrays },
        other => {
            return Err(AppError::config(format!(
                "methods: unknown method {other:?} (expected narrowband-focus, far-field-steer, far-field-dpp or pdf)"
            )))
        }
    })
}

/// Resolves `text` for `experiment`: defaults, then top-level keys, then the
/// experiment's own table.
pub fn parse_config(text: &str, experiment: Experiment) -> AppResult<Params> {
    let table: toml::Table =
        toml::from_str(text).map_err(|e| AppError::config(format!("invalid TOML: {e}")))?;
    let mut base = toml::Table::new();
    let mut section = None;
    for (key, value) in table {
        match value {
            toml::Value::Table(t) => match Experiment::from_name(&key) {
                Some(e) if e == experiment => section = Some(t),
                Some(_) => {}
                None => return Err(AppError::config(format!("unknown section [{key}]"))),
            },
            other => {
                base.insert(key, other);
            }
        }
    }
    let mut params = Params::defaults(experiment);
    params.apply(to_raw(base)?);
    if let Some(t) = section {
        params.apply(to_raw(t).map_err(|e| match e {
            AppError::Config(m) => AppError::config(format!("[{experiment}] {m}")),
            other => other,
        })?);
    }
    params.validate(experiment)?;
    Ok(params)
}

fn to_raw(table: toml::Table) -> AppResult<RawParams> {
    RawParams::deserialize(toml::Value::Table(table))
        .map_err(|e| AppError::config(e.to_string().trim().to_string()))
}

pub fn load_config(path: &Path, experiment: Experiment) -> AppResult<Params> {
    let text = std::fs::read_to_string(path).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, experiment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let p = parse_config("", Experiment::RateVsDistance).unwrap();
        assert_eq!(p, Params::defaults(Experiment::RateVsDistance));
        assert_eq!((p.n_antennas, p.subcarriers, p.subarrays), (256, 256, 8));
    }

    #[test]
    fn section_overrides_top_level() {
        let text = "n_antennas = 128\nsnr_db = 3.0\n[rate-vs-distance]\nsnr_db = 7.0\n[size-report]\nn_antennas = 400\n";
        let p = parse_config(text, Experiment::RateVsDistance).unwrap();
        assert_eq!((p.n_antennas, p.snr_db), (128, 7.0));
        let p = parse_config(text, Experiment::SizeReport).unwrap();
        assert_eq!(p.n_antennas, 400);
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        let e = parse_config("n_antenas = 3", Experiment::GainMap).unwrap_err();
        assert!(e.to_string().contains("n_antenas"), "{e}");
        assert!(parse_config("[bogus]\nx = 1", Experiment::GainMap).is_err());
    }

    #[test]
    fn field_level_messages() {
        let e = parse_config("subarrays = 7", Experiment::AvgGainVsTheta).unwrap_err();
        assert!(e.to_string().contains("subarrays"));
        assert_eq!(e.exit_code(), 2);
        let e = parse_config("methods = [\"mystery\"]", Experiment::RateVsDistance).unwrap_err();
        assert!(e.to_string().contains("mystery"));
        let e = parse_config("user_angle_deg = 95.0", Experiment::RateVsDistance).unwrap_err();
        assert!(e.to_string().contains("user_angle_deg"));
    }

    #[test]
    fn axes() {
        let p = Params::defaults(Experiment::GainVsDirection);
        let a = p.angle_axis_deg();
        assert_eq!(a.len(), 721);
        assert_eq!((a[0], a[720]), (-90.0, 90.0));
        let d = Params::defaults(Experiment::RateVsDistance).distance_axis();
        assert_eq!((d.len(), d[0], d[99]), (100, 1.0, 100.0));
    }
}
