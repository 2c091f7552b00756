//! Headline behavior of each experiment at its default settings.

use beamsim::config::{parse_config, Experiment, Params};
use beamsim::csv::CsvResult;
use beamsim::{compare, run};

fn run_with(exp: Experiment, text: &str) -> CsvResult {
    let params = parse_config(text, exp).unwrap();
    run(exp, &params).unwrap()
}

fn summary(r: &CsvResult, key: &str) -> f64 {
    r.summary
        .iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("no summary key {key}"))
        .1
        .parse()
        .unwrap()
}

#[test]
fn rayleigh_report_headlines() {
    let r = run_with(Experiment::RayleighReport, "user_angle_deg = 22.5\n");
    assert!((summary(&r, "classical_rayleigh_m") - 98.3).abs() < 0.1);
    assert!((summary(&r, "effective_rayleigh_m.at_22.5deg") - 31.0).abs() < 1.0);
    // Broadside users at the classical distance barely notice curvature.
    let coh = r.column_values("coherence_at_classical").unwrap();
    assert!((coh[0] - 0.993).abs() < 0.002);
    // At the effective distance the loss is close to the 5% threshold.
    for c in r.column_values("coherence_at_effective").unwrap() {
        assert!((c - 0.95).abs() < 0.01, "{c}");
    }
}

#[test]
fn size_report_example() {
    let r = run_with(Experiment::SizeReport, "[size-report]\nantennas = [400]\n");
    assert_eq!(r.rows.len(), 1);
    let row = &r.rows[0];
    assert_eq!((row[4], row[5]), (40.0, 10.0));
}

#[test]
fn avg_gain_vs_theta_stays_above_target() {
    let r = run_with(Experiment::AvgGainVsTheta, "angle_step_deg = 5.0\n");
    assert_eq!(r.rows.len(), 25);
    for v in r.column_values("avg_gain_pdf").unwrap() {
        assert!(v >= 0.90, "{v}");
    }
    let nb = r.column_values("avg_gain_narrowband_focus").unwrap();
    let pdf = r.column_values("avg_gain_pdf").unwrap();
    // Broadside has no beam split, so narrowband focusing only ties there.
    let angles = r.column_values("angle_deg").unwrap();
    for ((a, n), p) in angles.iter().zip(&nb).zip(&pdf) {
        if *a == 0.0 {
            assert!((n - p).abs() < 1e-3);
        } else {
            assert!(n < p, "{a}");
        }
    }
}

#[test]
fn avg_gain_vs_bandwidth_closed_forms_defined_in_lobe() {
    let r = run_with(
        Experiment::AvgGainVsBandwidth,
        "bandwidths = [1e8, 5e9, 1e10, 1.5e10]\nsubcarriers = 64\n",
    );
    let quad = r.column_values("closed_form_quadratic").unwrap();
    // P = 32 keeps subcarriers in the main lobe only up to B = 4 f_c / P = 12.5 GHz.
    assert!(quad[..3].iter().all(|v| v.is_finite()));
    assert!(quad[3].is_nan());
    let pdf = r.column_values("avg_gain_pdf").unwrap();
    let nb = r.column_values("avg_gain_narrowband_focus").unwrap();
    // Around 5 GHz PDF should be several times better than narrowband focusing.
    assert!(pdf[1] / nb[1] > 2.0, "{} vs {}", pdf[1], nb[1]);
}

#[test]
fn rate_vs_distance_pdf_dominates_far_field_dpp() {
    let r = run_with(Experiment::RateVsDistance, "");
    let d = r.column_values("distance_m").unwrap();
    assert_eq!((d[0], d[d.len() - 1]), (100.0, 1.0));
    let pdf = r.column_values("rate_pdf").unwrap();
    let dpp = r.column_values("rate_far_field_dpp").unwrap();
    for i in 0..d.len() {
        assert!(pdf[i] >= dpp[i], "r={}", d[i]);
        if d[i] < 31.0 {
            assert!(pdf[i] > dpp[i], "r={}", d[i]);
        }
    }
}

#[test]
fn rate_vs_antennas_regimes() {
    let r = run_with(
        Experiment::RateVsAntennas,
        "[rate-vs-antennas]\nantennas = [16, 32, 48, 64, 192, 512, 800]\n",
    );
    let ideal = r.column_values("ideal").unwrap();
    let nb = r.column_values("rate_narrowband_focus").unwrap();
    let dpp = r.column_values("rate_far_field_dpp").unwrap();
    let pdf = r.column_values("rate_pdf").unwrap();
    // Small arrays: everything near the bound.
    for i in 0..4 {
        for s in [nb[i], dpp[i], pdf[i]] {
            assert!(s >= 0.95 * ideal[i], "row {i}");
        }
    }
    // N = 192: narrowband focusing has split, both delay-based designs have not.
    assert!(nb[4] < 0.8 * ideal[4]);
    assert!(dpp[4] >= 0.95 * ideal[4] && pdf[4] >= 0.95 * ideal[4]);
    // Large arrays: only PDF holds up.
    for i in 5..7 {
        assert!(pdf[i] >= 0.9 * ideal[i]);
        assert!(dpp[i] < 0.8 * pdf[i], "row {i}");
    }
}

#[test]
fn rate_vs_snr_matches_sequential_monte_carlo() {
    use beamsim_core::rate::{monte_carlo_rate, RateConfig, UserRegion};
    let r = run_with(
        Experiment::RateVsSnr,
        "samples = 40\nsubcarriers = 32\nsnrs_db = [5.0]\nmethods = [\"far-field-dpp\", \"pdf\"]\nseed = 9\n",
    );
    let params = parse_config("subcarriers = 32", Experiment::RateVsSnr).unwrap();
    let geom = params.geometry().unwrap();
    let cfg = RateConfig::new(5.0, params.grid().unwrap()).unwrap();
    let region = UserRegion {
        r: (1.0, 30.0),
        theta: (-60f64.to_radians(), 60f64.to_radians()),
    };
    let bfs = params.beamformers(8).unwrap();
    for bf in bfs.iter().filter(|b| matches!(b.name(), "far-field-dpp" | "pdf")) {
        let seq = monte_carlo_rate(&geom, bf, &region, 40, 9, &cfg).unwrap();
        let col = format!("rate_{}", bf.name().replace('-', "_"));
        assert_eq!(r.column_values(&col).unwrap()[0], seq.mean);
        let col = format!("stderr_{}", bf.name().replace('-', "_"));
        assert_eq!(r.column_values(&col).unwrap()[0], seq.std_error);
    }
}

#[test]
fn gain_vs_direction_peaks_split_for_narrowband() {
    let r = run_with(Experiment::GainVsDirection, "angle_step_deg = 0.5\n");
    assert!(summary(&r, "pdf.gain_at_user.97.500GHz") > 0.95);
    assert!(summary(&r, "pdf.gain_at_user.102.500GHz") > 0.95);
    assert!(summary(&r, "narrowband-focus.gain_at_user.97.500GHz") < 0.5);
    assert!((summary(&r, "narrowband-focus.gain_at_user.100.000GHz") - 1.0).abs() < 1e-9);
}

#[test]
fn gain_map_layout() {
    let r = run_with(
        Experiment::GainMap,
        "distance_points = 3\nangle_min_deg = 20.0\nangle_max_deg = 25.0\n",
    );
    assert_eq!(r.axes, ["distance_m", "angle_deg", "freq_hz"]);
    assert_eq!(r.rows.len(), 3 * 21 * 3);
    // distance outermost, frequency innermost
    assert_eq!(r.rows[0][..3], [0.5, 20.0, 97.5e9]);
    assert_eq!(r.rows[2][..3], [0.5, 20.0, 102.5e9]);
    assert_eq!(r.rows[3][..3], [0.5, 20.25, 97.5e9]);
    assert!(r.rows.iter().all(|row| row[3..].iter().all(|g| (0.0..=1.0 + 1e-9).contains(g))));
}

#[test]
fn compare_single_equals_run_and_output_round_trips() {
    let r = run_with(Experiment::RateVsDistance, "distance_points = 4\nsubcarriers = 8\n");
    let merged = compare(std::slice::from_ref(&r)).unwrap();
    assert_eq!(merged.render(), r.render());
    let back = CsvResult::parse(&r.render(), 1).unwrap();
    assert_eq!(back.render(), r.render());
}

#[test]
fn metadata_echoes_resolved_config() {
    let r = run_with(Experiment::RateVsDistance, "snr_db = 7.5\n");
    let keys: Vec<&str> = r.metadata.iter().map(|(k, _)| k.as_str()).collect();
    let echoed = Params::defaults(Experiment::RateVsDistance).echo();
    for (k, _) in &echoed {
        assert!(keys.contains(&k.as_str()), "{k}");
    }
    assert!(r.metadata.contains(&("snr_db".into(), "7.5".into())));
}
