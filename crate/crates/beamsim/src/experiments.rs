//! The experiment drivers behind the CLI. Each returns a [`CsvResult`]
//! whose rows follow the axis order recorded in its `row_order` metadata.

use beamsim_core::analysis::{avg_gain_asymptotic, avg_gain_quadratic, gain_map_cell};
use beamsim_core::rate::{average_rate, ideal_rate, db_to_linear, UserRegion, RNG_NAME};
use beamsim_core::rayleigh::{classical_rayleigh, coherence, effective_rayleigh, solve_beta_delta};
use beamsim_core::sizing::{size_subarrays, SizingSpec};
use beamsim_core::{
    ArrayGeometry, Beamformer, Error as CoreError, GainMapAxes, Location, OfdmGrid,
    SubArrayPartition,
};
use rayon::prelude::*;

use crate::config::{Experiment, Params};
use crate::csv::CsvResult;
use crate::error::AppResult;
use crate::parallel;

pub fn run(experiment: Experiment, params: &Params) -> AppResult<CsvResult> {
    params.validate(experiment)?;
    let mut result = match experiment {
        Experiment::GainMap => gain_map(params)?,
        Experiment::GainVsDirection => gain_vs_direction(params)?,
        Experiment::AvgGainVsTheta => avg_gain_vs_theta(params)?,
        Experiment::AvgGainVsBandwidth => avg_gain_vs_bandwidth(params)?,
        Experiment::RateVsDistance => rate_vs_distance(params)?,
        Experiment::RateVsAntennas => rate_vs_antennas(params)?,
        Experiment::RateVsSnr => rate_vs_snr(params)?,
        Experiment::RayleighReport => rayleigh_report(params)?,
        Experiment::SizeReport => size_report(params)?,
    };
    let mut meta = vec![
        ("generator".to_string(), format!("beamsim {}", env!("CARGO_PKG_VERSION"))),
        ("rng".to_string(), RNG_NAME.to_string()),
    ];
    meta.extend(params.echo());
    meta.append(&mut result.metadata);
    result.metadata = meta;
    Ok(result)
}

fn column(prefix: &str, bf: &Beamformer) -> String {
    format!("{prefix}_{}", bf.name().replace('-', "_"))
}

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Min and mean of every series column.
fn summarize_series(result: &mut CsvResult) {
    for name in result.series.clone() {
        let vals = result.column_values(&name).expect("known column");
        result.add_summary(format!("{name}.min"), num(min(&vals)));
        result.add_summary(format!("{name}.mean"), num(mean(&vals)));
    }
}

/// `f_L`, `f_c`, `f_H` of the configured grid (just `f_c` for one subcarrier).
fn edge_freqs(grid: &OfdmGrid) -> Vec<f64> {
    if grid.n_subcarriers() == 1 {
        vec![grid.center_freq()]
    } else {
        vec![grid.low(), grid.center_freq(), grid.high()]
    }
}

fn user(params: &Params) -> AppResult<Location> {
    Ok(Location::new(params.user_distance, params.user_angle())?)
}

fn map_rows(
    params: &Params,
    distances: Vec<f64>,
    with_distance: bool,
    experiment: Experiment,
) -> AppResult<CsvResult> {
    let geom = params.geometry()?;
    let grid = params.grid()?;
    let user = user(params)?;
    let bfs = params.beamformers(params.subarrays)?;
    let angles_deg = params.angle_axis_deg();
    let axes = GainMapAxes {
        distances,
        angles: angles_deg.iter().map(|a| a.to_radians()).collect(),
        freqs: edge_freqs(&grid),
    };
    let maps = bfs
        .iter()
        .map(|bf| parallel::gain_map(&geom, &user, *bf, axes.clone()))
        .collect::<AppResult<Vec<_>>>()?;

    let axis_names: &[&str] = if with_distance {
        &["distance_m", "angle_deg", "freq_hz"]
    } else {
        &["angle_deg", "freq_hz"]
    };
    let series = bfs.iter().map(|bf| column("gain", bf)).collect();
    let mut result = CsvResult::new(experiment.name(), axis_names, series);
    result.metadata.push((
        "row_order".into(),
        format!("{} outer to inner", axis_names.join(", ")),
    ));
    for (i, &r) in axes.distances.iter().enumerate() {
        for (j, &a) in angles_deg.iter().enumerate() {
            for (k, &f) in axes.freqs.iter().enumerate() {
                let mut row = if with_distance { vec![r, a, f] } else { vec![a, f] };
                row.extend(maps.iter().map(|m| m.get(i, j, k)));
                result.push_row(row);
            }
        }
    }

    for (bf, map) in bfs.iter().zip(&maps) {
        let design = bf.design(&geom, &user)?;
        let weights: Vec<_> = axes.freqs.iter().map(|&f| design.weights(f)).collect();
        let at_user = gain_map_cell(&geom, &weights, &axes.freqs, user.r(), user.theta());
        let name = bf.name();
        for (k, &f) in axes.freqs.iter().enumerate() {
            let label = format!("{:.3}GHz", f / 1e9);
            result.add_summary(format!("{name}.gain_at_user.{label}"), num(at_user[k]));
            let (i, j, g) = map.argmax(k);
            result.add_summary(
                format!("{name}.peak.{label}"),
                format!(
                    "{} at r={} m, angle={} deg",
                    num(g),
                    num(axes.distances[i]),
                    num(angles_deg[j])
                ),
            );
        }
    }
    Ok(result)
}

fn gain_map(params: &Params) -> AppResult<CsvResult> {
    map_rows(params, params.distance_axis(), true, Experiment::GainMap)
}

/// Gain along the angle axis at the user's distance.
fn gain_vs_direction(params: &Params) -> AppResult<CsvResult> {
    map_rows(params, vec![params.user_distance], false, Experiment::GainVsDirection)
}

/// Series of an average-gain sweep at one `(grid, loc)` point: exact
/// averages per method, then the two closed forms.
fn avg_gain_point(
    geom: &ArrayGeometry,
    bfs: &[Beamformer],
    part: &SubArrayPartition,
    grid: &OfdmGrid,
    loc: &Location,
) -> AppResult<Vec<f64>> {
    let mut row: Vec<f64> = parallel::subcarrier_gain_sets(geom, bfs, grid, loc)?
        .iter()
        .map(|g| mean(g))
        .collect();
    let quadratic = match avg_gain_quadratic(part, loc, grid) {
        Ok(v) => v,
        Err(CoreError::Precondition(_)) => f64::NAN,
        Err(e) => return Err(e.into()),
    };
    row.push(quadratic);
    row.push(avg_gain_asymptotic(
        grid.bandwidth(),
        grid.center_freq(),
        part.size(),
        loc.r(),
        loc.theta(),
        geom.span(),
    ));
    Ok(row)
}

fn avg_series(bfs: &[Beamformer]) -> Vec<String> {
    let mut s: Vec<String> = bfs.iter().map(|bf| column("avg_gain", bf)).collect();
    s.push("closed_form_quadratic".into());
    s.push("closed_form_asymptotic".into());
    s
}

const CLOSED_FORM_NOTE: &str =
    "closed forms use P = n_antennas/subarrays and aperture n_antennas*spacing; nan where subcarriers leave the sinc main lobe";

fn avg_gain_vs_theta(params: &Params) -> AppResult<CsvResult> {
    let geom = params.geometry()?;
    let grid = params.grid()?;
    let part = SubArrayPartition::new(geom, params.subarrays)?;
    let bfs = params.beamformers(params.subarrays)?;
    let angles = params.angle_axis_deg();
    let rows = angles
        .par_iter()
        .map(|&a| {
            let loc = Location::new(params.user_distance, a.to_radians())?;
            let mut row = vec![a];
            row.extend(avg_gain_point(&geom, &bfs, &part, &grid, &loc)?);
            Ok(row)
        })
        .collect::<AppResult<Vec<_>>>()?;
    let mut result = CsvResult::new(Experiment::AvgGainVsTheta.name(), &["angle_deg"], avg_series(&bfs));
    result.metadata.push(("row_order".into(), "angle_deg ascending".into()));
    result.metadata.push(("note".into(), CLOSED_FORM_NOTE.into()));
    result.rows = rows;
    summarize_series(&mut result);
    Ok(result)
}

fn avg_gain_vs_bandwidth(params: &Params) -> AppResult<CsvResult> {
    let geom = params.geometry()?;
    let part = SubArrayPartition::new(geom, params.subarrays)?;
    let bfs = params.beamformers(params.subarrays)?;
    let loc = user(params)?;
    let rows = params
        .bandwidths
        .par_iter()
        .map(|&b| {
            let grid = params.grid_with(b)?;
            let mut row = vec![b];
            row.extend(avg_gain_point(&geom, &bfs, &part, &grid, &loc)?);
            Ok(row)
        })
        .collect::<AppResult<Vec<_>>>()?;
    let mut result =
        CsvResult::new(Experiment::AvgGainVsBandwidth.name(), &["bandwidth_hz"], avg_series(&bfs));
    result.metadata.push(("row_order".into(), "bandwidths in config order".into()));
    result.metadata.push(("note".into(), CLOSED_FORM_NOTE.into()));
    result.rows = rows;
    summarize_series(&mut result);
    Ok(result)
}

fn rate_series(bfs: &[Beamformer]) -> Vec<String> {
    let mut s: Vec<String> = bfs.iter().map(|bf| column("rate", bf)).collect();
    s.push("ideal".into());
    s
}

/// Rates of every beamformer at `loc`, then the ideal bound.
fn rate_point(
    geom: &ArrayGeometry,
    bfs: &[Beamformer],
    grid: &OfdmGrid,
    loc: &Location,
    snr: f64,
) -> AppResult<Vec<f64>> {
    let mut row = parallel::subcarrier_gain_sets(geom, bfs, grid, loc)?
        .iter()
        .map(|g| average_rate(g, snr))
        .collect::<Result<Vec<_>, _>>()?;
    row.push(ideal_rate(snr)?);
    Ok(row)
}

fn rate_vs_distance(params: &Params) -> AppResult<CsvResult> {
    let geom = params.geometry()?;
    let grid = params.grid()?;
    let bfs = params.beamformers(params.subarrays)?;
    let theta = params.user_angle();
    let snr = db_to_linear(params.snr_db);
    let mut distances = params.distance_axis();
    distances.reverse();
    let rows = distances
        .par_iter()
        .map(|&r| {
            let loc = Location::new(r, theta)?;
            let mut row = vec![r];
            row.extend(rate_point(&geom, &bfs, &grid, &loc, snr)?);
            Ok(row)
        })
        .collect::<AppResult<Vec<_>>>()?;
    let mut result =
        CsvResult::new(Experiment::RateVsDistance.name(), &["distance_m"], rate_series(&bfs));
    result.metadata.push(("row_order".into(), "distance_m descending".into()));
    result.rows = rows;
    let aperture = geom.span();
    result.add_summary(
        "classical_rayleigh_m",
        num(classical_rayleigh(aperture, geom.wavelength())),
    );
    result.add_summary(
        "effective_rayleigh_m",
        num(effective_rayleigh(aperture, geom.wavelength(), theta, params.delta_cap)?),
    );
    summarize_series(&mut result);
    Ok(result)
}

fn rate_vs_antennas(params: &Params) -> AppResult<CsvResult> {
    let grid = params.grid()?;
    let loc = user(params)?;
    let rows = params
        .antennas
        .par_iter()
        .map(|&n| {
            let geom = params.geometry_with(n)?;
            let bfs = params.beamformers(params.subarrays)?;
            let snr_db = params.snr_db + 10.0 * (n as f64).log10();
            let mut row = vec![n as f64, snr_db];
            row.extend(rate_point(&geom, &bfs, &grid, &loc, db_to_linear(snr_db))?);
            Ok(row)
        })
        .collect::<AppResult<Vec<_>>>()?;
    let bfs = params.beamformers(params.subarrays)?;
    let mut series = vec!["snr_db".to_string()];
    series.extend(rate_series(&bfs));
    let mut result = CsvResult::new(Experiment::RateVsAntennas.name(), &["n_antennas"], series);
    result.metadata.push(("row_order".into(), "antennas in config order".into()));
    result.metadata.push(("snr_rule".into(), "snr_db + 10*log10(n_antennas)".into()));
    result.rows = rows;
    summarize_series(&mut result);
    Ok(result)
}

fn rate_vs_snr(params: &Params) -> AppResult<CsvResult> {
    let geom = params.geometry()?;
    let grid = params.grid()?;
    let bfs = params.beamformers(params.subarrays)?;
    let region = UserRegion {
        r: (params.mc_distance_min, params.mc_distance_max),
        theta: (params.mc_angle_min_deg.to_radians(), params.mc_angle_max_deg.to_radians()),
    };
    let gains =
        parallel::monte_carlo_gains(&geom, &bfs, &region, params.samples, params.seed, &grid)?;

    let mut series = rate_series(&bfs);
    series.extend(bfs.iter().map(|bf| column("stderr", bf)));
    let mut result = CsvResult::new(Experiment::RateVsSnr.name(), &["snr_db"], series);
    result.metadata.push(("row_order".into(), "snrs_db in config order".into()));
    result.metadata.push((
        "sampling".into(),
        "the same user draws are shared by every method and SNR".into(),
    ));
    for &snr_db in &params.snrs_db {
        let snr = db_to_linear(snr_db);
        let mut means = Vec::with_capacity(bfs.len());
        let mut errs = Vec::with_capacity(bfs.len());
        for b in 0..bfs.len() {
            let rates = gains
                .iter()
                .map(|g| average_rate(&g[b], snr))
                .collect::<Result<Vec<_>, _>>()?;
            let s = beamsim_core::rate::MonteCarloSummary::from_samples(&rates)?;
            means.push(s.mean);
            errs.push(s.std_error);
        }
        let mut row = vec![snr_db];
        row.extend(means);
        row.push(ideal_rate(snr)?);
        row.extend(errs);
        result.push_row(row);
    }
    summarize_series(&mut result);
    Ok(result)
}

fn rayleigh_report(params: &Params) -> AppResult<CsvResult> {
    let geom = params.geometry()?;
    let aperture = geom.span();
    let lambda = geom.wavelength();
    let classical = classical_rayleigh(aperture, lambda);
    let beta = solve_beta_delta(params.delta_cap)?;

    let angles = params.angle_axis_deg();
    let rows = angles
        .par_iter()
        .map(|&a| {
            let theta = a.to_radians();
            let eff = effective_rayleigh(aperture, lambda, theta, params.delta_cap)?;
            let coh_eff = if eff > 0.0 {
                coherence(&geom, &Location::new(eff, theta)?)
            } else {
                f64::NAN
            };
            let coh_classical = coherence(&geom, &Location::new(classical, theta)?);
            Ok(vec![a, classical, eff, coh_classical, coh_eff])
        })
        .collect::<AppResult<Vec<_>>>()?;
    let series = ["classical_m", "effective_m", "coherence_at_classical", "coherence_at_effective"]
        .map(String::from)
        .to_vec();
    let mut result = CsvResult::new(Experiment::RayleighReport.name(), &["angle_deg"], series);
    result.metadata.push(("row_order".into(), "angle_deg ascending".into()));
    result.metadata.push(("aperture".into(), "n_antennas*spacing".into()));
    result.rows = rows;

    let theta = params.user_angle();
    result.add_summary("aperture_m", num(aperture));
    result.add_summary("wavelength_m", num(lambda));
    result.add_summary("classical_rayleigh_m", num(classical));
    result.add_summary("beta_delta", num(beta.beta));
    result.add_summary("c_delta", num(beta.c_delta));
    result.add_summary(
        format!("effective_rayleigh_m.at_{}deg", params.user_angle_deg),
        num(effective_rayleigh(aperture, lambda, theta, params.delta_cap)?),
    );
    Ok(result)
}

fn size_report(params: &Params) -> AppResult<CsvResult> {
    let series = [
        "bound_wideband",
        "bound_farfield",
        "bound_gain",
        "chosen_p",
        "k",
        "max_xi",
        "max_xi_distance_m",
    ]
    .map(String::from)
    .to_vec();
    let mut result = CsvResult::new(Experiment::SizeReport.name(), &["n_antennas"], series);
    result.metadata.push(("row_order".into(), "antennas in config order".into()));
    result.metadata.push(("aperture".into(), "n_antennas*spacing".into()));
    for &n in &params.antennas {
        let spec = SizingSpec {
            geom: params.geometry_with(n)?,
            bandwidth: params.bandwidth,
            rho_l: params.rho_l,
            rho_h: params.rho_h,
            theta_h: params.theta_h_deg.to_radians(),
            delta_cap: params.delta_cap,
            delta_gain: params.delta_gain,
        };
        let s = size_subarrays(&spec)?;
        result.push_row(vec![
            n as f64,
            s.bound_wideband,
            s.bound_farfield,
            s.bound_gain,
            s.chosen_p as f64,
            s.k as f64,
            s.max_xi,
            s.max_xi_distance,
        ]);
        result.add_summary(format!("n{n}.chosen_p"), s.chosen_p.to_string());
        result.add_summary(format!("n{n}.k"), s.k.to_string());
        result.add_summary(
            format!("n{n}.bounds"),
            format!("{}, {}, {}", num(s.bound_wideband), num(s.bound_farfield), num(s.bound_gain)),
        );
    }
    Ok(result)
}
