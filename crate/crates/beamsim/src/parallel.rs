//! Rayon versions of the core sweeps. Work is split per grid cell or per
//! sample and collected in index order, so results match the sequential
//! core functions bit for bit.

use beamsim_core::analysis::{gain_map_cell, subcarrier_gains};
use beamsim_core::rate::{
    average_rate, sample_location, MonteCarloSummary, RateConfig, UserRegion,
};
use beamsim_core::{ArrayGeometry, Beamformer, GainMap, GainMapAxes, Location, OfdmGrid, WeightVector};
use rayon::prelude::*;

use crate::error::AppResult;

/// Parallel counterpart of [`beamsim_core::analysis::gain_map`].
pub fn gain_map(
    geom: &ArrayGeometry,
    user: &Location,
    beamformer: Beamformer,
    axes: GainMapAxes,
) -> AppResult<GainMap> {
    axes.validate()?;
    let design = beamformer.design(geom, user)?;
    let weights: Vec<WeightVector> = axes.freqs.iter().map(|&f| design.weights(f)).collect();
    let points: Vec<(f64, f64)> = axes
        .distances
        .iter()
        .flat_map(|&r| axes.angles.iter().map(move |&t| (r, t)))
        .collect();
    let cells = points
        .par_iter()
        .map(|&(r, t)| gain_map_cell(geom, &weights, &axes.freqs, r, t))
        .collect();
    Ok(GainMap::from_cells(axes, cells))
}

/// Exact-channel subcarrier gains of each beamformer, designed for and
/// evaluated at `loc`.
pub fn subcarrier_gain_sets(
    geom: &ArrayGeometry,
    beamformers: &[Beamformer],
    grid: &OfdmGrid,
    loc: &Location,
) -> AppResult<Vec<Vec<f64>>> {
    beamformers
        .iter()
        .map(|bf| {
            let design = bf.design(geom, loc)?;
            Ok(subcarrier_gains(geom, &design, grid, loc))
        })
        .collect()
}

/// Per-sample subcarrier gains, indexed `[sample][beamformer][subcarrier]`.
pub fn monte_carlo_gains(
    geom: &ArrayGeometry,
    beamformers: &[Beamformer],
    region: &UserRegion,
    n_samples: usize,
    seed: u64,
    grid: &OfdmGrid,
) -> AppResult<Vec<Vec<Vec<f64>>>> {
    region.validate()?;
    (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let loc = sample_location(seed, i, region)?;
            subcarrier_gain_sets(geom, beamformers, grid, &loc)
        })
        .collect()
}

/// Parallel counterpart of [`beamsim_core::rate::monte_carlo_rate`].
pub fn monte_carlo_rate(
    geom: &ArrayGeometry,
    beamformer: &Beamformer,
    region: &UserRegion,
    n_samples: usize,
    seed: u64,
    cfg: &RateConfig,
) -> AppResult<MonteCarloSummary> {
    let gains = monte_carlo_gains(geom, &[*beamformer], region, n_samples, seed, &cfg.grid)?;
    let snr = cfg.snr_linear();
    let rates = gains
        .iter()
        .map(|g| average_rate(&g[0], snr))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonteCarloSummary::from_samples(&rates)?)
}
