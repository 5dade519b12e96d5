//! Minimal separation, resolvability thresholds, SNR calibration and the
//! location-privacy leakage metric.

use num_complex::Complex64;

use crate::channel::ChannelVector;
use crate::error::{Result, SanError};
use crate::geometry::{PathParams, Scenario};
use crate::signaling::{fake_path_params, PilotGrid, SanKey};

/// Relative gap between the exact and closed-form separations above which
/// the closed form is reported as not applicable.
const CLOSED_FORM_TOL: f64 = 1e-9;

/// Wrap-around minimum pairwise distance on the unit torus:
/// min_{i≠j} min(|κ_i − κ_j|, 1 − |κ_i − κ_j|), coordinates reduced mod 1.
pub fn delta_min(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(SanError::UndefinedSeparation(values.len()));
    }
    let mut wrapped: Vec<f64> = values.iter().map(|v| v.rem_euclid(1.0)).collect();
    wrapped.sort_by(f64::total_cmp);
    // on a circle the closest pair is adjacent after sorting, or the wrap pair
    let mut best = 1.0 - (wrapped[wrapped.len() - 1] - wrapped[0]);
    for w in wrapped.windows(2) {
        best = best.min(w[1] - w[0]);
    }
    Ok(best.clamp(0.0, 0.5))
}

/// Resolvability thresholds 1/⌊(N−1)/8⌋ and 1/⌊(N_t−1)/4⌋ and the verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolvability {
    pub toa_threshold: f64,
    pub aod_threshold: f64,
    pub toa_resolvable: bool,
    pub aod_resolvable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    /// Δ_min of τ/(N·T_s) over true and fake paths.
    pub delta_min_toa: f64,
    /// Δ_min of d·sin θ/λ_c over true and fake paths.
    pub delta_min_aod: f64,
    /// |δ_τ/(N·T_s)|.
    pub closed_form_toa: f64,
    /// |d·sin δ_θ/λ_c|.
    pub closed_form_aod: f64,
    /// Whether the exact values agree with the small-key closed forms.
    pub closed_form_applies: bool,
    /// `None` when the array or subcarrier count leaves a threshold undefined.
    pub resolvability: Option<Resolvability>,
}

/// Folds a spatial frequency onto (−1/2, 1/2].
fn fold_half(u: f64) -> f64 {
    let r = u.rem_euclid(1.0);
    if r > 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// Δ_min of normalised delays and folded spatial frequencies over the true
/// paths alone.
pub fn path_separation(paths: &[PathParams], scenario: &Scenario) -> Result<(f64, f64)> {
    let grid = scenario.ofdm();
    let array = scenario.array();
    let toa: Vec<f64> = paths.iter().map(|p| grid.normalized_delay(p.toa_us)).collect();
    let aod: Vec<f64> = paths
        .iter()
        .map(|p| fold_half(array.spatial_frequency_from_sine(p.aod_rad.sin())))
        .collect();
    Ok((delta_min(&toa)?, delta_min(&aod)?))
}

/// Exact minimal separation of the combined true and fake coordinates.
pub fn post_san_separation(paths: &[PathParams], key: &SanKey, scenario: &Scenario) -> Result<SeparationReport> {
    let fake = fake_path_params(paths, key)?;
    let grid = scenario.ofdm();
    let array = scenario.array();
    let toa: Vec<f64> = paths
        .iter()
        .map(|p| p.toa_us)
        .chain(fake.paths.iter().map(|f| f.toa_us))
        .map(|t| grid.normalized_delay(t))
        .collect();
    let aod: Vec<f64> = paths
        .iter()
        .map(|p| p.aod_rad.sin())
        .chain(fake.paths.iter().map(|f| f.sin_aod))
        .map(|s| fold_half(array.spatial_frequency_from_sine(s)))
        .collect();
    let delta_min_toa = delta_min(&toa)?;
    let delta_min_aod = delta_min(&aod)?;
    let closed_form_toa = grid.normalized_delay(key.delta_tau_us).abs();
    let closed_form_aod = array.spatial_frequency(key.delta_theta_rad).abs();
    let agrees = |exact: f64, closed: f64| (exact - closed).abs() <= CLOSED_FORM_TOL * closed.max(1e-300) + 1e-15;
    let closed_form_applies = agrees(delta_min_toa, closed_form_toa) && agrees(delta_min_aod, closed_form_aod);
    let mut report = SeparationReport {
        delta_min_toa,
        delta_min_aod,
        closed_form_toa,
        closed_form_aod,
        closed_form_applies,
        resolvability: None,
    };
    report.resolvability = resolvability_check(&report, scenario.num_subcarriers, scenario.num_tx).ok();
    Ok(report)
}

pub fn resolvability_check(report: &SeparationReport, num_subcarriers: usize, num_tx: usize) -> Result<Resolvability> {
    let toa_floor = num_subcarriers.saturating_sub(1) / 8;
    let aod_floor = num_tx.saturating_sub(1) / 4;
    if toa_floor == 0 {
        return Err(SanError::ThresholdUndefined {
            axis: "subcarriers",
            count: num_subcarriers,
        });
    }
    if aod_floor == 0 {
        return Err(SanError::ThresholdUndefined {
            axis: "antennas",
            count: num_tx,
        });
    }
    let toa_threshold = 1.0 / toa_floor as f64;
    let aod_threshold = 1.0 / aod_floor as f64;
    Ok(Resolvability {
        toa_threshold,
        aod_threshold,
        toa_resolvable: report.delta_min_toa >= toa_threshold,
        aod_resolvable: report.delta_min_aod >= aod_threshold,
    })
}

/// Σ |y|² over a grid of noiseless samples.
pub fn signal_energy(samples: &[Complex64]) -> f64 {
    samples.iter().map(|y| y.norm_sqr()).sum()
}

/// 10 log10(Σ|y|² / (count·σ²)) for noiseless samples y.
pub fn snr_db_of_samples(samples: &[Complex64], sigma2: f64) -> f64 {
    10.0 * (signal_energy(samples) / (samples.len() as f64 * sigma2)).log10()
}

/// Noise variance that puts `samples` at `target_db`.
pub fn sigma_for_snr_of_samples(target_db: f64, samples: &[Complex64]) -> Result<f64> {
    if !target_db.is_finite() {
        return Err(SanError::InvalidArgument(format!("target SNR {target_db} is not finite")));
    }
    let energy = signal_energy(samples);
    if !(energy > 0.0) {
        return Err(SanError::ZeroSignalEnergy);
    }
    Ok(energy / samples.len() as f64 / 10f64.powf(target_db / 10.0))
}

fn received(rows: &[ChannelVector], pilots: &PilotGrid) -> Vec<Complex64> {
    (0..pilots.num_symbols)
        .flat_map(|g| (0..pilots.num_subcarriers).map(move |n| (g, n)))
        .map(|(g, n)| rows[n].apply(pilots.at(g, n)))
        .collect()
}

/// SNR = 10 log10(Σ_g Σ_n |h^(n) s̃^(g,n)|² / (N G σ²)).
pub fn snr_db(rows: &[ChannelVector], effective_pilots: &PilotGrid, sigma2: f64) -> f64 {
    snr_db_of_samples(&received(rows, effective_pilots), sigma2)
}

pub fn sigma_for_snr(target_db: f64, rows: &[ChannelVector], effective_pilots: &PilotGrid) -> Result<f64> {
    sigma_for_snr_of_samples(target_db, &received(rows, effective_pilots))
}

/// (RMSE_Bob − RMSE_Eve) / RMSE_Bob. Non-positive means the eavesdropper does
/// no better than the legitimate receiver.
pub fn lpl(rmse_bob: f64, rmse_eve: f64) -> Result<f64> {
    if !(rmse_bob > 0.0) {
        return Err(SanError::UndefinedLpl(rmse_bob));
    }
    Ok((rmse_bob - rmse_eve) / rmse_bob)
}
