//! Seeded SNR sweeps over modes and receivers.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::results::{
    lpl_spread, privacy_gap_db, series_spread, write_csv, Metric, PathValues, ResultRow, SCHEMA_VERSION,
};
use crate::error::{Result, SanError};
use crate::fisher::{LocalizationModel, SignalModel, UnitBounds};
use crate::geometry::{channel_params, path_gains, PathParams, Receiver, Scenario};
use crate::metrics::{lpl, path_separation, post_san_separation, sigma_for_snr_of_samples, snr_db_of_samples};
use crate::signaling::{baseline_variance, generate_pilots, noiseless_received, resolve_fake_aod_sign, Mode, SanKey};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Rows in grid order plus the run manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<ResultRow>,
    pub manifest: String,
}

impl SweepOutput {
    /// Writes `results.csv` and `manifest.txt` (names from the config) into
    /// `dir`, creating it if needed. Returns the two paths.
    pub fn write(&self, dir: &Path, config: &ExperimentConfig) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(&config.output.results_file);
        let manifest_path = dir.join(&config.output.manifest_file);
        write_csv(&self.rows, BufWriter::new(File::create(&csv_path)?))?;
        std::fs::write(&manifest_path, &self.manifest)?;
        Ok((csv_path, manifest_path))
    }
}

/// Runs the sweep on the global rayon pool.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutput> {
    config.validate()?;
    let scenario = config.scenario();
    let key = config.key();
    let per_seed: Vec<Vec<ResultRow>> = config
        .sweep
        .seeds
        .par_iter()
        .map(|&seed| seed_rows(config, &scenario, &key, seed))
        .collect::<Result<_>>()?;
    let mut rows: Vec<ResultRow> = per_seed.into_iter().flatten().collect();
    pair_lpl(&mut rows);
    sort_grid(&mut rows, config);
    let manifest = manifest(config, &scenario, &rows)?;
    Ok(SweepOutput { rows, manifest })
}

/// Runs the sweep on a dedicated pool of `threads` workers. Output does not
/// depend on the thread count.
pub fn run_sweep_with_threads(config: &ExperimentConfig, threads: usize) -> Result<SweepOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SanError::InvalidArgument(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_sweep(config))
}

/// `run_sweep` with both key entries multiplied by `scale`.
pub fn fig2d_sweep(config: &ExperimentConfig, scale: f64) -> Result<SweepOutput> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(SanError::Config(format!("--scale: must be finite and positive, got {scale}")));
    }
    let mut scaled = config.clone();
    scaled.sweep.key_scale *= scale;
    run_sweep(&scaled)
}

struct ReceiverSetup {
    receiver: Receiver,
    gains: Vec<num_complex::Complex64>,
    paths: Vec<PathParams>,
}

fn seed_rows(config: &ExperimentConfig, scenario: &Scenario, key: &SanKey, seed: u64) -> Result<Vec<ResultRow>> {
    let pilots = generate_pilots(scenario.num_symbols, scenario.num_subcarriers, scenario.num_tx, seed)?;
    let bob_paths = channel_params(scenario, Receiver::Bob, seed)?;
    let setups: Vec<ReceiverSetup> = config
        .sweep
        .receivers
        .iter()
        .map(|&receiver| {
            Ok(ReceiverSetup {
                receiver,
                gains: path_gains(scenario, receiver, seed)?,
                paths: channel_params(scenario, receiver, seed)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for &mode in &config.sweep.modes {
        // SNR is referenced to the legitimate link's noiseless signal under this mode
        let reference = noiseless_received(scenario, &bob_paths, &pilots, mode, Some(key), Receiver::Bob)?;
        for setup in &setups {
            let model = SignalModel::for_mode(mode, setup.receiver, key);
            let loc = LocalizationModel::new(scenario, setup.receiver, &pilots, model);
            let unit = UnitBounds::evaluate(&loc, &loc.truth(&setup.gains, key))?;
            let (dm_toa, dm_aod) = separation(scenario, &setup.paths, key, mode, setup.receiver)?;
            let artificial = if mode == Mode::GaussianBaseline && setup.receiver == Receiver::Eve {
                baseline_variance(scenario, &setup.paths, &pilots, key)?
            } else {
                0.0
            };
            for &snr_db in &config.sweep.snr_db {
                let sigma2 = sigma_for_snr_of_samples(snr_db, &reference)?;
                let noise_variance = sigma2 + artificial;
                let ch = unit.channel_at(noise_variance);
                let c = scenario.lightspeed_m_per_us;
                rows.push(ResultRow {
                    schema_version: SCHEMA_VERSION,
                    receiver: setup.receiver,
                    mode,
                    snr_db,
                    seed,
                    sigma2,
                    noise_variance,
                    peb_m: unit.peb_at(noise_variance),
                    toa_bound_los_m: ch.toa_us[0] * c,
                    aod_bound_los_rad: ch.aod_rad[0],
                    toa_bounds_m: PathValues(ch.toa_us.iter().map(|t| t * c).collect()),
                    aod_bounds_rad: PathValues(ch.aod_rad.clone()),
                    lpl: None,
                    singular_fim: unit.singular(),
                    delta_min_toa: dm_toa,
                    delta_min_aod: dm_aod,
                    snr_roundtrip_db: (snr_db_of_samples(&reference, sigma2) - snr_db).abs(),
                });
            }
        }
    }
    Ok(rows)
}

fn separation(
    scenario: &Scenario,
    paths: &[PathParams],
    key: &SanKey,
    mode: Mode,
    receiver: Receiver,
) -> Result<(Option<f64>, Option<f64>)> {
    if mode == Mode::San && receiver == Receiver::Eve {
        let r = post_san_separation(paths, key, scenario)?;
        return Ok((Some(r.delta_min_toa), Some(r.delta_min_aod)));
    }
    if paths.len() < 2 {
        return Ok((None, None));
    }
    let (t, a) = path_separation(paths, scenario)?;
    Ok((Some(t), Some(a)))
}

fn pair_lpl(rows: &mut [ResultRow]) {
    let values: Vec<Option<f64>> = rows
        .iter()
        .map(|r| {
            let partner = |want: Receiver| {
                rows.iter()
                    .find(|o| o.receiver == want && o.mode == r.mode && o.snr_db == r.snr_db && o.seed == r.seed)
            };
            let bob = partner(Receiver::Bob)?;
            let eve = partner(Receiver::Eve)?;
            lpl(bob.peb_m, eve.peb_m).ok()
        })
        .collect();
    for (r, v) in rows.iter_mut().zip(values) {
        r.lpl = v;
    }
}

/// Orders rows by (mode, receiver, SNR, seed) in config order.
fn sort_grid(rows: &mut [ResultRow], config: &ExperimentConfig) {
    let s = &config.sweep;
    let index = |r: &ResultRow| {
        (
            s.modes.iter().position(|m| *m == r.mode),
            s.receivers.iter().position(|x| *x == r.receiver),
            s.snr_db.iter().position(|x| *x == r.snr_db),
            s.seeds.iter().position(|x| *x == r.seed),
        )
    };
    rows.sort_by_key(index);
}

fn manifest(config: &ExperimentConfig, scenario: &Scenario, rows: &[ResultRow]) -> Result<String> {
    let key = config.key();
    let (sign, residuals) = resolve_fake_aod_sign(scenario, config.sweep.seeds[0])?;
    let join = |v: Vec<String>| v.join(",");
    let mut m = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(m, "{k} = {v}");
    };
    line("schema_version", SCHEMA_VERSION.to_string());
    line("tool_version", TOOL_VERSION.into());
    line("config_sha256", config.hash());
    line("fake_aod_sign", format!("{sign:+}"));
    line(
        "fake_aod_sign_residuals",
        format!("plus={:.3e} minus={:.3e}", residuals[0], residuals[1]),
    );
    line("key_delta_tau_us", format!("{:e}", key.delta_tau_us));
    line("key_delta_theta_rad", format!("{:e}", key.delta_theta_rad));
    line("key_scale", format!("{}", config.sweep.key_scale));
    line("snr_db", join(config.sweep.snr_db.iter().map(|v| v.to_string()).collect()));
    line("seeds", join(config.sweep.seeds.iter().map(|v| v.to_string()).collect()));
    line("modes", join(config.sweep.modes.iter().map(|v| v.to_string()).collect()));
    line("receivers", join(config.sweep.receivers.iter().map(|v| v.to_string()).collect()));
    line("rows", rows.len().to_string());
    line("singular_rows", rows.iter().filter(|r| r.singular_fim).count().to_string());
    line(
        "gain_model",
        "free-space |gamma_k| = lambda/(4 pi L_k), uniform phase per (seed, path), identical for both receivers".into(),
    );
    line(
        "snr_reference",
        "noiseless legitimate-link signal of the row's mode; eve's gaussian-baseline bound adds the artificial-noise variance".into(),
    );
    line("rmse_proxy", "crlb".into());

    let _ = writeln!(m, "\n# seed medians [q1, q3]");
    for &mode in &config.sweep.modes {
        for &receiver in &config.sweep.receivers {
            for (snr, s) in series_spread(rows, receiver, mode, Metric::Peb) {
                let _ = writeln!(
                    m,
                    "peb_m {mode} {receiver} snr={snr} median={:.6e} iqr=[{:.6e}, {:.6e}]",
                    s.median, s.q1, s.q3
                );
            }
        }
    }
    for &mode in &config.sweep.modes {
        for (snr, s) in privacy_gap_db(rows, mode) {
            let _ = writeln!(
                m,
                "gap_db {mode} snr={snr} median={:.4} iqr=[{:.4}, {:.4}]",
                s.median, s.q1, s.q3
            );
        }
        for (snr, s) in lpl_spread(rows, mode) {
            let _ = writeln!(
                m,
                "lpl {mode} snr={snr} median={:.4} iqr=[{:.4}, {:.4}]",
                s.median, s.q1, s.q3
            );
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        c.sweep.seeds = vec![4, 1];
        c.sweep.snr_db = vec![0.0, 10.0];
        c
    }

    #[test]
    fn single_cell() {
        let mut c = small();
        c.sweep.seeds = vec![0];
        c.sweep.snr_db = vec![5.0];
        c.sweep.modes = vec![Mode::Clean];
        c.sweep.receivers = vec![Receiver::Bob];
        let out = run_sweep(&c).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.rows[0].lpl, None);
        assert!(out.rows[0].peb_m > 0.0);
    }

    #[test]
    fn grid_order_and_count() {
        let c = small();
        let out = run_sweep(&c).unwrap();
        assert_eq!(out.rows.len(), 3 * 2 * 2 * 2);
        assert_eq!(out.rows[0].mode, Mode::Clean);
        assert_eq!(out.rows[0].seed, 4);
        assert_eq!(out.rows[1].seed, 1);
        assert_eq!(out.rows.last().unwrap().mode, Mode::GaussianBaseline);
    }

    #[test]
    fn clean_lpl_is_zero_for_colocated_receivers() {
        let out = run_sweep(&small()).unwrap();
        for r in out.rows.iter().filter(|r| r.mode == Mode::Clean) {
            assert_eq!(r.lpl, Some(0.0));
        }
    }

    #[test]
    fn noise_scales_bounds() {
        let out = run_sweep(&small()).unwrap();
        let at = |snr: f64| out.rows.iter().find(|r| r.snr_db == snr && r.receiver == Receiver::Bob).unwrap();
        // 10 dB more SNR shrinks every bound by sqrt(10)
        let ratio = at(0.0).peb_m / at(10.0).peb_m;
        assert!((ratio - 10f64.sqrt()).abs() < 1e-9, "{ratio}");
    }

    #[test]
    fn gaussian_baseline_adds_variance_for_eve_only() {
        let out = run_sweep(&small()).unwrap();
        for r in out.rows.iter().filter(|r| r.mode == Mode::GaussianBaseline) {
            match r.receiver {
                Receiver::Bob => assert_eq!(r.noise_variance, r.sigma2),
                Receiver::Eve => assert!(r.noise_variance > r.sigma2),
            }
        }
    }

    #[test]
    fn fig2d_rejects_bad_scale() {
        assert!(matches!(fig2d_sweep(&small(), 0.0), Err(SanError::Config(_))));
        assert!(matches!(fig2d_sweep(&small(), f64::NAN), Err(SanError::Config(_))));
    }

    #[test]
    fn manifest_is_deterministic_and_records_sign() {
        let a = run_sweep(&small()).unwrap();
        let b = run_sweep(&small()).unwrap();
        assert_eq!(a.manifest, b.manifest);
        assert!(a.manifest.contains("fake_aod_sign = -1"));
        assert!(a.manifest.contains(&small().hash()));
    }
}
