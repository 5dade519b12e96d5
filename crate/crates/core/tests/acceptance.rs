//! Acceptance criteria for the reference scenario. Each criterion prints one
//! `[PASS]`/`[FAIL]` line with the measured values; the process exits non-zero
//! if any criterion fails. Thresholds are fixed here and not tuned.

use std::time::{Duration, Instant};

use sanloc::experiment::results::{median_ratio_by_snr, privacy_gap_db, series_spread, Metric, Spread};
use sanloc::experiment::{fig2d_sweep, run_sweep, ExperimentConfig, ResultRow};
use sanloc::validation;
use sanloc::{Mode, Receiver};

const GAP_BAND_DB: (f64, f64) = (7.0, 11.0);
const CHANNEL_GAP_MIN_DB: f64 = 9.0;
const MID_SNR_DB: [f64; 3] = [0.0, 5.0, 10.0];
const BOB_PENALTY_MAX_DB: f64 = 0.1;
const LPL_BAND: (f64, f64) = (-1.6, -0.9);
const RUNTIME_LIMIT: Duration = Duration::from_secs(120);
const FIG2D_SCALE: f64 = 100.0;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn fmt_series(v: &[(f64, Spread)]) -> String {
    v.iter()
        .map(|(snr, s)| format!("{snr}:{:.3}", s.median))
        .collect::<Vec<_>>()
        .join(" ")
}

fn privacy_gap(rows: &[ResultRow], elapsed: Duration) -> Outcome {
    let gap = privacy_gap_db(rows, Mode::San);
    let in_band = gap.iter().all(|(_, s)| s.median >= GAP_BAND_DB.0 && s.median <= GAP_BAND_DB.1);
    let fast = elapsed < RUNTIME_LIMIT;
    Outcome {
        name: "privacy_gap_7_to_11_db",
        passed: in_band && fast && gap.len() == 7,
        detail: format!(
            "median eve/bob peb gap dB per snr [{}], band [{}, {}], runtime {:.2}s",
            fmt_series(&gap),
            GAP_BAND_DB.0,
            GAP_BAND_DB.1,
            elapsed.as_secs_f64()
        ),
    }
}

fn channel_degradation(rows: &[ResultRow]) -> Outcome {
    let mid = |v: Vec<(f64, Spread)>| -> Vec<(f64, Spread)> {
        v.into_iter().filter(|(snr, _)| MID_SNR_DB.contains(snr)).collect()
    };
    let eve = (Receiver::Eve, Mode::San);
    let bob = (Receiver::Bob, Mode::San);
    let toa = mid(median_ratio_by_snr(rows, eve, bob, Metric::ToaLos));
    let aod = mid(median_ratio_by_snr(rows, eve, bob, Metric::AodLos));
    let passed = toa.len() == 3
        && aod.len() == 3
        && toa.iter().chain(&aod).all(|(_, s)| s.median > CHANNEL_GAP_MIN_DB);
    Outcome {
        name: "channel_domain_degradation_over_9_db",
        passed,
        detail: format!(
            "median LOS toa gap dB [{}], aod gap dB [{}], need > {CHANNEL_GAP_MIN_DB}",
            fmt_series(&toa),
            fmt_series(&aod)
        ),
    }
}

fn bob_penalty(rows: &[ResultRow]) -> Outcome {
    let pairs = sanloc::experiment::results::paired_ratio_db(
        rows,
        (Receiver::Bob, Mode::San),
        (Receiver::Bob, Mode::Clean),
        Metric::Peb,
    );
    let worst = pairs.iter().map(|p| p.db.abs()).fold(0.0, f64::max);
    let violations = pairs.iter().filter(|p| p.db.abs() >= BOB_PENALTY_MAX_DB).count();
    let med = median_ratio_by_snr(rows, (Receiver::Bob, Mode::San), (Receiver::Bob, Mode::Clean), Metric::Peb);
    Outcome {
        name: "bob_penalty_below_0_1_db",
        passed: !pairs.is_empty() && violations == 0,
        detail: format!(
            "max |bob san/clean peb| {worst:.3} dB, {violations}/{} cells >= {BOB_PENALTY_MAX_DB} dB, medians [{}]",
            pairs.len(),
            fmt_series(&med)
        ),
    }
}

fn lpl_san(rows: &[ResultRow]) -> Outcome {
    let lpl = sanloc::experiment::results::lpl_spread(rows, Mode::San);
    let passed = lpl.len() == 7 && lpl.iter().all(|(_, s)| s.median >= LPL_BAND.0 && s.median <= LPL_BAND.1);
    Outcome {
        name: "lpl_san_median_in_band",
        passed,
        detail: format!("median san lpl [{}], band [{}, {}]", fmt_series(&lpl), LPL_BAND.0, LPL_BAND.1),
    }
}

fn lpl_clean(rows: &[ResultRow]) -> Outcome {
    let clean: Vec<Option<f64>> = rows.iter().filter(|r| r.mode == Mode::Clean).map(|r| r.lpl).collect();
    let exact = clean.iter().filter(|v| **v == Some(0.0)).count();
    Outcome {
        name: "lpl_clean_exactly_zero",
        passed: !clean.is_empty() && exact == clean.len(),
        detail: format!("{exact}/{} clean rows with lpl == 0", clean.len()),
    }
}

fn crossover(rows: &[ResultRow]) -> Outcome {
    let san = series_spread(rows, Receiver::Eve, Mode::San, Metric::Peb);
    let gauss = series_spread(rows, Receiver::Eve, Mode::GaussianBaseline, Metric::Peb);
    let at = |v: &[(f64, Spread)], snr: f64| v.iter().find(|(s, _)| *s == snr).map(|(_, x)| x.median);
    let (lo, hi) = (-10.0, 20.0);
    let (san_lo, g_lo, san_hi, g_hi) = (at(&san, lo), at(&gauss, lo), at(&san, hi), at(&gauss, hi));
    let passed = matches!((san_lo, g_lo, san_hi, g_hi), (Some(a), Some(b), Some(c), Some(d)) if a > b && c < d);
    Outcome {
        name: "gaussian_baseline_crossover",
        passed,
        detail: format!(
            "eve median peb m at {lo} dB: san {:.4e} vs gaussian {:.4e}; at {hi} dB: san {:.4e} vs gaussian {:.4e}",
            san_lo.unwrap_or(f64::NAN),
            g_lo.unwrap_or(f64::NAN),
            san_hi.unwrap_or(f64::NAN),
            g_hi.unwrap_or(f64::NAN)
        ),
    }
}

fn fig2d(config: &ExperimentConfig, base: &[ResultRow]) -> Outcome {
    let scaled = match fig2d_sweep(config, FIG2D_SCALE) {
        Ok(out) => out.rows,
        Err(e) => {
            return Outcome {
                name: "fig2d_larger_key_smaller_gap",
                passed: false,
                detail: format!("scaled sweep failed: {e}"),
            }
        }
    };
    let g1 = privacy_gap_db(base, Mode::San);
    let g100 = privacy_gap_db(&scaled, Mode::San);
    let passed = g1.len() == g100.len()
        && !g1.is_empty()
        && g1.iter().zip(&g100).all(|((a, x), (b, y))| a == b && y.median < x.median);
    Outcome {
        name: "fig2d_larger_key_smaller_gap",
        passed,
        detail: format!(
            "median gap dB scale 1 [{}], scale {FIG2D_SCALE} [{}]",
            fmt_series(&g1),
            fmt_series(&g100)
        ),
    }
}

fn oracle_suite() -> Outcome {
    match validation::validate() {
        Ok(report) => {
            for c in &report.checks {
                println!("    {c}");
            }
            Outcome {
                name: "oracle_suite",
                passed: report.passed(),
                detail: format!(
                    "{}/{} checks passed",
                    report.checks.iter().filter(|c| c.passed).count(),
                    report.checks.len()
                ),
            }
        }
        Err(e) => Outcome {
            name: "oracle_suite",
            passed: false,
            detail: format!("suite aborted: {e}"),
        },
    }
}

fn main() {
    let config = ExperimentConfig::default();
    let start = Instant::now();
    let rows = run_sweep(&config).expect("reference sweep").rows;
    let elapsed = start.elapsed();

    let outcomes = [
        privacy_gap(&rows, elapsed),
        channel_degradation(&rows),
        bob_penalty(&rows),
        lpl_san(&rows),
        lpl_clean(&rows),
        crossover(&rows),
        fig2d(&config, &rows),
        oracle_suite(),
    ];
    println!();
    for o in &outcomes {
        println!("ACCEPTANCE [{}] {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("\nacceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
