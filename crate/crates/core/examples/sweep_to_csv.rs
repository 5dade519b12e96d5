//! Runs a reduced sweep, writes `results.csv` and `manifest.txt`, and prints
//! the seed-median summaries. Pass an output directory as the first argument
//! (default: `target/sweep_example`).

use sanloc::experiment::results::{lpl_spread, privacy_gap_db};
use sanloc::experiment::{run_sweep, ExperimentConfig};
use sanloc::Mode;

fn main() -> sanloc::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "target/sweep_example".into());
    let mut config = ExperimentConfig::default();
    config.sweep.seeds = (0..5).collect();
    let out = run_sweep(&config)?;
    let (csv, manifest) = out.write(dir.as_ref(), &config)?;
    println!("{} rows -> {}, {}", out.rows.len(), csv.display(), manifest.display());
    for mode in Mode::ALL {
        let gap = privacy_gap_db(&out.rows, mode);
        let lpl = lpl_spread(&out.rows, mode);
        for ((snr, g), (_, l)) in gap.iter().zip(&lpl) {
            println!(
                "{mode:<17} snr {snr:>5}: gap {:+.2} dB [{:+.2}, {:+.2}], lpl {:+.3}",
                g.median, g.q1, g.q3, l.median
            );
        }
    }
    Ok(())
}
