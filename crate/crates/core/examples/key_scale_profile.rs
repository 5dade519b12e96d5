//! Privacy gap and leakage as the SAN key is scaled up or down.

use sanloc::experiment::results::{lpl_spread, privacy_gap_db};
use sanloc::experiment::{fig2d_sweep, ExperimentConfig};
use sanloc::Mode;

fn main() -> sanloc::Result<()> {
    let mut config = ExperimentConfig::default();
    config.sweep.snr_db = vec![0.0];
    config.sweep.modes = vec![Mode::San];
    for scale in [0.01, 0.1, 0.2, 0.5, 1.0, 2.0, 10.0, 100.0] {
        let out = fig2d_sweep(&config, scale)?;
        let gap = privacy_gap_db(&out.rows, Mode::San)[0].1;
        let lpl = lpl_spread(&out.rows, Mode::San)[0].1;
        println!(
            "scale {scale:>6}: delta_tau {:+.5} us, gap {:6.2} dB [{:.2}, {:.2}], lpl {:+.3}",
            config.key().scaled(scale).delta_tau_us,
            gap.median,
            gap.q1,
            gap.q3,
            lpl.median
        );
    }
    Ok(())
}
