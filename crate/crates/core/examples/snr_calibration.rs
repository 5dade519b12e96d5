//! Calibrating receiver noise to a target SNR and checking it against the
//! empirical SNR of synthesised observations.

use sanloc::geometry::{channel_params, Receiver, Scenario};
use sanloc::metrics::{sigma_for_snr_of_samples, signal_energy, snr_db_of_samples};
use sanloc::signaling::{generate_pilots, noiseless_received, synthesize_received, Mode, SanKey};

fn main() -> sanloc::Result<()> {
    let s = Scenario::default();
    let key = SanKey::default();
    let pilots = generate_pilots(s.num_symbols, s.num_subcarriers, s.num_tx, 3)?;
    let paths = channel_params(&s, Receiver::Bob, 3)?;
    for mode in [Mode::Clean, Mode::San] {
        let y0 = noiseless_received(&s, &paths, &pilots, mode, Some(&key), Receiver::Bob)?;
        for target in [-10.0, 0.0, 20.0] {
            let sigma2 = sigma_for_snr_of_samples(target, &y0)?;
            let obs = synthesize_received(&s, &paths, &pilots, mode, Some(&key), sigma2, 11, Receiver::Bob)?;
            let noise: Vec<_> = obs.samples.iter().zip(&y0).map(|(y, m)| y - m).collect();
            let empirical = 10.0 * (signal_energy(&y0) / signal_energy(&noise)).log10();
            println!(
                "{mode:<5} target {target:>5} dB: sigma2 {sigma2:.3e}, round trip {:.1e} dB, empirical {empirical:.2} dB",
                (snr_db_of_samples(&y0, sigma2) - target).abs()
            );
        }
    }
    Ok(())
}
