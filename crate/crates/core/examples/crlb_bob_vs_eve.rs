//! Position and LOS channel bounds for both receivers under each mode, one
//! seed, across an SNR grid.

use sanloc::fisher::{LocalizationModel, SignalModel, UnitBounds};
use sanloc::geometry::{channel_params, path_gains, Receiver, Scenario};
use sanloc::metrics::{lpl, sigma_for_snr_of_samples};
use sanloc::signaling::{baseline_variance, generate_pilots, noiseless_received, Mode, SanKey};

fn main() -> sanloc::Result<()> {
    let s = Scenario::default();
    let key = SanKey::default();
    let seed = 0;
    let pilots = generate_pilots(s.num_symbols, s.num_subcarriers, s.num_tx, seed)?;
    let bob_paths = channel_params(&s, Receiver::Bob, seed)?;
    let eve_paths = channel_params(&s, Receiver::Eve, seed)?;
    let varsigma2 = baseline_variance(&s, &eve_paths, &pilots, &key)?;
    for mode in Mode::ALL {
        let reference = noiseless_received(&s, &bob_paths, &pilots, mode, Some(&key), Receiver::Bob)?;
        let bound = |receiver| -> sanloc::Result<UnitBounds> {
            let model = LocalizationModel::new(&s, receiver, &pilots, SignalModel::for_mode(mode, receiver, &key));
            UnitBounds::evaluate(&model, &model.truth(&path_gains(&s, receiver, seed)?, &key))
        };
        let (bob, eve) = (bound(Receiver::Bob)?, bound(Receiver::Eve)?);
        println!("{mode}:");
        for snr in [-10.0, 0.0, 10.0, 20.0] {
            let sigma2 = sigma_for_snr_of_samples(snr, &reference)?;
            let eve_var = if mode == Mode::GaussianBaseline { sigma2 + varsigma2 } else { sigma2 };
            let (pb, pe) = (bob.peb_at(sigma2), eve.peb_at(eve_var));
            println!(
                "  snr {snr:>5}: peb bob {pb:.4e} m, eve {pe:.4e} m, gap {:+.2} dB, lpl {:+.3}, los toa eve {:.3e} m",
                20.0 * (pe / pb).log10(),
                lpl(pb, pe)?,
                eve.channel_at(eve_var).toa_us[0] * s.lightspeed_m_per_us
            );
        }
    }
    Ok(())
}
