//! Per-path delays, departure angles and free-space gains for the reference
//! scenario.

use sanloc::geometry::{channel_params, Receiver, Scenario};

fn main() -> sanloc::Result<()> {
    let s = Scenario::default();
    s.validate()?;
    println!(
        "lambda {:.4} m, spacing {:.4} m, symbol duration {:.4} us",
        s.wavelength_m(),
        s.antenna_spacing_m,
        s.ofdm().symbol_duration_us()
    );
    for receiver in [Receiver::Bob, Receiver::Eve] {
        println!("{receiver}:");
        for (k, p) in channel_params(&s, receiver, 0)?.iter().enumerate() {
            println!(
                "  path {k} ({:?}): tau {:.5} us ({:.3} m), theta {:+.4} rad, |gamma| {:.3e}, arg {:+.3}",
                p.kind,
                p.toa_us,
                p.toa_us * s.lightspeed_m_per_us,
                p.aod_rad,
                p.gain.norm(),
                p.gain.arg()
            );
        }
    }
    Ok(())
}
