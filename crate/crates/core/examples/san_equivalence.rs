//! The SAN beamformer seen through the true channel equals the true channel
//! plus fake paths driven by the plain pilots; the wrong fake-angle sign
//! breaks the identity.

use sanloc::geometry::{channel_params, Receiver, Scenario};
use sanloc::signaling::{equivalence_error, generate_pilots, resolve_fake_aod_sign, SanKey, FAKE_AOD_SIGN};

fn main() -> sanloc::Result<()> {
    let s = Scenario::default();
    let pilots = generate_pilots(s.num_symbols, s.num_subcarriers, s.num_tx, 0)?;
    let paths = channel_params(&s, Receiver::Eve, 0)?;
    for key in [
        SanKey::default(),
        SanKey {
            delta_tau_us: 0.02,
            delta_theta_rad: 0.1,
        },
    ] {
        let ok = equivalence_error(&s, &paths, &pilots, &key, FAKE_AOD_SIGN)?;
        let flipped = equivalence_error(&s, &paths, &pilots, &key, -FAKE_AOD_SIGN)?;
        println!("key {key:?}: max error {ok:.2e} (sign {FAKE_AOD_SIGN:+}), {flipped:.2e} (opposite sign)");
    }
    let (sign, residuals) = resolve_fake_aod_sign(&s, 0)?;
    println!("resolved sign {sign:+}, residuals +1: {:.2e}, -1: {:.2e}", residuals[0], residuals[1]);
    Ok(())
}
