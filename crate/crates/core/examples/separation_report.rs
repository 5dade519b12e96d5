//! Exact post-SAN minimal separation against the small-key closed forms, and
//! the resolvability verdicts, for growing keys.

use sanloc::geometry::{channel_params, Receiver, Scenario};
use sanloc::metrics::post_san_separation;
use sanloc::signaling::SanKey;

fn main() -> sanloc::Result<()> {
    let s = Scenario::default();
    let paths = channel_params(&s, Receiver::Eve, 0)?;
    for scale in [0.01, 0.1, 1.0, 10.0] {
        let key = SanKey::default().scaled(scale);
        let r = post_san_separation(&paths, &key, &s)?;
        println!(
            "scale {scale:>5}: toa {:.5} (closed form {:.5}), aod {:.3e} (closed form {:.3e}), closed form applies: {}",
            r.delta_min_toa, r.closed_form_toa, r.delta_min_aod, r.closed_form_aod, r.closed_form_applies
        );
        if let Some(v) = r.resolvability {
            println!(
                "             thresholds toa {:.3} aod {:.3}; resolvable toa {} aod {}",
                v.toa_threshold, v.aod_threshold, v.toa_resolvable, v.aod_resolvable
            );
        }
    }
    Ok(())
}
