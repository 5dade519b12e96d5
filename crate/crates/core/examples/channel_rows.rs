//! True and fake channel rows per subcarrier, and what the SAN key does to
//! the eavesdropper's effective channel.

use sanloc::channel::{channel_rows, fake_channel_rows};
use sanloc::geometry::{channel_params, Receiver, Scenario};
use sanloc::signaling::{fake_path_params, SanKey};

fn main() -> sanloc::Result<()> {
    let s = Scenario::default();
    let key = SanKey::default();
    let paths = channel_params(&s, Receiver::Eve, 0)?;
    let fake = fake_path_params(&paths, &key)?;
    let (grid, array) = (s.ofdm(), s.array());
    let h = channel_rows(&paths, &grid, &array);
    let ht = fake_channel_rows(&fake, &grid, &array);
    println!("n   |h|        |h_fake|   |h + h_fake|");
    for n in 0..s.num_subcarriers {
        println!("{n:<3} {:.3e}  {:.3e}  {:.3e}", h[n].norm(), ht[n].norm(), h[n].add(&ht[n]).norm());
    }
    for (k, f) in fake.paths.iter().enumerate() {
        println!("fake path {k}: tau {:+.5} us, sin(theta) {:+.6}", f.toa_us, f.sin_aod);
    }
    Ok(())
}
