//! Inefficient homodyne detection at the sender and the gain that compensates it.
//!
//! `cargo run --example lossy_sender`

use cvteleport::channel::{channel_moments, ChannelParams};
use cvteleport::gaussian::PhasePoint;
use cvteleport::optimize::optimal_gain;
use cvteleport::teleport::{fidelity_for_gain, lossy_sender_fidelity, ProtocolConfig};

fn main() -> cvteleport::Result<()> {
    for eta in [1.0, 0.9, 0.8] {
        for s in [0.5, 1.0, 2.0] {
            let best = optimal_gain(s, eta)?;
            println!(
                "eta={eta} s={s}: gain* = {:.6} (1/sqrt(eta) = {:.6}), F = {:.6} (closed form {:.6})",
                best.argument.finite().unwrap_or(f64::NAN),
                1.0 / eta.sqrt(),
                best.value,
                lossy_sender_fidelity(s, eta)?
            );
        }
    }

    // unit gain is no longer right: the output amplitude shrinks by sqrt(eta)
    let m = channel_moments(&ChannelParams::pure(1.0));
    let eta = 0.8;
    for amp in [0.0, 1.0, 3.0] {
        let alpha = PhasePoint::new(amp, 0.0);
        let unit = ProtocolConfig { sender_transmittance: eta, ..ProtocolConfig::default() };
        let matched = ProtocolConfig::lossy_sender(eta);
        println!(
            "|alpha|={amp}: gain 1 -> {:.6}, gain 1/sqrt(eta) -> {:.6}",
            fidelity_for_gain(&m, alpha, &unit)?,
            fidelity_for_gain(&m, alpha, &matched)?
        );
    }
    Ok(())
}
