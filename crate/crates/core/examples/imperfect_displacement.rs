//! Displacing with a beam splitter adds the same noise as extra receiver loss.
//!
//! `cargo run --release --example imperfect_displacement`

use cvteleport::channel::{channel_moments, channel_state, ChannelParams};
use cvteleport::gaussian::{
    apply_displacement, apply_loss, displacement_via_beam_splitter, thermal_state, PhasePoint,
};
use cvteleport::teleport::{analytic_average_fidelity, mc_fidelity, ProtocolConfig};

fn main() -> cvteleport::Result<()> {
    let st = thermal_state(0.5)?;
    let beta = PhasePoint::new(1.0, 2.0);
    for t in [0.5, 0.9, 0.99] {
        let via = displacement_via_beam_splitter(&st, 0, beta, t)?;
        let direct = apply_displacement(&apply_loss(&st, 0, 1.0 - t, 0.0)?, 0, beta)?;
        println!("T = {t}: max difference {:.1e}", via.max_abs_diff(&direct));
    }

    let cfg = ProtocolConfig { displacement_transmittance: 0.99, ..ProtocolConfig::default() };
    for s in [1.0, 2.0, 3.0] {
        let report = mc_fidelity(&channel_state(&ChannelParams::pure(s))?, PhasePoint::ORIGIN, &cfg, 100_000, 1)?;
        let folded = analytic_average_fidelity(&channel_moments(&ChannelParams::new(s, 0.0, 0.01, 0.0, 0.0)?))?;
        println!(
            "s = {s}: T_disp = 0.99 simulated {:.5} +/- {:.5}, R_b = 0.01 analytic {folded:.5}",
            report.mc_estimate, report.mc_stderr
        );
    }
    Ok(())
}
