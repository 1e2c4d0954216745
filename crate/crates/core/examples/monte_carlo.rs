//! Full measure-and-displace simulation against the analytic average fidelity.
//!
//! `cargo run --release --example monte_carlo`

use cvteleport::channel::{channel_moments, channel_state, ChannelParams};
use cvteleport::gaussian::{gaussian_overlap_fidelity, coherent_state, PhasePoint};
use cvteleport::teleport::{
    analytic_average_fidelity, mc_fidelity, sample_rng, teleport_coherent_once, ProtocolConfig,
};

fn main() -> cvteleport::Result<()> {
    let alpha = PhasePoint::new(1.0, -0.5);
    let cfg = ProtocolConfig::default();

    let pure = channel_state(&ChannelParams::pure(1.0))?;
    let mut rng = sample_rng(7, 0);
    for _ in 0..3 {
        let (g, out) = teleport_coherent_once(&pure, alpha, &cfg, &mut rng)?;
        println!(
            "g = ({:+.4}, {:+.4}), output mean = ({:+.4}, {:+.4}), F = {:.4}",
            g.q,
            g.p,
            out.mode_mean(0).q,
            out.mode_mean(0).p,
            gaussian_overlap_fidelity(&coherent_state(alpha), &out)?
        );
    }

    for p in [
        ChannelParams::pure(1.0),
        ChannelParams::new(3.0, 0.0, 0.05, 0.0, 0.0)?,
        ChannelParams::new(1.0, 0.1, 0.2, 1.0, 0.5)?,
    ] {
        let report = mc_fidelity(&channel_state(&p)?, alpha, &cfg, 200_000, 42)?;
        let eq = analytic_average_fidelity(&channel_moments(&p))?;
        println!(
            "{p:?}\n    analytic {eq:.6}, mc {:.6} +/- {:.6}",
            report.mc_estimate, report.mc_stderr
        );
    }
    Ok(())
}
