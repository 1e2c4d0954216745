//! Average fidelity against initial squeezing when the receiver arm leaks.
//!
//! `cargo run --example receiver_loss_sweep`

use cvteleport::channel::{channel_moments, ChannelParams};
use cvteleport::optimize::optimal_squeezing;
use cvteleport::teleport::analytic_average_fidelity;

fn main() -> cvteleport::Result<()> {
    let losses = [0.0, 0.01, 0.05];
    println!("{:>6} {:>10} {:>10} {:>10}", "s", "R_b=0", "R_b=0.01", "R_b=0.05");
    for i in 0..=20 {
        let s = 0.25 * i as f64;
        let f: Vec<f64> = losses
            .iter()
            .map(|&r_b| analytic_average_fidelity(&channel_moments(&ChannelParams::new(s, 0.0, r_b, 0.0, 0.0)?)))
            .collect::<cvteleport::Result<_>>()?;
        println!("{s:>6.2} {:>10.6} {:>10.6} {:>10.6}", f[0], f[1], f[2]);
    }

    for r_b in [0.01, 0.05] {
        let best = optimal_squeezing(1.0, 1.0 - r_b, 0.0, 0.0)?;
        println!(
            "R_b = {r_b}: best squeezing s* = {:.6}, F = {:.6}",
            best.argument.finite().unwrap_or(f64::INFINITY),
            best.value
        );
    }
    Ok(())
}
