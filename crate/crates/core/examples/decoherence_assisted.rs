//! Extra loss on the receiver arm can raise the fidelity when the sender arm
//! is already decohered.
//!
//! `cargo run --example decoherence_assisted`

use cvteleport::channel::{channel_moments, ChannelParams};
use cvteleport::optimize::optimal_receiver_transmittance;
use cvteleport::teleport::analytic_average_fidelity;

fn main() -> cvteleport::Result<()> {
    let (s, t_a) = (1.0, 0.5);
    for n_a in [0.0, 1.0] {
        let best = optimal_receiver_transmittance(s, t_a, n_a)?;
        let t_b = best.argument.finite().unwrap_or(1.0);
        println!("s={s}, T_a={t_a}, n_bar_a={n_a}: T_b* = {t_b:.6}, F = {:.6} ({:?})", best.value, best.method);
        for tb in [1.0, 0.95, t_b, 0.7] {
            let p = ChannelParams::new(s, 1.0 - t_a, 1.0 - tb, n_a, 0.0)?;
            println!("    T_b = {tb:.4}: F = {:.6}", analytic_average_fidelity(&channel_moments(&p))?);
        }
    }
    // weak squeezing pushes the ideal T_b above one; the optimum sits on T_b = 1
    let edge = optimal_receiver_transmittance(0.3, 0.9, 0.0)?;
    println!("s=0.3, T_a=0.9: {:?}", edge);
    Ok(())
}
