//! Measuring one half of a two-mode squeezed vacuum steers the other half.
//!
//! `cargo run --example homodyne`

use cvteleport::gaussian::{homodyne_condition, homodyne_sample, two_mode_squeezed_vacuum};
use cvteleport::teleport::sample_rng;

fn main() -> cvteleport::Result<()> {
    let st = two_mode_squeezed_vacuum(1.0)?;
    for x in [-1.0, 0.0, 1.0] {
        let (cond, density) = homodyne_condition(&st, 0, 0.0, x)?;
        let m = cond.mode_mean(0);
        println!(
            "q_a = {x:+}: density {density:.4}, remaining mode mean ({:+.4}, {:+.4}), Var(q_b) = {:.4}",
            m.q,
            m.p,
            cond.cov()[(0, 0)]
        );
    }

    let mut rng = sample_rng(3, 0);
    for _ in 0..3 {
        let shot = homodyne_sample(&st, 1, std::f64::consts::FRAC_PI_2, &mut rng)?;
        println!("sampled p_b = {:+.4} -> p_a mean {:+.4}", shot.outcome, shot.state.mode_mean(0).p);
    }
    Ok(())
}
