//! EPR-type variances of the decohered channel as squeezing grows.
//!
//! `cargo run --example epr_variances`

use cvteleport::channel::{epr_scaled_variances, ChannelParams};

fn main() -> cvteleport::Result<()> {
    for (r_b, label) in [(0.0, "pure"), (0.01, "R_b = 0.01")] {
        println!("{label}");
        for s in [0.5, 1.0, 2.0, 4.0, 6.0] {
            let v = epr_scaled_variances(&ChannelParams::new(s, 0.0, r_b, 0.0, 0.0)?)?;
            println!(
                "  s = {s}: Var(t_b q_a + t_a q_b) = {:.3e}, Var(t_b p_a - t_a p_b) = {:.3e}, anti-squeezed {:.3e}",
                v.q_sum, v.p_diff, v.q_diff
            );
        }
    }
    Ok(())
}
