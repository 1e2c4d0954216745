//! Best initial squeezing for an asymmetric channel, closed form against a
//! golden-section search, at several environment temperatures.
//!
//! `cargo run --example optimal_squeezing`

use cvteleport::optimize::{optimal_squeezing, optimal_squeezing_numeric, SQUEEZING_SEARCH_MAX};

fn main() -> cvteleport::Result<()> {
    for (t_a, t_b) in [(1.0, 0.99), (1.0, 0.95), (0.9, 0.7), (0.8, 0.8)] {
        for n in [0.0, 1.0, 5.0] {
            let closed = optimal_squeezing(t_a, t_b, n, n)?;
            let line = match closed.argument.finite() {
                Some(s) => {
                    let numeric = optimal_squeezing_numeric(t_a, t_b, n, n, SQUEEZING_SEARCH_MAX)?;
                    format!(
                        "s* = {s:.6} (numeric {:.6}), F = {:.6}",
                        numeric.argument.finite().unwrap_or(f64::NAN),
                        closed.value
                    )
                }
                None => format!("unbounded, sup F = {:.6}", closed.value),
            };
            println!("T_a={t_a} T_b={t_b} n_bar={n}: {line}");
        }
    }
    Ok(())
}
