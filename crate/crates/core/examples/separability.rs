//! Where thermal decoherence on the sender arm destroys entanglement.
//!
//! `cargo run --example separability`

use cvteleport::channel::{
    bisect_separability_threshold, channel_moments, is_separable, separability_threshold,
    ChannelParams,
};

fn main() -> cvteleport::Result<()> {
    println!("vacuum receiver environment: threshold R_a* against n_bar_a");
    for n_a in [0.0, 0.5, 1.0, 3.0, 10.0] {
        let row: Vec<String> = [0.1, 1.0, 3.0]
            .iter()
            .map(|&s| {
                let p = ChannelParams::new(s, 0.0, 0.3, n_a, 0.0)?;
                Ok(format!("{:.9}", separability_threshold(&p)?.unwrap_or(f64::NAN)))
            })
            .collect::<cvteleport::Result<_>>()?;
        println!("  n_bar_a = {n_a:>4}: s=0.1 {}  s=1 {}  s=3 {}", row[0], row[1], row[2]);
    }

    println!("hot receiver environment (n_bar_b = 1, R_b = 0.3): bisection only");
    for s in [0.5, 1.0, 2.0] {
        let p = ChannelParams::new(s, 0.0, 0.3, 1.0, 1.0)?;
        let th = bisect_separability_threshold(&p)?;
        println!("  s = {s}: R_a* = {th:?}");
    }

    let p = ChannelParams::new(1.0, 0.3, 0.1, 1.0, 0.0)?;
    let v = is_separable(&channel_moments(&p));
    println!("s=1, R_a=0.3, n_bar_a=1: margin {:.6}, separable {}", v.margin, v.separable);
    Ok(())
}
