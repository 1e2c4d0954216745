//! Wigner function, characteristic function and overlaps of simple states.
//!
//! `cargo run --example phase_space`

use cvteleport::gaussian::{
    characteristic_function, coherent_state, gaussian_overlap_fidelity, thermal_state,
    vacuum_state, wigner, PhasePoint,
};

fn main() -> cvteleport::Result<()> {
    let vac = vacuum_state(1)?;
    let coh = coherent_state(PhasePoint::new(1.0, 0.0));
    let hot = thermal_state(1.0)?;

    for (name, st) in [("vacuum", &vac), ("coherent(1)", &coh), ("thermal(1)", &hot)] {
        let w0 = wigner(st, &[PhasePoint::ORIGIN])?;
        let c = characteristic_function(st, &[PhasePoint::new(0.5, 0.0)])?;
        println!(
            "{name:>12}: W(0) = {w0:.5}, C(0.5) = {:.5}{:+.5}i, purity {:.4}",
            c.re,
            c.im,
            st.purity()
        );
    }
    println!("overlap vacuum/coherent(1) = {:.6}", gaussian_overlap_fidelity(&vac, &coh)?);
    println!("overlap vacuum/thermal(1)  = {:.6}", gaussian_overlap_fidelity(&vac, &hot)?);
    Ok(())
}
