use nalgebra::DMatrix;

use super::{coherent_state, GaussianState, PhasePoint, VACUUM_VARIANCE};
use crate::error::{invalid, Result};

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

/// Mixes `mode_i` and `mode_j` on a beam splitter of transmittance `t`:
/// `x_i' = √t x_i + √(1-t) x_j`, `x_j' = -√(1-t) x_i + √t x_j`.
pub fn apply_beam_splitter(
    state: &GaussianState,
    mode_i: usize,
    mode_j: usize,
    t: f64,
) -> Result<GaussianState> {
    state.check_mode(mode_i)?;
    state.check_mode(mode_j)?;
    if mode_i == mode_j {
        return Err(invalid("beam splitter needs two distinct modes"));
    }
    check_unit_interval("transmittance", t)?;

    let dim = state.mean.len();
    let (c, s) = (t.sqrt(), (1.0 - t).sqrt());
    let mut sym = DMatrix::identity(dim, dim);
    for k in 0..2 {
        let (i, j) = (2 * mode_i + k, 2 * mode_j + k);
        sym[(i, i)] = c;
        sym[(i, j)] = s;
        sym[(j, i)] = -s;
        sym[(j, j)] = c;
    }
    let mean = &sym * &state.mean;
    let cov = &sym * &state.cov * sym.transpose();
    Ok(GaussianState::from_parts(mean, symmetrize(cov)))
}

pub fn apply_displacement(
    state: &GaussianState,
    mode: usize,
    beta: PhasePoint,
) -> Result<GaussianState> {
    state.check_mode(mode)?;
    let mut out = state.clone();
    out.mean[2 * mode] += beta.q;
    out.mean[2 * mode + 1] += beta.p;
    Ok(out)
}

/// Thermal loss on one mode: mixing with a thermal state of `n_bar` photons
/// for normalized interaction time `r` (equivalently a beam splitter of
/// transmittance `1 - r`).
pub fn apply_loss(state: &GaussianState, mode: usize, r: f64, n_bar: f64) -> Result<GaussianState> {
    state.check_mode(mode)?;
    check_unit_interval("R", r)?;
    if !(n_bar >= 0.0 && n_bar.is_finite()) {
        return Err(invalid(format!("n_bar = {n_bar} must be finite and >= 0")));
    }
    let keep = 1.0 - r;
    let amp = keep.sqrt();
    let env = r * (1.0 + 2.0 * n_bar) * VACUUM_VARIANCE;

    let mut out = state.clone();
    let (q, p) = (2 * mode, 2 * mode + 1);
    out.mean[q] *= amp;
    out.mean[p] *= amp;
    let dim = out.mean.len();
    for row in [q, p] {
        for col in 0..dim {
            if col != q && col != p {
                out.cov[(row, col)] *= amp;
                out.cov[(col, row)] *= amp;
            }
        }
    }
    for a in [q, p] {
        for b in [q, p] {
            out.cov[(a, b)] *= keep;
        }
        out.cov[(a, a)] += env;
    }
    Ok(out)
}

/// Displaces `mode` by `beta` the way an experiment does it: the mode is
/// mixed with a strong coherent field `β/√(1-t)` on a beam splitter of
/// transmittance `t` and the transmitted port is kept.
pub fn displacement_via_beam_splitter(
    state: &GaussianState,
    mode: usize,
    beta: PhasePoint,
    t: f64,
) -> Result<GaussianState> {
    state.check_mode(mode)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!(
            "displacement transmittance {t} must lie in (0, 1]"
        )));
    }
    if t == 1.0 {
        return apply_displacement(state, mode, beta);
    }
    let drive = beta.scale(1.0 / (1.0 - t).sqrt());
    let n = state.n_modes();
    let joint = state.tensor(&coherent_state(drive));
    let mixed = apply_beam_splitter(&joint, mode, n, t)?;
    let keep: Vec<usize> = (0..n).collect();
    mixed.reduced(&keep)
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{thermal_state, two_mode_squeezed_vacuum, vacuum_state};
    use approx::assert_relative_eq;

    #[test]
    fn beam_splitter_limits() {
        let st = coherent_state(PhasePoint::new(1.0, 2.0))
            .tensor(&thermal_state(0.5).unwrap());
        let same = apply_beam_splitter(&st, 0, 1, 1.0).unwrap();
        assert!(same.max_abs_diff(&st) < 1e-15);

        let swapped = apply_beam_splitter(&st, 0, 1, 0.0).unwrap();
        assert_eq!(swapped.mode_mean(0), PhasePoint::ORIGIN);
        assert_eq!(swapped.mode_mean(1), PhasePoint::new(-1.0, -2.0));
        assert_relative_eq!(swapped.cov()[(0, 0)], 0.5);
        assert_relative_eq!(swapped.cov()[(2, 2)], 0.25);

        let vac = vacuum_state(2).unwrap();
        for t in [0.1, 0.5, 0.93] {
            let out = apply_beam_splitter(&vac, 0, 1, t).unwrap();
            assert!(out.max_abs_diff(&vac) < 1e-15);
        }
        assert!(apply_beam_splitter(&vac, 0, 1, 1.2).is_err());
        assert!(apply_beam_splitter(&vac, 1, 1, 0.5).is_err());
    }

    #[test]
    fn beam_splitter_preserves_purity() {
        let st = two_mode_squeezed_vacuum(0.8)
            .unwrap()
            .tensor(&coherent_state(PhasePoint::new(0.3, 0.1)));
        for t in [0.2, 0.5, 0.7] {
            let out = apply_beam_splitter(&st, 1, 2, t).unwrap();
            assert_relative_eq!(out.purity(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn displacement_round_trip() {
        let st = two_mode_squeezed_vacuum(0.4).unwrap();
        let beta = PhasePoint::new(0.7, -1.3);
        assert_eq!(apply_displacement(&st, 1, PhasePoint::ORIGIN).unwrap(), st);
        let back = apply_displacement(&apply_displacement(&st, 1, beta).unwrap(), 1, -beta).unwrap();
        assert!(back.max_abs_diff(&st) < 1e-12);
        let vac = vacuum_state(1).unwrap();
        let two = PhasePoint::new(2.0, 0.0);
        assert_eq!(apply_displacement(&vac, 0, two).unwrap(), coherent_state(two));
    }

    #[test]
    fn loss_limits() {
        let st = two_mode_squeezed_vacuum(1.1).unwrap();
        assert_eq!(apply_loss(&st, 0, 0.0, 3.0).unwrap(), st);
        let replaced = apply_loss(&st, 0, 1.0, 0.0).unwrap();
        assert_eq!(replaced.reduced(&[0]).unwrap(), vacuum_state(1).unwrap());
        assert_eq!(replaced.cov()[(0, 2)], 0.0);
        assert!(apply_loss(&st, 0, -0.1, 0.0).is_err());
        assert!(apply_loss(&st, 0, 0.5, -1.0).is_err());
    }

    #[test]
    fn loss_equals_mixing_with_thermal_mode() {
        let st = two_mode_squeezed_vacuum(0.9).unwrap();
        let st = apply_displacement(&st, 0, PhasePoint::new(1.0, -0.5)).unwrap();
        let (r, n_bar) = (0.3, 1.5);
        let via_bs = apply_beam_splitter(&st.tensor(&thermal_state(n_bar).unwrap()), 0, 2, 1.0 - r)
            .unwrap()
            .reduced(&[0, 1])
            .unwrap();
        let direct = apply_loss(&st, 0, r, n_bar).unwrap();
        assert!(direct.max_abs_diff(&via_bs) < 1e-12);
    }

    #[test]
    fn beam_splitter_displacement_examples() {
        let vac = vacuum_state(1).unwrap();
        let one = PhasePoint::new(1.0, 0.0);
        let out = displacement_via_beam_splitter(&vac, 0, one, 0.99).unwrap();
        assert!(out.max_abs_diff(&coherent_state(one)) < 1e-12);

        let out = displacement_via_beam_splitter(&coherent_state(PhasePoint::new(2.0, 0.0)), 0, one, 0.9)
            .unwrap();
        assert_relative_eq!(out.mean()[0], 2.0 * 0.9f64.sqrt() + 1.0, epsilon = 1e-12);
        assert_relative_eq!(out.mean()[1], 0.0, epsilon = 1e-12);

        let st = two_mode_squeezed_vacuum(0.5).unwrap();
        let near = displacement_via_beam_splitter(&st, 1, one, 1.0 - 1e-12).unwrap();
        let ideal = apply_displacement(&st, 1, one).unwrap();
        assert!((near.mean() - ideal.mean()).amax() < 1e-6);

        assert!(displacement_via_beam_splitter(&vac, 0, one, 0.0).is_err());
    }
}
