//! Phase-space algebra for multimode Gaussian states.
//!
//! A state of `n` modes is a mean vector and covariance matrix over the
//! quadratures ordered `(q₁, p₁, …, q_n, p_n)`. The vacuum has covariance
//! `I/4`; the symplectic form is block diagonal with blocks `[[0, 1], [-1, 0]]`.

mod measure;
mod ops;
mod phase_space;

pub use measure::{homodyne_condition, homodyne_sample, HomodyneOutcome};
pub use ops::{
    apply_beam_splitter, apply_displacement, apply_loss, displacement_via_beam_splitter,
};
pub use phase_space::{
    characteristic_function, gaussian_overlap_fidelity, quadrature_form_variance, wigner,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Vacuum variance of a single quadrature.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Relative tolerance for the covariance symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Allowed undershoot of a symplectic eigenvalue below `1/4`.
pub const SYMPLECTIC_FLOOR_TOL: f64 = 1e-10;

/// A point `α = q + i p` of single-mode phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0.0, p: 0.0 };

    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.q * self.q + self.p * self.p
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.q * k, self.p * k)
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }
}

impl std::ops::Sub for PhasePoint {
    type Output = PhasePoint;

    fn sub(self, rhs: Self) -> Self {
        PhasePoint::new(self.q - rhs.q, self.p - rhs.p)
    }
}

impl std::ops::Neg for PhasePoint {
    type Output = PhasePoint;

    fn neg(self) -> Self {
        PhasePoint::new(-self.q, -self.p)
    }
}

/// Gaussian state of `n_modes` bosonic modes.
///
/// States produced by the operations in this module are always normalized;
/// the Wigner normalization constant is implied by `det(cov)`. A state with
/// zero modes only arises as the remainder of measuring every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from raw moments, checking symmetry and the
    /// uncertainty relation.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if !dim.is_multiple_of(2) {
            return Err(invalid(format!("mean vector length {dim} is odd")));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: cov.nrows(),
            });
        }
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(invalid("non-finite moment"));
        }
        let state = Self { mean, cov };
        state.check_physical()?;
        Ok(state)
    }

    pub(crate) fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        debug_assert_eq!(mean.len(), cov.nrows());
        Self { mean, cov }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean of one mode as a phase-space point.
    pub fn mode_mean(&self, mode: usize) -> PhasePoint {
        PhasePoint::new(self.mean[2 * mode], self.mean[2 * mode + 1])
    }

    /// `Tr ρ² = 1 / (4ⁿ √det cov)`.
    pub fn purity(&self) -> f64 {
        let n = self.n_modes() as i32;
        1.0 / (4f64.powi(n) * self.cov.determinant().sqrt())
    }

    /// Williamson symplectic eigenvalues, sorted ascending.
    ///
    /// Computed as the singular spectrum of `S Ω S` with `S = cov^{1/2}`,
    /// which is antisymmetric, so each value appears twice.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.n_modes();
        if n == 0 {
            return Vec::new();
        }
        let eig = self.cov.clone().symmetric_eigen();
        let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
        let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
        let a = &root * symplectic_form(n) * &root;
        let mut nu: Vec<f64> = (a.transpose() * &a)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|v| v.max(0.0).sqrt())
            .collect();
        nu.sort_by(f64::total_cmp);
        nu.into_iter().step_by(2).collect()
    }

    /// Verifies covariance symmetry and that every symplectic eigenvalue is
    /// at least `1/4`.
    pub fn check_physical(&self) -> Result<()> {
        let scale = self.cov.amax().max(1.0);
        let asym = (&self.cov - self.cov.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(invalid(format!("covariance not symmetric (|V - Vᵀ| = {asym:e})")));
        }
        if let Some(&nu) = self.symplectic_eigenvalues().first() {
            if nu < VACUUM_VARIANCE - SYMPLECTIC_FLOOR_TOL {
                return Err(invalid(format!(
                    "uncertainty relation violated: symplectic eigenvalue {nu} < 1/4"
                )));
            }
        }
        Ok(())
    }

    /// Direct sum `self ⊕ other`; modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (d1, d2) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        GaussianState::from_parts(mean, cov)
    }

    /// Reduced state on the listed modes, in the listed order.
    pub fn reduced(&self, modes: &[usize]) -> Result<GaussianState> {
        for &m in modes {
            self.check_mode(m)?;
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(GaussianState::from_parts(mean, cov))
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(invalid(format!(
                "mode index {mode} out of range for a {}-mode state",
                self.n_modes()
            )));
        }
        Ok(())
    }

    /// Largest element-wise difference in mean and covariance.
    pub fn max_abs_diff(&self, other: &GaussianState) -> f64 {
        if self.mean.len() != other.mean.len() {
            return f64::INFINITY;
        }
        (&self.mean - &other.mean)
            .amax()
            .max((&self.cov - &other.cov).amax())
    }
}

/// Symplectic form for `n` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub fn vacuum_state(n_modes: usize) -> Result<GaussianState> {
    if n_modes == 0 {
        return Err(invalid("vacuum_state needs at least one mode"));
    }
    Ok(GaussianState::from_parts(
        DVector::zeros(2 * n_modes),
        DMatrix::identity(2 * n_modes, 2 * n_modes) * VACUUM_VARIANCE,
    ))
}

pub fn coherent_state(alpha: PhasePoint) -> GaussianState {
    GaussianState::from_parts(
        DVector::from_vec(vec![alpha.q, alpha.p]),
        DMatrix::identity(2, 2) * VACUUM_VARIANCE,
    )
}

/// Single-mode thermal state with mean photon number `n_bar`.
pub fn thermal_state(n_bar: f64) -> Result<GaussianState> {
    if !(n_bar >= 0.0 && n_bar.is_finite()) {
        return Err(invalid(format!("n_bar = {n_bar} must be finite and >= 0")));
    }
    Ok(GaussianState::from_parts(
        DVector::zeros(2),
        DMatrix::identity(2, 2) * ((1.0 + 2.0 * n_bar) * VACUUM_VARIANCE),
    ))
}

/// Two-mode squeezed vacuum with squeezing `s`.
///
/// `q_a + q_b` and `p_a - p_b` are the squeezed combinations, so the q-q
/// covariance is `-sinh(2s)/4` and the p-p covariance `+sinh(2s)/4`.
pub fn two_mode_squeezed_vacuum(s: f64) -> Result<GaussianState> {
    if !s.is_finite() {
        return Err(invalid(format!("squeezing s = {s} must be finite")));
    }
    let c = (2.0 * s).cosh() * VACUUM_VARIANCE;
    let x = (2.0 * s).sinh() * VACUUM_VARIANCE;
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        c,   0.0, -x,  0.0,
        0.0, c,   0.0, x,
        -x,  0.0, c,   0.0,
        0.0, x,   0.0, c,
    ]);
    Ok(GaussianState::from_parts(DVector::zeros(4), cov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_moments() {
        let v = vacuum_state(1).unwrap();
        assert_eq!(v.mean().as_slice(), &[0.0, 0.0]);
        assert_eq!(v.cov()[(0, 0)], 0.25);
        assert_eq!(v.cov()[(1, 1)], 0.25);
        let v2 = vacuum_state(2).unwrap();
        assert_eq!(v2.cov(), &(DMatrix::identity(4, 4) * 0.25));
        assert_relative_eq!(v2.purity(), 1.0, epsilon = 1e-14);
        assert!(matches!(vacuum_state(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn coherent_is_displaced_vacuum() {
        assert_eq!(coherent_state(PhasePoint::ORIGIN), vacuum_state(1).unwrap());
        let c = coherent_state(PhasePoint::new(1.0, 0.0));
        assert_eq!(c.mean().as_slice(), &[1.0, 0.0]);
        assert_eq!(c.cov(), &(DMatrix::identity(2, 2) * 0.25));
    }

    #[test]
    fn tmsv_basic_properties() {
        assert_eq!(
            two_mode_squeezed_vacuum(0.0).unwrap(),
            vacuum_state(2).unwrap()
        );
        let t = two_mode_squeezed_vacuum(1.0).unwrap();
        assert_relative_eq!(t.cov()[(0, 0)], 0.940549, epsilon = 1e-6);
        assert_relative_eq!(t.purity(), 1.0, epsilon = 1e-12);
        for nu in t.symplectic_eigenvalues() {
            assert_relative_eq!(nu, 0.25, epsilon = 1e-10);
        }
    }

    #[test]
    fn tmsv_matches_squeezers_and_beam_splitter() {
        // mode 1 anti-squeezed in q, mode 2 squeezed in q, then a 50/50
        // splitter x1' = (x1 + x2)/√2, x2' = (x2 - x1)/√2.
        for s in [0.3f64, 1.0, 2.5] {
            let (up, down) = ((2.0 * s).exp() / 4.0, (-2.0 * s).exp() / 4.0);
            let squeezed = DMatrix::from_diagonal(&DVector::from_vec(vec![up, down, down, up]));
            let h = std::f64::consts::FRAC_1_SQRT_2;
            #[rustfmt::skip]
            let bs = DMatrix::from_row_slice(4, 4, &[
                h, 0.0, h, 0.0,
                0.0, h, 0.0, h,
                -h, 0.0, h, 0.0,
                0.0, -h, 0.0, h,
            ]);
            let oracle = &bs * squeezed * bs.transpose();
            let t = two_mode_squeezed_vacuum(s).unwrap();
            assert!((t.cov() - oracle).amax() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn rejects_unphysical_covariance() {
        let cov = DMatrix::identity(2, 2) * 0.2;
        assert!(GaussianState::new(DVector::zeros(2), cov).is_err());
        let mut asym = DMatrix::identity(2, 2) * 0.5;
        asym[(0, 1)] = 0.1;
        assert!(GaussianState::new(DVector::zeros(2), asym).is_err());
        let squeezed = DMatrix::from_diagonal(&DVector::from_vec(vec![0.05, 1.25]));
        assert!(GaussianState::new(DVector::zeros(2), squeezed).is_ok());
    }

    #[test]
    fn thermal_symplectic_eigenvalue() {
        let th = thermal_state(2.0).unwrap();
        assert_relative_eq!(th.symplectic_eigenvalues()[0], 1.25, epsilon = 1e-12);
        assert_relative_eq!(th.purity(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn reduce_and_tensor() {
        let t = two_mode_squeezed_vacuum(0.7).unwrap();
        let c = coherent_state(PhasePoint::new(0.5, -1.0));
        let joint = c.tensor(&t);
        assert_eq!(joint.n_modes(), 3);
        assert_eq!(joint.reduced(&[0]).unwrap(), c);
        assert_eq!(joint.reduced(&[1, 2]).unwrap(), t);
        assert!(joint.reduced(&[3]).is_err());
    }
}
