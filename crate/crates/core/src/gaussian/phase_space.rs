//! Phase-space functions of Gaussian states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{GaussianState, PhasePoint};
use crate::error::{Error, Result};

fn flatten(points: &[PhasePoint], n_modes: usize) -> Result<DVector<f64>> {
    if points.len() != n_modes {
        return Err(Error::DimensionMismatch {
            expected: n_modes,
            actual: points.len(),
        });
    }
    Ok(DVector::from_iterator(
        2 * n_modes,
        points.iter().flat_map(|a| [a.q, a.p]),
    ))
}

/// `(dᵀ M⁻¹ d, det M)` for a symmetric positive-definite `m`.
fn quad_and_det(m: DMatrix<f64>, d: &DVector<f64>) -> Result<(f64, f64)> {
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Numerical("covariance is not positive definite".into()))?;
    let det = chol.l_dirty().diagonal().iter().map(|x| x * x).product();
    let quad = d.dot(&chol.solve(d));
    Ok((quad, det))
}

/// Normalized Wigner function at one phase-space point per mode.
pub fn wigner(state: &GaussianState, point: &[PhasePoint]) -> Result<f64> {
    let n = state.n_modes();
    let x = flatten(point, n)?;
    let (quad, det) = quad_and_det(state.cov().clone(), &(x - state.mean()))?;
    let norm = (2.0 * std::f64::consts::PI).powi(n as i32) * det.sqrt();
    Ok((-0.5 * quad).exp() / norm)
}

/// `C(η) = Tr[ρ D(η)]` with `D(η) = exp(η a† - η* a)`.
///
/// For `a = q + i p` this is the expectation of `exp(2i(η_p q - η_q p))`
/// under the Wigner function, i.e. the Gaussian closed form
/// `exp(i kᵀμ - kᵀVk/2)` with `k = 2(η_p, -η_q, …)`.
pub fn characteristic_function(state: &GaussianState, eta: &[PhasePoint]) -> Result<Complex64> {
    let n = state.n_modes();
    if eta.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: eta.len(),
        });
    }
    let k = DVector::from_iterator(2 * n, eta.iter().flat_map(|e| [2.0 * e.p, -2.0 * e.q]));
    let phase = k.dot(state.mean());
    let damping = 0.5 * (state.cov() * &k).dot(&k);
    Ok(Complex64::from_polar((-damping).exp(), phase))
}

/// `πⁿ ∫ W_a W_b`, which is `Tr(ρ_a ρ_b)`: the fidelity whenever one of the
/// two states is pure, and the purity when `a == b`.
pub fn gaussian_overlap_fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let n = a.n_modes();
    if b.n_modes() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.n_modes(),
        });
    }
    let d = a.mean() - b.mean();
    let (quad, det) = quad_and_det(a.cov() + b.cov(), &d)?;
    Ok((-0.5 * quad).exp() / (2f64.powi(n as i32) * det.sqrt()))
}

/// Variance of the linear quadrature combination `coeffs · x`.
pub fn quadrature_form_variance(state: &GaussianState, coeffs: &[f64]) -> Result<f64> {
    let dim = state.mean().len();
    if coeffs.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: coeffs.len(),
        });
    }
    let v = DVector::from_column_slice(coeffs);
    Ok((state.cov() * &v).dot(&v))
}
