//! Homodyne detection: Gaussian conditioning on a measured quadrature.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::GaussianState;
use crate::error::{Error, Result};

/// Marginal variances at or below this fraction of the largest covariance
/// entry are treated as singular.
const DEGENERATE_REL: f64 = 1e-14;

/// Result of a sampled homodyne measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneOutcome {
    pub outcome: f64,
    pub state: GaussianState,
}

struct Marginal {
    mean: f64,
    variance: f64,
    /// Covariance between the remaining quadratures and the measured one.
    cross: DVector<f64>,
    keep: Vec<usize>,
}

fn marginal(state: &GaussianState, mode: usize, angle: f64) -> Result<Marginal> {
    state.check_mode(mode)?;
    let (q, p) = (2 * mode, 2 * mode + 1);
    let (c, s) = (angle.cos(), angle.sin());
    let cov = state.cov();
    let variance = c * c * cov[(q, q)] + 2.0 * c * s * cov[(q, p)] + s * s * cov[(p, p)];
    if !(variance > DEGENERATE_REL * cov.amax()) {
        return Err(Error::DegenerateMeasurement { mode, variance });
    }
    let mean = c * state.mean()[q] + s * state.mean()[p];
    let keep: Vec<usize> = (0..state.mean().len()).filter(|&i| i != q && i != p).collect();
    let cross = DVector::from_iterator(
        keep.len(),
        keep.iter().map(|&i| c * cov[(i, q)] + s * cov[(i, p)]),
    );
    Ok(Marginal { mean, variance, cross, keep })
}

/// Conditions `state` on observing `outcome` for the quadrature
/// `cos(angle) q + sin(angle) p` of `mode`.
///
/// Returns the state of the remaining modes and the probability density of
/// the outcome. The conditional covariance does not depend on `outcome`.
pub fn homodyne_condition(
    state: &GaussianState,
    mode: usize,
    angle: f64,
    outcome: f64,
) -> Result<(GaussianState, f64)> {
    let m = marginal(state, mode, angle)?;
    let dev = outcome - m.mean;
    let density = (-0.5 * dev * dev / m.variance).exp()
        / (2.0 * std::f64::consts::PI * m.variance).sqrt();
    Ok((condition(state, &m, dev), density))
}

fn condition(state: &GaussianState, m: &Marginal, dev: f64) -> GaussianState {
    let k = m.keep.len();
    let gain = &m.cross / m.variance;
    let mean = DVector::from_iterator(k, m.keep.iter().map(|&i| state.mean()[i])) + &gain * dev;
    let cov = DMatrix::from_fn(k, k, |r, c| {
        state.cov()[(m.keep[r], m.keep[c])] - m.cross[r] * m.cross[c] / m.variance
    });
    GaussianState::from_parts(mean, cov)
}

/// Draws a homodyne outcome from the exact Gaussian marginal and returns it
/// together with the conditioned state of the remaining modes.
pub fn homodyne_sample<R: Rng + ?Sized>(
    state: &GaussianState,
    mode: usize,
    angle: f64,
    rng: &mut R,
) -> Result<HomodyneOutcome> {
    let m = marginal(state, mode, angle)?;
    let z: f64 = rng.sample(StandardNormal);
    let dev = z * m.variance.sqrt();
    Ok(HomodyneOutcome {
        outcome: m.mean + dev,
        state: condition(state, &m, dev),
    })
}
