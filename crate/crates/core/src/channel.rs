//! The asymmetrically decohered two-mode squeezed channel.
//!
//! Mode `a` goes to the sender, mode `b` to the receiver. Each arm is
//! coupled to its own thermal environment with mean photon number `n̄_i`
//! for a normalized interaction time `R_i = 1 - exp(-κτ)`; `T_i = 1 - R_i`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{apply_loss, quadrature_form_variance, two_mode_squeezed_vacuum, GaussianState};

/// Bisection tolerance on `R_a` for the separability threshold.
pub const THRESHOLD_TOL: f64 = 1e-9;

/// Initial squeezing plus per-arm decoherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub s: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub n_bar_a: f64,
    pub n_bar_b: f64,
}

impl ChannelParams {
    /// Undecohered two-mode squeezed vacuum.
    pub fn pure(s: f64) -> Self {
        Self {
            s,
            r_a: 0.0,
            r_b: 0.0,
            n_bar_a: 0.0,
            n_bar_b: 0.0,
        }
    }

    pub fn new(s: f64, r_a: f64, r_b: f64, n_bar_a: f64, n_bar_b: f64) -> Result<Self> {
        let p = Self {
            s,
            r_a,
            r_b,
            n_bar_a,
            n_bar_b,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return Err(invalid(format!("s = {} must be finite and >= 0", self.s)));
        }
        for (name, r) in [("R_a", self.r_a), ("R_b", self.r_b)] {
            if !(0.0..=1.0).contains(&r) {
                return Err(invalid(format!("{name} = {r} outside [0, 1]")));
            }
        }
        for (name, n) in [("n_bar_a", self.n_bar_a), ("n_bar_b", self.n_bar_b)] {
            if !(n >= 0.0 && n.is_finite()) {
                return Err(invalid(format!("{name} = {n} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    pub fn t_a(&self) -> f64 {
        1.0 - self.r_a
    }

    pub fn t_b(&self) -> f64 {
        1.0 - self.r_b
    }

    pub fn with_r_a(self, r_a: f64) -> Self {
        Self { r_a, ..self }
    }
}

/// Gaussian exponent coefficients of the decohered channel:
/// `m_i = 4 Var(q_i)` and `√(c_a c_b) = 4 |Cov(q_a, q_b)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMoments {
    pub m_a: f64,
    pub m_b: f64,
    pub c_a: f64,
    pub c_b: f64,
}

impl ChannelMoments {
    pub fn correlation(&self) -> f64 {
        (self.c_a * self.c_b).sqrt()
    }

    pub fn determinant(&self) -> f64 {
        self.m_a * self.m_b - self.c_a * self.c_b
    }

    /// Two-mode state with these moments and zero mean.
    pub fn to_state(&self) -> Result<GaussianState> {
        if !(self.m_a > 0.0 && self.m_b > 0.0 && self.determinant() > 0.0) {
            return Err(Error::UnphysicalMoments(format!("{self:?}")));
        }
        let (a, b, k) = (self.m_a / 4.0, self.m_b / 4.0, self.correlation() / 4.0);
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            a,   0.0, -k,  0.0,
            0.0, a,   0.0, k,
            -k,  0.0, b,   0.0,
            0.0, k,   0.0, b,
        ]);
        GaussianState::new(DVector::zeros(4), cov)
            .map_err(|e| Error::UnphysicalMoments(e.to_string()))
    }
}

/// Outcome of the separability test `(m_a - 1)(m_b - 1) ≥ c_a c_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    pub margin: f64,
}

/// `R = 1 - exp(-κτ)`.
pub fn normalized_interaction_time(kappa: f64, tau: f64) -> Result<f64> {
    if !(kappa >= 0.0 && tau >= 0.0) {
        return Err(invalid(format!(
            "coupling {kappa} and exposure time {tau} must be >= 0"
        )));
    }
    Ok(-(-kappa * tau).exp_m1())
}

/// `m_i = R_i(1 + 2n̄_i) + T_i cosh 2s`, `c_i = T_i sinh 2s`.
pub fn channel_moments(params: &ChannelParams) -> ChannelMoments {
    let (ch, sh) = ((2.0 * params.s).cosh(), (2.0 * params.s).sinh());
    let m = |r: f64, n: f64| r * (1.0 + 2.0 * n) + (1.0 - r) * ch;
    ChannelMoments {
        m_a: m(params.r_a, params.n_bar_a),
        m_b: m(params.r_b, params.n_bar_b),
        c_a: params.t_a() * sh,
        c_b: params.t_b() * sh,
    }
}

/// Two-mode squeezed vacuum sent through each arm's thermal loss.
pub fn channel_state(params: &ChannelParams) -> Result<GaussianState> {
    params.validate()?;
    let tmsv = two_mode_squeezed_vacuum(params.s)?;
    let st = apply_loss(&tmsv, 0, params.r_a, params.n_bar_a)?;
    apply_loss(&st, 1, params.r_b, params.n_bar_b)
}

pub fn is_separable(moments: &ChannelMoments) -> SeparabilityVerdict {
    let margin = (moments.m_a - 1.0) * (moments.m_b - 1.0) - moments.c_a * moments.c_b;
    SeparabilityVerdict {
        separable: margin >= 0.0,
        margin,
    }
}

fn margin_at(params: &ChannelParams, r_a: f64) -> f64 {
    is_separable(&channel_moments(&params.with_r_a(r_a))).margin
}

/// Smallest `R_a ∈ [0, 1]` at which the channel becomes separable, with all
/// other parameters fixed (`params.r_a` is ignored).
///
/// With a vacuum receiver environment (`n̄_b = 0`), a squeezed channel and a
/// receiver arm that is not fully replaced, the threshold is `1/(1 + n̄_a)`
/// independent of `s` and `R_b`. Otherwise the margin is bisected.
pub fn separability_threshold(params: &ChannelParams) -> Result<Option<f64>> {
    params.validate()?;
    if params.n_bar_b == 0.0 && params.s > 0.0 && params.r_b < 1.0 {
        return Ok(Some(1.0 / (1.0 + params.n_bar_a)));
    }
    bisect_separability_threshold(params)
}

/// Bisection on the separability margin as a function of `R_a`, to
/// [`THRESHOLD_TOL`]. Returns `None` when even `R_a = 1` is entangled.
pub fn bisect_separability_threshold(params: &ChannelParams) -> Result<Option<f64>> {
    params.validate()?;
    if margin_at(params, 0.0) >= 0.0 {
        return Ok(Some(0.0));
    }
    if margin_at(params, 1.0) < 0.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if margin_at(params, mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Variances of the scaled EPR combinations of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EprVariances {
    /// `Var(t_b q_a + t_a q_b)`; pinned as `s → ∞`.
    pub q_sum: f64,
    /// `Var(t_b p_a - t_a p_b)`; pinned as `s → ∞`.
    pub p_diff: f64,
    /// `Var(t_b q_a - t_a q_b)`.
    pub q_diff: f64,
    /// `Var(t_b p_a + t_a p_b)`.
    pub p_sum: f64,
}

/// Exact variances of the EPR combinations, from the channel covariance.
pub fn epr_scaled_variances(params: &ChannelParams) -> Result<EprVariances> {
    let st = channel_state(params)?;
    let (ta, tb) = (params.t_a().sqrt(), params.t_b().sqrt());
    let var = |c: [f64; 4]| quadrature_form_variance(&st, &c);
    Ok(EprVariances {
        q_sum: var([tb, 0.0, ta, 0.0])?,
        p_diff: var([0.0, tb, 0.0, -ta])?,
        q_diff: var([tb, 0.0, -ta, 0.0])?,
        p_sum: var([0.0, tb, 0.0, ta])?,
    })
}
