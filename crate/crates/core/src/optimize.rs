//! Optimal squeezing, decoherence-assisted receiver transmittance and
//! feed-forward gain, each with a closed form and a numeric cross-check.

use serde::{Serialize, Serializer};

use crate::channel::{channel_moments, ChannelParams};
use crate::error::{invalid, Error, Result};
use crate::gaussian::PhasePoint;
use crate::teleport::{analytic_average_fidelity, log_fidelity_for_gain, ProtocolConfig};

/// Default golden-section tolerance on the argument.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Sub-brackets searched when the unimodality check fails.
const MULTI_START: usize = 8;

/// Grid points used by the unimodality check.
const PROBE_GRID: usize = 9;

/// Search range for the numeric squeezing optimum.
pub const SQUEEZING_SEARCH_MAX: f64 = 10.0;

/// Radius of the coherent-amplitude ring used to average fidelity over
/// inputs when optimizing the gain. A mismatched gain costs
/// `~(λ t_a - 1)² |α|²` in log-fidelity, so a wide ring stands in for the
/// whole coherent-state plane.
pub const GAIN_PROBE_RADIUS: f64 = 1e4;

/// Number of phases on the gain probe ring.
pub const GAIN_PROBE_PHASES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimumArgument {
    Finite(f64),
    /// The objective keeps improving without bound (e.g. `s → ∞`).
    Unbounded,
}

impl OptimumArgument {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            OptimumArgument::Finite(x) => Some(x),
            OptimumArgument::Unbounded => None,
        }
    }
}

impl Serialize for OptimumArgument {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OptimumArgument::Finite(x) => ser.serialize_f64(*x),
            OptimumArgument::Unbounded => ser.serialize_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimumMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimumResult {
    pub argument: OptimumArgument,
    /// Fidelity at the optimum (the supremum for unbounded results).
    pub value: f64,
    pub method: OptimumMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(f64, f64)>,
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// True when the sampled values rise (weakly) and then fall (weakly).
fn looks_unimodal(values: &[f64]) -> bool {
    let scale = values.iter().fold(0f64, |m, v| m.max(v.abs())).max(1e-300);
    let slack = 1e-12 * scale;
    let mut falling = false;
    for w in values.windows(2) {
        if w[1] < w[0] - slack {
            falling = true;
        } else if falling && w[1] > w[0] + slack {
            return false;
        }
    }
    true
}

/// Golden-section maximization of `f` on `[lo, hi]` to a bracket of `tol`.
///
/// A coarse grid first checks that `f` looks unimodal; if not, each of
/// eight equal sub-brackets is searched and the best result wins, ties going
/// to the lowest argument. Endpoints are candidates too, so monotone
/// objectives return the boundary.
pub fn maximize_scalar<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!("empty bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(invalid(format!("tolerance {tol} must be positive")));
    }
    let grid: Vec<f64> = (0..PROBE_GRID)
        .map(|i| f(lo + (hi - lo) * i as f64 / (PROBE_GRID - 1) as f64))
        .collect();
    if grid.iter().any(|v| v.is_nan()) {
        return Err(Error::Numerical("objective returned NaN".into()));
    }

    let starts: Vec<(f64, f64)> = if looks_unimodal(&grid) {
        vec![(lo, hi)]
    } else {
        let w = (hi - lo) / MULTI_START as f64;
        (0..MULTI_START)
            .map(|i| (lo + i as f64 * w, lo + (i + 1) as f64 * w))
            .collect()
    };

    let mut best: Option<(f64, f64)> = None;
    let mut consider = |x: f64| {
        let v = f(x);
        match best {
            Some((bx, bv)) if v < bv || (v == bv && x >= bx) => {}
            _ => best = Some((x, v)),
        }
    };
    for (a, b) in starts {
        consider(golden_section(&f, a, b, tol));
    }
    consider(lo);
    consider(hi);
    let (x, v) = best.expect("at least one candidate");
    if v.is_nan() {
        return Err(Error::Numerical("objective returned NaN at optimum".into()));
    }
    Ok((x, v))
}

fn check_transmittance(name: &str, t: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!("{name} = {t} outside (0, 1]")));
    }
    Ok(())
}

fn check_n_bar(name: &str, n: f64) -> Result<()> {
    if !(n >= 0.0 && n.is_finite()) {
        return Err(invalid(format!("{name} = {n} must be finite and >= 0")));
    }
    Ok(())
}

/// Unit-gain average fidelity of the decohered channel.
pub fn channel_fidelity_at(s: f64, t_a: f64, t_b: f64, n_bar_a: f64, n_bar_b: f64) -> Result<f64> {
    let params = ChannelParams::new(s, 1.0 - t_a, 1.0 - t_b, n_bar_a, n_bar_b)?;
    analytic_average_fidelity(&channel_moments(&params))
}

/// Squeezing maximizing the average fidelity for fixed arm transmittances:
/// `e^{-2s*} = |t_a - t_b| / (t_a + t_b)` with `t_i = √T_i`.
///
/// The argmax does not depend on the environment temperatures; the value
/// does. Equal transmittances give an unbounded optimum whose value is the
/// `s → ∞` limit `1 / (1 + R(1 + n̄_a + n̄_b))`.
pub fn optimal_squeezing(t_a: f64, t_b: f64, n_bar_a: f64, n_bar_b: f64) -> Result<OptimumResult> {
    check_transmittance("T_a", t_a)?;
    check_transmittance("T_b", t_b)?;
    check_n_bar("n_bar_a", n_bar_a)?;
    check_n_bar("n_bar_b", n_bar_b)?;
    let (ra, rb) = (t_a.sqrt(), t_b.sqrt());
    if ra == rb {
        let r = 1.0 - t_a;
        return Ok(OptimumResult {
            argument: OptimumArgument::Unbounded,
            value: 1.0 / (1.0 + r * (1.0 + n_bar_a + n_bar_b)),
            method: OptimumMethod::ClosedForm,
            bracket: None,
        });
    }
    let s = -0.5 * ((ra - rb).abs() / (ra + rb)).ln();
    Ok(OptimumResult {
        argument: OptimumArgument::Finite(s),
        value: channel_fidelity_at(s, t_a, t_b, n_bar_a, n_bar_b)?,
        method: OptimumMethod::ClosedForm,
        bracket: None,
    })
}

/// Golden-section counterpart of [`optimal_squeezing`] on
/// `s ∈ [0, s_max]`.
pub fn optimal_squeezing_numeric(
    t_a: f64,
    t_b: f64,
    n_bar_a: f64,
    n_bar_b: f64,
    s_max: f64,
) -> Result<OptimumResult> {
    check_transmittance("T_a", t_a)?;
    check_transmittance("T_b", t_b)?;
    channel_fidelity_at(0.0, t_a, t_b, n_bar_a, n_bar_b)?;
    let f = |s: f64| channel_fidelity_at(s, t_a, t_b, n_bar_a, n_bar_b).unwrap_or(f64::NAN);
    let (s, value) = maximize_scalar(f, 0.0, s_max, DEFAULT_TOL)?;
    Ok(OptimumResult {
        argument: OptimumArgument::Finite(s),
        value,
        method: OptimumMethod::Numeric,
        bracket: Some((0.0, s_max)),
    })
}

/// Receiver-arm transmittance maximizing the fidelity when only the
/// sender's environment is thermal (`n̄_b = 0`).
///
/// In the interior the optimum is `T_b* = coth²(s) T_a` with value
/// `1 / (1 + (1 + n̄_a)(1 - T_a))`. When `coth²(s) T_a > 1` the optimum sits
/// on the feasible boundary and is located numerically.
pub fn optimal_receiver_transmittance(s: f64, t_a: f64, n_bar_a: f64) -> Result<OptimumResult> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(invalid(format!("s = {s} must be > 0 (coth diverges at 0)")));
    }
    check_transmittance("T_a", t_a)?;
    check_n_bar("n_bar_a", n_bar_a)?;
    let t_b = t_a / s.tanh().powi(2);
    if t_b <= 1.0 {
        return Ok(OptimumResult {
            argument: OptimumArgument::Finite(t_b),
            value: 1.0 / (1.0 + (1.0 + n_bar_a) * (1.0 - t_a)),
            method: OptimumMethod::ClosedForm,
            bracket: None,
        });
    }
    optimal_receiver_transmittance_numeric(s, t_a, n_bar_a)
}

/// Golden-section search over `T_b ∈ [0, 1]`.
pub fn optimal_receiver_transmittance_numeric(s: f64, t_a: f64, n_bar_a: f64) -> Result<OptimumResult> {
    check_transmittance("T_a", t_a)?;
    channel_fidelity_at(s, t_a, 1.0, n_bar_a, 0.0)?;
    let f = |t_b: f64| channel_fidelity_at(s, t_a, t_b, n_bar_a, 0.0).unwrap_or(f64::NAN);
    let (t_b, value) = maximize_scalar(f, 0.0, 1.0, DEFAULT_TOL)?;
    Ok(OptimumResult {
        argument: OptimumArgument::Finite(t_b),
        value,
        method: OptimumMethod::Numeric,
        bracket: Some((0.0, 1.0)),
    })
}

/// Ring of coherent amplitudes used by [`optimal_gain`].
pub fn gain_probe_set() -> Vec<PhasePoint> {
    (0..GAIN_PROBE_PHASES)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / GAIN_PROBE_PHASES as f64;
            PhasePoint::new(GAIN_PROBE_RADIUS * phi.cos(), GAIN_PROBE_RADIUS * phi.sin())
        })
        .collect()
}

/// Log of the probe-averaged fidelity, via log-sum-exp.
fn log_mean_fidelity(s: f64, t_a: f64, gain: f64, probes: &[PhasePoint]) -> Result<f64> {
    let moments = channel_moments(&ChannelParams::pure(s));
    let config = ProtocolConfig {
        gain,
        sender_transmittance: t_a,
        displacement_transmittance: 1.0,
    };
    let logs = probes
        .iter()
        .map(|&a| log_fidelity_for_gain(&moments, a, &config))
        .collect::<Result<Vec<_>>>()?;
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    Ok(top + (sum / logs.len() as f64).ln())
}

/// Feed-forward gain maximizing the input-averaged fidelity when the sender's
/// homodyne detection has efficiency `t_a` and the channel is otherwise pure.
/// Expected optimum: `λ* = 1/√T_a` with fidelity `1/(e^{-2s} + 1/T_a)`.
pub fn optimal_gain(s: f64, t_a: f64) -> Result<OptimumResult> {
    optimal_gain_with_probes(s, t_a, &gain_probe_set())
}

pub fn optimal_gain_with_probes(s: f64, t_a: f64, probes: &[PhasePoint]) -> Result<OptimumResult> {
    check_transmittance("T_a", t_a)?;
    if !(s >= 0.0 && s.is_finite()) {
        return Err(invalid(format!("s = {s} must be finite and >= 0")));
    }
    if probes.is_empty() {
        return Err(invalid("empty probe set"));
    }
    let hi = 2.0 / t_a;
    log_mean_fidelity(s, t_a, 1.0, probes)?;
    let f = |g: f64| log_mean_fidelity(s, t_a, g, probes).unwrap_or(f64::NAN);
    let (gain, log_value) = maximize_scalar(f, 0.0, hi, DEFAULT_TOL)?;
    Ok(OptimumResult {
        argument: OptimumArgument::Finite(gain),
        value: log_value.exp(),
        method: OptimumMethod::Numeric,
        bracket: Some((0.0, hi)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::teleport::lossy_sender_fidelity;
    use approx::assert_relative_eq;

    #[test]
    fn maximize_basic() {
        let (x, v) = maximize_scalar(|x| -(x - 2.0) * (x - 2.0), 0.0, 5.0, 1e-10).unwrap();
        assert!((x - 2.0).abs() < 1e-7);
        assert_relative_eq!(v, 0.0, epsilon = 1e-14);
        let (x, v) = maximize_scalar(|_| 3.5, -1.0, 1.0, 1e-10).unwrap();
        assert!((-1.0..=1.0).contains(&x));
        assert_eq!(v, 3.5);
        let (x, _) = maximize_scalar(|x| x, 0.0, 1.0, 1e-10).unwrap();
        assert_eq!(x, 1.0);
        assert!(maximize_scalar(|x| x, 1.0, 1.0, 1e-10).is_err());
        assert!(maximize_scalar(|x| x, 2.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn maximize_multimodal_falls_back() {
        // two peaks; the taller one at x = 7.3 sits in a different sub-bracket
        let f = |x: f64| (-(x - 1.0).powi(2)).exp() + 1.5 * (-(x - 7.3).powi(2)).exp();
        let (x, _) = maximize_scalar(f, 0.0, 10.0, 1e-10).unwrap();
        assert!((x - 7.3).abs() < 1e-3, "{x}");
    }

    #[test]
    fn squeezing_examples() {
        let sym = optimal_squeezing(0.9, 0.9, 0.0, 0.0).unwrap();
        assert_eq!(sym.argument, OptimumArgument::Unbounded);
        assert_relative_eq!(sym.value, 1.0 / 1.1, epsilon = 1e-15);

        let r = optimal_squeezing(1.0, 0.99, 0.0, 0.0).unwrap();
        assert_relative_eq!(r.argument.finite().unwrap(), 2.993223, epsilon = 1e-6);
        let r = optimal_squeezing(1.0, 0.95, 0.0, 0.0).unwrap();
        assert_relative_eq!(r.argument.finite().unwrap(), 2.178272, epsilon = 1e-6);
        assert!(optimal_squeezing(0.0, 0.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn squeezing_numeric_agrees_and_ignores_temperature() {
        for n_a in [0.0, 1.0, 5.0] {
            let closed = optimal_squeezing(1.0, 0.95, n_a, 0.0).unwrap();
            let numeric = optimal_squeezing_numeric(1.0, 0.95, n_a, 0.0, SQUEEZING_SEARCH_MAX).unwrap();
            let (c, n) = (closed.argument.finite().unwrap(), numeric.argument.finite().unwrap());
            assert!((c - n).abs() < 1e-6, "n̄_a={n_a}: {c} vs {n}");
            assert_relative_eq!(closed.value, numeric.value, epsilon = 1e-12);
        }
    }

    #[test]
    fn receiver_examples() {
        let r = optimal_receiver_transmittance(1.0, 0.5, 1.0).unwrap();
        assert_eq!(r.method, OptimumMethod::ClosedForm);
        assert_relative_eq!(r.argument.finite().unwrap(), 0.5 / 1f64.tanh().powi(2), epsilon = 1e-15);
        assert_relative_eq!(r.argument.finite().unwrap(), 0.862031, epsilon = 1e-6);
        assert_relative_eq!(r.value, 0.5, epsilon = 1e-15);

        let r = optimal_receiver_transmittance(1.0, 0.5, 0.0).unwrap();
        assert_relative_eq!(r.value, 2.0 / 3.0, epsilon = 1e-15);
        let n = optimal_receiver_transmittance_numeric(1.0, 0.5, 0.0).unwrap();
        assert_relative_eq!(n.value, 2.0 / 3.0, epsilon = 1e-12);

        let r = optimal_receiver_transmittance(0.3, 0.9, 0.0).unwrap();
        assert_eq!(r.method, OptimumMethod::Numeric);
        assert!((r.argument.finite().unwrap() - 1.0).abs() < 1e-9);
        assert!(optimal_receiver_transmittance(0.0, 0.9, 0.0).is_err());
    }

    #[test]
    fn gain_examples() {
        let g = optimal_gain(1.0, 1.0).unwrap();
        assert!((g.argument.finite().unwrap() - 1.0).abs() < 1e-4);
        let g = optimal_gain(0.7, 0.81).unwrap();
        assert!((g.argument.finite().unwrap() - 1.0 / 0.9).abs() < 1e-4);
        let g = optimal_gain(1.0, 0.8).unwrap();
        assert_relative_eq!(g.value, lossy_sender_fidelity(1.0, 0.8).unwrap(), epsilon = 1e-6);
        assert_relative_eq!(g.value, 0.721847, epsilon = 1e-6);
    }
}
