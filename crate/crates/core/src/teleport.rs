//! Coherent-state teleportation through a two-mode Gaussian channel.
//!
//! Protocol, for input `|α⟩` and channel modes `a` (sender) and `b`
//! (receiver):
//!
//! 1. optional homodyne inefficiency: loss `1 - η` on the input and on `a`;
//! 2. 50/50 beam splitter between the input and `a`;
//! 3. homodyne `p` on the `a` output port (outcome `p₁`) and `q` on the input
//!    output port (outcome `q₂`), giving `g = √2 (q₂ - i p₁)`;
//! 4. displacement of `b` by `λ g`, either unitary or through a beam
//!    splitter of transmittance `T_disp`.
//!
//! With `λ = 1` and `η = T_disp = 1` the outcome-averaged fidelity is
//! `1 / (1 + (m_a + m_b)/2 - √(c_a c_b))` for every `α`.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelMoments;
use crate::error::{invalid, Error, Result};
use crate::gaussian::{
    apply_beam_splitter, apply_displacement, apply_loss, coherent_state,
    displacement_via_beam_splitter, gaussian_overlap_fidelity, homodyne_sample, GaussianState,
    PhasePoint, VACUUM_VARIANCE,
};

/// Smallest Monte-Carlo run accepted by [`mc_fidelity`].
pub const MIN_MC_SAMPLES: usize = 1_000;

/// Samples per work item in [`mc_fidelity`]; partial sums are combined in
/// chunk order so the result does not depend on the thread count.
const MC_CHUNK: usize = 1_024;

/// Feed-forward gain and the two apparatus imperfections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Receiver displacement is `g' = gain · g`.
    pub gain: f64,
    /// Homodyne efficiency `η`, modeled as a beam splitter in front of both
    /// sender detectors.
    pub sender_transmittance: f64,
    /// Transmittance of the beam splitter performing the receiver's
    /// displacement; `1` means a unitary displacement.
    pub displacement_transmittance: f64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            gain: 1.0,
            sender_transmittance: 1.0,
            displacement_transmittance: 1.0,
        }
    }
}

impl ProtocolConfig {
    pub fn with_gain(gain: f64) -> Self {
        Self {
            gain,
            ..Self::default()
        }
    }

    /// Lossy homodyne detection with the matching gain `1/√η`.
    pub fn lossy_sender(eta: f64) -> Self {
        Self {
            gain: 1.0 / eta.sqrt(),
            sender_transmittance: eta,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gain >= 0.0 && self.gain.is_finite()) {
            return Err(invalid(format!("gain = {} must be finite and >= 0", self.gain)));
        }
        for (name, t) in [
            ("sender_transmittance", self.sender_transmittance),
            ("displacement_transmittance", self.displacement_transmittance),
        ] {
            if !(t > 0.0 && t <= 1.0) {
                return Err(invalid(format!("{name} = {t} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

/// Analytic and Monte-Carlo fidelity for one channel/input pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub analytic: f64,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Unit-gain average fidelity over the coherent-state ensemble,
/// `F_o = 1 / (1 + (m_a + m_b)/2 - √(c_a c_b))`.
pub fn analytic_average_fidelity(moments: &ChannelMoments) -> Result<f64> {
    let denom = 1.0 + 0.5 * (moments.m_a + moments.m_b) - moments.correlation();
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::UnphysicalMoments(format!(
            "fidelity denominator {denom} is not positive for {moments:?}"
        )));
    }
    Ok(1.0 / denom)
}

/// `1 / (e^{-2s} + 1/T_a)`: the fidelity with homodyne transmittance `T_a`
/// on the sender side, an undecohered receiver arm and gain `1/√T_a`.
pub fn lossy_sender_fidelity(s: f64, t_a: f64) -> Result<f64> {
    if !(t_a > 0.0 && t_a <= 1.0) {
        return Err(invalid(format!("T_a = {t_a} outside (0, 1]")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(invalid(format!("s = {s} must be finite and >= 0")));
    }
    Ok(1.0 / ((-2.0 * s).exp() + 1.0 / t_a))
}

/// Outcome-averaged output for unit gain: mean `α`, isotropic covariance
/// `[1 + m_a + m_b - 2√(c_a c_b)] I/4`.
pub fn average_output_state(
    moments: &ChannelMoments,
    alpha: PhasePoint,
    gain: f64,
) -> Result<GaussianState> {
    if gain != 1.0 {
        return Err(Error::Unsupported(format!(
            "closed-form output state only for unit gain (got {gain}); use fidelity_for_gain"
        )));
    }
    analytic_average_fidelity(moments)?;
    let var = (1.0 + moments.m_a + moments.m_b - 2.0 * moments.correlation()) * VACUUM_VARIANCE;
    GaussianState::new(
        DVector::from_vec(vec![alpha.q, alpha.p]),
        DMatrix::identity(2, 2) * var,
    )
}

/// Joint state `[input', a', b]` right before the homodyne detectors.
fn pre_measurement_state(
    channel: &GaussianState,
    alpha: PhasePoint,
    config: &ProtocolConfig,
) -> Result<GaussianState> {
    if channel.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: channel.n_modes(),
        });
    }
    config.validate()?;
    let mut st = coherent_state(alpha).tensor(channel);
    let eta = config.sender_transmittance;
    if eta < 1.0 {
        st = apply_loss(&st, 0, 1.0 - eta, 0.0)?;
        st = apply_loss(&st, 1, 1.0 - eta, 0.0)?;
    }
    apply_beam_splitter(&st, 0, 1, 0.5)
}

/// One run of the protocol with sampled homodyne outcomes.
///
/// Returns the measured `g` and the receiver's conditional output state.
pub fn teleport_coherent_once<R: Rng + ?Sized>(
    channel: &GaussianState,
    alpha: PhasePoint,
    config: &ProtocolConfig,
    rng: &mut R,
) -> Result<(PhasePoint, GaussianState)> {
    let st = pre_measurement_state(channel, alpha, config)?;
    // p on the a' port leaves [input', b]; q on input' leaves [b]
    let p_meas = homodyne_sample(&st, 1, FRAC_PI_2, rng)?;
    let q_meas = homodyne_sample(&p_meas.state, 0, 0.0, rng)?;
    let g = PhasePoint::new(SQRT_2 * q_meas.outcome, -SQRT_2 * p_meas.outcome);
    let shift = g.scale(config.gain);
    let output = if config.displacement_transmittance < 1.0 {
        displacement_via_beam_splitter(&q_meas.state, 0, shift, config.displacement_transmittance)?
    } else {
        apply_displacement(&q_meas.state, 0, shift)?
    };
    Ok((g, output))
}

/// Receiver output averaged over the exact outcome distribution.
///
/// The output quadratures are `x_b + λ(√2 q_input', -√2 p_a')` (after loss
/// `1 - T_disp` on `b` when the displacement uses a beam splitter), so the
/// average is the Gaussian image of the pre-measurement state under that
/// linear map.
pub fn outcome_averaged_output(
    channel: &GaussianState,
    alpha: PhasePoint,
    config: &ProtocolConfig,
) -> Result<GaussianState> {
    let mut st = pre_measurement_state(channel, alpha, config)?;
    if config.displacement_transmittance < 1.0 {
        st = apply_loss(&st, 2, 1.0 - config.displacement_transmittance, 0.0)?;
    }
    let k = config.gain * SQRT_2;
    let mut map = DMatrix::zeros(2, 6);
    map[(0, 4)] = 1.0;
    map[(0, 0)] = k;
    map[(1, 5)] = 1.0;
    map[(1, 3)] = -k;
    let mean = &map * st.mean();
    let cov = &map * st.cov() * map.transpose();
    GaussianState::new(mean, cov)
}

fn log_overlap_with_coherent(alpha: PhasePoint, out: &GaussianState) -> Result<f64> {
    let sum = Matrix2::new(
        out.cov()[(0, 0)] + VACUUM_VARIANCE,
        out.cov()[(0, 1)],
        out.cov()[(1, 0)],
        out.cov()[(1, 1)] + VACUUM_VARIANCE,
    );
    let det = sum.determinant();
    let inv = sum
        .try_inverse()
        .ok_or_else(|| Error::Numerical("singular output covariance".into()))?;
    let d = Vector2::new(out.mean()[0] - alpha.q, out.mean()[1] - alpha.p);
    Ok(-0.5 * d.dot(&(inv * d)) - (2.0 * det.sqrt()).ln())
}

/// Natural log of [`fidelity_for_gain`], finite even where the fidelity
/// itself underflows.
pub fn log_fidelity_for_gain(
    moments: &ChannelMoments,
    alpha: PhasePoint,
    config: &ProtocolConfig,
) -> Result<f64> {
    let out = outcome_averaged_output(&moments.to_state()?, alpha, config)?;
    log_overlap_with_coherent(alpha, &out)
}

/// Fidelity for input `α`, averaged over the homodyne outcomes, when the
/// receiver applies `g' = config.gain · g`.
///
/// At unit gain (and no apparatus loss) the value is independent of `α` and
/// equals [`analytic_average_fidelity`].
pub fn fidelity_for_gain(
    moments: &ChannelMoments,
    alpha: PhasePoint,
    config: &ProtocolConfig,
) -> Result<f64> {
    Ok(log_fidelity_for_gain(moments, alpha, config)?.exp())
}

/// Same as [`fidelity_for_gain`] for an arbitrary two-mode channel state.
pub fn channel_fidelity(
    channel: &GaussianState,
    alpha: PhasePoint,
    config: &ProtocolConfig,
) -> Result<f64> {
    let out = outcome_averaged_output(channel, alpha, config)?;
    Ok(log_overlap_with_coherent(alpha, &out)?.exp())
}

/// Random stream for sample `index`: ChaCha8 keyed by `seed`, stream `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Monte-Carlo estimate of the outcome-averaged fidelity.
///
/// Sample `i` draws from [`sample_rng`]`(seed, i)` and partial sums are
/// reduced in a fixed order, so the report is identical for any number of
/// worker threads.
pub fn mc_fidelity(
    channel: &GaussianState,
    alpha: PhasePoint,
    config: &ProtocolConfig,
    n_samples: usize,
    seed: u64,
) -> Result<FidelityReport> {
    if n_samples < MIN_MC_SAMPLES {
        return Err(invalid(format!(
            "n_samples = {n_samples} below the minimum of {MIN_MC_SAMPLES}"
        )));
    }
    let analytic = channel_fidelity(channel, alpha, config)?;
    let target = coherent_state(alpha);

    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let partials = (0..n_chunks)
        .into_par_iter()
        .map(|c| -> Result<(f64, f64)> {
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for i in c * MC_CHUNK..((c + 1) * MC_CHUNK).min(n_samples) {
                let mut rng = sample_rng(seed, i as u64);
                let (_, out) = teleport_coherent_once(channel, alpha, config, &mut rng)?;
                let f = gaussian_overlap_fidelity(&target, &out)?;
                sum += f;
                sum_sq += f * f;
            }
            Ok((sum, sum_sq))
        })
        .collect::<Result<Vec<_>>>()?;

    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(s, q), (ps, pq)| (s + ps, q + pq));
    let n = n_samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(FidelityReport {
        analytic,
        mc_estimate: mean,
        mc_stderr: (var / n).sqrt(),
        n_samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{channel_moments, channel_state, ChannelParams};
    use approx::assert_relative_eq;

    fn moments(s: f64, r_a: f64, r_b: f64, n_a: f64, n_b: f64) -> ChannelMoments {
        channel_moments(&ChannelParams::new(s, r_a, r_b, n_a, n_b).unwrap())
    }

    #[test]
    fn analytic_examples() {
        assert_relative_eq!(analytic_average_fidelity(&moments(0.0, 0.0, 0.0, 0.0, 0.0)).unwrap(), 0.5);
        let f = analytic_average_fidelity(&moments(1.0, 0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(f, 1.0 / (1.0 + (-2.0f64).exp()), epsilon = 1e-12);
        assert_relative_eq!(f, 0.880797, epsilon = 1e-6);
        let f = analytic_average_fidelity(&moments(1.0, 0.0, 1.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(f, 0.295761, epsilon = 1e-6);
        let bad = ChannelMoments { m_a: -5.0, m_b: 1.0, c_a: 0.0, c_b: 0.0 };
        assert!(matches!(analytic_average_fidelity(&bad), Err(Error::UnphysicalMoments(_))));
    }

    #[test]
    fn lossy_sender_examples() {
        for s in [0.0f64, 0.5, 2.0] {
            assert_relative_eq!(
                lossy_sender_fidelity(s, 1.0).unwrap(),
                1.0 / (1.0 + (-2.0 * s).exp()),
                epsilon = 1e-15
            );
        }
        assert_relative_eq!(lossy_sender_fidelity(40.0, 0.9).unwrap(), 0.9, epsilon = 1e-15);
        assert_relative_eq!(lossy_sender_fidelity(1.0, 0.8).unwrap(), 0.721847, epsilon = 1e-6);
        assert!(lossy_sender_fidelity(1.0, 0.0).is_err());
    }

    #[test]
    fn average_output_examples() {
        let m = moments(0.0, 0.0, 0.0, 0.0, 0.0);
        let out = average_output_state(&m, PhasePoint::new(1.0, 2.0), 1.0).unwrap();
        assert_relative_eq!(out.cov()[(0, 0)], 0.75, epsilon = 1e-15);
        let m = moments(12.0, 0.0, 0.0, 0.0, 0.0);
        let out = average_output_state(&m, PhasePoint::ORIGIN, 1.0).unwrap();
        assert!((out.cov()[(0, 0)] - 0.25).abs() < 1e-9);
        assert!(matches!(
            average_output_state(&m, PhasePoint::ORIGIN, 0.5),
            Err(Error::Unsupported(_))
        ));
        for m in [moments(0.7, 0.2, 0.05, 1.0, 0.0), moments(2.0, 0.0, 1.0, 0.0, 0.0)] {
            let a = PhasePoint::new(-0.4, 1.1);
            let out = average_output_state(&m, a, 1.0).unwrap();
            let f = gaussian_overlap_fidelity(&coherent_state(a), &out).unwrap();
            assert_relative_eq!(f, analytic_average_fidelity(&m).unwrap(), epsilon = 1e-12);
            let via_map = outcome_averaged_output(&m.to_state().unwrap(), a, &ProtocolConfig::default())
                .unwrap();
            assert!(via_map.max_abs_diff(&out) < 1e-12);
        }
    }

    #[test]
    fn unit_gain_is_alpha_independent() {
        let m = moments(1.2, 0.1, 0.3, 0.5, 1.0);
        let f0 = analytic_average_fidelity(&m).unwrap();
        for a in [PhasePoint::ORIGIN, PhasePoint::new(3.0, 2.0), PhasePoint::new(-7.0, 0.5)] {
            let f = fidelity_for_gain(&m, a, &ProtocolConfig::default()).unwrap();
            assert_relative_eq!(f, f0, epsilon = 1e-12);
        }
    }

    #[test]
    fn off_unit_gain_decays_with_amplitude() {
        let m = moments(1.0, 0.0, 0.05, 0.0, 0.0);
        for gain in [0.7, 1.3] {
            let cfg = ProtocolConfig::with_gain(gain);
            let mut last = f64::INFINITY;
            for r in [0.0, 1.0, 2.0, 5.0, 10.0, 30.0] {
                let f = fidelity_for_gain(&m, PhasePoint::new(r, 0.0), &cfg).unwrap();
                assert!(f < last);
                last = f;
            }
            assert!(last < 1e-10);
        }
    }

    #[test]
    fn lossy_sender_gain_cross_check() {
        for (s, t_a) in [(1.0, 0.8), (0.5, 0.9), (2.0, 0.6)] {
            let m = moments(s, 0.0, 0.0, 0.0, 0.0);
            let cfg = ProtocolConfig::lossy_sender(t_a);
            for a in [PhasePoint::ORIGIN, PhasePoint::new(4.0, -3.0)] {
                let f = fidelity_for_gain(&m, a, &cfg).unwrap();
                assert_relative_eq!(f, lossy_sender_fidelity(s, t_a).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_gain_output_is_centered() {
        let ch = channel_state(&ChannelParams::pure(0.8)).unwrap();
        let cfg = ProtocolConfig::with_gain(0.0);
        let alpha = PhasePoint::new(2.0, 1.0);
        let avg = outcome_averaged_output(&ch, alpha, &cfg).unwrap();
        assert_eq!(avg.mode_mean(0), PhasePoint::ORIGIN);
        assert_relative_eq!(avg.cov()[(0, 0)], 1.6f64.cosh() / 4.0, epsilon = 1e-12);
        // single runs: b's conditional mean follows the EPR partner, not α
        let mut rng = sample_rng(5, 0);
        let n = 4_000;
        let mut mean_q = 0.0;
        for _ in 0..n {
            let (_, out) = teleport_coherent_once(&ch, alpha, &cfg, &mut rng).unwrap();
            mean_q += out.mean()[0] / n as f64;
        }
        assert!(mean_q.abs() < 0.1, "{mean_q}");
    }

    #[test]
    fn single_run_is_deterministic() {
        let ch = channel_state(&ChannelParams::new(1.0, 0.1, 0.2, 0.5, 0.0).unwrap()).unwrap();
        let cfg = ProtocolConfig { displacement_transmittance: 0.95, ..Default::default() };
        let run = |seed| teleport_coherent_once(&ch, PhasePoint::new(0.3, 0.1), &cfg, &mut sample_rng(seed, 17)).unwrap();
        assert_eq!(run(1), run(1));
        assert_ne!(run(1).0, run(2).0);
    }

    #[test]
    fn classical_limit_monte_carlo() {
        let ch = channel_state(&ChannelParams::pure(0.0)).unwrap();
        let rep = mc_fidelity(&ch, PhasePoint::new(0.5, -0.5), &ProtocolConfig::default(), 100_000, 11).unwrap();
        assert_relative_eq!(rep.analytic, 0.5, epsilon = 1e-12);
        assert!((rep.mc_estimate - 0.5).abs() <= 3.0 * rep.mc_stderr, "{rep:?}");
    }

    #[test]
    fn mc_report_is_thread_count_independent() {
        let ch = channel_state(&ChannelParams::new(1.0, 0.0, 0.05, 0.0, 0.0).unwrap()).unwrap();
        let cfg = ProtocolConfig::default();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_fidelity(&ch, PhasePoint::new(1.0, 0.0), &cfg, 5_000, 3).unwrap())
        };
        assert_eq!(run(1), run(4));
        assert!(mc_fidelity(&ch, PhasePoint::ORIGIN, &cfg, 999, 3).is_err());
    }
}
