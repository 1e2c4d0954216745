//! Parameter sweeps: one CSV row per grid point.

use std::io::Write;

use super::config::SweepSpec;
use super::format::fmt_float;
use crate::channel::{channel_moments, channel_state, is_separable, ChannelMoments};
use crate::teleport::{analytic_average_fidelity, channel_fidelity, mc_fidelity, ProtocolConfig};
use crate::Result;

pub const CSV_HEADER: &str =
    "sweep_value,m_a,m_b,c_a,c_b,separable,fidelity_analytic,fidelity_mc,mc_stderr";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub moments: ChannelMoments,
    pub separable: bool,
    pub fidelity_analytic: f64,
    /// `(estimate, stderr)` when Monte Carlo is enabled.
    pub mc: Option<(f64, f64)>,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let m = &self.moments;
        let (mc, se) = match self.mc {
            Some((est, se)) => (fmt_float(est), fmt_float(se)),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt_float(self.sweep_value),
            fmt_float(m.m_a),
            fmt_float(m.m_b),
            fmt_float(m.c_a),
            fmt_float(m.c_b),
            u8::from(self.separable),
            fmt_float(self.fidelity_analytic),
            mc,
            se
        )
    }
}

/// Evaluates every grid point. Row `i` of a Monte-Carlo sweep uses seed
/// `seed + i`.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let unit = spec.protocol == ProtocolConfig::default();
    spec.range
        .values()
        .enumerate()
        .map(|(i, v)| {
            let params = spec.var.apply(spec.channel, v);
            params.validate()?;
            let moments = channel_moments(&params);
            let verdict = is_separable(&moments);
            let needs_state = !unit || spec.mc.is_some();
            let state = if needs_state { Some(channel_state(&params)?) } else { None };
            let fidelity_analytic = match &state {
                Some(st) if !unit => channel_fidelity(st, spec.alpha, &spec.protocol)?,
                _ => analytic_average_fidelity(&moments)?,
            };
            let mc = match (spec.mc, &state) {
                (Some(mc), Some(st)) => {
                    let seed = mc.seed.wrapping_add(i as u64);
                    let r = mc_fidelity(st, spec.alpha, &spec.protocol, mc.n_samples, seed)?;
                    Some((r.mc_estimate, r.mc_stderr))
                }
                _ => None,
            };
            Ok(SweepRow {
                sweep_value: v,
                moments,
                separable: verdict.separable,
                fidelity_analytic,
                mc,
            })
        })
        .collect()
}

pub fn write_csv(rows: &[SweepRow], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}
