//! Flat `key = value` configuration files and command-line overrides.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::CliError;
use crate::channel::ChannelParams;
use crate::gaussian::PhasePoint;
use crate::teleport::{ProtocolConfig, MIN_MC_SAMPLES};

/// Seed used when neither a flag, the config file nor `CVTELEPORT_SEED`
/// provides one.
pub const DEFAULT_SEED: u64 = 42;

pub const SEED_ENV: &str = "CVTELEPORT_SEED";

/// Channel parameter swept by `cvteleport sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    S,
    RA,
    RB,
    NBarA,
    NBarB,
}

impl SweepVar {
    pub fn key(&self) -> &'static str {
        match self {
            SweepVar::S => "s",
            SweepVar::RA => "R_a",
            SweepVar::RB => "R_b",
            SweepVar::NBarA => "n_bar_a",
            SweepVar::NBarB => "n_bar_b",
        }
    }

    pub fn apply(&self, params: ChannelParams, value: f64) -> ChannelParams {
        let mut p = params;
        match self {
            SweepVar::S => p.s = value,
            SweepVar::RA => p.r_a = value,
            SweepVar::RB => p.r_b = value,
            SweepVar::NBarA => p.n_bar_a = value,
            SweepVar::NBarB => p.n_bar_b = value,
        }
        p
    }

    fn check(&self, value: f64) -> Result<(), String> {
        let ok = match self {
            SweepVar::RA | SweepVar::RB => (0.0..=1.0).contains(&value),
            _ => value >= 0.0 && value.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            let allowed = match self {
                SweepVar::RA | SweepVar::RB => "[0, 1]",
                _ => "[0, ∞)",
            };
            Err(format!("{} = {value} outside {allowed}", self.key()))
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "s" => Ok(SweepVar::S),
            "R_a" | "ra" => Ok(SweepVar::RA),
            "R_b" | "rb" => Ok(SweepVar::RB),
            "n_bar_a" | "na" => Ok(SweepVar::NBarA),
            "n_bar_b" | "nb" => Ok(SweepVar::NBarB),
            other => Err(format!(
                "unknown sweep variable `{other}` (expected s, R_a, R_b, n_bar_a or n_bar_b)"
            )),
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// `start:stop:steps`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.stop - self.start;
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(move |i| {
            if i + 1 == self.steps {
                self.stop
            } else {
                self.start + span * i as f64 / last
            }
        })
    }
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || format!("range `{s}` is not of the form start:stop:steps");
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(SweepRange {
            start: parts[0].parse().map_err(|_| bad())?,
            stop: parts[1].parse().map_err(|_| bad())?,
            steps: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

/// Every recognized setting; `None` means "not given at this layer".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub s: Option<f64>,
    pub r_a: Option<f64>,
    pub r_b: Option<f64>,
    pub n_bar_a: Option<f64>,
    pub n_bar_b: Option<f64>,
    pub gain: Option<f64>,
    pub eta: Option<f64>,
    pub t_disp: Option<f64>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub var: Option<SweepVar>,
    pub range: Option<SweepRange>,
    pub mc: Option<usize>,
    pub seed: Option<u64>,
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, String> {
    raw.parse()
        .map_err(|_| format!("cannot parse value `{raw}` for `{key}`"))
}

impl Settings {
    fn set(&mut self, key: &str, raw: &str) -> Result<(), String> {
        match key {
            "s" => self.s = Some(parse_value(key, raw)?),
            "R_a" | "ra" => self.r_a = Some(parse_value(key, raw)?),
            "R_b" | "rb" => self.r_b = Some(parse_value(key, raw)?),
            "n_bar_a" | "na" => self.n_bar_a = Some(parse_value(key, raw)?),
            "n_bar_b" | "nb" => self.n_bar_b = Some(parse_value(key, raw)?),
            "gain" => self.gain = Some(parse_value(key, raw)?),
            "eta" => self.eta = Some(parse_value(key, raw)?),
            "T_disp" | "tdisp" => self.t_disp = Some(parse_value(key, raw)?),
            "alpha_re" => self.alpha_re = Some(parse_value(key, raw)?),
            "alpha_im" => self.alpha_im = Some(parse_value(key, raw)?),
            "var" => self.var = Some(raw.parse()?),
            "range" => self.range = Some(raw.parse()?),
            "mc" | "n_samples" => self.mc = Some(parse_value(key, raw)?),
            "seed" => self.seed = Some(parse_value(key, raw)?),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_str(text: &str, origin: &str) -> Result<Settings, CliError> {
        let mut out = Settings::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{origin}:{}: expected `key = value`", idx + 1))
            })?;
            out.set(key.trim(), value.trim())
                .map_err(|e| CliError::Usage(format!("{origin}:{}: {e}", idx + 1)))?;
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => {
                CliError::Usage(format!("config not found: {}", path.display()))
            }
            _ => CliError::Usage(format!("cannot read config {}: {e}", path.display())),
        })?;
        Settings::parse_str(&text, &path.display().to_string())
    }

    /// Values from `over` win wherever they are set.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            s: over.s.or(self.s),
            r_a: over.r_a.or(self.r_a),
            r_b: over.r_b.or(self.r_b),
            n_bar_a: over.n_bar_a.or(self.n_bar_a),
            n_bar_b: over.n_bar_b.or(self.n_bar_b),
            gain: over.gain.or(self.gain),
            eta: over.eta.or(self.eta),
            t_disp: over.t_disp.or(self.t_disp),
            alpha_re: over.alpha_re.or(self.alpha_re),
            alpha_im: over.alpha_im.or(self.alpha_im),
            var: over.var.or(self.var),
            range: over.range.or(self.range),
            mc: over.mc.or(self.mc),
            seed: over.seed.or(self.seed),
        }
    }

    pub fn channel(&self) -> Result<ChannelParams, CliError> {
        let p = ChannelParams {
            s: self.s.unwrap_or(0.0),
            r_a: self.r_a.unwrap_or(0.0),
            r_b: self.r_b.unwrap_or(0.0),
            n_bar_a: self.n_bar_a.unwrap_or(0.0),
            n_bar_b: self.n_bar_b.unwrap_or(0.0),
        };
        p.validate().map_err(|e| CliError::Usage(strip_prefix(&e.to_string())))?;
        Ok(p)
    }

    pub fn protocol(&self) -> Result<ProtocolConfig, CliError> {
        let gain = self.gain.unwrap_or(1.0);
        if !(gain >= 0.0 && gain.is_finite()) {
            return Err(CliError::Usage(format!("gain = {gain} must be finite and >= 0")));
        }
        let eta = self.eta.unwrap_or(1.0);
        let t_disp = self.t_disp.unwrap_or(1.0);
        for (key, t) in [("eta", eta), ("T_disp", t_disp)] {
            if !(t > 0.0 && t <= 1.0) {
                return Err(CliError::Usage(format!("{key} = {t} outside (0, 1]")));
            }
        }
        Ok(ProtocolConfig {
            gain,
            sender_transmittance: eta,
            displacement_transmittance: t_disp,
        })
    }

    pub fn alpha(&self) -> Result<PhasePoint, CliError> {
        let a = PhasePoint::new(self.alpha_re.unwrap_or(0.0), self.alpha_im.unwrap_or(0.0));
        if !a.is_finite() {
            return Err(CliError::Usage("alpha must be finite".into()));
        }
        Ok(a)
    }

    /// Flag or config seed, else `CVTELEPORT_SEED`, else [`DEFAULT_SEED`].
    pub fn resolve_seed(&self, env_seed: Option<&str>) -> Result<u64, CliError> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        match env_seed {
            Some(raw) => raw.trim().parse().map_err(|_| {
                CliError::Usage(format!("{SEED_ENV} = `{raw}` is not an unsigned integer"))
            }),
            None => Ok(DEFAULT_SEED),
        }
    }
}

fn strip_prefix(msg: &str) -> String {
    msg.strip_prefix("invalid argument: ").unwrap_or(msg).to_string()
}

/// Optional Monte-Carlo column settings for a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSpec {
    pub n_samples: usize,
    pub seed: u64,
}

/// Validated sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub channel: ChannelParams,
    pub var: SweepVar,
    pub range: SweepRange,
    pub protocol: ProtocolConfig,
    pub alpha: PhasePoint,
    pub mc: Option<McSpec>,
}

impl SweepSpec {
    pub fn from_settings(settings: &Settings, env_seed: Option<&str>) -> Result<SweepSpec, CliError> {
        let var = settings.var.unwrap_or(SweepVar::S);
        let range = settings.range.unwrap_or(SweepRange {
            start: 0.0,
            stop: 5.0,
            steps: 101,
        });
        // the swept key's fixed value is irrelevant, so only validate the others
        let mut fixed = settings.clone();
        match var {
            SweepVar::S => fixed.s = None,
            SweepVar::RA => fixed.r_a = None,
            SweepVar::RB => fixed.r_b = None,
            SweepVar::NBarA => fixed.n_bar_a = None,
            SweepVar::NBarB => fixed.n_bar_b = None,
        }
        let channel = fixed.channel()?;
        let spec = SweepSpec {
            channel,
            var,
            range,
            protocol: settings.protocol()?,
            alpha: settings.alpha()?,
            mc: match settings.mc {
                Some(n) => Some(McSpec {
                    n_samples: n,
                    seed: settings.resolve_seed(env_seed)?,
                }),
                None => None,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let r = &self.range;
        if r.steps < 2 {
            return Err(CliError::Usage(format!("range: steps = {} must be >= 2", r.steps)));
        }
        if !(r.start < r.stop) {
            return Err(CliError::Usage(format!(
                "range: start {} must be < stop {}",
                r.start, r.stop
            )));
        }
        for v in [r.start, r.stop] {
            self.var
                .check(v)
                .map_err(|e| CliError::Usage(format!("range: {e}")))?;
        }
        if let Some(mc) = self.mc {
            if mc.n_samples < MIN_MC_SAMPLES {
                return Err(CliError::Usage(format!(
                    "mc = {} below the minimum of {MIN_MC_SAMPLES}",
                    mc.n_samples
                )));
            }
        }
        Ok(())
    }
}
