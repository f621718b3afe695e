//! Layered run settings: command-line flags over a `key = value` config file
//! over built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use olcqubo::qaoa::{NelderMeadConfig, QaoaConfig};
use olcqubo::qubo::Penalties;

use crate::Failure;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "OLCQUBO_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "olcqubo-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Sa,
    Qaoa,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Sa => "sa",
            Backend::Qaoa => "qaoa",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Raw,
    Normalized,
}

impl Scale {
    pub fn name(self) -> &'static str {
        match self {
            Scale::Raw => "raw",
            Scale::Normalized => "normalized",
        }
    }
}

/// Every tunable; each is optional so layers can be merged.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Config file of `key = value` lines (keys are the long flag names).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Substitutions tolerated inside an overlap.
    #[arg(long)]
    pub max_mismatch: Option<usize>,
    /// Diagonal penalty `a` (≤ 0).
    #[arg(long, allow_hyphen_values = true)]
    pub penalty_a: Option<f64>,
    /// One-node-per-slot penalty `b` (≥ 0).
    #[arg(long)]
    pub penalty_b: Option<f64>,
    /// One-slot-per-node penalty `c` (≥ 0).
    #[arg(long)]
    pub penalty_c: Option<f64>,
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Annealing sweeps per read.
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Annealing reads (independent restarts).
    #[arg(long)]
    pub reads: Option<usize>,
    #[arg(long)]
    pub beta_start: Option<f64>,
    #[arg(long)]
    pub beta_end: Option<f64>,
    /// QAOA depth p.
    #[arg(long)]
    pub layers: Option<usize>,
    /// QAOA random restarts.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Nelder-Mead iteration cap per restart.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Nelder-Mead f-spread tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Constraint weight `w` of the QAOA cost Hamiltonian.
    #[arg(long)]
    pub qaoa_weight: Option<f64>,
    /// Basis states kept in the QAOA report.
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Energy histogram bins.
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (default: $OLCQUBO_OUTPUT_DIR, else ./olcqubo-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, Failure> {
    value.parse().map_err(|_| {
        Failure::validation(format!(
            "config line {line}: invalid value {value:?} for {key}"
        ))
    })
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str, line: usize) -> Result<T, Failure> {
    T::from_str(value, true).map_err(|_| {
        Failure::validation(format!(
            "config line {line}: invalid value {value:?} for {key}"
        ))
    })
}

impl Settings {
    /// Parses config-file text. Blank lines and `#` comments are skipped;
    /// keys may use `-` or `_`.
    pub fn parse_file(text: &str) -> Result<Self, Failure> {
        let mut s = Settings::default();
        let mut seen = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| {
                Failure::validation(format!("config line {line}: expected `key = value`"))
            })?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            if let Some(first) = seen.insert(key.clone(), line) {
                return Err(Failure::validation(format!(
                    "config line {line}: {key} already set on line {first}"
                )));
            }
            match key.as_str() {
                "max-mismatch" => {
                    if value.starts_with('-') {
                        return Err(Failure::validation(format!(
                            "config line {line}: max-mismatch must be non-negative"
                        )));
                    }
                    s.max_mismatch = Some(parse_value(&key, value, line)?)
                }
                "penalty-a" => s.penalty_a = Some(parse_value(&key, value, line)?),
                "penalty-b" => s.penalty_b = Some(parse_value(&key, value, line)?),
                "penalty-c" => s.penalty_c = Some(parse_value(&key, value, line)?),
                "scale" => s.scale = Some(parse_enum(&key, value, line)?),
                "backend" => s.backend = Some(parse_enum(&key, value, line)?),
                "sweeps" => s.sweeps = Some(parse_value(&key, value, line)?),
                "reads" => s.reads = Some(parse_value(&key, value, line)?),
                "beta-start" => s.beta_start = Some(parse_value(&key, value, line)?),
                "beta-end" => s.beta_end = Some(parse_value(&key, value, line)?),
                "layers" => s.layers = Some(parse_value(&key, value, line)?),
                "restarts" => s.restarts = Some(parse_value(&key, value, line)?),
                "max-iterations" => s.max_iterations = Some(parse_value(&key, value, line)?),
                "tolerance" => s.tolerance = Some(parse_value(&key, value, line)?),
                "qaoa-weight" => s.qaoa_weight = Some(parse_value(&key, value, line)?),
                "top-k" => s.top_k = Some(parse_value(&key, value, line)?),
                "bins" => s.bins = Some(parse_value(&key, value, line)?),
                "seed" => s.seed = Some(parse_value(&key, value, line)?),
                "out" => s.out = Some(PathBuf::from(value)),
                _ => {
                    return Err(Failure::validation(format!(
                        "config line {line}: unknown key {key:?}"
                    )))
                }
            }
        }
        Ok(s)
    }

    /// Field-wise `self` over `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        Settings {
            config: self.config.or(lower.config),
            max_mismatch: self.max_mismatch.or(lower.max_mismatch),
            penalty_a: self.penalty_a.or(lower.penalty_a),
            penalty_b: self.penalty_b.or(lower.penalty_b),
            penalty_c: self.penalty_c.or(lower.penalty_c),
            scale: self.scale.or(lower.scale),
            backend: self.backend.or(lower.backend),
            sweeps: self.sweeps.or(lower.sweeps),
            reads: self.reads.or(lower.reads),
            beta_start: self.beta_start.or(lower.beta_start),
            beta_end: self.beta_end.or(lower.beta_end),
            layers: self.layers.or(lower.layers),
            restarts: self.restarts.or(lower.restarts),
            max_iterations: self.max_iterations.or(lower.max_iterations),
            tolerance: self.tolerance.or(lower.tolerance),
            qaoa_weight: self.qaoa_weight.or(lower.qaoa_weight),
            top_k: self.top_k.or(lower.top_k),
            bins: self.bins.or(lower.bins),
            seed: self.seed.or(lower.seed),
            out: self.out.or(lower.out),
        }
    }

    /// Merges in the config file named by `--config`, if any.
    pub fn with_file(self) -> Result<Settings, Failure> {
        match &self.config {
            None => Ok(self),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::io(format!("cannot read config {}: {e}", path.display()))
                })?;
                Ok(self.over(Settings::parse_file(&text)?))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaSettings {
    pub sweeps: Option<usize>,
    pub reads: Option<usize>,
    pub beta_start: Option<f64>,
    pub beta_end: Option<f64>,
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub max_mismatch: usize,
    pub penalties: Penalties,
    pub scale: Scale,
    pub backend: Backend,
    pub sa: SaSettings,
    pub qaoa: QaoaConfig,
    pub qaoa_weight: f64,
    pub bins: usize,
    pub seed: u64,
    pub output: PathBuf,
}

pub const DEFAULT_QAOA_WEIGHT: f64 = 100_000.0;
pub const DEFAULT_QAOA_RESTARTS: usize = 4;
pub const DEFAULT_QAOA_ITERATIONS: usize = 200;
pub const DEFAULT_BINS: usize = 20;

impl PipelineConfig {
    pub fn resolve(
        input: &Path,
        settings: Settings,
        default_backend: Backend,
    ) -> Result<Self, Failure> {
        let s = settings.with_file()?;
        let scale = s.scale.unwrap_or(Scale::Raw);
        let base = match scale {
            Scale::Raw => Penalties::default(),
            Scale::Normalized => Penalties::normalized_default(),
        };
        let penalties = Penalties {
            a: s.penalty_a.unwrap_or(base.a),
            b: s.penalty_b.unwrap_or(base.b),
            c: s.penalty_c.unwrap_or(base.c),
        };
        penalties.validate().map_err(Failure::from)?;
        let seed = s.seed.unwrap_or(0);
        let qaoa = QaoaConfig {
            layers: s.layers.unwrap_or(1),
            initial_parameters: None,
            optimizer: NelderMeadConfig {
                max_iterations: s.max_iterations.unwrap_or(DEFAULT_QAOA_ITERATIONS),
                tolerance: s.tolerance.unwrap_or(NelderMeadConfig::default().tolerance),
                ..NelderMeadConfig::default()
            },
            restarts: s.restarts.unwrap_or(DEFAULT_QAOA_RESTARTS),
            seed,
            top_k: s.top_k.unwrap_or(QaoaConfig::default().top_k),
        };
        qaoa.validate().map_err(Failure::from)?;
        let qaoa_weight = s.qaoa_weight.unwrap_or(DEFAULT_QAOA_WEIGHT);
        if !qaoa_weight.is_finite() || qaoa_weight < 0.0 {
            return Err(Failure::validation(format!(
                "qaoa-weight must be finite and non-negative, got {qaoa_weight}"
            )));
        }
        let sa = SaSettings {
            sweeps: s.sweeps,
            reads: s.reads,
            beta_start: s.beta_start,
            beta_end: s.beta_end,
        };
        for (name, v) in [("sweeps", sa.sweeps), ("reads", sa.reads)] {
            if v == Some(0) {
                return Err(Failure::validation(format!("{name} must be positive")));
            }
        }
        for (name, v) in [("beta-start", sa.beta_start), ("beta-end", sa.beta_end)] {
            if let Some(b) = v {
                if !(b.is_finite() && b > 0.0) {
                    return Err(Failure::validation(format!(
                        "{name} must be positive, got {b}"
                    )));
                }
            }
        }
        let bins = s.bins.unwrap_or(DEFAULT_BINS);
        if bins == 0 {
            return Err(Failure::validation("bins must be positive"));
        }
        let output = s
            .out
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        Ok(Self {
            input: input.to_path_buf(),
            max_mismatch: s.max_mismatch.unwrap_or(0),
            penalties,
            scale,
            backend: s.backend.unwrap_or(default_backend),
            sa,
            qaoa,
            qaoa_weight,
            bins,
            seed,
            output,
        })
    }

    /// Settings echoed into reports.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "max_mismatch": self.max_mismatch,
            "penalties": {"a": self.penalties.a, "b": self.penalties.b, "c": self.penalties.c},
            "scale": self.scale.name(),
            "backend": self.backend.name(),
            "sa": {
                "sweeps": self.sa.sweeps,
                "reads": self.sa.reads,
                "beta_start": self.sa.beta_start,
                "beta_end": self.sa.beta_end,
            },
            "qaoa": {
                "layers": self.qaoa.layers,
                "restarts": self.qaoa.restarts,
                "max_iterations": self.qaoa.optimizer.max_iterations,
                "tolerance": self.qaoa.optimizer.tolerance,
                "weight": self.qaoa_weight,
                "top_k": self.qaoa.top_k,
            },
            "bins": self.bins,
            "seed": self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing() {
        let s = Settings::parse_file(
            "# comment\nbackend = SA\nmax_mismatch = 1\npenalty-a = -2.5  # trailing\n\nseed=9\n",
        )
        .unwrap();
        assert_eq!(s.backend, Some(Backend::Sa));
        assert_eq!(s.max_mismatch, Some(1));
        assert_eq!(s.penalty_a, Some(-2.5));
        assert_eq!(s.seed, Some(9));
    }

    #[test]
    fn file_errors() {
        for text in [
            "nonsense",
            "colour = red",
            "seed = x",
            "max-mismatch = -1",
            "seed=1\nseed=2",
        ] {
            let err = Settings::parse_file(text).unwrap_err();
            assert_eq!(err.code, 2, "{text}");
        }
    }

    #[test]
    fn flags_override_file() {
        let flags = Settings {
            seed: Some(5),
            ..Settings::default()
        };
        let file = Settings::parse_file("seed = 1\nsweeps = 7").unwrap();
        let merged = flags.over(file);
        assert_eq!(merged.seed, Some(5));
        assert_eq!(merged.sweeps, Some(7));
    }

    #[test]
    fn defaults_and_validation() {
        let c = PipelineConfig::resolve(
            Path::new("x"),
            Settings {
                out: Some("o".into()),
                ..Settings::default()
            },
            Backend::Exact,
        )
        .unwrap();
        assert_eq!(c.penalties, Penalties::default());
        assert_eq!(c.backend, Backend::Exact);
        let normalized = PipelineConfig::resolve(
            Path::new("x"),
            Settings {
                scale: Some(Scale::Normalized),
                ..Settings::default()
            },
            Backend::Exact,
        )
        .unwrap();
        assert_eq!(normalized.penalties, Penalties::normalized_default());
        let bad = Settings {
            penalty_b: Some(-1.0),
            ..Settings::default()
        };
        assert_eq!(
            PipelineConfig::resolve(Path::new("x"), bad, Backend::Exact)
                .unwrap_err()
                .code,
            2
        );
    }
}
