use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{CliError, MapSpec};
use crate::dynamics::default_grid_per_axis;
use crate::exactalg::serde_int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Semicascade,
    Cascade,
    Certify,
    Simulate,
    Frequencies,
    Sidon,
    Sweep,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Semicascade => "semicascade",
            CommandKind::Cascade => "cascade",
            CommandKind::Certify => "certify",
            CommandKind::Simulate => "simulate",
            CommandKind::Frequencies => "frequencies",
            CommandKind::Sidon => "sidon",
            CommandKind::Sweep => "sweep",
        }
    }

    fn allowed_options(self) -> &'static [&'static str] {
        match self {
            CommandKind::Semicascade | CommandKind::Cascade | CommandKind::Certify => &[],
            CommandKind::Simulate => &["grid", "iters", "tol"],
            CommandKind::Frequencies => &["grid", "iters", "bound"],
            CommandKind::Sidon => &["grid", "seed", "count", "trials", "dim"],
            CommandKind::Sweep => &["range", "dim"],
        }
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Command options; after validation every option the command uses is filled in.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_bigint")]
    pub bound: Option<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

mod opt_bigint {
    use super::serde_int::Int;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(Int).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<Int>::deserialize(d)?.map(|i| i.0))
    }
}

/// Inclusive entry range `LO..HI`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::InvalidOption(format!("range must look like LO..HI, got {s:?}"));
        let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(CliError::InvalidOption(format!("empty range {lo}..{hi}")));
        }
        Ok(Range { lo, hi })
    }
}

impl Options {
    fn set_names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let flags = [
            ("grid", self.grid.is_some()),
            ("iters", self.iters.is_some()),
            ("tol", self.tol.is_some()),
            ("seed", self.seed.is_some()),
            ("bound", self.bound.is_some()),
            ("range", self.range.is_some()),
            ("dim", self.dim.is_some()),
            ("count", self.count.is_some()),
            ("trials", self.trials.is_some()),
        ];
        for (name, set) in flags {
            if set {
                out.push(name);
            }
        }
        out
    }
}

/// Where `sidon` takes its frequencies from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SidonSource {
    /// Frequency orbit of `u` (default `e_1`) under the input matrix.
    Orbit,
    /// `(k, k^2, ..., k^dim)` for `k >= 1`.
    Moment,
    /// A stream file, one vector per line.
    File { path: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub command: CommandKind,
    pub input: Option<MapSpec>,
    pub sidon_source: Option<SidonSource>,
    /// Contents of the stream file for `SidonSource::File`.
    pub stream_text: Option<String>,
    pub options: Options,
}

pub const DEFAULT_SIMULATE_ITERS: usize = 50;
pub const DEFAULT_FREQUENCY_ITERS: usize = 200;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_BOUND: u64 = 1_000_000;
pub const DEFAULT_SIDON_COUNT: usize = 12;
pub const DEFAULT_SIDON_TRIALS: usize = 200;

impl JobSpec {
    /// Validates options against the command and fills in defaults.
    pub fn new(
        command: CommandKind,
        input: Option<MapSpec>,
        sidon_source: Option<SidonSource>,
        stream_text: Option<String>,
        mut options: Options,
    ) -> Result<JobSpec, CliError> {
        let allowed = command.allowed_options();
        if let Some(bad) = options.set_names().into_iter().find(|n| !allowed.contains(n)) {
            return Err(CliError::InvalidOption(format!("--{bad} does not apply to `{command}`")));
        }
        let positive = |name: &str, v: Option<usize>| match v {
            Some(0) => Err(CliError::InvalidOption(format!("--{name} must be positive"))),
            _ => Ok(()),
        };
        positive("grid", options.grid)?;
        positive("iters", options.iters)?;
        positive("count", options.count)?;
        positive("trials", options.trials)?;
        positive("dim", options.dim)?;
        if let Some(t) = options.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::InvalidOption(format!("--tol must be a positive number, got {t}")));
            }
        }
        if options.bound.as_ref().is_some_and(|b| b.sign() == num_bigint::Sign::Minus) {
            return Err(CliError::InvalidOption("--bound must be nonnegative".into()));
        }

        let needs_input = !matches!(command, CommandKind::Sweep | CommandKind::Sidon);
        if needs_input && input.is_none() {
            return Err(CliError::Malformed(format!("`{command}` needs --input")));
        }
        if command == CommandKind::Sweep && input.is_some() {
            return Err(CliError::InvalidOption("`sweep` takes no --input".into()));
        }
        let d = input.as_ref().map(|i| i.d);

        let mut sidon_source = sidon_source;
        match command {
            CommandKind::Simulate => {
                options.iters.get_or_insert(DEFAULT_SIMULATE_ITERS);
                options.tol.get_or_insert(DEFAULT_TOL);
                options.grid.get_or_insert(default_grid_per_axis(d.expect("checked")));
            }
            CommandKind::Frequencies => {
                options.iters.get_or_insert(DEFAULT_FREQUENCY_ITERS);
                options.bound.get_or_insert(BigInt::from(DEFAULT_BOUND));
                options.grid.get_or_insert(default_grid_per_axis(d.expect("checked")));
            }
            CommandKind::Sidon => {
                let source = match (sidon_source.take(), &input) {
                    (Some(SidonSource::Orbit), None) | (None, None) => {
                        return Err(CliError::Malformed("`sidon` needs --input, --stream or --generator".into()))
                    }
                    (Some(SidonSource::Orbit), Some(_)) | (None, Some(_)) => SidonSource::Orbit,
                    (Some(_), Some(_)) => {
                        return Err(CliError::InvalidOption("give either --input or a stream source, not both".into()))
                    }
                    (Some(s), None) => s,
                };
                let dim = match &source {
                    SidonSource::Moment => *options.dim.get_or_insert(2),
                    _ if options.dim.is_some() => {
                        return Err(CliError::InvalidOption("--dim only applies to --generator moment".into()))
                    }
                    SidonSource::Orbit => d.expect("orbit source has input"),
                    // stream dimension is read from the file; only the grid default depends on it
                    SidonSource::File { .. } => 1,
                };
                if matches!(source, SidonSource::File { .. }) && stream_text.is_none() {
                    return Err(CliError::Io("stream file contents missing".into()));
                }
                options.count.get_or_insert(DEFAULT_SIDON_COUNT);
                options.trials.get_or_insert(DEFAULT_SIDON_TRIALS);
                options.seed.get_or_insert(0);
                options.grid.get_or_insert(default_grid_per_axis(dim));
                sidon_source = Some(source);
            }
            CommandKind::Sweep => {
                options.range.get_or_insert(Range { lo: -1, hi: 1 });
                options.dim.get_or_insert(2);
            }
            _ => {}
        }
        if command != CommandKind::Sidon && sidon_source.is_some() {
            return Err(CliError::InvalidOption("stream sources only apply to `sidon`".into()));
        }
        Ok(JobSpec { command, input, sidon_source, stream_text, options })
    }
}
