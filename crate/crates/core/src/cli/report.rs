use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{CliError, CommandKind, MapSpec, Options, SidonSource};
use crate::dynamics::{ConvergenceReport, EscapeReport, FrequencyOrbit, TorusPoint};
use crate::exactalg::serde_int;
use crate::sidon::SidonReport;
use crate::tameness::{OracleResult, SweepSummary, TamenessCertificate, UntameWitness, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(CliError::InvalidOption(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo { name: "tame".into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub class: String,
    pub message: String,
}

impl From<&CliError> for ErrorInfo {
    fn from(e: &CliError) -> Self {
        ErrorInfo { class: e.class().into(), message: e.to_string() }
    }
}

/// Result of `certify`: the decider's certificate cross-checked against the
/// brute-force oracle and the independent certificate checker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyResult {
    pub certificate: TamenessCertificate,
    pub oracle: OracleResult,
    pub oracle_agrees: bool,
    pub certificate_valid: bool,
    /// Cascade certificate when `|det A| = 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade: Option<TamenessCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade_valid: Option<bool>,
    /// Whether the claim in the input holds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim_valid: Option<bool>,
    /// Whether the claim is also the minimal one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim_minimal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulateExact {
    pub certificate: TamenessCertificate,
    pub iters: usize,
    pub grid_points: usize,
    pub subsequence: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateApprox {
    pub orbit: Vec<TorusPoint>,
    pub max_deviation: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub exact: SimulateExact,
    pub approximate: SimulateApprox,
}

impl SimulateResult {
    pub fn convergence(&self) -> ConvergenceReport {
        ConvergenceReport { subsequence: self.exact.subsequence.clone(), max_deviation: self.approximate.max_deviation }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyExact {
    pub certificate: TamenessCertificate,
    #[serde(with = "serde_int::scalar")]
    pub bound: BigInt,
    pub escape: EscapeReport,
    pub orbit: FrequencyOrbit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyApprox {
    pub grid: usize,
    /// Largest deviation of the grid average of `e_lambda` from its exact value
    /// over all orbit terms.
    pub max_fourier_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyResult {
    pub exact: FrequencyExact,
    pub approximate: FrequencyApprox,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidonExact {
    #[serde(with = "serde_int::vecvec")]
    pub selected: Vec<Vec<BigInt>>,
    pub scanned: usize,
    pub quasi_independence_checked_up_to: usize,
    pub quasi_independent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidonApprox {
    pub estimated_ratio: f64,
    pub trials: usize,
    pub grid: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidonResult {
    pub exact: SidonExact,
    pub approximate: SidonApprox,
}

impl SidonResult {
    pub fn from_report(r: SidonReport, grid: usize, seed: u64) -> Self {
        SidonResult {
            approximate: SidonApprox {
                estimated_ratio: r.estimated_ratio.unwrap_or(f64::NAN),
                trials: r.trials,
                grid,
                seed,
            },
            exact: SidonExact {
                selected: r.selected,
                scanned: r.scanned,
                quasi_independence_checked_up_to: r.quasi_independence_checked_up_to,
                quasi_independent: r.quasi_independent,
            },
        }
    }
}

/// Command-specific payload. Exact data never shares a section with floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResultBody {
    Decision { certificate: TamenessCertificate },
    Certify(CertifyResult),
    Simulate(SimulateResult),
    Frequencies(FrequencyResult),
    Sidon(SidonResult),
    Sweep(SweepSummary),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<MapSpec>,
    pub options: Options,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sidon_source: Option<SidonSource>,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub elapsed_us: u64,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text(report),
    }
}

fn text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error [{}]: {}", e.class, e.message);
        return out;
    }
    match r.result.as_ref().expect("ok report has a result") {
        ResultBody::Decision { certificate } => describe_certificate(&mut out, certificate),
        ResultBody::Certify(c) => {
            describe_certificate(&mut out, &c.certificate);
            let o = &c.oracle;
            let _ = writeln!(
                out,
                "oracle: {}{}",
                verdict_word(o.verdict),
                o.minimal_pair.map(|(p, q)| format!(" with (p, q) = ({p}, {q})")).unwrap_or_default()
            );
            let _ = writeln!(out, "oracle agrees: {}", yes_no(c.oracle_agrees));
            let _ = writeln!(out, "certificate valid: {}", yes_no(c.certificate_valid));
            if let Some(cascade) = &c.cascade {
                describe_certificate(&mut out, cascade);
            }
            if let Some(v) = c.claim_valid {
                let _ = writeln!(out, "claim valid: {}", yes_no(v));
            }
            if let Some(v) = c.claim_minimal {
                let _ = writeln!(out, "claim minimal: {}", yes_no(v));
            }
        }
        ResultBody::Simulate(s) => {
            describe_certificate(&mut out, &s.exact.certificate);
            let _ = writeln!(
                out,
                "convergent subsequence over n < {} ({} grid points): {:?}",
                s.exact.iters, s.exact.grid_points, s.exact.subsequence
            );
            let _ = writeln!(out, "max deviation: {:e} (tol {:e})", s.approximate.max_deviation, s.approximate.tol);
        }
        ResultBody::Frequencies(f) => {
            describe_certificate(&mut out, &f.exact.certificate);
            let terms = f.exact.orbit.terms.len();
            match f.exact.escape.first_n {
                Some(n) => {
                    let _ = writeln!(out, "frequency orbit escapes bound {} at n = {n}", f.exact.bound);
                }
                None => {
                    let _ = writeln!(out, "frequency orbit stays within bound {} for n < {terms}", f.exact.bound);
                }
            }
            let _ = writeln!(
                out,
                "max Fourier identity error on {}-point grid: {:e}",
                f.approximate.grid, f.approximate.max_fourier_error
            );
        }
        ResultBody::Sidon(s) => {
            let _ =
                writeln!(out, "selected {} frequencies after scanning {}:", s.exact.selected.len(), s.exact.scanned);
            for v in &s.exact.selected {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "  ({})", parts.join(", "));
            }
            let _ = writeln!(
                out,
                "quasi-independent (first {}): {}",
                s.exact.quasi_independence_checked_up_to,
                yes_no(s.exact.quasi_independent)
            );
            let _ = writeln!(
                out,
                "estimated Sidon ratio: {:.6} ({} trials, grid {}, seed {})",
                s.approximate.estimated_ratio, s.approximate.trials, s.approximate.grid, s.approximate.seed
            );
        }
        ResultBody::Sweep(s) => {
            let _ = writeln!(
                out,
                "{} matrices of size {}x{} with entries in {}..{}: {} TAME, {} UNTAME",
                s.count,
                s.d,
                s.d,
                s.lo,
                s.hi,
                s.tame_count,
                s.count - s.tame_count
            );
            let _ = writeln!(out, "decider agrees with oracle: {}", yes_no(s.all_agree));
            let _ = writeln!(out, "all certificates valid: {}", yes_no(s.all_certificates_ok));
            let orders: Vec<String> = s.cascade_orders.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "cascade orders: {{{}}}", orders.join(", "));
        }
    }
    out
}

fn describe_certificate(out: &mut String, c: &TamenessCertificate) {
    use crate::tameness::SystemKind;
    let kind = match c.kind {
        SystemKind::Semicascade => "semicascade",
        SystemKind::Cascade => "cascade",
    };
    let _ = write!(out, "{kind}: {}", verdict_word(c.verdict));
    match (c.verdict, c.kind) {
        (Verdict::Tame, SystemKind::Semicascade) => {
            let (p, q) = c.minimal_pair.expect("tame semicascade has a pair");
            let _ = writeln!(out, ", A^p = A^q with (p, q) = ({p}, {q})");
        }
        (Verdict::Tame, SystemKind::Cascade) => {
            let m = c.minimal_order_m.expect("tame cascade has an order");
            let _ = writeln!(out, ", A^m = I with m = {m}");
        }
        (Verdict::Untame, _) => {
            let reason = match c.witness.as_ref() {
                Some(UntameWitness::NotSquarefree { stripped_min_poly, repeated_part }) => {
                    format!("{stripped_min_poly} is not squarefree (repeated factor {repeated_part})")
                }
                Some(UntameWitness::OrderBoundExhausted { stripped_min_poly, s_max }) => {
                    format!("x^s - 1 is not divisible by {stripped_min_poly} for any s <= {s_max}")
                }
                Some(UntameWitness::NilpotentPart { index_k }) => {
                    format!("x^{index_k} divides the minimal polynomial, so no power of A is I")
                }
                None => "no witness".into(),
            };
            let _ = writeln!(out, ", {reason}");
        }
    }
    let _ = writeln!(out, "minimal polynomial: {}", c.min_poly);
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Tame => "TAME",
        Verdict::Untame => "UNTAME",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
