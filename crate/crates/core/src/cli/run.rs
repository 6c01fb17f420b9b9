use std::time::Instant;

use num_bigint::BigInt;

use super::report::{
    CertifyResult, FrequencyApprox, FrequencyExact, FrequencyResult, SidonResult, SimulateApprox, SimulateExact,
    SimulateResult,
};
use super::{
    Claim, CliError, CommandKind, ErrorInfo, JobSpec, MapSpec, Report, ResultBody, SidonSource, ToolInfo, EXIT_OK,
};
use crate::dynamics::{
    basis_vector, convergence_probe, escape_probe, fourier_identity_error, frequency_orbit, orbit, uniform_grid,
    AffineMap, TorusPoint, GRID_POINT_CAP,
};
use crate::exactalg::IntMatrix;
use crate::sidon::{estimate_sidon_ratio, extract_sidon, FrequencyStream};
use crate::tameness::{
    certificate_check, decide_cascade, decide_semicascade, oracle_semicascade, sweep, TamenessCertificate,
};

/// Executes a validated job. Failures become error reports; this never panics
/// on bad input.
pub fn run(job: &JobSpec) -> Report {
    let start = Instant::now();
    let outcome = execute(job);
    let elapsed_us = u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX);
    let (result, error, exit_code) = match outcome {
        Ok(body) => (Some(body), None, EXIT_OK),
        Err(e) => (None, Some(ErrorInfo::from(&e)), e.exit_code()),
    };
    Report {
        tool: ToolInfo::current(),
        command: job.command,
        input: job.input.clone(),
        options: job.options.clone(),
        sidon_source: job.sidon_source.clone(),
        exit_code,
        result,
        error,
        elapsed_us,
    }
}

fn execute(job: &JobSpec) -> Result<ResultBody, CliError> {
    let opts = &job.options;
    let input = job.input.as_ref();
    let map = || input.expect("validated: command has input");
    match job.command {
        CommandKind::Semicascade => Ok(ResultBody::Decision { certificate: decide_semicascade(&map().a) }),
        CommandKind::Cascade => Ok(ResultBody::Decision { certificate: decide_cascade(&map().a)? }),
        CommandKind::Certify => Ok(ResultBody::Certify(certify(map()))),
        CommandKind::Simulate => simulate(map(), opts.iters.unwrap(), opts.grid.unwrap(), opts.tol.unwrap()),
        CommandKind::Frequencies => {
            frequencies(map(), opts.iters.unwrap(), opts.grid.unwrap(), opts.bound.clone().unwrap())
        }
        CommandKind::Sidon => {
            let stream = match job.sidon_source.as_ref().expect("validated") {
                SidonSource::Orbit => {
                    let m = map();
                    FrequencyStream::frequency_orbit(&m.a, start_frequency(m))?
                }
                SidonSource::Moment => FrequencyStream::moment_curve(opts.dim.unwrap()),
                SidonSource::File { .. } => FrequencyStream::parse(job.stream_text.as_deref().unwrap_or(""))?,
            };
            let grid = opts.grid.unwrap();
            check_grid(stream.dim(), grid)?;
            let mut report = extract_sidon(stream, opts.count.unwrap())?;
            let seed = opts.seed.unwrap();
            let trials = opts.trials.unwrap();
            report.estimated_ratio = Some(estimate_sidon_ratio(&report.selected, trials, grid, seed)?);
            report.trials = trials;
            Ok(ResultBody::Sidon(SidonResult::from_report(report, grid, seed)))
        }
        CommandKind::Sweep => {
            let range = opts.range.unwrap();
            Ok(ResultBody::Sweep(sweep(opts.dim.unwrap(), range.lo, range.hi)?))
        }
    }
}

fn start_frequency(m: &MapSpec) -> Vec<BigInt> {
    m.u.clone().unwrap_or_else(|| basis_vector(m.d, 0))
}

fn check_grid(d: usize, per_axis: usize) -> Result<usize, CliError> {
    per_axis
        .checked_pow(d as u32)
        .filter(|&t| t <= GRID_POINT_CAP)
        .ok_or_else(|| CliError::LimitExceeded(format!("grid {per_axis}^{d} exceeds {GRID_POINT_CAP} points")))
}

fn certify(m: &MapSpec) -> CertifyResult {
    let a = &m.a;
    let certificate = decide_semicascade(a);
    let oracle = oracle_semicascade(a);
    let oracle_agrees = oracle.verdict == certificate.verdict && oracle.minimal_pair == certificate.minimal_pair;
    let certificate_valid = certificate_check(a, &certificate);
    let cascade = decide_cascade(a).ok();
    let cascade_valid = cascade.as_ref().map(|c| certificate_check(a, c));
    let (claim_valid, claim_minimal) = match &m.claim {
        None => (None, None),
        Some(Claim::Pair([p, q])) => {
            let valid = p < q && powers_equal(a, &certificate, *p, *q);
            (Some(valid), Some(valid && certificate.minimal_pair == Some((*p, *q))))
        }
        Some(Claim::Order(order)) => {
            let valid = *order > 0 && powers_equal(a, &certificate, 0, *order);
            let minimal = valid && cascade.as_ref().and_then(|c| c.minimal_order_m) == Some(*order);
            (Some(valid), Some(minimal))
        }
    };
    CertifyResult {
        certificate,
        oracle,
        oracle_agrees,
        certificate_valid,
        cascade,
        cascade_valid,
        claim_valid,
        claim_minimal,
    }
}

/// Whether `A^p = A^q`, comparing exact powers. For tame matrices exponents past
/// the index are first reduced modulo the period, which the certificate check
/// has already confirmed; for untame ones no two distinct powers coincide.
fn powers_equal(a: &IntMatrix, cert: &TamenessCertificate, p: u64, q: u64) -> bool {
    if p == q {
        return true;
    }
    let (Some(k), Some(s)) = (cert.index_k, cert.period_s) else {
        return false;
    };
    let reduce = |e: u64| if e < k { e } else { k + (e - k) % s };
    a.pow(reduce(p)) == a.pow(reduce(q))
}

fn simulate(m: &MapSpec, iters: usize, grid: usize, tol: f64) -> Result<ResultBody, CliError> {
    let points = check_grid(m.d, grid)?;
    let phi = AffineMap::new(m.a.clone(), m.translation_radians())?;
    let x0 = TorusPoint::new(m.start_radians());
    let path = orbit(&phi, &x0, iters)?;
    let indices: Vec<u64> = (0..iters as u64).collect();
    let probe = convergence_probe(&phi, &indices, &uniform_grid(m.d, grid), tol)?;
    Ok(ResultBody::Simulate(SimulateResult {
        exact: SimulateExact {
            certificate: decide_semicascade(&m.a),
            iters,
            grid_points: points,
            subsequence: probe.subsequence,
        },
        approximate: SimulateApprox { orbit: path, max_deviation: probe.max_deviation, tol },
    }))
}

fn frequencies(m: &MapSpec, iters: usize, grid: usize, bound: BigInt) -> Result<ResultBody, CliError> {
    check_grid(m.d, grid)?;
    let fo = frequency_orbit(&m.a, &start_frequency(m), iters)?;
    let escape = escape_probe(&fo, &bound);
    let max_fourier_error = fo.terms.iter().map(|t| fourier_identity_error(t, grid)).fold(0.0, f64::max);
    Ok(ResultBody::Frequencies(FrequencyResult {
        exact: FrequencyExact { certificate: decide_semicascade(&m.a), bound, escape, orbit: fo },
        approximate: FrequencyApprox { grid, max_fourier_error },
    }))
}
