//! Subcommand implementations shared by the binary and the test suites.

use crate::report::{
    CountJson, FitJson, NormalFormJson, ParamsJson, PredictionJson, RunReport, SignatureJson,
};
use diagon_core::{
    count_hypercube, count_pullback, diagonalize, fermat_bound_check, fit_exponent,
    load_equation_file, normal_form_case, predicted_exponent, signature, verify_preservation,
    CountConfig, Equation, Error, Monomial, Rat, Verdict,
};
use std::path::Path;

/// Process exit codes, one per failure class.
pub mod exit_code {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const PIPELINE: i32 = 3;
    pub const DIVERGENT: i32 = 4;
    pub const INCONCLUSIVE: i32 = 5;
    pub const CEILING: i32 = 6;
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) => exit_code::PARSE,
        Error::EnumerationTooLarge { .. } => exit_code::CEILING,
        _ => exit_code::PIPELINE,
    }
}

pub fn read_equation(path: &Path) -> Result<Equation, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_equation_file(&text).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Default log-log grid: geometric from 2^5 to 2^9.
pub const DEFAULT_GRID: &[u64] = &[32, 64, 128, 256, 512];
pub const DEFAULT_TOLERANCE: f64 = 0.15;

pub fn cmd_diagonalize(path: &Path) -> Result<RunReport, Error> {
    let equation = read_equation(path)?;
    let report = diagonalize(&equation)?;
    RunReport::new("diagonalize", Some(&equation)).with_diagonalization(&report)
}

pub fn cmd_verify(
    path: &Path,
    grid: &[u64],
    tolerance: f64,
    rsq_min: f64,
    cfg: &CountConfig,
) -> Result<(RunReport, i32), Error> {
    let equation = read_equation(path)?;
    let diag_report = diagonalize(&equation)?;
    let outcome = verify_preservation(&diag_report, grid, tolerance, rsq_min, cfg)?;
    let mut report =
        RunReport::new("verify", Some(&equation)).with_diagonalization(&diag_report)?;
    report.params = ParamsJson {
        grid: Some(grid.to_vec()),
        tolerance: Some(tolerance),
        rsq_min: Some(rsq_min),
        ..ParamsJson::default()
    };
    if let Some(fit) = &outcome.original_fit {
        report.counts = Some(fit.samples.iter().map(CountJson::from_result).collect());
        report.fit = Some(FitJson::from_fit(fit));
    }
    if let Some(fit) = &outcome.diagonal_fit {
        report.diagonal_counts = Some(fit.samples.iter().map(CountJson::from_result).collect());
        report.diagonal_fit = Some(FitJson::from_fit(fit));
    }
    report.verdict = Some(outcome.verdict.as_str().to_string());
    if let Some(reason) = outcome.reason {
        report.warnings.push(reason);
    }
    let code = match outcome.verdict {
        Verdict::Preserved => exit_code::OK,
        Verdict::Divergent => exit_code::DIVERGENT,
        Verdict::Inconclusive => exit_code::INCONCLUSIVE,
    };
    Ok((report, code))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Hypercube,
    Pullback,
}

pub fn cmd_count(
    path: &Path,
    n: u64,
    region: Region,
    cfg: &CountConfig,
) -> Result<RunReport, Error> {
    let equation = read_equation(path)?;
    let mut report = RunReport::new("count", Some(&equation));
    report.params = ParamsJson {
        n: Some(n),
        region: Some(
            match region {
                Region::Hypercube => "hypercube",
                Region::Pullback => "pullback-image",
            }
            .to_string(),
        ),
        ceiling: Some(cfg.ceiling.to_string()),
        ..ParamsJson::default()
    };
    let result = match region {
        Region::Hypercube => count_hypercube(&equation, n, cfg)?,
        Region::Pullback => {
            let diag_report = diagonalize(&equation)?;
            let result = count_pullback(&diag_report, n, cfg)?;
            report = report.with_diagonalization(&diag_report)?;
            result
        }
    };
    report.counts = Some(vec![CountJson::from_result(&result)]);
    Ok(report)
}

/// True for `a_1 x_1^2 + a_2 x_2^2 + a_3 x_3^2 = 0` with every `a_i = ±1`
/// and mixed signs, the shape whose counts obey the `N..N ln N` band.
fn is_indefinite_unit_ternary(e: &Equation) -> bool {
    use num::Zero;
    let p = &e.lhs;
    if p.k() != 3 || !p.is_diagonal() || p.degree() != 2 || !p.constant_term().is_zero() {
        return false;
    }
    let coeffs: Vec<Rat> = (0..3)
        .map(|i| p.coeff(&Monomial::power(3, i, 2)))
        .collect();
    if p.n_terms() != 3 {
        return false;
    }
    use num::Signed;
    if !coeffs.iter().all(|c| c.abs() == Rat::from_integer(1.into())) {
        return false;
    }
    let sig = signature(&coeffs);
    sig.positive.min(sig.negative) > 0
}

pub fn cmd_fit(
    path: &Path,
    grid: &[u64],
    fermat_constant: f64,
    cfg: &CountConfig,
) -> Result<RunReport, Error> {
    let equation = read_equation(path)?;
    let fit = fit_exponent(&equation, grid, cfg)?;
    let mut report = RunReport::new("fit", Some(&equation));
    report.params = ParamsJson {
        grid: Some(grid.to_vec()),
        fermat_constant: Some(fermat_constant),
        ..ParamsJson::default()
    };
    report.counts = Some(fit.samples.iter().map(CountJson::from_result).collect());
    report.fit = Some(FitJson::from_fit(&fit));
    if let Some(prediction) = &fit.predicted {
        report.prediction = Some(PredictionJson::from_prediction(prediction)?);
    }
    if is_indefinite_unit_ternary(&equation) {
        let samples: Vec<(u64, u64)> = fit.samples.iter().map(|s| (s.n, s.count)).collect();
        if let Ok(verdict) = fermat_bound_check(&samples, fermat_constant) {
            report.verdict = Some(verdict.as_str().to_string());
        }
    }
    Ok(report)
}

pub fn cmd_classify(path: &Path) -> Result<RunReport, Error> {
    let equation = read_equation(path)?;
    let mut report = RunReport::new("classify", Some(&equation));
    // reduce first whenever the pipeline applies; a diagonal equation the
    // pipeline cannot improve is classified as written
    let diagonal = match diagonalize(&equation) {
        Ok(diag_report) => {
            let diagonal = diag_report.diagonal.clone();
            report = report.with_diagonalization(&diag_report)?;
            diagonal
        }
        Err(_) if equation.lhs.is_diagonal() => {
            report.surface = Some(
                diagon_core::surface_of_diagonal(&equation.lhs)
                    .as_str()
                    .to_string(),
            );
            report.diagonal_equation = Some(diagon_core::format_equation(&equation));
            equation.clone()
        }
        Err(e) => return Err(e),
    };
    let k = diagonal.k();
    let degree = diagonal.degree();
    let coeffs: Vec<Rat> = (0..k)
        .map(|i| diagonal.lhs.coeff(&Monomial::power(k, i, degree)))
        .collect();
    report.signature = Some(SignatureJson::from_signature(&signature(&coeffs)));
    match predicted_exponent(&diagonal) {
        Ok(prediction) => {
            report.prediction = Some(PredictionJson::from_prediction(&prediction)?);
        }
        Err(e) => report
            .warnings
            .push(format!("no exponent prediction: {e}")),
    }
    // quadratic ternary forms with unit minors have a named normal form
    if degree == 2 && k == 3 {
        if let Ok(m) = equation.lhs.quadratic_form_matrix() {
            let minors = m.angular_minors();
            if let Ok((case, solvable)) = normal_form_case(&minors) {
                report.normal_form = Some(NormalFormJson { case, solvable });
            }
        }
    }
    Ok(report)
}
