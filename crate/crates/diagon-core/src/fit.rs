//! Log-log exponent fits and the count-preservation check.

use crate::classify::{predicted_exponent, ExponentPrediction};
use crate::count::{count_hypercube, CountConfig, CountResult};
use crate::diagonalize::DiagonalizationReport;
use crate::error::Error;
use crate::parser::Equation;
use crate::Result;

/// Default `r^2` below which a fit is considered too noisy to judge.
pub const DEFAULT_RSQ_MIN: f64 = 0.9;

/// Least-squares exponent of `count ~ N^alpha` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub samples: Vec<CountResult>,
    /// Slope of `ln count` against `ln N` over the nonzero samples.
    pub alpha: f64,
    pub r_squared: f64,
    /// Grid entries whose count was zero, excluded from the fit.
    pub zero_samples: Vec<u64>,
    /// Upper-bound exponent claimed for this shape, when one applies.
    pub predicted: Option<ExponentPrediction>,
}

fn validate_grid(grid: &[u64]) -> Result<()> {
    if grid.len() < 3 || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return Err(Error::InvalidGrid { needed: 3 });
    }
    Ok(())
}

/// Counts `e` on each grid value and fits the growth exponent.
///
/// Zero counts are excluded rather than mapped to `log 0`; the fit is
/// refused when fewer than 3 samples remain or more than half the grid is
/// zero.
pub fn fit_exponent(e: &Equation, grid: &[u64], cfg: &CountConfig) -> Result<ExponentFit> {
    validate_grid(grid)?;
    let mut samples = Vec::with_capacity(grid.len());
    for &n in grid {
        samples.push(count_hypercube(e, n, cfg)?);
    }
    let mut fit = fit_samples(samples, grid.len())?;
    fit.predicted = predicted_exponent(e).ok();
    Ok(fit)
}

/// Fit from precomputed counts; grid validity is the caller's problem.
pub fn fit_samples(samples: Vec<CountResult>, grid_len: usize) -> Result<ExponentFit> {
    let zero_samples: Vec<u64> = samples
        .iter()
        .filter(|s| s.count == 0)
        .map(|s| s.n)
        .collect();
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.count > 0)
        .map(|s| ((s.n as f64).ln(), (s.count as f64).ln()))
        .collect();
    if points.len() < 3 || zero_samples.len() * 2 > grid_len {
        return Err(Error::NoFit {
            nonzero: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let alpha = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0 // constant counts: the (flat) line fits perfectly
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(ExponentFit {
        samples,
        alpha,
        r_squared,
        zero_samples,
        predicted: None,
    })
}

/// Did the diagonalization preserve the count exponent?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Preserved,
    Divergent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Preserved => "preserved",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationOutcome {
    pub verdict: Verdict,
    pub original_fit: Option<ExponentFit>,
    pub diagonal_fit: Option<ExponentFit>,
    /// Human-readable cause when the verdict is inconclusive.
    pub reason: Option<String>,
}

/// Fits the original and the diagonal equation over the same hypercube
/// grid and compares the two exponents.
///
/// Fit failures (no solutions, noisy data) yield `Inconclusive`, never an
/// error; resource-ceiling refusals still propagate.
pub fn verify_preservation(
    report: &DiagonalizationReport,
    grid: &[u64],
    tolerance: f64,
    rsq_min: f64,
    cfg: &CountConfig,
) -> Result<PreservationOutcome> {
    validate_grid(grid)?;
    let fit_of = |e: &Equation| -> Result<(Option<ExponentFit>, Option<String>)> {
        match fit_exponent(e, grid, cfg) {
            Ok(fit) => Ok((Some(fit), None)),
            Err(Error::NoFit { nonzero }) => Ok((
                None,
                Some(format!("no fit: only {nonzero} nonzero counts")),
            )),
            Err(other) => Err(other),
        }
    };
    let (original_fit, why_a) = fit_of(&report.original)?;
    let (diagonal_fit, why_b) = fit_of(&report.diagonal)?;
    let verdict;
    let mut reason = None;
    match (&original_fit, &diagonal_fit) {
        (Some(a), Some(b)) => {
            if a.r_squared < rsq_min || b.r_squared < rsq_min {
                verdict = Verdict::Inconclusive;
                reason = Some(format!(
                    "fit quality below {rsq_min}: r^2 = {:.3} / {:.3}",
                    a.r_squared, b.r_squared
                ));
            } else if (a.alpha - b.alpha).abs() <= tolerance {
                verdict = Verdict::Preserved;
            } else {
                verdict = Verdict::Divergent;
            }
        }
        _ => {
            verdict = Verdict::Inconclusive;
            reason = why_a.or(why_b);
        }
    }
    Ok(PreservationOutcome {
        verdict,
        original_fit,
        diagonal_fit,
        reason,
    })
}
