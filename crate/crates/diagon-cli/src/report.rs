//! Machine-readable run reports.
//!
//! Rationals appear as `[numerator, denominator]` integer pairs so the
//! JSON round-trips bit-exactly; matrices are row-major arrays of such
//! pairs. Fields missing from a command's output are omitted entirely.

use diagon_core::{
    format_equation, CountResult, DiagonalizationReport, Equation, ExponentFit,
    ExponentPrediction, Rat, Signature,
};
use serde::{Deserialize, Serialize};

/// A rational as an exact `[numerator, denominator]` pair.
pub type RatPair = (i64, i64);

pub fn rat_pair(r: &Rat) -> Result<RatPair, diagon_core::Error> {
    let numer = i64::try_from(r.numer()).map_err(|_| {
        diagon_core::Error::Unsupported(format!("value {r} does not fit the JSON report"))
    })?;
    let denom = i64::try_from(r.denom()).map_err(|_| {
        diagon_core::Error::Unsupported(format!("value {r} does not fit the JSON report"))
    })?;
    Ok((numer, denom))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformJson {
    pub matrix: Vec<Vec<RatPair>>,
    pub translation: Vec<RatPair>,
}

impl TransformJson {
    pub fn from_transform(
        t: &diagon_core::AffineTransform,
    ) -> Result<Self, diagon_core::Error> {
        let k = t.dim();
        let mut matrix = Vec::with_capacity(k);
        for i in 0..k {
            let mut row = Vec::with_capacity(k);
            for j in 0..k {
                row.push(rat_pair(t.matrix().get(i, j))?);
            }
            matrix.push(row);
        }
        let translation = t
            .translation()
            .iter()
            .map(rat_pair)
            .collect::<Result<_, _>>()?;
        Ok(TransformJson {
            matrix,
            translation,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStepJson {
    pub label: String,
    pub matrix: Vec<Vec<RatPair>>,
    pub translation: Vec<RatPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountJson {
    pub n: u64,
    pub count: u64,
    pub region: String,
}

impl CountJson {
    pub fn from_result(r: &CountResult) -> Self {
        CountJson {
            n: r.n,
            count: r.count,
            region: r.region.as_str().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitJson {
    pub alpha: f64,
    pub r_squared: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_samples: Vec<u64>,
}

impl FitJson {
    pub fn from_fit(f: &ExponentFit) -> Self {
        FitJson {
            alpha: f.alpha,
            r_squared: f.r_squared,
            zero_samples: f.zero_samples.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionJson {
    pub exponent: RatPair,
    pub formula: String,
    pub bound_any: RatPair,
    pub bound_irreducible: RatPair,
}

impl PredictionJson {
    pub fn from_prediction(p: &ExponentPrediction) -> Result<Self, diagon_core::Error> {
        Ok(PredictionJson {
            exponent: rat_pair(&p.exponent)?,
            formula: p.formula.as_str().to_string(),
            bound_any: rat_pair(&p.bound_any)?,
            bound_irreducible: rat_pair(&p.bound_irreducible)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureJson {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SignatureJson {
    pub fn from_signature(s: &Signature) -> Self {
        SignatureJson {
            positive: s.positive,
            negative: s.negative,
            zero: s.zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormJson {
    pub case: u8,
    pub solvable: bool,
}

/// Echo of the command parameters.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rsq_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fermat_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub region: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ceiling: Option<String>,
}

impl ParamsJson {
    pub fn is_empty(&self) -> bool {
        self == &ParamsJson::default()
    }
}

/// The one JSON document every subcommand emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub equation: Option<String>,
    #[serde(skip_serializing_if = "ParamsJson::is_empty", default)]
    pub params: ParamsJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub transform: Option<TransformJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain: Option<Vec<ChainStepJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagonal_equation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub det: Option<RatPair>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unimodular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub surface: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub signature: Option<SignatureJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normal_form: Option<NormalFormJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counts: Option<Vec<CountJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagonal_counts: Option<Vec<CountJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit: Option<FitJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagonal_fit: Option<FitJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prediction: Option<PredictionJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, equation: Option<&Equation>) -> Self {
        RunReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            equation: equation.map(format_equation),
            params: ParamsJson::default(),
            transform: None,
            chain: None,
            diagonal_equation: None,
            det: None,
            unimodular: None,
            surface: None,
            signature: None,
            normal_form: None,
            counts: None,
            diagonal_counts: None,
            fit: None,
            diagonal_fit: None,
            prediction: None,
            verdict: None,
            warnings: Vec::new(),
        }
    }

    /// Copies the full diagonalization context into the report.
    pub fn with_diagonalization(
        mut self,
        report: &DiagonalizationReport,
    ) -> Result<Self, diagon_core::Error> {
        self.transform = Some(TransformJson::from_transform(&report.integer_transform)?);
        let mut chain = Vec::new();
        for (label, step) in report.chain.steps() {
            let t = TransformJson::from_transform(step)?;
            chain.push(ChainStepJson {
                label: label.as_str().to_string(),
                matrix: t.matrix,
                translation: t.translation,
            });
        }
        self.chain = Some(chain);
        self.diagonal_equation = Some(format_equation(&report.diagonal));
        self.det = Some(rat_pair(&report.det)?);
        self.unimodular = Some(report.is_unimodular);
        self.surface = Some(report.surface.as_str().to_string());
        if !report.preservation_verified {
            self.warnings.push(
                "preservation-unverified: the center translation is not integer".to_string(),
            );
        }
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering for `--text`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("command:   {}", self.command));
        if let Some(eq) = &self.equation {
            line(format!("equation:  {eq}"));
        }
        if let Some(diag) = &self.diagonal_equation {
            line(format!("diagonal:  {diag}"));
        }
        if let Some(t) = &self.transform {
            line(format!("transform: {}", render_transform(t)));
        }
        if let Some(chain) = &self.chain {
            for (i, step) in chain.iter().enumerate() {
                line(format!(
                    "  step {}: {} {}",
                    i + 1,
                    step.label,
                    render_transform(&TransformJson {
                        matrix: step.matrix.clone(),
                        translation: step.translation.clone(),
                    })
                ));
            }
        }
        if let Some(det) = &self.det {
            line(format!("det:       {}", render_pair(det)));
        }
        if let Some(u) = self.unimodular {
            line(format!("unimodular: {u}"));
        }
        if let Some(s) = &self.surface {
            line(format!("surface:   {s}"));
        }
        if let Some(sig) = &self.signature {
            line(format!(
                "signature: {} positive, {} negative, {} zero",
                sig.positive, sig.negative, sig.zero
            ));
        }
        if let Some(nf) = &self.normal_form {
            line(format!(
                "normal form case {} ({})",
                nf.case,
                if nf.solvable {
                    "infinitely many solutions"
                } else {
                    "trivial solution only"
                }
            ));
        }
        if let Some(counts) = &self.counts {
            for c in counts {
                line(format!("count N={:<6} {:>12}  [{}]", c.n, c.count, c.region));
            }
        }
        if let Some(counts) = &self.diagonal_counts {
            for c in counts {
                line(format!(
                    "diagonal count N={:<6} {:>12}  [{}]",
                    c.n, c.count, c.region
                ));
            }
        }
        if let Some(fit) = &self.fit {
            line(format!(
                "fit:       alpha = {:.4}, r^2 = {:.4}",
                fit.alpha, fit.r_squared
            ));
        }
        if let Some(fit) = &self.diagonal_fit {
            line(format!(
                "diag fit:  alpha = {:.4}, r^2 = {:.4}",
                fit.alpha, fit.r_squared
            ));
        }
        if let Some(p) = &self.prediction {
            line(format!(
                "predicted exponent: {} via {} (bounds: {} generic, {} irreducible)",
                render_pair(&p.exponent),
                p.formula,
                render_pair(&p.bound_any),
                render_pair(&p.bound_irreducible)
            ));
        }
        if let Some(v) = &self.verdict {
            line(format!("verdict:   {v}"));
        }
        for w in &self.warnings {
            line(format!("warning:   {w}"));
        }
        out
    }
}

fn render_pair(p: &RatPair) -> String {
    if p.1 == 1 {
        p.0.to_string()
    } else {
        format!("{}/{}", p.0, p.1)
    }
}

fn render_transform(t: &TransformJson) -> String {
    let rows: Vec<String> = t
        .matrix
        .iter()
        .zip(&t.translation)
        .map(|(row, c)| {
            let entries: Vec<String> = row.iter().map(render_pair).collect();
            format!("[{} | {}]", entries.join(", "), render_pair(c))
        })
        .collect();
    rows.join(" ")
}
