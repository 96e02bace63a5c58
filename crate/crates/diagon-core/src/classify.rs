//! Classification of diagonal equations and predicted count exponents.
//!
//! The estimator reports the upper-bound exponent `alpha` such that the
//! integer-solution count in `[-N, N]^k` is `O(N^{alpha + eps})`, selecting
//! the sharpest applicable rule for the equation's shape, and always echoes
//! two reference bounds: the generic `k - 1` and the degree-refined
//! `k - 2 + 1/n` for irreducible equations with `n > 2`, `k > 2`.

use crate::diagonalize::diagonalize;
use crate::error::Error;
use crate::parser::Equation;
use crate::poly::Polynomial;
use crate::rat::{nth_power_split_rat, rat, sign, Rat};
use crate::Result;
use num::{BigInt, One, Signed, Zero};

/// Geometric class of a diagonal equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    /// Pure power terms, zero constant.
    CentralAtOrigin,
    /// Pure power terms plus a nonzero constant.
    CentralTranslated,
    /// Exactly one variable survives linearly next to the power terms.
    NonCentralParaboloid,
    /// Anything else (mixed degrees, several linear variables, ...).
    Degenerate,
}

impl Surface {
    pub fn as_str(self) -> &'static str {
        match self {
            Surface::CentralAtOrigin => "central-at-origin",
            Surface::CentralTranslated => "central-translated",
            Surface::NonCentralParaboloid => "non-central-paraboloid",
            Surface::Degenerate => "degenerate",
        }
    }
}

/// Sign counts of diagonal coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn k(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

/// Counts diagonal coefficients by sign.
pub fn signature(coeffs: &[Rat]) -> Signature {
    let mut s = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for c in coeffs {
        match sign(c) {
            1 => s.positive += 1,
            -1 => s.negative += 1,
            _ => s.zero += 1,
        }
    }
    s
}

/// Shape analysis of a diagonal polynomial, shared by the surface
/// classifier and the exponent estimator.
struct DiagonalShape {
    /// `(variable, coefficient)` of each pure power term.
    powers: Vec<(usize, Rat)>,
    /// Common degree of the power terms.
    n: u32,
    /// The linearly-surviving variable, if any.
    linear: Option<(usize, Rat)>,
    constant: Rat,
    /// Variables that do not occur at all.
    missing: usize,
}

fn analyze_diagonal(p: &Polynomial) -> Option<DiagonalShape> {
    if p.is_zero() || !p.is_diagonal() {
        return None;
    }
    let degrees = p.variable_degrees();
    let mut powers = Vec::new();
    let mut linear = None;
    let mut missing = 0;
    for (i, ds) in degrees.iter().enumerate() {
        match ds.len() {
            0 => missing += 1,
            1 => {
                let d = *ds.iter().next().expect("non-empty degree set");
                let coeff = p.coeff(&crate::poly::Monomial::power(p.k(), i, d));
                if d == 1 {
                    if linear.is_some() {
                        return None; // two linear survivors
                    }
                    linear = Some((i, coeff));
                } else {
                    powers.push((i, d, coeff));
                }
            }
            _ => return None, // mixed degrees in one variable
        }
    }
    if powers.is_empty() {
        return None;
    }
    let n = powers[0].1;
    if powers.iter().any(|&(_, d, _)| d != n) {
        return None;
    }
    Some(DiagonalShape {
        powers: powers.into_iter().map(|(i, _, c)| (i, c)).collect(),
        n,
        linear,
        constant: p.constant_term(),
        missing,
    })
}

/// Classifies a diagonal polynomial; `Degenerate` when it fits no
/// canonical shape.
pub fn surface_of_diagonal(p: &Polynomial) -> Surface {
    let Some(shape) = analyze_diagonal(p) else {
        return Surface::Degenerate;
    };
    match shape.linear {
        Some(_) => Surface::NonCentralParaboloid,
        None if shape.constant.is_zero() => Surface::CentralAtOrigin,
        None => Surface::CentralTranslated,
    }
}

/// Surface class of an equation, diagonalizing first when necessary.
///
/// A cross-term-free equation that is not in canonical shape (say a
/// variable occurring both squared and linearly) still goes through the
/// reduction; `Degenerate` is reserved for what no reduction fixes.
pub fn surface_class(e: &Equation) -> Result<Surface> {
    if e.lhs.is_diagonal() {
        let direct = surface_of_diagonal(&e.lhs);
        if direct != Surface::Degenerate {
            return Ok(direct);
        }
        if let Ok(report) = diagonalize(e) {
            return Ok(report.surface);
        }
        return Ok(Surface::Degenerate);
    }
    let report = diagonalize(e)?;
    Ok(report.surface)
}

/// The eight sign patterns of unit leading minors of a ternary form, with
/// their solvability: two of them force definite normal forms that only
/// the origin satisfies, the rest are indefinite with infinitely many
/// solutions.
pub fn normal_form_case(minors: &[Rat]) -> Result<(u8, bool)> {
    if minors.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: minors.len(),
        });
    }
    for (i, m) in minors.iter().enumerate() {
        if m.abs() != Rat::one() {
            return Err(Error::MinorNotUnit { index: i + 1 });
        }
    }
    let bit = |i: usize| u8::from(minors[i].is_positive());
    let case = 1 + 4 * bit(0) + 2 * bit(1) + bit(2);
    // diagonal coefficients are the minor ratios
    let coeffs = [
        minors[0].clone(),
        &minors[1] / &minors[0],
        &minors[2] / &minors[1],
    ];
    let sig = signature(&coeffs);
    let solvable = sig.positive.min(sig.negative) > 0;
    debug_assert_eq!(solvable, !(case == 3 || case == 8));
    Ok((case, solvable))
}

/// Which estimate produced a predicted exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    /// Even degree: `k - m` with `m` the larger sign count of the power
    /// coefficients.
    EvenSignCount,
    /// Even-degree paraboloid variant of the sign-count rule.
    EvenParaboloidSignCount,
    /// Two-variable equation of degree > 2 with a constant: finitely many
    /// solutions.
    BinaryFinite,
    /// Homogeneous binary odd form: solutions fill a rational line or only
    /// the origin.
    BinaryLine,
    /// Odd degree, `k > 2`: fix all but two variables.
    OddFixedSlice,
    /// Paraboloid variant of the fixed-slice rule.
    OddFixedSliceParaboloid,
    /// Odd degree, even `k >= 6`: sign-balance halving.
    HalfEven,
    /// Odd degree, odd `k >= 7`: sign-balance halving, rounded up.
    HalfOdd,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::EvenSignCount => "even-sign-count",
            FormulaId::EvenParaboloidSignCount => "even-paraboloid-sign-count",
            FormulaId::BinaryFinite => "binary-finite",
            FormulaId::BinaryLine => "binary-line",
            FormulaId::OddFixedSlice => "odd-fixed-slice",
            FormulaId::OddFixedSliceParaboloid => "odd-fixed-slice-paraboloid",
            FormulaId::HalfEven => "half-even",
            FormulaId::HalfOdd => "half-odd",
        }
    }
}

/// Predicted upper-bound exponent together with the reference bounds it
/// must never exceed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPrediction {
    /// Power of `N` (the `eps` is implicit).
    pub exponent: Rat,
    pub formula: FormulaId,
    /// Generic bound `k - 1` valid for any algebraic equation.
    pub bound_any: Rat,
    /// Refined bound `k - 2 + 1/n` for irreducible equations with
    /// `n > 2, k > 2`.
    pub bound_irreducible: Rat,
}

/// Predicted solution-count exponent of a diagonal equation.
pub fn predicted_exponent(e: &Equation) -> Result<ExponentPrediction> {
    let p = &e.lhs;
    if !p.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let shape = analyze_diagonal(p).ok_or_else(|| Error::UnsupportedShape {
        reason: "not a pure-power diagonal form".into(),
    })?;
    let n = shape.n;
    if n < 2 {
        return Err(Error::UnsupportedShape {
            reason: format!("degree {n} below 2"),
        });
    }
    // effective variable count of the canonical form
    let k_eff = shape.powers.len() + usize::from(shape.linear.is_some());
    let is_paraboloid = shape.linear.is_some();
    let sig = signature(
        &shape
            .powers
            .iter()
            .map(|(_, c)| c.clone())
            .collect::<Vec<_>>(),
    );
    // the equation and its negation have the same solutions, so the
    // sharper (larger) sign count applies
    let m = sig.positive.max(sig.negative);

    let (mut exponent, formula) = if n % 2 == 0 {
        let exp = rat(k_eff as i64 - m as i64);
        if is_paraboloid {
            (exp, FormulaId::EvenParaboloidSignCount)
        } else {
            (exp, FormulaId::EvenSignCount)
        }
    } else if k_eff == 1 {
        // a single power variable has at most n roots
        (rat(0), FormulaId::BinaryFinite)
    } else if k_eff == 2 {
        if is_paraboloid {
            return Err(Error::UnsupportedShape {
                reason: "odd-degree paraboloid needs at least 3 variables".into(),
            });
        }
        if !shape.constant.is_zero() {
            (rat(0), FormulaId::BinaryFinite)
        } else {
            // a1 x^n = -a2 y^n has a rational line iff |a2/a1| is an exact
            // n-th power
            let ratio = -(&shape.powers[1].1 / &shape.powers[0].1);
            let (core, _) = nth_power_split_rat(&ratio, n);
            if core.abs().is_one() {
                (rat(1), FormulaId::BinaryLine)
            } else {
                (rat(0), FormulaId::BinaryLine)
            }
        }
    } else {
        let base = rat(k_eff as i64 - 2);
        let base_formula = if is_paraboloid {
            FormulaId::OddFixedSliceParaboloid
        } else {
            FormulaId::OddFixedSlice
        };
        if k_eff % 2 == 0 && k_eff >= 6 {
            (Rat::new(BigInt::from(k_eff), BigInt::from(2)), FormulaId::HalfEven)
        } else if k_eff % 2 == 1 && k_eff >= 7 {
            (rat((k_eff / 2) as i64 + 1), FormulaId::HalfOdd)
        } else {
            (base, base_formula)
        }
    };

    // absent variables are unconstrained and each contributes a factor ~N
    exponent += rat(shape.missing as i64);

    let k = p.k() as i64;
    Ok(ExponentPrediction {
        exponent,
        formula,
        bound_any: rat(k - 1),
        bound_irreducible: rat(k - 2) + Rat::new(BigInt::one(), BigInt::from(n)),
    })
}

/// Guaranteed minimum count for a full-rank, unit-coefficient normal form:
/// `(4N + 1)^{min(r, s)}`, or 1 when the form is definite.
pub fn lower_bound_count(sig: &Signature, n: u64) -> Result<BigInt> {
    if sig.zero != 0 {
        return Err(Error::SignatureHasZeros { zeros: sig.zero });
    }
    let exponent = sig.positive.min(sig.negative);
    if exponent == 0 {
        return Ok(BigInt::one());
    }
    Ok(num::pow(BigInt::from(4 * n + 1), exponent))
}

/// Outcome of checking counts against `N << R(N) << N ln N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermatVerdict {
    Consistent,
    LowerViolated,
    UpperSuspicious,
}

impl FermatVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            FermatVerdict::Consistent => "consistent",
            FermatVerdict::LowerViolated => "lower-violated",
            FermatVerdict::UpperSuspicious => "upper-suspicious",
        }
    }
}

/// Default multiplier for the `N ln N` ceiling.
pub const DEFAULT_FERMAT_CONSTANT: f64 = 16.0;

/// Checks a `(N, count)` grid of an indefinite ternary quadratic normal
/// form against the expected band `N <= count <= constant * N ln N`.
pub fn fermat_bound_check(counts: &[(u64, u64)], constant: f64) -> Result<FermatVerdict> {
    if counts.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: counts.len(),
        });
    }
    if counts.iter().any(|&(n, count)| count < n) {
        return Ok(FermatVerdict::LowerViolated);
    }
    for &(n, count) in counts {
        let ceiling = constant * n as f64 * (n as f64).ln();
        if count as f64 > ceiling {
            return Ok(FermatVerdict::UpperSuspicious);
        }
    }
    Ok(FermatVerdict::Consistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_equation;
    use crate::rat::ratio;

    #[test]
    fn signature_counts() {
        let s = signature(&[rat(1), rat(-4)]);
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 0));
        let s = signature(&[rat(1), rat(1), rat(1)]);
        assert_eq!((s.positive, s.negative, s.zero), (3, 0, 0));
        let s = signature(&[rat(0), rat(2), rat(-3)]);
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 1));
        assert_eq!(s.k(), 3);
    }

    #[test]
    fn normal_form_cases() {
        assert_eq!(
            normal_form_case(&[rat(1), rat(1), rat(-1)]).unwrap(),
            (7, true)
        );
        assert_eq!(
            normal_form_case(&[rat(1), rat(1), rat(1)]).unwrap(),
            (8, false)
        );
        assert_eq!(
            normal_form_case(&[rat(-1), rat(1), rat(-1)]).unwrap(),
            (3, false)
        );
        assert_eq!(
            normal_form_case(&[rat(-1), rat(-1), rat(-1)]).unwrap(),
            (1, true)
        );
        assert!(matches!(
            normal_form_case(&[rat(2), rat(1), rat(1)]),
            Err(Error::MinorNotUnit { index: 1 })
        ));
    }

    #[test]
    fn surfaces_of_diagonal_forms() {
        let paraboloid = parse_equation("x1^2 - 5*x2 = 0").unwrap();
        assert_eq!(surface_class(&paraboloid).unwrap(), Surface::NonCentralParaboloid);

        let cone = parse_equation("x1^2 + x2^2 - x3^2 = 0").unwrap();
        assert_eq!(surface_class(&cone).unwrap(), Surface::CentralAtOrigin);

        let cubes = parse_equation("x1^3 + x2^3 + x3^3 - 1 = 0").unwrap();
        assert_eq!(surface_class(&cubes).unwrap(), Surface::CentralTranslated);

        let mixed = parse_equation("x1^2 + x1 + x2^3 = 0").unwrap();
        assert_eq!(surface_of_diagonal(&mixed.lhs), Surface::Degenerate);

        let line = parse_equation("x1 - x2 = 0").unwrap();
        assert_eq!(surface_of_diagonal(&line.lhs), Surface::Degenerate);
    }

    #[test]
    fn surface_class_diagonalizes_when_needed() {
        let e = parse_equation("4*x1^2 + 9*x2^2 + 12*x1*x2 + 8*x1 + 2*x2 + 24 = 0").unwrap();
        assert_eq!(surface_class(&e).unwrap(), Surface::NonCentralParaboloid);

        // cross-term-free but not canonical: the completion still runs
        let shifted = parse_equation("2*x1^2 + 2*x1 + 2*x2^2 - 1 = 0").unwrap();
        assert_eq!(surface_class(&shifted).unwrap(), Surface::CentralTranslated);

        // no reduction helps a mixed-degree variable
        let stuck = parse_equation("x1^3 + x1 = 0").unwrap();
        assert_eq!(surface_class(&stuck).unwrap(), Surface::Degenerate);
    }

    #[test]
    fn exponent_three_cubes() {
        let e = parse_equation("x1^3 + x2^3 + x3^3 - 1 = 0").unwrap();
        let p = predicted_exponent(&e).unwrap();
        assert_eq!(p.exponent, rat(1));
        assert_eq!(p.formula, FormulaId::OddFixedSlice);
        assert_eq!(p.bound_any, rat(2));
        assert_eq!(p.bound_irreducible, ratio(4, 3));
        assert!(p.exponent <= p.bound_irreducible);
    }

    #[test]
    fn exponent_binary_thue_is_constant() {
        let e = parse_equation("x1^3 + x2^3 - 7 = 0").unwrap();
        let p = predicted_exponent(&e).unwrap();
        assert_eq!(p.exponent, rat(0));
        assert_eq!(p.formula, FormulaId::BinaryFinite);
    }

    #[test]
    fn exponent_halving_kicks_in_at_six_and_seven() {
        let mk = |k: usize| {
            let terms: Vec<String> = (1..=k)
                .map(|i| {
                    if i % 2 == 0 {
                        format!("- x{i}^3")
                    } else {
                        format!("+ x{i}^3")
                    }
                })
                .collect();
            parse_equation(&format!("{} - 5 = 0", terms.join(" "))).unwrap()
        };
        let p8 = predicted_exponent(&mk(8)).unwrap();
        assert_eq!(p8.exponent, rat(4));
        assert_eq!(p8.formula, FormulaId::HalfEven);

        let p7 = predicted_exponent(&mk(7)).unwrap();
        assert_eq!(p7.exponent, rat(4));
        assert_eq!(p7.formula, FormulaId::HalfOdd);

        let p5 = predicted_exponent(&mk(5)).unwrap();
        assert_eq!(p5.exponent, rat(3));
        assert_eq!(p5.formula, FormulaId::OddFixedSlice);

        let p3 = predicted_exponent(&mk(3)).unwrap();
        assert_eq!(p3.exponent, rat(1));
    }

    #[test]
    fn exponent_even_sign_count_uses_negation() {
        // all-positive quartic: m = 4, exponent 0
        let definite = parse_equation("x1^4 + x2^4 + x3^4 + x4^4 - 17 = 0").unwrap();
        let p = predicted_exponent(&definite).unwrap();
        assert_eq!(p.exponent, rat(0));
        assert_eq!(p.formula, FormulaId::EvenSignCount);

        // all-negative power terms: negation gives the same m
        let negated = parse_equation("-x1^4 - x2^4 - x3^4 - x4^4 + 17 = 0").unwrap();
        assert_eq!(predicted_exponent(&negated).unwrap().exponent, rat(0));

        // indefinite cone: m = max(2, 1) = 2, exponent 1
        let cone = parse_equation("x1^2 + x2^2 - x3^2 = 0").unwrap();
        let p = predicted_exponent(&cone).unwrap();
        assert_eq!(p.exponent, rat(1));
    }

    #[test]
    fn exponent_paraboloid_forms() {
        let even = parse_equation("x1^2 - 5*x2 = 0").unwrap();
        let p = predicted_exponent(&even).unwrap();
        assert_eq!(p.exponent, rat(1));
        assert_eq!(p.formula, FormulaId::EvenParaboloidSignCount);

        let odd = parse_equation("x1^3 + x2^3 + 2*x3 = 0").unwrap();
        let p = predicted_exponent(&odd).unwrap();
        assert_eq!(p.exponent, rat(1));
        assert_eq!(p.formula, FormulaId::OddFixedSliceParaboloid);
    }

    #[test]
    fn exponent_single_variable_is_zero() {
        let cube = parse_equation("x1^3 - 8 = 0").unwrap();
        assert_eq!(predicted_exponent(&cube).unwrap().exponent, rat(0));
        let square = parse_equation("x1^2 - 4 = 0").unwrap();
        assert_eq!(predicted_exponent(&square).unwrap().exponent, rat(0));
    }

    #[test]
    fn exponent_binary_homogeneous_lines() {
        let line = parse_equation("x1^3 + 27*x2^3 = 0").unwrap();
        let p = predicted_exponent(&line.clone()).unwrap();
        assert_eq!(p.exponent, rat(1));
        assert_eq!(p.formula, FormulaId::BinaryLine);

        let no_line = parse_equation("x1^3 + 2*x2^3 = 0").unwrap();
        assert_eq!(predicted_exponent(&no_line).unwrap().exponent, rat(0));
    }

    #[test]
    fn exponent_rejects_unsupported_shapes() {
        let cross = parse_equation("x1^2 + 2*x1*x2 - 3*x2^2 = 0").unwrap();
        assert_eq!(predicted_exponent(&cross).unwrap_err(), Error::NotDiagonal);
        let linear = parse_equation("x1 - x2 = 0").unwrap();
        assert!(matches!(
            predicted_exponent(&linear),
            Err(Error::UnsupportedShape { .. })
        ));
    }

    #[test]
    fn exponent_never_exceeds_generic_bound() {
        let sources = [
            "x1^2 + x2^2 - x3^2 = 0",
            "x1^4 + x2^4 + x3^4 + x4^4 - 17 = 0",
            "x1^3 + x2^3 + x3^3 - 1 = 0",
            "x1^2 - 5*x2 = 0",
            "x1^6 - x2^6 - 3 = 0",
        ];
        for src in sources {
            let e = parse_equation(src).unwrap();
            let p = predicted_exponent(&e).unwrap();
            assert!(p.exponent <= p.bound_any, "{src}");
            if e.degree() > 2 && e.k() > 2 {
                assert!(p.exponent <= p.bound_irreducible, "{src}");
            }
        }
    }

    #[test]
    fn lower_bound_values() {
        let s = Signature {
            positive: 2,
            negative: 1,
            zero: 0,
        };
        assert_eq!(lower_bound_count(&s, 3).unwrap(), BigInt::from(13));
        let s = Signature {
            positive: 2,
            negative: 2,
            zero: 0,
        };
        assert_eq!(lower_bound_count(&s, 1).unwrap(), BigInt::from(25));
        let s = Signature {
            positive: 3,
            negative: 0,
            zero: 0,
        };
        assert_eq!(lower_bound_count(&s, 100).unwrap(), BigInt::one());
        let s = Signature {
            positive: 1,
            negative: 1,
            zero: 1,
        };
        assert!(matches!(
            lower_bound_count(&s, 5),
            Err(Error::SignatureHasZeros { zeros: 1 })
        ));
    }

    #[test]
    fn lower_bound_symmetric_in_signs() {
        for (r, s) in [(1usize, 3usize), (2, 2), (4, 1)] {
            let a = Signature {
                positive: r,
                negative: s,
                zero: 0,
            };
            let b = Signature {
                positive: s,
                negative: r,
                zero: 0,
            };
            assert_eq!(
                lower_bound_count(&a, 9).unwrap(),
                lower_bound_count(&b, 9).unwrap()
            );
        }
    }

    #[test]
    fn fermat_band_verdicts() {
        let low = [(10u64, 5u64), (20, 30), (40, 60)];
        assert_eq!(
            fermat_bound_check(&low, DEFAULT_FERMAT_CONSTANT).unwrap(),
            FermatVerdict::LowerViolated
        );
        let quadratic = [(10u64, 1000u64), (20, 4000), (40, 16000)];
        assert_eq!(
            fermat_bound_check(&quadratic, DEFAULT_FERMAT_CONSTANT).unwrap(),
            FermatVerdict::UpperSuspicious
        );
        let sane = [(50u64, 500u64), (100, 1100), (200, 2500)];
        assert_eq!(
            fermat_bound_check(&sane, DEFAULT_FERMAT_CONSTANT).unwrap(),
            FermatVerdict::Consistent
        );
        assert!(matches!(
            fermat_bound_check(&[(10, 5)], DEFAULT_FERMAT_CONSTANT),
            Err(Error::TooFewSamples { needed: 3, got: 1 })
        ));
    }
}
