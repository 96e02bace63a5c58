//! Reduction of equations to diagonal form.
//!
//! The quadratic pipeline is: triangular completion of squares on the form
//! matrix, translation of the center (absorbing linear terms and, for
//! paraboloid-type equations, the constant), then a per-variable integer
//! scaling that clears every denominator of the accumulated transform. A
//! conditional pipeline handles binary forms of higher degree that hide a
//! complete n-th power.

use crate::classify::{surface_of_diagonal, Surface};
use crate::count::is_unimodular;
use crate::error::Error;
use crate::matrix::{RatMatrix, SymmetricMatrix};
use crate::parser::Equation;
use crate::poly::{Monomial, Polynomial};
use crate::rat::{denominator_lcm, is_integer, rat, Rat};
use crate::transform::{compose, AffineTransform, StepLabel, TransformChain};
use crate::Result;
use num::{BigInt, One, Zero};

/// Everything the pipeline produced for one equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalizationReport {
    pub original: Equation,
    pub chain: TransformChain,
    /// Composed transform; its matrix is always integer, and its
    /// translation is integer unless `preservation_verified` is false.
    pub integer_transform: AffineTransform,
    /// Content-normalized diagonal equation.
    pub diagonal: Equation,
    /// `original.lhs` substituted equals `content_factor * diagonal.lhs`.
    pub content_factor: Rat,
    pub det: Rat,
    pub is_unimodular: bool,
    pub surface: Surface,
    /// False when a translation component came out non-integer, in which
    /// case the count-asymptotics guarantee does not apply.
    pub preservation_verified: bool,
}

/// What remains after the center translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterResidual {
    /// Central case: pure power terms plus this constant.
    Constant(Rat),
    /// Paraboloid case: this variable (0-based) survives linearly and has
    /// absorbed the constant.
    LinearVariable(usize),
}

fn permutation_transform(k: usize, a: usize, b: usize) -> AffineTransform {
    let mut m = RatMatrix::identity(k);
    m.swap_columns(a, b);
    AffineTransform::linear(m)
}

/// `x_a = u + v, x_b = u - v`, the classical split that manufactures a
/// square when the whole remaining diagonal is zero.
fn split_transform(k: usize, a: usize, b: usize) -> AffineTransform {
    let mut m = RatMatrix::identity(k);
    m.set(a, a, rat(1));
    m.set(a, b, rat(1));
    m.set(b, a, rat(1));
    m.set(b, b, rat(-1));
    AffineTransform::linear(m)
}

/// Elementary substitutions of a reduction, with their labels.
pub type ReductionSteps = Vec<(StepLabel, AffineTransform)>;

/// Iterated completion of squares on a symmetric form matrix.
///
/// Returns the elementary steps (squares-completion substitutions, plus
/// variable swaps or `u±v` splits when a pivot is missing) and the diagonal
/// coefficients of the reduced form. Adjacent steps with the same label are
/// composed, so the pivot-free case yields a single upper-triangular step
/// with unit diagonal.
pub fn lagrange_reduce_steps(m: &SymmetricMatrix) -> Result<(ReductionSteps, Vec<Rat>)> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let k = m.dim();
    let mut a = m.clone();
    let mut steps: Vec<(StepLabel, AffineTransform)> = Vec::new();
    let push = |steps: &mut ReductionSteps,
                    a: &mut SymmetricMatrix,
                    label: StepLabel,
                    t: AffineTransform|
     -> Result<()> {
        *a = a.congruent(t.matrix());
        match steps.last_mut() {
            Some((last_label, last)) if *last_label == label => {
                *last = compose(last, &t)?;
            }
            _ => steps.push((label, t)),
        }
        Ok(())
    };

    for i in 0..k {
        if a.get(i, i).is_zero() {
            if let Some(j) = (i + 1..k).find(|&j| !a.get(j, j).is_zero()) {
                push(&mut steps, &mut a, StepLabel::Permutation, permutation_transform(k, i, j))?;
            } else {
                // whole trailing diagonal is zero; look for a cross term
                let pair = (i..k)
                    .flat_map(|r| (r + 1..k).map(move |c| (r, c)))
                    .find(|&(r, c)| !a.get(r, c).is_zero());
                let Some((r, c)) = pair else {
                    break; // nothing left to reduce
                };
                push(&mut steps, &mut a, StepLabel::Lagrange, split_transform(k, r, c))?;
                if r != i {
                    push(&mut steps, &mut a, StepLabel::Permutation, permutation_transform(k, i, r))?;
                }
            }
        }
        let d = a.get(i, i).clone();
        debug_assert!(!d.is_zero());
        if (i + 1..k).any(|j| !a.get(i, j).is_zero()) {
            let mut e = RatMatrix::identity(k);
            for j in i + 1..k {
                e.set(i, j, -(a.get(i, j) / &d));
            }
            push(&mut steps, &mut a, StepLabel::Lagrange, AffineTransform::linear(e))?;
        }
    }

    let diag = (0..k).map(|i| a.get(i, i).clone()).collect();
    Ok((steps, diag))
}

/// Composed form of [`lagrange_reduce_steps`]: one rational transform with
/// `det != 0` whose substitution diagonalizes the form.
pub fn lagrange_reduce(m: &SymmetricMatrix) -> Result<(AffineTransform, Vec<Rat>)> {
    let (steps, diag) = lagrange_reduce_steps(m)?;
    let chain = TransformChain::from_steps(m.dim(), steps)?;
    Ok((chain.composed().clone(), diag))
}

/// Diagonal coefficients `(M_1, M_2/M_1, ..., M_r/M_{r-1})` from the
/// leading principal minors, zero-padded past the rank.
///
/// Errors when a minor up to the rank vanishes; the caller should fall back
/// to [`lagrange_reduce`], which pivots.
pub fn jacobi_canonical(m: &SymmetricMatrix) -> Result<Vec<Rat>> {
    let minors = m.angular_minors();
    let rank = m.rank();
    for (i, minor) in minors.iter().take(rank).enumerate() {
        if minor.is_zero() {
            return Err(Error::ZeroMinor { index: i + 1 });
        }
    }
    let mut out = Vec::with_capacity(m.dim());
    for i in 0..m.dim() {
        if i >= rank {
            out.push(Rat::zero());
        } else if i == 0 {
            out.push(minors[0].clone());
        } else {
            out.push(&minors[i] / &minors[i - 1]);
        }
    }
    Ok(out)
}

/// Closed-form squares-completion matrix for a ternary quadratic form with
/// `M_1, M_2 != 0`:
///
/// ```text
/// | 1   -a12/M1   (a12*a23 - a13*a22)/M2 |
/// | 0      1      (a12*a13 - a11*a23)/M2 |
/// | 0      0                1            |
/// ```
///
/// Substituting it diagonalizes the form with the minor-ratio coefficients
/// of [`jacobi_canonical`], and it equals the transform produced by
/// [`lagrange_reduce`].
pub fn lagrange_matrix_3(m: &SymmetricMatrix) -> Result<AffineTransform> {
    if m.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: m.dim(),
        });
    }
    let minors = m.angular_minors();
    if minors[0].is_zero() {
        return Err(Error::ZeroMinor { index: 1 });
    }
    if minors[1].is_zero() {
        return Err(Error::ZeroMinor { index: 2 });
    }
    let (a11, a12, a13) = (m.get(0, 0), m.get(0, 1), m.get(0, 2));
    let (a22, a23) = (m.get(1, 1), m.get(1, 2));
    let m1 = &minors[0];
    let m2 = &minors[1];
    let mut c = RatMatrix::identity(3);
    c.set(0, 1, -(a12 / m1));
    c.set(0, 2, (a12 * a23 - a13 * a22) / m2);
    c.set(1, 2, (a12 * a13 - a11 * a23) / m2);
    Ok(AffineTransform::linear(c))
}

/// Completes the square on every variable of a cross-term-free quadratic,
/// translating the center. A single variable may survive linearly; it then
/// absorbs the constant term (paraboloid case).
pub fn complete_center(p: &Polynomial) -> Result<(AffineTransform, CenterResidual)> {
    if p.degree() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            got: p.degree(),
        });
    }
    if p.terms()
        .any(|(m, _)| m.total_degree() == 2 && m.support_size() > 1)
    {
        return Err(Error::NotDiagonal);
    }
    let k = p.k();
    let squares: Vec<Rat> = (0..k)
        .map(|i| p.coeff(&Monomial::power(k, i, 2)))
        .collect();
    let linears: Vec<Rat> = (0..k)
        .map(|i| p.coeff(&Monomial::power(k, i, 1)))
        .collect();

    let mut shift = vec![Rat::zero(); k];
    let mut constant = p.constant_term();
    for i in 0..k {
        if !squares[i].is_zero() && !linears[i].is_zero() {
            // d x^2 + l x = d (x + l/2d)^2 - l^2/4d
            let t = -(&linears[i] / (&squares[i] * rat(2)));
            constant += &squares[i] * &t * &t + &linears[i] * &t;
            shift[i] = t;
        }
    }

    let survivors: Vec<usize> = (0..k)
        .filter(|&i| squares[i].is_zero() && !linears[i].is_zero())
        .collect();
    let residual = match survivors.as_slice() {
        [] => CenterResidual::Constant(constant),
        [j] => {
            // absorb the constant: l (x + t) + c = l x  when  t = -c/l
            shift[*j] = -(&constant / &linears[*j]);
            CenterResidual::LinearVariable(*j)
        }
        more => {
            return Err(Error::DegenerateLinearPart { count: more.len() });
        }
    };
    Ok((AffineTransform::translation_of(shift), residual))
}

/// Smallest per-variable integer scaling that makes the matrix of `t`
/// integer: variable `j` is scaled by the least common multiple of the
/// denominators of column `j`.
pub fn denominator_clearing(t: &AffineTransform) -> AffineTransform {
    let k = t.dim();
    let factors: Vec<Rat> = (0..k)
        .map(|j| {
            let column: Vec<Rat> = (0..k).map(|i| t.matrix().get(i, j).clone()).collect();
            Rat::from_integer(denominator_lcm(column.iter()))
        })
        .collect();
    AffineTransform::scaling(&factors)
}

/// Clears the denominators of a rational transform with integer
/// translation. Returns `(deformation, result)` where `result` is the
/// composition `t ∘ deformation` and has an all-integer matrix; each
/// scaling factor is minimal positive.
pub fn integerize(t: &AffineTransform) -> Result<(AffineTransform, AffineTransform)> {
    if let Some(idx) = t.translation().iter().position(|c| !is_integer(c)) {
        return Err(Error::NonIntegerTranslation { index: idx });
    }
    let deformation = denominator_clearing(t);
    let result = compose(t, &deformation)?;
    debug_assert!(result.has_integer_matrix());
    Ok((deformation, result))
}

fn build_report(
    original: &Equation,
    chain: TransformChain,
    preservation_verified: bool,
) -> Result<DiagonalizationReport> {
    let total = chain.composed().clone();
    let substituted = original.lhs.substitute(&total)?;
    let (diag_poly, content_factor) = substituted.content_normalize()?;
    if !diag_poly.is_diagonal() {
        return Err(Error::NotDiagonalized);
    }
    let surface = surface_of_diagonal(&diag_poly);
    let det = total.det();
    let unimodular = is_unimodular(&total);
    Ok(DiagonalizationReport {
        original: original.clone(),
        chain,
        integer_transform: total,
        diagonal: Equation::from_poly(diag_poly),
        content_factor,
        det,
        is_unimodular: unimodular,
        surface,
        preservation_verified,
    })
}

/// Full quadratic pipeline: squares completion, center translation,
/// denominator-clearing deformation, substitution, content normalization.
///
/// A non-integer center does not abort the pipeline; the report is flagged
/// via `preservation_verified = false` and keeps the rational translation.
pub fn diagonalize_quadratic(e: &Equation) -> Result<DiagonalizationReport> {
    let p = &e.lhs;
    if p.degree() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            got: p.degree(),
        });
    }
    let m = p.quadratic_form_matrix()?;
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let (steps, _) = lagrange_reduce_steps(&m)?;
    let mut chain = TransformChain::empty(p.k());
    for (label, t) in steps {
        chain.push(label, t)?;
    }
    let after_lagrange = p.substitute(chain.composed())?;
    let (translation, _residual) = complete_center(&after_lagrange)?;
    chain.push(StepLabel::Transfer, translation)?;
    // what matters is the translation of the composed transform: an
    // integer center shift can still turn fractional once the rational
    // shear is folded in
    let preservation_verified = chain.composed().has_integer_translation();
    let deformation = denominator_clearing(chain.composed());
    chain.push(StepLabel::Deformation, deformation)?;
    build_report(e, chain, preservation_verified)
}

/// Binomial coefficient as a rational, small arguments only.
fn binomial(n: u32, k: u32) -> Rat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rat::new(num, den)
}

/// Checks whether a homogeneous binary form of degree `n >= 3` is a shifted
/// power `a (x1 + λ x2)^n + μ x2^n` and, if so, returns the rational
/// substitution that diagonalizes it. The second variable is rescaled by
/// the largest `ρ` with `μ = m ρ^n`, so the trailing coefficient sheds
/// every n-th-power factor.
pub fn binary_form_complete_power(e: &Equation) -> Result<Option<AffineTransform>> {
    let p = &e.lhs;
    if p.k() != 2 {
        return Err(Error::NotBinaryForm {
            reason: format!("{} variables", p.k()),
        });
    }
    if p.is_zero() || !p.is_homogeneous() {
        return Err(Error::NotBinaryForm {
            reason: "a non-homogeneous polynomial".into(),
        });
    }
    let n = p.degree();
    if n < 3 {
        return Err(Error::NotBinaryForm {
            reason: format!("degree {n} < 3"),
        });
    }
    let coeff = |i: u32| p.coeff(&Monomial::new(vec![n - i, i]));
    let a = coeff(0);
    if a.is_zero() {
        return Err(Error::NotBinaryForm {
            reason: "zero leading coefficient".into(),
        });
    }
    let lambda = coeff(1) / (&a * rat(n as i64));
    for i in 1..n {
        let expected = &a * binomial(n, i) * num::pow(lambda.clone(), i as usize);
        if coeff(i) != expected {
            return Ok(None);
        }
    }
    let mu = coeff(n) - &a * num::pow(lambda.clone(), n as usize);
    let rho = if mu.is_zero() {
        Rat::one()
    } else {
        crate::rat::nth_power_split_rat(&mu, n).1
    };
    let mut c = RatMatrix::identity(2);
    c.set(0, 1, -(&lambda / &rho));
    c.set(1, 1, rho.recip());
    Ok(Some(AffineTransform::linear(c)))
}

/// Applies [`integerize`] to a user-supplied diagonalizing transform of any
/// degree and assembles the report. The substitution of `t` must already
/// yield a diagonal polynomial (checked symbolically).
pub fn integerize_higher(e: &Equation, t: &AffineTransform) -> Result<DiagonalizationReport> {
    let substituted = e.lhs.substitute(t)?;
    if !substituted.is_diagonal() {
        return Err(Error::NotDiagonalized);
    }
    let (deformation, _) = integerize(t)?;
    let mut chain = TransformChain::empty(e.k());
    chain.push(StepLabel::Lagrange, t.clone())?;
    chain.push(StepLabel::Deformation, deformation)?;
    build_report(e, chain, true)
}

/// Dispatcher used by the command-line front end: trivial report for
/// equations already in a canonical diagonal shape, the quadratic pipeline
/// for degree 2, and the power-completion route for homogeneous binary
/// forms of higher degree.
///
/// Absence of cross terms alone is not enough for the trivial route: a
/// variable occurring both squared and linearly still needs its square
/// completed.
pub fn diagonalize(e: &Equation) -> Result<DiagonalizationReport> {
    if e.lhs.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if e.lhs.is_diagonal() && surface_of_diagonal(&e.lhs) != Surface::Degenerate {
        return build_report(e, TransformChain::empty(e.k()), true);
    }
    match e.degree() {
        2 => diagonalize_quadratic(e),
        n if n >= 3 => {
            let t = binary_form_complete_power(e)?.ok_or_else(|| {
                Error::Unsupported(
                    "the form does not split as a complete power plus a pure power".into(),
                )
            })?;
            integerize_higher(e, &t)
        }
        _ => Err(Error::Unsupported(
            "nothing to diagonalize at degree below 2".into(),
        )),
    }
}
