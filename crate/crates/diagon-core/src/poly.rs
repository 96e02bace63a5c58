//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, whose derived
//! ordering is the lexicographic monomial order with `x1 > x2 > ... > xk`.
//! Every operation is a pure function on immutable values.

use crate::error::Error;
use crate::matrix::{RatMatrix, SymmetricMatrix};
use crate::rat::{rat, Rat};
use crate::transform::AffineTransform;
use crate::Result;
use num::{BigInt, Integer, One, Signed, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of one term; index `i` is the power of `x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn constant(k: usize) -> Self {
        Monomial {
            exponents: vec![0; k],
        }
    }

    /// `x_{var+1}^power` in a `k`-variable ring (0-based `var`).
    pub fn power(k: usize, var: usize, power: u32) -> Self {
        let mut exponents = vec![0; k];
        exponents[var] = power;
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Number of variables with a nonzero exponent.
    pub fn support_size(&self) -> usize {
        self.exponents.iter().filter(|&&e| e > 0).count()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Sparse polynomial in `k` variables over the rationals.
///
/// Invariant: no stored coefficient is zero, and every key has length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    k: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(k: usize) -> Self {
        Polynomial {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(k: usize, value: Rat) -> Self {
        let mut p = Polynomial::zero(k);
        p.add_term(Monomial::constant(k), value);
        p
    }

    /// The variable `x_{var+1}` (0-based `var`).
    pub fn variable(k: usize, var: usize) -> Self {
        let mut p = Polynomial::zero(k);
        p.add_term(Monomial::power(k, var, 1), Rat::one());
        p
    }

    pub fn from_terms(k: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Polynomial::zero(k);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Builds from `(coefficient, exponents)` pairs of machine integers.
    pub fn from_i64(k: usize, terms: &[(i64, &[u32])]) -> Self {
        Polynomial::from_terms(
            k,
            terms
                .iter()
                .map(|(c, e)| (Monomial::new(e.to_vec()), rat(*c))),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Max total degree over terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in ascending lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Leading term in the lexicographic order (`x1 > x2 > ...`).
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        assert_eq!(m.len(), self.k, "monomial arity mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rat) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(self.k);
        }
        Polynomial {
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Evaluates at an exact rational point.
    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Applies the substitution `x_old = C x_new + c`, returning
    /// `q(x') = p(C x' + c)`.
    pub fn substitute(&self, t: &AffineTransform) -> Result<Polynomial> {
        if t.dim() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: t.dim(),
            });
        }
        let k = self.k;
        // Linear images of each old variable in the new variables.
        let images: Vec<Polynomial> = (0..k)
            .map(|i| {
                let mut p = Polynomial::zero(k);
                for j in 0..k {
                    p.add_term(Monomial::power(k, j, 1), t.matrix().get(i, j).clone());
                }
                p.add_term(Monomial::constant(k), t.translation()[i].clone());
                p
            })
            .collect();
        // Power tables so repeated exponents cost one multiply each.
        let max_eps: Vec<u32> = (0..k)
            .map(|i| {
                self.terms
                    .keys()
                    .map(|m| m.exponents()[i])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .zip(&max_eps)
            .map(|(img, &me)| {
                let mut tbl = Vec::with_capacity(me as usize + 1);
                tbl.push(Polynomial::constant(k, Rat::one()));
                for e in 1..=me {
                    let next = &tbl[(e - 1) as usize] * img;
                    tbl.push(next);
                }
                tbl
            })
            .collect();
        let mut out = Polynomial::zero(k);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(k, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            out = &out + &term;
        }
        debug_assert_eq!(out.degree(), self.degree(), "substitution changed degree");
        Ok(out)
    }

    /// Matrix of the degree-2 part: `M[i][i]` is the coefficient of
    /// `x_i^2`, `M[i][j]` half the coefficient of `x_i x_j`. Linear and
    /// constant terms are ignored.
    pub fn quadratic_form_matrix(&self) -> Result<SymmetricMatrix> {
        if self.degree() > 2 {
            return Err(Error::DegreeTooHigh {
                max: 2,
                got: self.degree(),
            });
        }
        let k = self.k;
        let mut m = RatMatrix::zero(k, k);
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        for (mono, c) in &self.terms {
            if mono.total_degree() != 2 {
                continue;
            }
            let nz: Vec<(usize, u32)> = mono
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect();
            match nz.as_slice() {
                [(i, 2)] => m.set(*i, *i, c.clone()),
                [(i, 1), (j, 1)] => {
                    let v = c * &half;
                    m.set(*i, *j, v.clone());
                    m.set(*j, *i, v);
                }
                _ => unreachable!("degree-2 monomial with unexpected support"),
            }
        }
        Ok(SymmetricMatrix::new(m))
    }

    /// Rebuilds the degree-2 part from a symmetric matrix, the inverse of
    /// [`Polynomial::quadratic_form_matrix`].
    pub fn from_quadratic_form(m: &SymmetricMatrix) -> Polynomial {
        let k = m.dim();
        let mut p = Polynomial::zero(k);
        for i in 0..k {
            p.add_term(Monomial::power(k, i, 2), m.get(i, i).clone());
            for j in i + 1..k {
                let mut mono = vec![0; k];
                mono[i] = 1;
                mono[j] = 1;
                p.add_term(Monomial::new(mono), m.get(i, j) * rat(2));
            }
        }
        p
    }

    /// Divides out the rational content so the result has coprime integer
    /// coefficients and a positive leading coefficient in lexicographic
    /// order. Returns `(primitive, factor)` with `self = factor * primitive`.
    pub fn content_normalize(&self) -> Result<(Polynomial, Rat)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut factor = Rat::new(num_gcd, den_lcm);
        let (_, lead) = self.leading().expect("nonzero polynomial has a leading term");
        if lead.is_negative() {
            factor = -factor;
        }
        let inv = factor.recip();
        Ok((self.scale(&inv), factor))
    }

    /// True iff every monomial involves at most one variable.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|m| m.support_size() <= 1)
    }

    /// Degrees with which each variable occurs, as a set per variable.
    pub fn variable_degrees(&self) -> Vec<std::collections::BTreeSet<u32>> {
        let mut out = vec![std::collections::BTreeSet::new(); self.k];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    out[i].insert(e);
                }
            }
        }
        out
    }

    /// Max exponent of one variable across all terms.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponents()[var])
            .max()
            .unwrap_or(0)
    }

    /// Splits into coefficient polynomials of the powers of `var`:
    /// entry `d` is the polynomial multiplying `var^d`, with `var` erased
    /// from its monomials.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let top = self.degree_in(var) as usize;
        let mut out = vec![Polynomial::zero(self.k); top + 1];
        for (m, c) in &self.terms {
            let d = m.exponents()[var] as usize;
            let mut rest = m.exponents().to_vec();
            rest[var] = 0;
            out[d].add_term(Monomial::new(rest), c.clone());
        }
        out
    }

    /// True iff the polynomial is homogeneous of its own degree.
    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.total_degree() == d)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::constant(self.k))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.k, rhs.k, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.k, rhs.k, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&rat(-1))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.k, rhs.k, "polynomial arity mismatch");
        let mut out = Polynomial::zero(self.k);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}
