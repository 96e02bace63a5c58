//! Exact brute-force counting of integer solutions.
//!
//! The enumerator solves for one variable whenever the equation is linear,
//! a pure power, or quadratic in it, cutting a dimension off the scan; the
//! remaining coordinates are enumerated exactly, in parallel over the
//! outermost one. Arithmetic runs in `i128` when a precomputed magnitude
//! bound proves it cannot overflow, otherwise in big integers; there is no
//! floating point anywhere in a count.

use crate::diagonalize::DiagonalizationReport;
use crate::error::Error;
use crate::matrix::{is_unit, RatMatrix};
use crate::parser::Equation;
use crate::poly::Polynomial;
use crate::rat::Rat;
use crate::transform::AffineTransform;
use crate::Result;
use num::integer::Roots;
use num::{BigInt, Integer, One, Signed, Zero};
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Default refusal threshold for the number of enumerated points.
pub const DEFAULT_CEILING: u128 = 10_000_000_000;

/// Knobs for the enumeration.
#[derive(Debug, Clone)]
pub struct CountConfig {
    /// Maximum number of points the enumerator may visit.
    pub ceiling: u128,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            ceiling: DEFAULT_CEILING,
        }
    }
}

/// Where a count was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountRegion {
    Hypercube,
    PullbackImage,
}

impl CountRegion {
    pub fn as_str(self) -> &'static str {
        match self {
            CountRegion::Hypercube => "hypercube",
            CountRegion::PullbackImage => "pullback-image",
        }
    }
}

/// One exact count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub n: u64,
    pub count: u64,
    pub region: CountRegion,
    pub elapsed: Duration,
}

/// Integer arithmetic the kernel is generic over: `i128` on the fast path,
/// `BigInt` as the overflow-proof fallback.
trait KernelInt:
    Integer + Roots + Signed + Clone + Send + Sync + std::fmt::Debug + 'static
{
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl KernelInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn from_bigint(v: &BigInt) -> Self {
        i128::try_from(v).expect("magnitude bound admitted this coefficient")
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl KernelInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

fn ipow<T: KernelInt>(base: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

fn eval_terms<T: KernelInt>(terms: &[(T, Vec<u32>)], point: &[T]) -> T {
    let mut acc = T::zero();
    for (c, exps) in terms {
        let mut term = c.clone();
        for (x, &e) in point.iter().zip(exps) {
            for _ in 0..e {
                term = term * x.clone();
            }
        }
        acc = acc + term;
    }
    acc
}

/// Exact integer n-th roots, guarded against the even-root-of-negative
/// panic of the underlying `nth_root`.
fn nth_roots<T: KernelInt>(v: &T, n: u32) -> Vec<T> {
    if v.is_zero() {
        return vec![T::zero()];
    }
    if n.is_multiple_of(2) {
        if v.is_negative() {
            return vec![];
        }
        let r = v.nth_root(n);
        if ipow(&r, n) == *v {
            vec![-r.clone(), r]
        } else {
            vec![]
        }
    } else {
        let mag = v.abs().nth_root(n);
        let r = if v.is_negative() { -mag } else { mag };
        if ipow(&r, n) == *v {
            vec![r]
        } else {
            vec![]
        }
    }
}

/// How the distinguished variable is solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SolveKind {
    Linear,
    Power(u32),
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SolvePlan {
    Scan,
    Solve { var: usize, kind: SolveKind },
}

/// Picks the variable to solve for: a linear one if present (lowest
/// index), else the last pure-power variable, else any quadratic one.
fn choose_plan(p: &Polynomial) -> SolvePlan {
    let k = p.k();
    for var in 0..k {
        if p.degree_in(var) == 1 {
            return SolvePlan::Solve {
                var,
                kind: SolveKind::Linear,
            };
        }
    }
    let mut power = None;
    for var in 0..k {
        let n = p.degree_in(var);
        if n >= 2 {
            let pure = p
                .terms()
                .all(|(m, _)| m.exponents()[var] == 0 || m == &crate::poly::Monomial::power(k, var, n));
            if pure {
                power = Some((var, n));
            }
        }
    }
    if let Some((var, n)) = power {
        return SolvePlan::Solve {
            var,
            kind: SolveKind::Power(n),
        };
    }
    for var in 0..k {
        if p.degree_in(var) == 2 {
            return SolvePlan::Solve {
                var,
                kind: SolveKind::Quadratic,
            };
        }
    }
    SolvePlan::Scan
}

/// The polynomial with denominators cleared, as big-integer terms.
fn scaled_integer_terms(p: &Polynomial) -> Vec<(BigInt, Vec<u32>)> {
    let lcm = crate::rat::denominator_lcm(p.terms().map(|(_, c)| c));
    p.terms()
        .map(|(m, c)| {
            let scaled = c * Rat::from_integer(lcm.clone());
            debug_assert!(scaled.denom().is_one());
            (scaled.numer().clone(), m.exponents().to_vec())
        })
        .collect()
}

/// Largest absolute value any term sum can reach on the given ranges.
fn magnitude_bound(terms: &[(BigInt, Vec<u32>)], ranges: &[(i64, i64)]) -> BigInt {
    let radii: Vec<BigInt> = ranges
        .iter()
        .map(|&(lo, hi)| BigInt::from(lo.unsigned_abs().max(hi.unsigned_abs()).max(1)))
        .collect();
    let mut bound = BigInt::zero();
    for (c, exps) in terms {
        let mut term = c.abs();
        for (r, &e) in radii.iter().zip(exps) {
            term *= num::pow(r.clone(), e as usize);
        }
        bound += term;
    }
    bound
}

struct Membership<'a> {
    transform: &'a AffineTransform,
    bound: Rat,
}

impl Membership<'_> {
    fn contains(&self, point: &[BigInt]) -> bool {
        let pt: Vec<Rat> = point
            .iter()
            .map(|v| Rat::from_integer(v.clone()))
            .collect();
        self.transform
            .apply(&pt)
            .iter()
            .all(|v| v.abs() <= self.bound)
    }
}

enum EngineMode<T> {
    Scan {
        terms: Vec<(T, Vec<u32>)>,
    },
    Solve {
        var: usize,
        kind: SolveKind,
        /// `buckets[d]` multiplies `var^d`, with `var` erased.
        buckets: Vec<Vec<(T, Vec<u32>)>>,
        lo: T,
        hi: T,
    },
}

struct Engine<'a, T> {
    ranges: &'a [(i64, i64)],
    free: Vec<usize>,
    mode: EngineMode<T>,
    membership: Option<Membership<'a>>,
}

impl<T: KernelInt> Engine<'_, T> {
    fn accept(&self, point: &mut [T], var: usize, value: T) -> bool {
        point[var] = value;
        match &self.membership {
            None => true,
            Some(m) => {
                let big: Vec<BigInt> = point.iter().map(KernelInt::to_bigint).collect();
                m.contains(&big)
            }
        }
    }

    /// Candidate values of the solved variable at one assignment of the
    /// free coordinates. `None` means every value works.
    fn candidates(&self, point: &[T]) -> Option<Vec<T>> {
        let EngineMode::Solve { kind, buckets, .. } = &self.mode else {
            unreachable!("candidates only called in solve mode");
        };
        let value = |d: usize| -> T {
            buckets
                .get(d)
                .map(|b| eval_terms(b, point))
                .unwrap_or_else(T::zero)
        };
        let linear = |a: T, c: T| -> Option<Vec<T>> {
            if a.is_zero() {
                if c.is_zero() {
                    None
                } else {
                    Some(vec![])
                }
            } else if c.is_multiple_of(&a) {
                Some(vec![-(c / a)])
            } else {
                Some(vec![])
            }
        };
        match kind {
            SolveKind::Linear => linear(value(1), value(0)),
            SolveKind::Power(n) => {
                let a = value(*n as usize);
                let c = value(0);
                debug_assert!(!a.is_zero());
                if c.is_multiple_of(&a) {
                    Some(nth_roots(&(-(c / a)), *n))
                } else {
                    Some(vec![])
                }
            }
            SolveKind::Quadratic => {
                let a = value(2);
                if a.is_zero() {
                    return linear(value(1), value(0));
                }
                let b = value(1);
                let c = value(0);
                let disc = b.clone() * b.clone()
                    - T::from_i64(4) * a.clone() * c;
                if disc.is_negative() {
                    return Some(vec![]);
                }
                let s = disc.sqrt();
                if s.clone() * s.clone() != disc {
                    return Some(vec![]);
                }
                let two_a = T::from_i64(2) * a;
                let mut roots = Vec::with_capacity(2);
                let r1 = -b.clone() + s.clone();
                if r1.is_multiple_of(&two_a) {
                    roots.push(r1 / two_a.clone());
                }
                if !s.is_zero() {
                    let r2 = -b - s;
                    if r2.is_multiple_of(&two_a) {
                        roots.push(r2 / two_a);
                    }
                }
                Some(roots)
            }
        }
    }

    fn leaf(&self, point: &mut [T]) -> u64 {
        match &self.mode {
            EngineMode::Scan { terms } => {
                if !eval_terms(terms, point).is_zero() {
                    return 0;
                }
                match &self.membership {
                    None => 1,
                    Some(m) => {
                        let big: Vec<BigInt> = point.iter().map(KernelInt::to_bigint).collect();
                        u64::from(m.contains(&big))
                    }
                }
            }
            EngineMode::Solve { var, lo, hi, .. } => match self.candidates(point) {
                Some(values) => {
                    let mut acc = 0;
                    for v in values {
                        if v >= *lo && v <= *hi && self.accept(point, *var, v) {
                            acc += 1;
                        }
                    }
                    acc
                }
                None => {
                    // every value of the solved variable works
                    let (rlo, rhi) = self.ranges[*var];
                    if self.membership.is_none() {
                        (rhi - rlo + 1) as u64
                    } else {
                        let mut acc = 0;
                        for v in rlo..=rhi {
                            if self.accept(point, *var, T::from_i64(v)) {
                                acc += 1;
                            }
                        }
                        acc
                    }
                }
            },
        }
    }

    fn recurse(&self, depth: usize, point: &mut [T]) -> u64 {
        if depth == self.free.len() {
            return self.leaf(point);
        }
        let var = self.free[depth];
        let (lo, hi) = self.ranges[var];
        let mut acc = 0;
        for v in lo..=hi {
            point[var] = T::from_i64(v);
            acc += self.recurse(depth + 1, point);
        }
        acc
    }

    fn run(&self, k: usize) -> u64 {
        if self.free.is_empty() {
            let mut point = vec![T::zero(); k];
            return self.leaf(&mut point);
        }
        let first = self.free[0];
        let (lo, hi) = self.ranges[first];
        (lo..hi + 1)
            .into_par_iter()
            .map(|v0| {
                let mut point = vec![T::zero(); k];
                point[first] = T::from_i64(v0);
                self.recurse(1, &mut point)
            })
            .sum()
    }
}

fn build_and_run<T: KernelInt>(
    p: &Polynomial,
    scaled: &[(BigInt, Vec<u32>)],
    plan: SolvePlan,
    ranges: &[(i64, i64)],
    membership: Option<Membership<'_>>,
) -> u64 {
    let k = p.k();
    let terms: Vec<(T, Vec<u32>)> = scaled
        .iter()
        .map(|(c, e)| (T::from_bigint(c), e.clone()))
        .collect();
    let (free, mode) = match plan {
        SolvePlan::Scan => ((0..k).collect::<Vec<_>>(), EngineMode::Scan { terms }),
        SolvePlan::Solve { var, kind } => {
            let top = p.degree_in(var) as usize;
            let mut buckets: Vec<Vec<(T, Vec<u32>)>> = vec![Vec::new(); top + 1];
            for (c, exps) in terms {
                let d = exps[var] as usize;
                let mut rest = exps;
                rest[var] = 0;
                buckets[d].push((c, rest));
            }
            let free = (0..k).filter(|&v| v != var).collect();
            let (lo, hi) = ranges[var];
            (
                free,
                EngineMode::Solve {
                    var,
                    kind,
                    buckets,
                    lo: T::from_i64(lo),
                    hi: T::from_i64(hi),
                },
            )
        }
    };
    let engine = Engine {
        ranges,
        free,
        mode,
        membership,
    };
    engine.run(k)
}

/// Magnitudes below this run on `i128`; the quadratic discriminant squares
/// them, so the margin is large.
const I128_SAFE_BOUND: u128 = 1_000_000_000_000_000;

fn count_region(
    p: &Polynomial,
    ranges: &[(i64, i64)],
    membership: Option<Membership<'_>>,
    cfg: &CountConfig,
) -> Result<u64> {
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(0);
    }
    let plan = if p.is_zero() {
        SolvePlan::Scan
    } else {
        choose_plan(p)
    };
    // volume actually enumerated: the solved variable costs nothing
    let volume = ranges
        .iter()
        .enumerate()
        .filter(|&(i, _)| match plan {
            SolvePlan::Solve { var, .. } => i != var,
            SolvePlan::Scan => true,
        })
        .map(|(_, &(lo, hi))| (hi - lo + 1) as u128)
        .try_fold(1u128, |acc, w| acc.checked_mul(w))
        .unwrap_or(u128::MAX);
    if volume > cfg.ceiling {
        return Err(Error::EnumerationTooLarge {
            volume: volume.to_string(),
            ceiling: cfg.ceiling,
        });
    }
    let scaled = scaled_integer_terms(p);
    let bound = magnitude_bound(&scaled, ranges);
    let count = if bound <= BigInt::from(I128_SAFE_BOUND) {
        build_and_run::<i128>(p, &scaled, plan, ranges, membership)
    } else {
        build_and_run::<BigInt>(p, &scaled, plan, ranges, membership)
    };
    Ok(count)
}

/// Exact number of integer solutions of `e` in `[-N, N]^k`.
pub fn count_hypercube(e: &Equation, n: u64, cfg: &CountConfig) -> Result<CountResult> {
    let start = Instant::now();
    let radius = i64::try_from(n)
        .map_err(|_| Error::Unsupported(format!("hypercube radius {n} is out of range")))?;
    let ranges = vec![(-radius, radius); e.k()];
    let count = count_region(&e.lhs, &ranges, None, cfg)?;
    Ok(CountResult {
        n,
        count,
        region: CountRegion::Hypercube,
        elapsed: start.elapsed(),
    })
}

/// Exact number of integer points `x'` with `q(x') = 0` whose image
/// `t(x')` lies in `[-N, N]^k`: the solutions of the transformed equation
/// inside the image of the hypercube.
pub fn count_in_pullback(
    q: &Polynomial,
    t: &AffineTransform,
    n: u64,
    cfg: &CountConfig,
) -> Result<CountResult> {
    let start = Instant::now();
    let k = q.k();
    if t.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: t.dim(),
        });
    }
    let vertices = image_vertices(t, n)?;
    let mut ranges = Vec::with_capacity(k);
    for i in 0..k {
        let lo = vertices
            .iter()
            .map(|v| v[i].ceil().to_integer())
            .min()
            .expect("at least one vertex");
        let hi = vertices
            .iter()
            .map(|v| v[i].floor().to_integer())
            .max()
            .expect("at least one vertex");
        let lo = i64::try_from(&lo)
            .map_err(|_| Error::Unsupported("pullback box coordinate out of range".into()))?;
        let hi = i64::try_from(&hi)
            .map_err(|_| Error::Unsupported("pullback box coordinate out of range".into()))?;
        ranges.push((lo, hi));
    }
    let membership = Membership {
        transform: t,
        bound: Rat::from_integer(BigInt::from(n)),
    };
    let count = count_region(q, &ranges, Some(membership), cfg)?;
    Ok(CountResult {
        n,
        count,
        region: CountRegion::PullbackImage,
        elapsed: start.elapsed(),
    })
}

/// Pullback count for a diagonalization report: solutions of the diagonal
/// equation inside the transformed hypercube.
pub fn count_pullback(
    report: &DiagonalizationReport,
    n: u64,
    cfg: &CountConfig,
) -> Result<CountResult> {
    count_in_pullback(
        &report.diagonal.lhs,
        &report.integer_transform,
        n,
        cfg,
    )
}

/// Images of the `2^k` corners of `[-N, N]^k` under the map sending old
/// coordinates to new ones (`x -> C^{-1}(x - c)`), sorted.
pub fn image_vertices(t: &AffineTransform, n: u64) -> Result<Vec<Vec<Rat>>> {
    let k = t.dim();
    if k >= 24 {
        return Err(Error::Unsupported(format!(
            "2^{k} hypercube corners is past any enumerable region"
        )));
    }
    let radius = Rat::from_integer(BigInt::from(n));
    let inv = t.matrix().inverse()?;
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1u32 << k) {
        let corner: Vec<Rat> = (0..k)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    radius.clone()
                } else {
                    -radius.clone()
                }
            })
            .collect();
        let shifted: Vec<Rat> = corner
            .iter()
            .zip(t.translation())
            .map(|(p, c)| p - c)
            .collect();
        out.push(inv.mul_vec(&shifted));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exact volumes attached to the image of `[-N, N]^k` under `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageVolume {
    /// Volume of `{x' : t(x') in [-N, N]^k}`: `(2N)^k / |det|`.
    pub pullback: Rat,
    /// Volume of the forward image of the hypercube: `(2N)^k * |det|`.
    pub forward: Rat,
}

pub fn image_volume(t: &AffineTransform, n: u64) -> ImageVolume {
    let k = t.dim();
    let cube = num::pow(Rat::from_integer(BigInt::from(2 * n)), k);
    let det = t.det().abs();
    ImageVolume {
        pullback: &cube / &det,
        forward: &cube * &det,
    }
}

/// True iff the matrix part is integer with `|det| = 1`; the translation
/// is ignored.
pub fn is_unimodular(t: &AffineTransform) -> bool {
    t.has_integer_matrix() && is_unit(&t.det())
}

/// True iff the matrix has exactly one nonzero entry in every row and
/// column, each `±1`; these are exactly the integer orthogonal matrices.
#[allow(clippy::needless_range_loop)]
pub fn is_signed_permutation(m: &RatMatrix) -> bool {
    if !m.is_square() || m.n_rows() == 0 {
        return false;
    }
    let n = m.n_rows();
    let mut column_hits = vec![0usize; n];
    for i in 0..n {
        let mut row_hits = 0;
        for j in 0..n {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            if !is_unit(v) {
                return false;
            }
            row_hits += 1;
            column_hits[j] += 1;
        }
        if row_hits != 1 {
            return false;
        }
    }
    column_hits.iter().all(|&h| h == 1)
}
