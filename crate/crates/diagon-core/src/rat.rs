//! Exact rational scalars and small integer helpers.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Arbitrary-precision rational, the coefficient type of the whole crate.
pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// True iff the rational has denominator 1 after reduction.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Least common multiple of the denominators of `values`, always >= 1.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Floor of the n-th root of a non-negative integer.
pub fn floor_nth_root(v: &BigInt, n: u32) -> BigInt {
    assert!(!v.is_negative(), "floor_nth_root needs a non-negative input");
    v.nth_root(n)
}

/// Exact integer n-th roots of `v`, smallest first.
///
/// For even `n` a positive `v` has two roots and a negative `v` none; for
/// odd `n` there is exactly one root when the root is exact.
pub fn exact_nth_roots(v: &BigInt, n: u32) -> Vec<BigInt> {
    if v.is_zero() {
        return vec![BigInt::zero()];
    }
    if n.is_multiple_of(2) {
        if v.is_negative() {
            return vec![];
        }
        let r = floor_nth_root(v, n);
        if num::pow(r.clone(), n as usize) == *v {
            vec![-r.clone(), r]
        } else {
            vec![]
        }
    } else {
        let mag = floor_nth_root(&v.abs(), n);
        let r = if v.is_negative() { -mag } else { mag };
        if num::pow(r.clone(), n as usize) == *v {
            vec![r]
        } else {
            vec![]
        }
    }
}

/// Splits a positive integer as `m * s^n` with `s` maximal.
///
/// Uses trial division, which is plenty for the coefficient sizes this
/// crate meets; if the unfactored remainder is itself a perfect n-th power
/// it is folded into `s`.
pub fn nth_power_split(v: &BigInt, n: u32) -> (BigInt, BigInt) {
    assert!(v.is_positive());
    let mut rest = v.clone();
    let mut root = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &p * &p <= rest && p <= limit {
        if rest.is_multiple_of(&p) {
            let mut mult: u32 = 0;
            while rest.is_multiple_of(&p) {
                rest /= &p;
                mult += 1;
            }
            if mult >= n {
                root *= num::pow(p.clone(), (mult / n) as usize);
            }
        }
        p += 1u32;
    }
    let m = v / num::pow(root.clone(), n as usize);
    // the unfactored remainder may still be an exact power
    if m > BigInt::one() {
        let r = floor_nth_root(&m, n);
        if r > BigInt::one() && num::pow(r.clone(), n as usize) == m {
            return (BigInt::one(), root * r);
        }
    }
    (m, root)
}

/// Splits a nonzero rational as `m * s^n` with rational `s > 0` maximal and
/// `m` carrying the sign.
pub fn nth_power_split_rat(v: &Rat, n: u32) -> (Rat, Rat) {
    assert!(!v.is_zero());
    let (mn, sn) = nth_power_split(&v.numer().abs(), n);
    let (md, sd) = nth_power_split(v.denom(), n);
    let mut m = Rat::new(mn, md);
    if v.is_negative() {
        m = -m;
    }
    (m, Rat::new(sn, sd))
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign(r: &Rat) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn denominator_lcm_basics() {
        let vals = [ratio(1, 6), ratio(1, 3), rat(2)];
        assert_eq!(denominator_lcm(vals.iter()), BigInt::from(6));
        let ints = [rat(1), rat(-7)];
        assert_eq!(denominator_lcm(ints.iter()), BigInt::one());
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_nth_roots(&BigInt::from(27), 3), vec![BigInt::from(3)]);
        assert_eq!(
            exact_nth_roots(&BigInt::from(-27), 3),
            vec![BigInt::from(-3)]
        );
        assert_eq!(
            exact_nth_roots(&BigInt::from(49), 2),
            vec![BigInt::from(-7), BigInt::from(7)]
        );
        assert!(exact_nth_roots(&BigInt::from(-4), 2).is_empty());
        assert!(exact_nth_roots(&BigInt::from(26), 3).is_empty());
        assert_eq!(exact_nth_roots(&BigInt::zero(), 5), vec![BigInt::zero()]);
    }

    #[test]
    fn power_split() {
        let (m, s) = nth_power_split(&BigInt::from(27), 3);
        assert_eq!((m, s), (BigInt::one(), BigInt::from(3)));
        let (m, s) = nth_power_split(&BigInt::from(16), 3);
        assert_eq!((m, s), (BigInt::from(2), BigInt::from(2)));
        let (m, s) = nth_power_split(&BigInt::from(7), 2);
        assert_eq!((m, s), (BigInt::from(7), BigInt::one()));
        let (m, s) = nth_power_split_rat(&ratio(-27, 8), 3);
        assert_eq!(m, rat(-1));
        assert_eq!(s, ratio(3, 2));
    }
}
