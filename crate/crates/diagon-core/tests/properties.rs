//! Property suites for the algebraic substrate: substitution coherence,
//! parser round-trips, and normalization invariants.

use diagon_core::{
    compose, format_equation, parse_equation, AffineTransform, Equation, Monomial, Polynomial,
    Rat, RatMatrix,
};
use num::{BigInt, Zero};
use proptest::prelude::*;

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

fn arb_rat(limit: i64) -> impl Strategy<Value = Rat> {
    (-limit..=limit, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn arb_poly(k: usize, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, k), -20i64..=20),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            k,
            terms
                .into_iter()
                .map(|(exps, c)| (Monomial::new(exps), rat(c))),
        )
    })
}

fn arb_transform(k: usize) -> impl Strategy<Value = AffineTransform> {
    (
        prop::collection::vec(arb_rat(3), k * k),
        prop::collection::vec(arb_rat(3), k),
    )
        .prop_filter_map("matrix must be invertible", move |(entries, translation)| {
            let rows: Vec<Vec<Rat>> = entries.chunks(k).map(|c| c.to_vec()).collect();
            let m = RatMatrix::from_rows(rows);
            if m.determinant().is_zero() {
                None
            } else {
                Some(AffineTransform::new(m, translation))
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn substitution_composes((p, t1, t2) in (1usize..=3).prop_flat_map(|k| {
        (arb_poly(k, 4), arb_transform(k), arb_transform(k))
    })) {
        let stepwise = p.substitute(&t1).unwrap().substitute(&t2).unwrap();
        let composed = p.substitute(&compose(&t1, &t2).unwrap()).unwrap();
        prop_assert_eq!(stepwise, composed);
    }

    #[test]
    fn substitution_preserves_evaluation((p, t, point) in (1usize..=3).prop_flat_map(|k| {
        (arb_poly(k, 4), arb_transform(k), prop::collection::vec(arb_rat(5), k))
    })) {
        let image = t.apply(&point);
        let through_poly = p.substitute(&t).unwrap().evaluate(&point).unwrap();
        let through_point = p.evaluate(&image).unwrap();
        prop_assert_eq!(through_poly, through_point);
    }

    #[test]
    fn parser_round_trips(p in (1usize..=5).prop_flat_map(|k| arb_poly(k, 6))) {
        let eq = Equation::from_poly(p.clone());
        let printed = format_equation(&eq);
        let reparsed = parse_equation(&printed).unwrap();
        // arity is inferred from the highest index present, so the parse
        // is exact whenever the last variable occurs; otherwise compare
        // the canonical text
        let k = p.k();
        if p.terms().any(|(m, _)| m.exponents()[k - 1] > 0) {
            prop_assert_eq!(reparsed.lhs, p);
        } else {
            prop_assert_eq!(format_equation(&reparsed), printed);
        }
    }

    #[test]
    fn parser_ignores_extra_spaces(p in (1usize..=4).prop_flat_map(|k| arb_poly(k, 5))) {
        let eq = Equation::from_poly(p);
        let printed = format_equation(&eq);
        // pad every token boundary (splitting a token like `x1` or `12`
        // would change the lexemes, not just the layout)
        let mut spaced = String::new();
        let chars: Vec<char> = printed.chars().collect();
        for (i, &c) in chars.iter().enumerate() {
            spaced.push(c);
            if let Some(&next) = chars.get(i + 1) {
                if !(c.is_alphanumeric() && next.is_alphanumeric()) {
                    spaced.push(' ');
                }
            }
        }
        let a = parse_equation(&printed).unwrap();
        let b = parse_equation(&spaced).unwrap();
        prop_assert_eq!(a.lhs, b.lhs);
    }

    #[test]
    fn content_normalization_idempotent(p in (1usize..=4).prop_flat_map(|k| arb_poly(k, 5))) {
        prop_assume!(!p.is_zero());
        let (prim, factor) = p.content_normalize().unwrap();
        prop_assert_eq!(prim.scale(&factor), p);
        let (again, unit) = prim.content_normalize().unwrap();
        prop_assert_eq!(again, prim);
        prop_assert_eq!(unit, rat(1));
    }

    #[test]
    fn parser_never_panics(input in "[x0-9+\\-*/^= .a-z]{0,60}") {
        // any outcome is fine as long as it is a Result
        let _ = parse_equation(&input);
        let _ = diagon_core::load_equation_file(&input);
    }

    #[test]
    fn quadratic_form_matrix_round_trips(p in arb_poly(3, 6)) {
        let quadratic = Polynomial::from_terms(
            3,
            p.terms()
                .filter(|(m, _)| m.total_degree() == 2)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        let m = quadratic.quadratic_form_matrix().unwrap();
        prop_assert_eq!(Polynomial::from_quadratic_form(&m), quadratic);
    }
}

#[test]
fn round_trip_exact_on_full_arity_polynomials() {
    // when every variable occurs, the round trip reproduces the
    // polynomial itself, not just its printed form
    let polys = [
        Polynomial::from_i64(2, &[(4, &[2, 0]), (-20, &[0, 1])]),
        Polynomial::from_i64(3, &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (-1, &[0, 0, 2])]),
        Polynomial::from_i64(1, &[(-7, &[3]), (100, &[0])]),
    ];
    for p in polys {
        let eq = Equation::from_poly(p.clone());
        let reparsed = parse_equation(&format_equation(&eq)).unwrap();
        assert_eq!(reparsed.lhs, p);
    }
}
