//! Certified series against exact integers and rationals.

use genbell::exact::{pow2_neg, rat, ratio};
use genbell::series::{
    bell_r1_hypergeometric_check, coherent_egf_diag_check, dobinski_bell, dobinski_diag_form,
    dobinski_factorial_form, dobinski_gamma_form, dobinski_polynomial, egf_bell_r1_check,
    egf_stirling_diag_check, egf_stirling_r1_check, exp_enclosure, family_bell_check,
    family_bell_general_check, hgf_check, hgf_compare, hgf_default_lambda, hypergeometric,
    kummer_bell, kummer_bell_check, laguerre_bell_check, HgfMode, HyperParams, SeriesValue,
};
use genbell::stirling::{bell_diag_from_classical, bell_number, bell_polynomial};
use genbell::{Params, Rational};
use num_traits::Signed;
use proptest::prelude::*;

const PREC: u32 = 256;

fn p(r: u32, s: u32) -> Params {
    Params::new(r, s).unwrap()
}

fn assert_brackets(v: &SeriesValue, exact: &Rational, what: &str) {
    assert!(
        v.contains(exact),
        "{what}: {} does not contain {exact}",
        v.value
    );
    assert!(
        v.tail_bound.to_rational() <= pow2_neg(200),
        "{what}: tail bound {} above 2^-200",
        v.tail_bound
    );
}

#[test]
fn dobinski_forms_bracket_bell_numbers() {
    for r in 1..=3 {
        for s in 1..=3 {
            for n in 1..=4 {
                let params = p(r, s);
                let exact = Rational::from_integer(bell_number(params, n).unwrap());
                assert_brackets(
                    &dobinski_bell(params, n, PREC).unwrap(),
                    &exact,
                    &format!("C ({r},{s},{n})"),
                );
                if r > s {
                    let g = dobinski_gamma_form(params, n, PREC).unwrap();
                    assert_brackets(&g, &exact, &format!("gamma ({r},{s},{n})"));
                }
                if r >= s {
                    let f = dobinski_factorial_form(params, n, PREC).unwrap();
                    assert_brackets(&f, &exact, &format!("factorial ({r},{s},{n})"));
                }
            }
        }
    }
    for r in 1..=3 {
        for n in 1..=4 {
            let exact = Rational::from_integer(bell_number(p(r, r), n).unwrap());
            assert_brackets(
                &dobinski_diag_form(r, n, PREC).unwrap(),
                &exact,
                &format!("diag ({r},{n})"),
            );
        }
    }
}

#[test]
fn dobinski_polynomial_brackets_bell_polynomials() {
    for (r, s) in [(1, 1), (2, 1), (2, 2), (3, 1), (1, 3)] {
        for n in 1..=4 {
            for t in [ratio(1, 2), rat(1), rat(2)] {
                let exact = bell_polynomial(p(r, s), n, &t).unwrap();
                let v = dobinski_polynomial(p(r, s), n, &t, PREC).unwrap();
                assert_brackets(&v, &exact, &format!("({r},{s},{n}) t={t}"));
            }
        }
    }
}

#[test]
fn closed_forms() {
    for n in 1..=20 {
        assert!(laguerre_bell_check(n).unwrap(), "laguerre n={n}");
    }
    for r in 1..=2 {
        for n in 1..=4 {
            assert!(kummer_bell_check(r, n, PREC).unwrap(), "kummer r={r} n={n}");
            let v = kummer_bell(r, n, PREC).unwrap();
            assert!(v.tail_bound.to_rational() <= pow2_neg(200));
        }
    }
    for (fp, fr) in [(1, 1), (1, 2)] {
        for n in 1..=3 {
            assert!(
                family_bell_check(fp, fr, n, PREC).unwrap(),
                "family ({fp},{fr}) n={n}"
            );
            assert!(family_bell_general_check(fp, fr, n, PREC).unwrap());
        }
    }
    for n in 1..=8 {
        assert_eq!(
            bell_diag_from_classical(n).unwrap(),
            bell_number(p(2, 2), n).unwrap()
        );
    }
    for r in 2..=4 {
        for n in 1..=4 {
            assert!(
                bell_r1_hypergeometric_check(r, n, PREC).unwrap(),
                "r={r} n={n}"
            );
        }
    }
}

#[test]
fn exponential_generating_functions() {
    for r in 1..=3 {
        assert!(egf_bell_r1_check(r, 6).unwrap(), "bell egf r={r}");
    }
    for r in 2..=3 {
        for k in 1..=4 {
            assert!(
                egf_stirling_r1_check(r, k, 6).unwrap(),
                "stirling r1 egf r={r} k={k}"
            );
        }
    }
    for r in 1..=2 {
        for k in r..=4 {
            assert!(
                egf_stirling_diag_check(r, k, 6).unwrap(),
                "diag egf r={r} k={k}"
            );
        }
        assert!(coherent_egf_diag_check(r, 6).unwrap());
    }
}

#[test]
fn hypergeometric_generating_functions() {
    for (r, s) in [(3, 2), (4, 2)] {
        let lambda = hgf_default_lambda(r, s).unwrap();
        assert!(hgf_check(r, s, &lambda, 12, PREC).unwrap(), "({r},{s})");
        let report = hgf_compare(r, s, &lambda, 12, HgfMode::Polynomial, PREC).unwrap();
        assert!(report.combined_bound.to_f64() <= 1e-15);
        assert!(report.difference <= report.combined_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dobinski_polynomial_contains_exact_value(
        r in 1u32..=3, s in 1u32..=3, n in 1u32..=3, num in 1i64..=20, den in 1i64..=8,
    ) {
        let t = ratio(num, den);
        let exact = bell_polynomial(p(r, s), n, &t).unwrap();
        let v = dobinski_polynomial(p(r, s), n, &t, 128).unwrap();
        prop_assert!(v.contains(&exact));
    }

    #[test]
    fn confluent_series_with_equal_parameters_is_exponential(
        a_num in 1i64..=9, a_den in 1i64..=4, x_num in -12i64..=12, x_den in 1i64..=4,
    ) {
        // 1F1(a; a; x) = e^x
        let a = ratio(a_num, a_den);
        let x = ratio(x_num, x_den);
        let h = HyperParams::new(vec![a.clone()], vec![a], x.clone()).unwrap();
        let v = hypergeometric(&h, 128, 10_000).unwrap();
        let e = exp_enclosure(&x, 160).unwrap();
        let diff = (v.value.to_rational() - e.mid()).abs();
        prop_assert!(diff <= v.tail_bound.to_rational() + v.rounding_allowance() + e.radius());
    }
}
