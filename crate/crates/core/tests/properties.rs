//! Cross-module properties over random parameters.

use binrec::combinatorics::{descent_count, enumerate_patterns, Caps};
use binrec::dynamics::{s_sequence, s_step};
use binrec::exact::{factorial, rational, to_f64, BigRational};
use binrec::recursion::{a_sequence, basic_format, binomial_format};
use binrec::spectral::{angle_record, apply_a_n, embed, embed_f64, weighted_norm_sq};
use num_traits::{One, Pow};
use proptest::prelude::*;

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=30)
        .prop_filter("nonzero", |(p, _)| *p != 0)
        .prop_map(|(p, q)| rational(p, q))
}

fn in_contract() -> impl Strategy<Value = BigRational> {
    (2i64..=40).prop_flat_map(|q| (1..q).prop_map(move |p| rational(-p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn formats_evaluate_to_the_sequence(x in nonzero_rational(), n in 1usize..=40) {
        let a = a_sequence(&x, n).unwrap();
        prop_assert_eq!(&basic_format(n).unwrap().eval(&x), &a[n - 1]);
        prop_assert_eq!(&binomial_format(n).unwrap().eval(&x), &a[n - 1]);
    }

    #[test]
    fn pattern_weights_sum_to_the_sequence(x in nonzero_rational(), n in 1usize..=7) {
        let y = &x + BigRational::one();
        let total: BigRational = enumerate_patterns(n, &Caps::default())
            .unwrap()
            .map(|p| {
                let d = descent_count(&p);
                Pow::pow(&x, (n - d) as u32) * Pow::pow(&y, d as u32)
            })
            .sum();
        prop_assert_eq!(&total, &a_sequence(&x, n).unwrap()[n - 1]);
    }

    #[test]
    fn endpoints_and_integral(x in nonzero_rational(), n in 3usize..=60) {
        let s = s_sequence(&x, n).unwrap();
        let a_prev = &a_sequence(&x, n - 1).unwrap()[n - 2];
        prop_assert_eq!(s.aux() * s.x(), s.get(n - 1) * s.y());
        prop_assert_eq!(s.get(n - 1), s.x() * a_prev);
        let integral = embed(&s).integral();
        prop_assert_eq!(integral, s.total() / BigRational::from_integer(factorial(n - 1)));
    }

    #[test]
    fn step_commutes_with_embedding(x in nonzero_rational(), n in 3usize..=30) {
        let s = s_sequence(&x, n).unwrap();
        prop_assert_eq!(apply_a_n(&embed(&s), n, &x).unwrap(), embed(&s_step(&s)));
    }

    #[test]
    fn angle_is_consistent(x in in_contract(), n in 6usize..=150) {
        let xf = to_f64(&x);
        let s = embed_f64(&s_sequence(&x, n).unwrap());
        let r = angle_record(n, &s, xf);
        let norm = weighted_norm_sq(&s, xf).sqrt();
        let (cos, sin) = (r.proj_norm / norm, r.perp_norm / norm);
        prop_assert!((cos * cos + sin * sin - 1.0).abs() < 1e-12);
        prop_assert!((r.theta.sin() - sin).abs() < 1e-12);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&r.theta));
    }
}
