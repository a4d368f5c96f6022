use num_bigint::BigInt;
use proptest::prelude::*;

use heisenberg_zeta::combinat::{gen_w, partitions_up_to, Partition, WVector};
use heisenberg_zeta::counts::{birkhoff_alpha_multiplicity, birkhoff_alpha_support, nprime_closed, nprime_recursive};
use heisenberg_zeta::exactalg::json::{rational_from_json, rational_to_json};
use heisenberg_zeta::exactalg::{gauss_binom, qpochhammer};
use heisenberg_zeta::igusa::{generic_slots, igusa_a, igusa_a_descent, igusa_b, igusa_b_subset, AVariant, BVariant};
use heisenberg_zeta::{FactoredRational, Poly, SignedMonomial};

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-5i64..=5, -4i64..=6, 0u32..=4), 0..6).prop_map(|t| Poly::from_i64_terms(&t))
}

fn factor() -> impl Strategy<Value = (i64, u32, u32)> {
    (-3i64..=4, 1u32..=3, 1u32..=2)
}

fn rational() -> impl Strategy<Value = FactoredRational> {
    (poly(), prop::collection::vec(factor(), 0..3), -2i64..=2)
        .prop_map(|(p, den, e)| FactoredRational::new(p, SignedMonomial::qt(e, 0), den))
}

fn partition(max_size: u32, max_parts: usize) -> impl Strategy<Value = Partition> {
    let all = partitions_up_to(max_size, max_parts);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn binomial_division_round_trip(a in poly(), e in -3i64..=3, b in 0u32..=3) {
        prop_assume!(e != 0 || b != 0);
        let prod = a.mul_binomial(e, b);
        prop_assert_eq!(prod.div_binomial(e, b), Some(a.clone()));
        if b >= 1 {
            prop_assert_eq!(prod.divide_out_factor(e, b), Some(a));
        }
    }

    #[test]
    fn rational_equality_ignores_representation(f in rational(), extra in factor()) {
        let (a, b, _) = extra;
        let g = FactoredRational::new(
            f.numerator().mul_binomial(a, b),
            f.unit(),
            f.den_factors().into_iter().chain([(a, b, 1)]),
        );
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(f.reduce(), g.reduce());
        prop_assert_eq!(&f + &FactoredRational::zero(), f.clone());
        prop_assert!((&f - &g).is_zero());
    }

    #[test]
    fn rational_field_ops(f in rational(), g in rational(), h in rational()) {
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert_eq!(f.invert_qt().invert_qt(), f.clone());
        prop_assert_eq!((&f * &g).invert_qt(), &f.invert_qt() * &g.invert_qt());
    }

    #[test]
    fn json_round_trip(f in rational()) {
        let v = rational_to_json(&f);
        let g = rational_from_json(&v).unwrap();
        prop_assert_eq!(g.numerator(), f.numerator());
        prop_assert_eq!(g.den_factors(), f.den_factors());
        prop_assert_eq!(g.unit(), f.unit());
    }

    #[test]
    fn series_of_product(f in rational(), g in rational()) {
        prop_assume!(f.unit().e_t >= 0 && g.unit().e_t >= 0);
        let sf = Poly::from_terms(f.series_in_t(5).unwrap().iter().enumerate().flat_map(|(k, c)| {
            c.terms().map(move |(x, e, _)| (x.clone(), e, k as u32)).collect::<Vec<_>>()
        }));
        let sg = Poly::from_terms(g.series_in_t(5).unwrap().iter().enumerate().flat_map(|(k, c)| {
            c.terms().map(move |(x, e, _)| (x.clone(), e, k as u32)).collect::<Vec<_>>()
        }));
        prop_assert_eq!((&f * &g).series_in_t(5).unwrap(), sf.mul_trunc(&sg, 5).t_coeffs(5));
    }

    #[test]
    fn pochhammer_splits(a in -3i64..=3, b in 1i64..=2, step in -2i64..=2, m in 0i64..=4, k in 0i64..=4) {
        let x = SignedMonomial::qt(a, b);
        let whole = qpochhammer(x, step, m + k);
        let split = &qpochhammer(x, step, m) * &qpochhammer(x.q_shift(step * m), step, k);
        prop_assert_eq!(whole, split);
        prop_assert_eq!(&qpochhammer(x, step, m) * &qpochhammer(x.q_shift(step * m), step, -m), FactoredRational::one());
    }

    #[test]
    fn gauss_pascal(n in 1u32..=8, r in 0i64..=8, y in -2i64..=2) {
        let lhs = gauss_binom(n, r, y);
        let rhs = &gauss_binom(n - 1, r - 1, y) + &gauss_binom(n - 1, r, y).shift(y * r, 0);
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, gauss_binom(n, n as i64 - r, y));
    }

    #[test]
    fn nprime_forms_agree(mu in partition(8, 3)) {
        let c = nprime_closed(&mu).unwrap();
        prop_assert_eq!(&c, &nprime_recursive(mu.parts()));
        let prod: u64 = mu.parts().iter().map(|&m| m as u64 + 1).product();
        prop_assert_eq!(c.coeff_sum(), BigInt::from(prod));
    }

    #[test]
    fn birkhoff_formulas_agree(mu in partition(9, 4), extra in 0usize..=2, base in 1i64..=2) {
        let n = mu.len().max(1) + extra;
        prop_assert_eq!(
            birkhoff_alpha_multiplicity(&mu, n, base).unwrap(),
            birkhoff_alpha_support(&mu, n, base).unwrap()
        );
    }

    #[test]
    fn w_partial_sums(n in 1usize..=5) {
        for w in gen_w(n) {
            let u = w.partial_sums();
            prop_assert_eq!(u.len(), n);
            prop_assert!(u.windows(2).all(|p| p[0] <= p[1]));
            prop_assert_eq!(*u.last().unwrap(), w.0.iter().sum::<u32>());
            prop_assert!(w.is_member());
        }
        prop_assert_eq!(gen_w(n).len(), 1 << n);
    }

    #[test]
    fn descent_form_is_subset_form(n in 0usize..=4, offset in 0usize..=6, y in -2i64..=-1) {
        let xs = generic_slots(n + 1, offset);
        prop_assert_eq!(
            igusa_a_descent(n, y, &xs).unwrap(),
            igusa_a(n, AVariant::Augmented, y, &xs).unwrap()
        );
    }

    #[test]
    fn type_b_subset_expansion(n in 0usize..=3, offset in 0usize..=6, zq in -5i64..=5, zt in 1i64..=3, neg in any::<bool>()) {
        let xs = generic_slots(n + 1, offset);
        let z = SignedMonomial::new(if neg { -1 } else { 1 }, zq, zt);
        prop_assert_eq!(
            igusa_b(n, -1, z, &xs, BVariant::Full).unwrap(),
            igusa_b_subset(n, -1, z, &xs, BVariant::Full).unwrap()
        );
    }
}

#[test]
fn w_vector_membership() {
    assert!(!WVector(vec![0, 1]).is_member());
}
