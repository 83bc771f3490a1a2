use std::collections::BTreeMap;

use proptest::prelude::*;
use queerlab::partitions::{enumerate_strict, enumerate_strict_up_to, StrictPartition};
use queerlab::scalars::Rational;
use queerlab::symfunc::{
    cauchy_check, expand_in_q, gamma_product, induct_mult, pieri, q_expansion, q_poly, tableau_oracle_q,
    GammaElement,
};

fn sp(p: &[usize]) -> StrictPartition {
    StrictPartition::from_slice(p)
}

#[test]
fn construction_matches_tableau_oracle() {
    for lambda in enumerate_strict_up_to(6) {
        assert_eq!(*q_poly(&lambda, 6), tableau_oracle_q(&lambda, 6), "{lambda:?}");
    }
}

#[test]
fn leading_monomial_is_two_to_the_length() {
    for lambda in enumerate_strict_up_to(7) {
        let n = lambda.size().max(1);
        let p = q_poly(&lambda, n);
        let mut e = vec![0u8; n];
        for (i, &x) in lambda.parts().iter().enumerate() {
            e[i] = x as u8;
        }
        let (lead, c) = p.terms().iter().next_back().unwrap();
        assert_eq!(lead, &e);
        assert_eq!(c, &Rational::from_int(1 << lambda.len()));
    }
}

#[test]
fn pieri_rule_matches_products() {
    let q1 = GammaElement::basis(sp(&[1]));
    for lambda in enumerate_strict_up_to(8) {
        let prod = gamma_product(&q1, &GammaElement::basis(lambda.clone()));
        let rule: BTreeMap<StrictPartition, Rational> =
            pieri(&lambda).into_iter().map(|(mu, c)| (mu, Rational::from_int(c))).collect();
        assert_eq!(prod.terms(), &rule, "{lambda:?}");
    }
}

#[test]
fn induction_by_one_box_matches_branching() {
    let one = sp(&[1]);
    for nu in enumerate_strict_up_to(6) {
        let m = induct_mult(&one, &nu).unwrap();
        let expected: BTreeMap<StrictPartition, Rational> = nu
            .add_box()
            .into_iter()
            .map(|mu| {
                let c = if mu.len() == nu.len() { 2 } else { 1 << nu.delta() };
                (mu, Rational::from_int(c))
            })
            .collect();
        assert_eq!(m, expected, "{nu:?}");
    }
}

#[test]
fn cauchy_identity_through_degree_six() {
    assert_eq!(cauchy_check(6, 6), Ok(()));
}

fn random_element(degree_cap: usize) -> impl Strategy<Value = GammaElement> {
    let basis: Vec<StrictPartition> = enumerate_strict_up_to(degree_cap);
    proptest::collection::vec((0..basis.len(), -3i64..=3), 1..3).prop_map(move |terms| {
        GammaElement::from_terms(terms.into_iter().map(|(i, c)| (basis[i].clone(), Rational::from_int(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_is_commutative(f in random_element(3), g in random_element(3)) {
        prop_assert_eq!(gamma_product(&f, &g), gamma_product(&g, &f));
    }

    #[test]
    fn product_is_associative(f in random_element(2), g in random_element(2), h in random_element(2)) {
        let left = gamma_product(&gamma_product(&f, &g), &h);
        let right = gamma_product(&f, &gamma_product(&g, &h));
        prop_assert_eq!(left, right);
    }
}

#[test]
fn basis_is_independent_in_enough_variables() {
    for d in 1..=6 {
        for lambda in enumerate_strict(d) {
            let e = expand_in_q(&q_poly(&lambda, d), d).unwrap();
            assert_eq!(e, GammaElement::basis(lambda));
        }
    }
}

#[test]
fn q_expansion_examples() {
    assert_eq!(q_expansion(&sp(&[2, 1])).to_string(), "q₂q₁ − 2q₃");
    assert_eq!(q_expansion(&sp(&[3])).to_string(), "q₃");
    assert_eq!(q_expansion(&StrictPartition::empty()).to_string(), "1");
    assert_eq!(q_expansion(&sp(&[3, 1])).to_string(), "q₃q₁ − 2q₄");
}

#[test]
fn q_expansion_evaluates_to_q_polynomial() {
    for lambda in enumerate_strict_up_to(6) {
        assert_eq!(q_expansion(&lambda).to_poly(4), *q_poly(&lambda, 4), "{lambda:?}");
    }
}
