use proptest::prelude::*;
use queerlab::amodule::*;
use queerlab::partitions::{enumerate_strict, StrictPartition};
use queerlab::queer::{bracket, dim_t, character, QnElement, Side};
use queerlab::scalars::{Cyclo8, Rational};

fn sp(parts: &[usize]) -> StrictPartition {
    StrictPartition::from_slice(parts)
}

fn poly(n: usize, m: usize) -> impl Strategy<Value = SuperPoly> {
    let nv = n * m;
    let term = (proptest::collection::vec(0u8..=2, nv), 0u16..(1 << nv), -3i64..=3, -3i64..=3);
    proptest::collection::vec(term, 1..4).prop_map(move |ts| {
        let mut p = SuperPoly::zero(n, m);
        for (exps, odd, re, im) in ts {
            let mut mono = Monomial::ONE;
            mono.even[..exps.len()].copy_from_slice(&exps);
            mono.odd = odd;
            p = p.add(&SuperPoly { n, m, terms: vec![(mono, Cyclo8::gaussian(re, im))] });
        }
        p
    })
}

fn parity_split(p: &SuperPoly) -> [SuperPoly; 2] {
    let part = |par: u32| SuperPoly {
        n: p.n,
        m: p.m,
        terms: p.terms.iter().filter(|(mo, _)| mo.odd.count_ones() % 2 == par).cloned().collect(),
    };
    [part(0), part(1)]
}

fn basis_element(n: usize) -> impl Strategy<Value = QnElement> {
    (0..2 * n * n).prop_map(move |k| QnElement::basis(n)[k].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_associative(p in poly(2, 2), q in poly(2, 2), r in poly(2, 2)) {
        prop_assert_eq!(a_mult(&a_mult(&p, &q), &r), a_mult(&p, &a_mult(&q, &r)));
    }

    #[test]
    fn product_is_supercommutative(p in poly(2, 2), q in poly(2, 2)) {
        for (i, a) in parity_split(&p).iter().enumerate() {
            for (j, b) in parity_split(&q).iter().enumerate() {
                let s = Cyclo8::from_int(if i * j == 1 { -1 } else { 1 });
                prop_assert_eq!(a_mult(a, b), a_mult(b, a).scale(&s));
            }
        }
    }

    #[test]
    fn action_is_a_superderivation(g in basis_element(2), left in any::<bool>(), p in poly(2, 2), q in poly(2, 2)) {
        let alg = AAlgebra::shared(2, 2).unwrap();
        let side = if left { Side::Left } else { Side::Right };
        let gp = g.parity().unwrap() as usize;
        for (i, a) in parity_split(&p).iter().enumerate() {
            let lhs = act(&alg, side, &g, &a_mult(a, &q)).unwrap();
            let s = Cyclo8::from_int(if gp * i == 1 { -1 } else { 1 });
            let rhs = a_mult(&act(&alg, side, &g, a).unwrap(), &q).add(&a_mult(a, &act(&alg, side, &g, &q).unwrap()).scale(&s));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn action_respects_brackets(x in basis_element(2), y in basis_element(2), left in any::<bool>(), p in poly(2, 2)) {
        let alg = AAlgebra::shared(2, 2).unwrap();
        let side = if left { Side::Left } else { Side::Right };
        let s = Cyclo8::from_int(if x.parity() == Some(1) && y.parity() == Some(1) { -1 } else { 1 });
        let xy = act(&alg, side, &x, &act(&alg, side, &y, &p).unwrap()).unwrap();
        let yx = act(&alg, side, &y, &act(&alg, side, &x, &p).unwrap()).unwrap();
        let br = act(&alg, side, &bracket(&x, &y).unwrap(), &p).unwrap();
        prop_assert_eq!(xy.sub(&yx.scale(&s)), br);
    }

    #[test]
    fn left_and_right_actions_supercommute(x in basis_element(2), y in basis_element(2), p in poly(2, 2)) {
        let alg = AAlgebra::shared(2, 2).unwrap();
        let s = Cyclo8::from_int(if x.parity() == Some(1) && y.parity() == Some(1) { -1 } else { 1 });
        let lr = act(&alg, Side::Left, &x, &act(&alg, Side::Right, &y, &p).unwrap()).unwrap();
        let rl = act(&alg, Side::Right, &y, &act(&alg, Side::Left, &x, &p).unwrap()).unwrap();
        prop_assert!(lr.sub(&rl.scale(&s)).is_zero());
    }
}

#[test]
fn degree_dimensions() {
    // Sym(ℂ^{k|k}) has dim Σ_j C(k, j)·C(k + d − j − 1, d − j) in degree d
    let alg = AAlgebra::shared(3, 3).unwrap();
    let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
    for d in 0..=4u64 {
        let expected: u64 = (0..=d.min(9)).map(|j| binom(9, j) * if d == j { 1 } else { binom(9 + d - j - 1, d - j) }).sum();
        assert_eq!(alg.degree_dim(d as usize) as u64, expected);
    }
}

#[test]
fn singular_space_dimension_matches_top_weight() {
    let alg = AAlgebra::shared(3, 3).unwrap();
    for lambda in visible_partitions(3, 3, 5) {
        let top = character(&lambda, 3).unwrap();
        let mut w = lambda.parts().iter().map(|&p| p as u8).collect::<Vec<_>>();
        w.resize(3, 0);
        let t = top[&w];
        assert_eq!(singular_vectors(&alg, &lambda).dim(), t * t >> lambda.delta(), "{lambda:?}");
    }
    assert!(singular_vectors(&alg, &sp(&[4, 3, 2, 1])).is_empty());
}

#[test]
fn summands_are_multiplicity_free() {
    let alg = AAlgebra::shared(2, 2).unwrap();
    for d in 0..=4 {
        let mut total = 0;
        for lambda in enumerate_strict(d).into_iter().filter(|l| l.len() <= 2) {
            let summand = lie_closure(&alg, &singular_vectors(&alg, &lambda));
            let t = dim_t(&lambda, 2).unwrap();
            assert_eq!(summand.dim(), t * t >> lambda.delta(), "{lambda:?}");
            total += summand.dim();
        }
        assert_eq!(total, alg.degree_dim(d), "degree {d}");
    }
}

#[test]
fn lazy_ideal_matches_full_closure() {
    for (n, m, d_max) in [(1, 1, 5), (2, 2, 5), (2, 3, 4), (3, 3, 3)] {
        let alg = AAlgebra::shared(n, m).unwrap();
        for lambda in visible_partitions(n, m, d_max) {
            let full = summand_ideal(&alg, &lambda, d_max);
            let mut lazy = SummandIdeal::new(&alg, &lambda);
            for d in 0..=d_max {
                assert_eq!(full.dim_at(d), lazy.dim_at(d), "({n},{m}) {lambda:?} degree {d}");
            }
            for mu in visible_partitions(n, m, d_max) {
                assert_eq!(summand_membership(&alg, &full, &mu), lazy.contains_summand(&mu));
            }
        }
    }
}

#[test]
fn ideal_closure_of_a_variable() {
    let alg = AAlgebra::shared(2, 2).unwrap();
    let mut gens = GradedSubspace::new();
    gens.insert(&alg, &SuperPoly::x(2, 2, 0, 1).terms);
    let ideal = ideal_closure(&alg, &gens, 3);
    for d in 1..=3 {
        assert_eq!(ideal.dim_at(d), alg.degree_dim(d));
    }
    assert_eq!(ideal.dim_at(0), 0);
}

#[test]
fn main_theorem_small_ranks() {
    for (n, m, d) in [(1, 1, 6), (1, 2, 5), (2, 2, 5), (2, 3, 4)] {
        let report = verify_main_theorem(n, m, d).unwrap();
        let failures: Vec<_> = report.cases.iter().filter(|c| !c.pass).collect();
        assert!(failures.is_empty(), "({n},{m}): {failures:?}");
        assert!(report.cases.iter().any(|c| c.predicted) && report.cases.iter().any(|c| !c.predicted));
    }
}

#[test]
fn main_theorem_rank_three() {
    let report = verify_main_theorem(3, 3, 5).unwrap();
    assert_eq!(report.cases.len(), 100);
    assert!(report.passed());
}

#[test]
fn determinantal_ideals() {
    for (n, r, d) in [(2, 0, 4), (2, 1, 5), (3, 0, 4), (3, 1, 5)] {
        let report = determinantal_ideal_check(n, n, r, d).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.bounds.iter().all(|b| b.quotient_length <= r));
    }
}

#[test]
fn hom_dimensions_agree() {
    let cases = hom_dim_sweep(3, 3, 2, 2).unwrap();
    assert!(cases.iter().all(|c| c.pass));
    assert!(cases.iter().filter(|c| !c.formula.is_zero()).count() > 40);
}

#[test]
fn hom_into_a_counts_each_summand_once() {
    let alg = AAlgebra::shared(3, 3).unwrap();
    let empty = StrictPartition::empty();
    for lambda in visible_partitions(3, 3, 4) {
        for mu in visible_partitions(3, 3, 4) {
            let case = hom_dim_check(&alg, &lambda, &mu, &empty, &empty).unwrap();
            let expected = if lambda == mu { Rational::new(1, 1 << lambda.delta()) } else { Rational::ZERO };
            assert_eq!(case.brute_force, expected, "{lambda:?} {mu:?}");
            assert!(case.pass);
        }
    }
}

#[test]
fn hom_of_a_module_with_itself() {
    let alg = AAlgebra::shared(3, 3).unwrap();
    for (l, m) in [(sp(&[1]), sp(&[2])), (sp(&[2, 1]), sp(&[1])), (sp(&[2]), sp(&[2]))] {
        let case = hom_dim_check(&alg, &l, &m, &l, &m).unwrap();
        assert_eq!(case.brute_force, Rational::ONE);
        assert_eq!(case.formula, Rational::ONE);
        assert_eq!(case.total_dim, Rational::from_int(1 << (l.delta() + m.delta())));
    }
}

#[test]
fn hom_with_one_box_added() {
    let alg = AAlgebra::shared(3, 3).unwrap();
    let case = hom_dim_check(&alg, &sp(&[2]), &sp(&[2]), &sp(&[1]), &sp(&[1])).unwrap();
    assert!(case.pass);
    assert_eq!(case.terms.len(), 1);
    assert_eq!(case.formula, &(&case.terms[0].f_lambda * &case.terms[0].f_mu) / &Rational::from_int(2));
}

#[test]
fn hom_with_mismatched_degrees_vanishes() {
    let alg = AAlgebra::shared(2, 2).unwrap();
    let case = hom_dim_check(&alg, &sp(&[2]), &sp(&[1]), &sp(&[1]), &sp(&[1])).unwrap();
    assert!(case.brute_force.is_zero() && case.formula.is_zero() && case.pass);
}

#[test]
fn phi_psi_round_trip() {
    for (n, k) in [(1, 5), (2, 4), (3, 3), (3, 4)] {
        let report = phi_psi_check(n, k, 20, 7).unwrap();
        assert!(report.pass, "{report:?}");
    }
}

#[test]
fn phi_is_multiplicative_on_products() {
    let phi = phi_map(2, 4).unwrap();
    let (x, y) = (SuperPoly::x(2, 2, 1, 0), SuperPoly::y(2, 2, 0, 1));
    assert_eq!(phi.apply(&a_mult(&x, &y)), phi.apply(&x).mul(&phi.apply(&y)));
    let yy = a_mult(&SuperPoly::y(2, 2, 1, 1), &y);
    assert_eq!(phi.apply(&yy), phi.apply(&SuperPoly::y(2, 2, 1, 1)).mul(&phi.apply(&y)));
}

#[test]
fn m_is_stable() {
    for n in 1..=3 {
        let report = m_stability_check(n).unwrap();
        assert!(report.offending.is_empty(), "{report:?}");
        assert_eq!(report.checked, 4 * n.pow(4));
    }
}

#[test]
fn too_many_variables() {
    assert_eq!(AAlgebra::new(5, 4).unwrap_err(), AModuleError::TooManyVariables(20));
    assert!(phi_map(5, 2).is_err());
}
