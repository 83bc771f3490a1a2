use std::time::Instant;

use proptest::prelude::*;
use queerlab::heckeclifford::{
    algebra, braid_conjugation_sign, decompose_regular, hc_mult, iota, sigma_step, transpose,
    verify_tensor_ideal_theorem, BlockType, HCElement,
};
use queerlab::partitions::StrictPartition;
use queerlab::scalars::Cyclo8;

fn sp(p: &[usize]) -> StrictPartition {
    StrictPartition::from_slice(p)
}

#[test]
fn rank_four_blocks() {
    let t = Instant::now();
    let table = decompose_regular(4, 11).unwrap();
    let rows: Vec<_> = table.report().blocks.into_iter().map(|r| (r.lambda, r.dim_j, r.dim_s, r.kind)).collect();
    assert_eq!(rows, vec![(sp(&[4]), 128, 16, BlockType::Q), (sp(&[3, 1]), 256, 16, BlockType::M)]);
    eprintln!("rank 4 in {:?}", t.elapsed());
}

#[test]
fn block_dimensions_sum_to_algebra() {
    for n in 0..=4 {
        let table = decompose_regular(n, 3).unwrap();
        let total: usize = table.blocks.iter().map(|b| b.dim_j).sum();
        assert_eq!(total, algebra(n).dim());
        for b in &table.blocks {
            assert_eq!(b.kind == BlockType::Q, b.lambda.delta() == 1);
        }
    }
}

#[test]
fn sigma_examples() {
    let t2 = decompose_regular(2, 5).unwrap();
    let j2 = &t2.block(&sp(&[2])).unwrap().basis();
    assert_eq!(sigma_step(2, j2).rank(), 48);
    let t3 = decompose_regular(3, 5).unwrap();
    let j3 = &t3.block(&sp(&[3])).unwrap().basis();
    assert_eq!(sigma_step(3, j3).rank(), 384);
    assert_eq!(sigma_step(3, &Default::default()).rank(), 0);
}

#[test]
fn simple_blocks_are_generated_by_any_element() {
    let t3 = decompose_regular(3, 5).unwrap();
    let b = t3.block(&sp(&[2, 1])).unwrap();
    let v = b.basis().rows().next().unwrap().clone();
    assert_eq!(algebra(3).two_sided_closure(&[v]).rank(), 16);
}

#[test]
fn tensor_ideal_theorem_up_to_rank_four() {
    let t = Instant::now();
    let cases = verify_tensor_ideal_theorem(4, 1).unwrap();
    for c in &cases {
        assert!(c.pass, "{c:?}");
    }
    let find = |l: &[usize], m: usize| cases.iter().find(|c| c.lambda == sp(l) && c.m == m).unwrap().clone();
    assert_eq!(find(&[1], 1).observed_support, vec![sp(&[2])]);
    assert_eq!(find(&[2], 1).observed_support, vec![sp(&[3]), sp(&[2, 1])]);
    assert_eq!(find(&[2, 1], 1).observed_support, vec![sp(&[3, 1])]);
    eprintln!("{} cases in {:?}", cases.len(), t.elapsed());
}

fn homogeneous_word(n: usize) -> impl Strategy<Value = HCElement<Cyclo8>> {
    let d = algebra(n).dim();
    (0..d, -2i64..=2).prop_map(move |(w, c)| HCElement { n, terms: if c == 0 { vec![] } else { vec![(w, Cyclo8::from_int(c))] } })
}

fn parity_sign(x: &HCElement<Cyclo8>, y: &HCElement<Cyclo8>) -> Cyclo8 {
    let (p, q) = (x.parity().unwrap(), y.parity().unwrap());
    Cyclo8::from_int(if p * q == 1 { -1 } else { 1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_reverses_products(x in homogeneous_word(4), y in homogeneous_word(4)) {
        let lhs = transpose(&hc_mult(&x, &y));
        let rhs = hc_mult(&transpose(&y), &transpose(&x)).scale(&parity_sign(&x, &y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpose_squared_is_clifford_sign(x in homogeneous_word(4)) {
        for (w, c) in x.words() {
            let single = HCElement::from_word(4, &w, c);
            let k = w.clifford.count_ones();
            let expected = if k % 2 == 0 { single.clone() } else { single.neg() };
            prop_assert_eq!(transpose(&transpose(&single)), expected);
        }
    }

    #[test]
    fn iota_is_a_homomorphism(
        x in homogeneous_word(2), y in homogeneous_word(2),
        x2 in homogeneous_word(2), y2 in homogeneous_word(2),
    ) {
        let lhs = hc_mult(&iota(&x, &y), &iota(&x2, &y2));
        let rhs = iota(&hc_mult(&x, &x2), &hc_mult(&y, &y2)).scale(&parity_sign(&y, &x2));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn braid_conjugation_sign_is_koszul(x in homogeneous_word(2), y in homogeneous_word(1)) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let s = braid_conjugation_sign(&x, &y);
        let expected = if x.parity().unwrap() * y.parity().unwrap() == 1 { -1 } else { 1 };
        prop_assert_eq!(s, Some(expected));
    }
}

#[test]
fn iota_respects_transpose_on_generators() {
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let mut gens_m: Vec<HCElement<Cyclo8>> = vec![HCElement::one(m), HCElement::alpha(m, 1)];
        gens_m.extend((1..m).map(|i| HCElement::s(m, i)));
        let mut gens_n: Vec<HCElement<Cyclo8>> = vec![HCElement::one(n), HCElement::alpha(n, 1)];
        gens_n.extend((1..n).map(|i| HCElement::s(n, i)));
        for f in &gens_m {
            for g in &gens_n {
                assert_eq!(transpose(&iota(f, g)), iota(&transpose(f), &transpose(g)), "{f:?} ⊗ {g:?}");
            }
        }
    }
}

#[test]
fn opposite_of_structure_table_matches_definition() {
    let alg = algebra(2);
    let a = alg.structure_algebra();
    let op = a.opposite();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let (x, y) = (a.basis(i), a.basis(j));
            let s = if a.parity(i) * a.parity(j) == 1 { -1 } else { 1 };
            let expected: Vec<_> = a.mult(&y, &x).into_iter().map(|(k, c)| (k, &c * &Cyclo8::from_int(s))).collect();
            assert_eq!(op.mult(&x, &y), expected);
        }
    }
    assert_eq!(op.opposite(), a);
}
