use proptest::prelude::*;
use proptest::strategy::ValueTree;
use queerlab::heckeclifford::{algebra, decompose_regular};
use queerlab::linalg::{collect_sparse, Matrix};
use queerlab::partitions::{enumerate_strict, StrictPartition};
use queerlab::queer::*;
use queerlab::scalars::{Cyclo8, Rational};
use queerlab::superalg::{half_tensor, tensor_map, QueerStructure};

fn matrix(n: usize, entries: &[(i64, i64)]) -> Matrix<Cyclo8> {
    let mut m = Matrix::zeros(n, n);
    for (k, &(re, im)) in entries.iter().enumerate() {
        m.set(k / n, k % n, Cyclo8::gaussian(re, im));
    }
    m
}

fn element(n: usize, parity: Option<u8>) -> impl Strategy<Value = QnElement> {
    let block = proptest::collection::vec((-2i64..=2, -2i64..=2), n * n);
    (block.clone(), block).prop_map(move |(a, b)| {
        let (a, b) = (matrix(n, &a), matrix(n, &b));
        match parity {
            Some(0) => QnElement::from_blocks(a, Matrix::zeros(n, n)),
            Some(_) => QnElement::from_blocks(Matrix::zeros(n, n), b),
            None => QnElement::from_blocks(a, b),
        }
    })
}

fn homogeneous(n: usize) -> impl Strategy<Value = QnElement> {
    prop_oneof![element(n, Some(0)), element(n, Some(1))]
}

fn sign(x: &QnElement, y: &QnElement) -> Cyclo8 {
    Cyclo8::from_int(if x.parity() == Some(1) && y.parity() == Some(1) { -1 } else { 1 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn super_antisymmetry(x in homogeneous(3), y in homogeneous(3)) {
        let xy = bracket(&x, &y).unwrap();
        let yx = bracket(&y, &x).unwrap();
        prop_assert_eq!(xy, yx.scale(&-sign(&x, &y)));
    }

    #[test]
    fn super_jacobi(x in homogeneous(2), y in homogeneous(2), z in homogeneous(2)) {
        // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
        let left = bracket(&x, &bracket(&y, &z).unwrap()).unwrap();
        let right = bracket(&bracket(&x, &y).unwrap(), &z).unwrap()
            .add(&bracket(&y, &bracket(&x, &z).unwrap()).unwrap().scale(&sign(&x, &y)));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn super_jacobi_rank_three(x in homogeneous(3), y in homogeneous(3), z in homogeneous(3)) {
        let left = bracket(&x, &bracket(&y, &z).unwrap()).unwrap();
        let right = bracket(&bracket(&x, &y).unwrap(), &z).unwrap()
            .add(&bracket(&y, &bracket(&x, &z).unwrap()).unwrap().scale(&sign(&x, &y)));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn chevalley_is_homomorphism(x in homogeneous(3), y in homogeneous(3)) {
        let lhs = chevalley(&bracket(&x, &y).unwrap());
        let rhs = bracket(&chevalley(&x), &chevalley(&y)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chevalley_has_order_four(x in element(3, None)) {
        let t2 = chevalley(&chevalley(&x));
        prop_assert_eq!(&t2, &QnElement::from_blocks(x.a.clone(), x.b.scale(&Cyclo8::from_int(-1))));
        prop_assert_eq!(chevalley(&chevalley(&t2)), x.clone());
        prop_assert!(t2 != x || x.b.is_zero());
    }

    #[test]
    fn u_action_respects_bracket(x in homogeneous(2), y in homogeneous(2), left_side in any::<bool>()) {
        let u = UModule::new(2, 2);
        let side = if left_side { Side::Left } else { Side::Right };
        let rx = u.operator(side, &x).unwrap();
        let ry = u.operator(side, &y).unwrap();
        let rxy = u.operator(side, &bracket(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(rxy.columns, rx.supercommutator(&ry).columns);
    }

    #[test]
    fn left_and_right_actions_supercommute(x in homogeneous(2), y in homogeneous(3)) {
        let u = UModule::new(2, 3);
        let l = u.operator(Side::Left, &x).unwrap();
        let r = u.operator(Side::Right, &y).unwrap();
        prop_assert!(l.supercommutator(&r).is_zero());
    }

    #[test]
    fn h_action_respects_bracket(x in homogeneous(2), y in homogeneous(2)) {
        let u = UModule::new(2, 2);
        let op = |g: &QnElement| {
            let (g1, g2) = h_element(g);
            u.pair_operator(&g1, &g2).unwrap()
        };
        let lhs = op(&bracket(&x, &y).unwrap());
        prop_assert_eq!(lhs.columns, op(&x).supercommutator(&op(&y)).columns);
    }

    #[test]
    fn tensor_power_respects_bracket(x in homogeneous(2), y in homogeneous(2), d in 1usize..=3) {
        let rx = tensor_power_operator(&x, d).unwrap();
        let ry = tensor_power_operator(&y, d).unwrap();
        let rxy = tensor_power_operator(&bracket(&x, &y).unwrap(), d).unwrap();
        prop_assert_eq!(rxy.columns, rx.supercommutator(&ry).columns);
    }

    #[test]
    fn hk_reconstructs_and_is_linear(
        g1 in element(3, None), g2 in element(3, None), h1 in element(3, None), h2 in element(3, None)
    ) {
        let a = hk_decompose(&g1, &g2).unwrap();
        prop_assert_eq!(a.reconstruct(), (g1.clone(), g2.clone()));
        prop_assert!(in_b(&a.d) && in_n(&a.e));
        let b = hk_decompose(&h1, &h2).unwrap();
        let s = hk_decompose(&g1.add(&h1), &g2.add(&h2)).unwrap();
        prop_assert_eq!(s.c, a.c.add(&b.c));
        prop_assert_eq!(s.d, a.d.add(&b.d));
        prop_assert_eq!(s.e, a.e.add(&b.e));
    }

    #[test]
    fn hk_fixes_h(x in element(3, None)) {
        let (g1, g2) = h_element(&x);
        let hk = hk_decompose(&g1, &g2).unwrap();
        prop_assert_eq!(hk.c, x);
        prop_assert!(hk.d.is_zero() && hk.e.is_zero());
    }
}

#[test]
fn hk_reconstruction_on_two_hundred_elements() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = (1usize..=4).prop_flat_map(|n| (element(n, None), element(n, None)));
    for _ in 0..200 {
        let (g1, g2) = strategy.new_tree(&mut runner).unwrap().current();
        let hk = hk_decompose(&g1, &g2).unwrap();
        assert_eq!(hk.reconstruct(), (g1, g2));
        assert!(in_b(&hk.d) && in_n(&hk.e));
    }
}

#[test]
fn u_basis_spans_half_tensor() {
    for (n, m) in [(1, 1), (2, 1), (2, 3)] {
        let (qv, qw) = (QueerStructure::standard(n), QueerStructure::standard(m));
        let ab = tensor_map(&qv.alpha, &qw.alpha);
        let u = UModule::new(n, m);
        let half = half_tensor(&qv, &qw).unwrap();
        assert_eq!(half.space.dim(), u.dim());
        for idx in 0..u.dim() {
            let mut v = vec![Cyclo8::zero(); 4 * n * m];
            for (k, c) in u.embed(idx) {
                v[k] = c;
            }
            let zeta_v: Vec<Cyclo8> = v.iter().map(|c| c * &Cyclo8::zeta()).collect();
            assert_eq!(ab.apply(&v), zeta_v);
        }
    }
}

#[test]
fn u_action_closed_forms() {
    let (n, m) = (2, 3);
    let u = UModule::new(n, m);
    let z = Cyclo8::zeta();
    let single = |i: usize, c: Cyclo8| vec![(i, c)];
    let delta = |a: usize, b: usize| a == b;
    for a in 0..n {
        for b in 0..n {
            for i in 0..n {
                for j in 0..m {
                    let x = QnElement::x(n, a, b);
                    let y = QnElement::y(n, a, b);
                    let one = Cyclo8::one();
                    let hit = delta(b, i);
                    let exp = |idx: usize, c: Cyclo8| if hit { single(idx, c) } else { Vec::new() };
                    assert_eq!(u.act(Side::Left, &x, &single(u.v(i, j), one.clone())).unwrap(), exp(u.v(a, j), one.clone()));
                    assert_eq!(u.act(Side::Left, &x, &single(u.w(i, j), one.clone())).unwrap(), exp(u.w(a, j), one.clone()));
                    assert_eq!(u.act(Side::Left, &y, &single(u.v(i, j), one.clone())).unwrap(), exp(u.w(a, j), -&z));
                    assert_eq!(u.act(Side::Left, &y, &single(u.w(i, j), one.clone())).unwrap(), exp(u.v(a, j), -&z));
                }
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            for i in 0..n {
                for j in 0..m {
                    let x = QnElement::x(m, a, b);
                    let y = QnElement::y(m, a, b);
                    let one = Cyclo8::one();
                    let hit = delta(b, j);
                    let exp = |idx: usize, c: Cyclo8| if hit { single(idx, c) } else { Vec::new() };
                    assert_eq!(u.act(Side::Right, &x, &single(u.v(i, j), one.clone())).unwrap(), exp(u.v(i, a), one.clone()));
                    assert_eq!(u.act(Side::Right, &y, &single(u.v(i, j), one.clone())).unwrap(), exp(u.w(i, a), Cyclo8::from_int(-1)));
                    assert_eq!(u.act(Side::Right, &y, &single(u.w(i, j), one.clone())).unwrap(), exp(u.v(i, a), one.clone()));
                }
            }
        }
    }
}

#[test]
fn h_action_table() {
    let n = 3;
    let u = UModule::new(n, n);
    let z = Cyclo8::zeta();
    let d = |a: usize, b: usize| if a == b { 1 } else { 0 };
    for i in 0..n {
        for j in 0..n {
            let (x1, x2) = h_element(&QnElement::x(n, i, j));
            let (y1, y2) = h_element(&QnElement::y(n, i, j));
            let xop = u.pair_operator(&x1, &x2).unwrap();
            let yop = u.pair_operator(&y1, &y2).unwrap();
            for k in 0..n {
                for l in 0..n {
                    let lin = |a: (usize, i64), b: (usize, i64), s: &Cyclo8| {
                        collect_sparse(vec![(a.0, s.scale(&Rational::from_int(a.1))), (b.0, s.scale(&Rational::from_int(b.1)))])
                    };
                    let one = Cyclo8::one();
                    let v = vec![(u.v(k, l), one.clone())];
                    let w = vec![(u.w(k, l), one.clone())];
                    assert_eq!(xop.apply(&v), lin((u.v(i, l), d(j, k)), (u.v(k, j), -d(i, l)), &one));
                    assert_eq!(xop.apply(&w), lin((u.w(i, l), d(j, k)), (u.w(k, j), -d(i, l)), &one));
                    assert_eq!(yop.apply(&v), lin((u.w(i, l), d(j, k)), (u.w(k, j), d(i, l)), &-&z));
                    assert_eq!(yop.apply(&w), lin((u.v(i, l), d(j, k)), (u.v(k, j), -d(i, l)), &-&z));
                }
            }
        }
    }
}

#[test]
fn sergeev_action_is_a_homomorphism() {
    for (n, d) in [(1, 2), (1, 3), (2, 2)] {
        let alg = algebra(d);
        let ops: Vec<ActionOperator> =
            (0..alg.dim()).map(|w| sergeev_operator(n, d, &[(w, Rational::ONE)])).collect();
        for u in 0..alg.dim() {
            for w in 0..alg.dim() {
                let (k, s) = alg.mult_words(u, w);
                assert_eq!(ops[u].compose(&ops[w]), ops[k].scale(&Cyclo8::from_int(s)));
            }
        }
    }
}

#[test]
fn sergeev_action_supercommutes_with_qn() {
    for n in 1..=2 {
        for d in 1..=3 {
            let alg = algebra(d);
            let gens: Vec<usize> = (0..alg.dim())
                .filter(|&w| {
                    let word = alg.word(w);
                    let moved = word.perm.iter().enumerate().filter(|(i, &p)| *i != p as usize).count();
                    word.clifford.count_ones() + moved as u32 <= 2
                })
                .collect();
            for x in QnElement::basis(n) {
                let rx = tensor_power_operator(&x, d).unwrap();
                for &w in &gens {
                    let rh = sergeev_operator(n, d, &[(w, Rational::ONE)]);
                    assert!(rx.supercommutator(&rh).is_zero(), "n={n} d={d} word {}", alg.word(w));
                }
            }
        }
    }
}

#[test]
fn dim_t_matches_explicit_rank() {
    for d in 1..=4 {
        let table = decompose_regular(d, 0).unwrap();
        for lambda in enumerate_strict(d) {
            let block = table.block(&lambda).unwrap();
            for n in 1..=2 {
                if d == 4 && n == 2 {
                    continue;
                }
                let rank = isotypic_rank(&lambda, n).unwrap();
                let t = dim_t(&lambda, n).unwrap();
                assert_eq!(rank << lambda.delta(), t * block.dim_s, "{lambda:?} n={n}");
            }
        }
    }
}

#[test]
fn dim_t_vanishes_when_too_long() {
    for d in 1..=6 {
        for lambda in enumerate_strict(d) {
            for n in 1..lambda.len() {
                assert_eq!(dim_t(&lambda, n).unwrap(), 0, "{lambda:?} n={n}");
            }
            assert!(dim_t(&lambda, lambda.len()).unwrap() > 0);
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Degree-d part of a polynomial superalgebra on e even and o odd generators.
fn sym_dim(e: u64, o: u64, d: u64) -> u64 {
    (0..=d.min(o)).map(|k| binomial(e + d - k - 1, d - k) * binomial(o, k)).sum()
}

#[test]
fn cauchy_dimension_identity() {
    for n in 1..=2 {
        for m in 1..=2 {
            for d in 1..=4 {
                let nm = (n * m) as u64;
                let expected = sym_dim(nm, nm, d as u64);
                let mut total = 0u64;
                for lambda in enumerate_strict(d) {
                    let tn = dim_t(&lambda, n).unwrap() as u64;
                    let tm = dim_t(&lambda, m).unwrap() as u64;
                    total += (tn * tm) >> lambda.delta();
                }
                assert_eq!(total, expected, "n={n} m={m} d={d}");
            }
        }
    }
}

#[test]
fn dim_t_small_values() {
    let sp = StrictPartition::from_slice;
    assert_eq!(dim_t(&sp(&[1]), 4).unwrap(), 8);
    assert_eq!(dim_t(&sp(&[2]), 1).unwrap(), 2);
    assert_eq!(dim_t(&sp(&[2, 1]), 1).unwrap(), 0);
}

#[test]
fn characters_are_scaled_q_polynomials() {
    for size in 0..=4 {
        for lambda in enumerate_strict(size) {
            for n in lambda.len().max(1)..=3 {
                let ch = character(&lambda, n).unwrap();
                let q = queerlab::symfunc::q_poly(&lambda, n);
                let k = lambda.len() - lambda.delta();
                for (exps, c) in q.terms() {
                    let scaled = c / &Rational::from_int(1 << (k / 2));
                    let got = ch.get(exps).copied().unwrap_or(0);
                    assert_eq!(scaled, Rational::from_int(got as i64), "{lambda:?} n={n} {exps:?}");
                }
                assert_eq!(ch.len(), q.len());
                assert_eq!(ch.values().sum::<usize>(), dim_t(&lambda, n).unwrap());
            }
        }
    }
}
