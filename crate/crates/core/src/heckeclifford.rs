//! Hecke–Clifford superalgebras H_n = ℂ[S_n] ⋉ Cl_n.
//!
//! A basis word α₁^{ε₁}⋯αₙ^{εₙ}·σ is stored as `perm_index · 2ⁿ + mask`, with
//! σαᵢσ⁻¹ = α_{σ(i)}. Permutations are arrays with `p[i] = σ(i)` (0-based).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{collect_sparse, kernel, scale, Echelon, Field, SparseVec};
use crate::partitions::{enumerate_strict, StrictPartition};
use crate::scalars::{Cyclo8, Rational};
use crate::superalg::{clifford_sign, StructAlgebra};
use crate::symfunc::{induct_mult, SymfuncError};

/// Retries allowed when a random central element fails to separate blocks.
pub const SPLIT_ATTEMPTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("rank {n}: no separating central element after {attempts} attempts")]
    SplitFailed { n: usize, attempts: usize },
    #[error("rank {n}: block {block} matches labels {candidates:?}")]
    Ambiguous { n: usize, block: usize, candidates: Vec<StrictPartition> },
    #[error("rank {n}: restriction multiplicity {value} is not an integer")]
    NonIntegral { n: usize, value: String },
    #[error(transparent)]
    Symfunc(#[from] SymfuncError),
}

/// α^clifford · perm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HCWord {
    pub clifford: u32,
    pub perm: Vec<u8>,
}

impl HCWord {
    pub fn identity(n: usize) -> Self {
        HCWord { clifford: 0, perm: (0..n as u8).collect() }
    }

    pub fn parity(&self) -> u8 {
        (self.clifford.count_ones() % 2) as u8
    }
}

impl fmt::Display for HCWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 0..32 {
            if self.clifford >> i & 1 == 1 {
                parts.push(format!("α{}", i + 1));
            }
        }
        if self.perm.iter().enumerate().any(|(i, &p)| p as usize != i) {
            let p: Vec<String> = self.perm.iter().map(|x| (x + 1).to_string()).collect();
            parts.push(format!("[{}]", p.join("")));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// Multiplication tables for H_n.
#[derive(Debug)]
pub struct HeckeClifford {
    n: usize,
    perms: Vec<Vec<u8>>,
    perm_index: HashMap<Vec<u8>, usize>,
    perm_mul: Vec<Vec<u32>>,
    perm_inv: Vec<u32>,
    conj: Vec<Vec<(u32, i8)>>,
}

fn all_perms(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, (n - 1) as u8);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Shared tables for rank `n`.
pub fn algebra(n: usize) -> Arc<HeckeClifford> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<HeckeClifford>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().unwrap().get(&n) {
        return a.clone();
    }
    let a = Arc::new(HeckeClifford::new(n));
    cache.lock().unwrap().insert(n, a.clone());
    a
}

impl HeckeClifford {
    pub fn new(n: usize) -> Self {
        assert!(n <= 7, "rank too large for word tables");
        let perms = all_perms(n);
        let perm_index: HashMap<Vec<u8>, usize> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let compose = |s: &[u8], t: &[u8]| -> Vec<u8> { t.iter().map(|&i| s[i as usize]).collect() };
        let perm_mul = perms
            .iter()
            .map(|s| perms.iter().map(|t| perm_index[&compose(s, t)] as u32).collect())
            .collect();
        let perm_inv = perms
            .iter()
            .map(|s| {
                let mut inv = vec![0u8; n];
                for (i, &x) in s.iter().enumerate() {
                    inv[x as usize] = i as u8;
                }
                perm_index[&inv] as u32
            })
            .collect();
        let conj = perms
            .iter()
            .map(|s| {
                (0..1u32 << n)
                    .map(|mask| {
                        let images: Vec<u8> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                        let mut inversions = 0;
                        for a in 0..images.len() {
                            for b in a + 1..images.len() {
                                if images[a] > images[b] {
                                    inversions += 1;
                                }
                            }
                        }
                        let new_mask = images.iter().fold(0u32, |m, &i| m | 1 << i);
                        (new_mask, if inversions % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect();
        HeckeClifford { n, perms, perm_index, perm_mul, perm_inv, conj }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// 2ⁿ·n!.
    pub fn dim(&self) -> usize {
        self.perms.len() << self.n
    }

    pub fn word(&self, idx: usize) -> HCWord {
        HCWord { clifford: (idx & ((1 << self.n) - 1)) as u32, perm: self.perms[idx >> self.n].clone() }
    }

    pub fn index(&self, w: &HCWord) -> usize {
        (self.perm_index[&w.perm] << self.n) | w.clifford as usize
    }

    pub fn parity(&self, idx: usize) -> u8 {
        ((idx & ((1 << self.n) - 1)).count_ones() % 2) as u8
    }

    /// Product of two basis words as (word, sign).
    pub fn mult_words(&self, x: usize, y: usize) -> (usize, i64) {
        let low = (1usize << self.n) - 1;
        let (a, s) = ((x & low) as u32, x >> self.n);
        let (b, t) = ((y & low) as u32, y >> self.n);
        let (c, s1) = self.conj[s][b as usize];
        let sign = s1 as i64 * clifford_sign(a, c);
        let perm = self.perm_mul[s][t] as usize;
        ((perm << self.n) | (a ^ c) as usize, sign)
    }

    pub fn mult<F: Field>(&self, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<usize, F> {
        let mut acc: Vec<Option<F>> = vec![None; self.dim()];
        for (i, a) in x {
            for (j, b) in y {
                let (k, s) = self.mult_words(*i, *j);
                let mut p = a.mul(b);
                if s < 0 {
                    p = p.neg();
                }
                acc[k] = Some(match acc[k].take() {
                    Some(v) => v.add(&p),
                    None => p,
                });
            }
        }
        acc.into_iter().enumerate().filter_map(|(k, v)| v.filter(|c| !c.is_zero()).map(|c| (k, c))).collect()
    }

    pub fn one<F: Field>(&self) -> SparseVec<usize, F> {
        vec![(0, F::one())]
    }

    /// αᵢ (1-based).
    pub fn alpha<F: Field>(&self, i: usize) -> SparseVec<usize, F> {
        vec![(1 << (i - 1), F::one())]
    }

    /// sᵢ = (i i+1) (1-based).
    pub fn s<F: Field>(&self, i: usize) -> SparseVec<usize, F> {
        let mut p: Vec<u8> = (0..self.n as u8).collect();
        p.swap(i - 1, i);
        vec![(self.perm_index[&p] << self.n, F::one())]
    }

    pub fn perm_element<F: Field>(&self, p: &[u8]) -> SparseVec<usize, F> {
        vec![(self.perm_index[p] << self.n, F::one())]
    }

    /// α₁ and s₁..s_{n−1}, which generate H_n.
    pub fn generators<F: Field>(&self) -> Vec<SparseVec<usize, F>> {
        let mut g = Vec::new();
        if self.n >= 1 {
            g.push(self.alpha(1));
        }
        for i in 1..self.n {
            g.push(self.s(i));
        }
        g
    }

    /// The transpose ζ^{k²}σ⁻¹α_{i_k}⋯α_{i₁} of α_{i₁}⋯α_{i_k}σ, extended linearly.
    pub fn transpose(&self, x: &[(usize, Cyclo8)]) -> SparseVec<usize, Cyclo8> {
        let low = (1usize << self.n) - 1;
        let mut out = Vec::new();
        for (w, c) in x {
            let mask = (w & low) as u32;
            let k = mask.count_ones() as i64;
            // reversing k anticommuting letters costs (−1)^{k(k−1)/2}
            let rev = if (k * (k - 1) / 2) % 2 == 0 { 1 } else { -1 };
            let coeff = &(c * &Cyclo8::zeta_pow(k * k)) * &Cyclo8::from_int(rev);
            let inv = (self.perm_inv[w >> self.n] as usize) << self.n;
            let (word, sign) = self.mult_words(inv, mask as usize);
            out.push((word, if sign < 0 { -coeff } else { coeff }));
        }
        collect_sparse(out)
    }

    /// The full structure-constant table, for use with the generic engine.
    pub fn structure_algebra(&self) -> StructAlgebra {
        let d = self.dim();
        let parities = (0..d).map(|i| self.parity(i)).collect();
        let table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let (k, s) = self.mult_words(i, j);
                        vec![(k, Cyclo8::from_int(s))]
                    })
                    .collect()
            })
            .collect();
        StructAlgebra::new(parities, 0, table).expect("consistent table")
    }

    /// Smallest left ideal containing `seeds`.
    pub fn left_closure<F: Field>(&self, seeds: &[SparseVec<usize, F>]) -> Echelon<usize, F> {
        self.closure(seeds, Side::Left)
    }

    /// Smallest right ideal containing `seeds`.
    pub fn right_closure<F: Field>(&self, seeds: &[SparseVec<usize, F>]) -> Echelon<usize, F> {
        self.closure(seeds, Side::Right)
    }

    fn closure<F: Field>(&self, seeds: &[SparseVec<usize, F>], side: Side) -> Echelon<usize, F> {
        let gens = self.generators::<F>();
        let full = self.dim();
        let mut ech = Echelon::new();
        let mut queue = Vec::new();
        for s in seeds {
            if ech.insert(s) {
                queue.push(s.clone());
            }
        }
        while let Some(v) = queue.pop() {
            if ech.rank() == full {
                break;
            }
            for g in &gens {
                let w = match side {
                    Side::Left => self.mult(g, &v),
                    Side::Right => self.mult(&v, g),
                };
                if ech.insert(&w) {
                    queue.push(w);
                }
            }
        }
        ech
    }

    /// Smallest two-sided ideal containing `seeds`.
    pub fn two_sided_closure<F: Field>(&self, seeds: &[SparseVec<usize, F>]) -> Echelon<usize, F> {
        let left = self.left_closure(seeds);
        let rows: Vec<_> = left.rows().cloned().collect();
        self.right_closure(&rows)
    }

    /// Two-sided inverse of a basis word: (word, sign) with x·word = sign·1.
    pub fn inverse_word(&self, x: usize) -> (usize, i64) {
        let low = (1usize << self.n) - 1;
        let (a, s) = ((x & low) as u32, x >> self.n);
        let si = self.perm_inv[s] as usize;
        let (m, _) = self.conj[si][a as usize];
        let y = (si << self.n) | m as usize;
        let (k, sign) = self.mult_words(x, y);
        debug_assert_eq!(k, 0);
        (y, sign)
    }

    /// Signed conjugation-orbit sums of words of the given parity under ⟨αᵢ, sᵢ⟩.
    ///
    /// These span the elements of that parity commuting (ungraded) with every generator.
    fn class_sums(&self, parity: u8) -> Vec<ClassSum> {
        let d = self.dim();
        let gens: Vec<usize> = (0..self.n)
            .map(|i| 1usize << i)
            .chain((0..self.n.saturating_sub(1)).map(|i| {
                let mut p: Vec<u8> = (0..self.n as u8).collect();
                p.swap(i, i + 1);
                self.perm_index[&p] << self.n
            }))
            .collect();
        let mut seen = vec![0i8; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] != 0 || self.parity(start) != parity {
                continue;
            }
            seen[start] = 1;
            let mut orbit = vec![start];
            let mut consistent = true;
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head];
                head += 1;
                for &g in &gens {
                    let (y, s1) = self.mult_words(g, x);
                    let (z, s2) = self.mult_words(y, g);
                    let sign = seen[x] as i64 * s1 * s2;
                    if seen[z] == 0 {
                        seen[z] = sign as i8;
                        orbit.push(z);
                    } else if seen[z] as i64 != sign {
                        consistent = false;
                    }
                }
            }
            if consistent {
                let terms = collect_sparse(orbit.iter().map(|&w| (w, Rational::from_int(seen[w] as i64))));
                out.push(ClassSum { rep: start, terms });
            }
        }
        out
    }
}

struct ClassSum {
    rep: usize,
    terms: SparseVec<usize, Rational>,
}

fn dense(d: usize, v: &[(usize, Rational)]) -> Vec<Rational> {
    let mut out = vec![Rational::ZERO; d];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

/// Coefficient of the word `target` in x·y, with y given densely.
fn coefficient_at(alg: &HeckeClifford, x: &[(usize, Rational)], y: &[Rational], target: usize) -> Rational {
    let mut acc = Rational::ZERO;
    for (u, c) in x {
        let (inv, s0) = alg.inverse_word(*u);
        let (w, s1) = alg.mult_words(inv, target);
        if y[w].is_zero() {
            continue;
        }
        let p = c * &y[w];
        if s0 * s1 > 0 {
            acc = &acc + &p;
        } else {
            acc = &acc - &p;
        }
    }
    acc
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

/// An element of H_n with coefficients in F.
#[derive(Clone, PartialEq)]
pub struct HCElement<F = Cyclo8> {
    pub n: usize,
    pub terms: SparseVec<usize, F>,
}

impl<F: Field> HCElement<F> {
    pub fn zero(n: usize) -> Self {
        HCElement { n, terms: Vec::new() }
    }

    pub fn one(n: usize) -> Self {
        HCElement { n, terms: vec![(0, F::one())] }
    }

    pub fn from_word(n: usize, w: &HCWord, c: F) -> Self {
        let alg = algebra(n);
        HCElement { n, terms: collect_sparse([(alg.index(w), c)]) }
    }

    /// αᵢ (1-based).
    pub fn alpha(n: usize, i: usize) -> Self {
        HCElement { n, terms: algebra(n).alpha(i) }
    }

    /// sᵢ (1-based).
    pub fn s(n: usize, i: usize) -> Self {
        HCElement { n, terms: algebra(n).s(i) }
    }

    pub fn perm(p: &[u8]) -> Self {
        let n = p.len();
        HCElement { n, terms: algebra(n).perm_element(p) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        HCElement { n: self.n, terms: crate::linalg::axpy(&self.terms, &F::one(), &other.terms) }
    }

    pub fn scale(&self, s: &F) -> Self {
        HCElement { n: self.n, terms: scale(&self.terms, s) }
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    /// Parity if homogeneous.
    pub fn parity(&self) -> Option<u8> {
        let alg = algebra(self.n);
        let ps: BTreeSet<u8> = self.terms.iter().map(|(w, _)| alg.parity(*w)).collect();
        match ps.len() {
            0 => Some(0),
            1 => ps.into_iter().next(),
            _ => None,
        }
    }

    pub fn words(&self) -> Vec<(HCWord, F)> {
        let alg = algebra(self.n);
        self.terms.iter().map(|(w, c)| (alg.word(*w), c.clone())).collect()
    }
}

impl<F: Field> fmt::Debug for HCElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.words().iter().map(|(w, c)| format!("({c:?})·{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn hc_mult<F: Field>(x: &HCElement<F>, y: &HCElement<F>) -> HCElement<F> {
    assert_eq!(x.n, y.n, "rank mismatch");
    HCElement { n: x.n, terms: algebra(x.n).mult(&x.terms, &y.terms) }
}

pub fn transpose(x: &HCElement<Cyclo8>) -> HCElement<Cyclo8> {
    HCElement { n: x.n, terms: algebra(x.n).transpose(&x.terms) }
}

/// ι_{m,n}(x⊗y): αᵢ⊗1 ↦ αᵢ, 1⊗αⱼ ↦ α_{m+j}, S_m×S_n ↪ S_{m+n}.
pub fn iota<F: Field>(x: &HCElement<F>, y: &HCElement<F>) -> HCElement<F> {
    let (m, n) = (x.n, y.n);
    let (am, an, amn) = (algebra(m), algebra(n), algebra(m + n));
    let mut out = Vec::new();
    for (i, a) in &x.terms {
        let wx = am.word(*i);
        for (j, b) in &y.terms {
            let wy = an.word(*j);
            let mut perm = wx.perm.clone();
            perm.extend(wy.perm.iter().map(|p| p + m as u8));
            // x's letters all precede y's shifted letters, so no reordering sign
            let w = HCWord { clifford: wx.clifford | wy.clifford << m, perm };
            out.push((amn.index(&w), a.mul(b)));
        }
    }
    HCElement { n: m + n, terms: collect_sparse(out) }
}

/// τ_{m,n}: i ↦ i+n for i ≤ m, i ↦ i−m otherwise.
pub fn braid<F: Field>(m: usize, n: usize) -> HCElement<F> {
    let perm: Vec<u8> = (0..m + n).map(|i| if i < m { (i + n) as u8 } else { (i - m) as u8 }).collect();
    HCElement::perm(&perm)
}

/// The sign s with τ_{m,n}·ι_{m,n}(x⊗y)·τ_{m,n}⁻¹ = s·ι_{n,m}(y⊗x), if one exists.
pub fn braid_conjugation_sign<F: Field>(x: &HCElement<F>, y: &HCElement<F>) -> Option<i64> {
    let (m, n) = (x.n, y.n);
    let t = braid::<F>(m, n);
    let t_inv = braid::<F>(n, m);
    let lhs = hc_mult(&hc_mult(&t, &iota(x, y)), &t_inv);
    let rhs = iota(y, x);
    if lhs == rhs {
        Some(1)
    } else if lhs == rhs.neg() {
        Some(-1)
    } else {
        None
    }
}

/// Simple-module type: no odd self-maps (M) or an odd involution (Q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockType {
    M,
    Q,
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", match self {
            BlockType::M => "M",
            BlockType::Q => "Q",
        })
    }
}

/// One isotypic two-sided ideal J^λ.
#[derive(Debug, Clone)]
pub struct IsotypicBlock {
    pub lambda: StrictPartition,
    pub dim_j: usize,
    pub dim_s: usize,
    pub kind: BlockType,
    /// Central idempotent e_λ with J^λ = H_n·e_λ.
    pub idempotent: SparseVec<usize, Rational>,
    basis: OnceLock<Echelon<usize, Rational>>,
}

impl IsotypicBlock {
    fn new(lambda: StrictPartition, dim_j: usize, dim_s: usize, kind: BlockType, idempotent: SparseVec<usize, Rational>) -> Self {
        IsotypicBlock { lambda, dim_j, dim_s, kind, idempotent, basis: OnceLock::new() }
    }

    /// Echelon basis of J^λ, computed on first use.
    pub fn basis(&self) -> &Echelon<usize, Rational> {
        self.basis.get_or_init(|| algebra(self.lambda.size()).left_closure(&[self.idempotent.clone()]))
    }
}

#[derive(Debug, Clone)]
pub struct IsotypicTable {
    pub n: usize,
    pub blocks: Vec<IsotypicBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotypicRow {
    pub lambda: StrictPartition,
    #[serde(rename = "dim_J")]
    pub dim_j: usize,
    #[serde(rename = "dim_S")]
    pub dim_s: usize,
    #[serde(rename = "type")]
    pub kind: BlockType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotypicReport {
    pub n: usize,
    pub blocks: Vec<IsotypicRow>,
}

impl IsotypicTable {
    pub fn report(&self) -> IsotypicReport {
        IsotypicReport {
            n: self.n,
            blocks: self
                .blocks
                .iter()
                .map(|b| IsotypicRow { lambda: b.lambda.clone(), dim_j: b.dim_j, dim_s: b.dim_s, kind: b.kind })
                .collect(),
        }
    }

    pub fn block(&self, lambda: &StrictPartition) -> Option<&IsotypicBlock> {
        self.blocks.iter().find(|b| &b.lambda == lambda)
    }
}

fn isqrt(x: usize) -> Option<usize> {
    let r = (x as f64).sqrt().round() as usize;
    (r * r == x).then_some(r)
}

fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::ZERO, |acc, c| &(&acc * x) + c)
}

/// Multiplication in the even center, in class-sum coordinates.
struct CenterAlgebra {
    /// structure[a][b][c]: coefficient of class c in z_a·z_b.
    structure: Vec<Vec<Vec<Rational>>>,
    unit: Vec<Rational>,
}

impl CenterAlgebra {
    fn new(alg: &HeckeClifford, classes: &[ClassSum]) -> Self {
        let d = alg.dim();
        let k = classes.len();
        let dense_classes: Vec<Vec<Rational>> = classes.iter().map(|c| dense(d, &c.terms)).collect();
        let structure = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| (0..k).map(|c| coefficient_at(alg, &classes[a].terms, &dense_classes[b], classes[c].rep)).collect())
                    .collect()
            })
            .collect();
        let unit = classes.iter().map(|c| Rational::from_int((c.rep == 0) as i64)).collect();
        CenterAlgebra { structure, unit }
    }

    fn mult(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let k = x.len();
        let mut out = vec![Rational::ZERO; k];
        for a in 0..k {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..k {
                if y[b].is_zero() {
                    continue;
                }
                let p = &x[a] * &y[b];
                for c in 0..k {
                    let t = &self.structure[a][b][c];
                    if !t.is_zero() {
                        out[c] = &out[c] + &(&p * t);
                    }
                }
            }
        }
        out
    }
}

fn to_sparse(v: &[Rational]) -> SparseVec<usize, Rational> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// Primitive idempotents of the even center from one random integral element,
/// in class-sum coordinates.
fn central_idempotents(center: &CenterAlgebra, sizes: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<Vec<Rational>>> {
    let k = sizes.len();
    let z: Vec<Rational> = (0..k).map(|_| Rational::from_int(rng.gen_range(-3..=3))).collect();
    // minimal polynomial by Krylov iteration on powers of z
    let mut powers = vec![center.unit.clone()];
    let minpoly = loop {
        let next = center.mult(powers.last().unwrap(), &z);
        powers.push(next);
        let sparse: Vec<_> = powers.iter().map(|p| to_sparse(p)).collect();
        if let Some(rel) = kernel(&sparse).into_iter().next() {
            let top = rel.iter().find(|(i, _)| *i == powers.len() - 1)?.1.clone();
            let mut coeffs = vec![Rational::ZERO; powers.len()];
            for (i, c) in rel {
                coeffs[i] = &c / &top;
            }
            break coeffs;
        }
        if powers.len() > k + 1 {
            return None;
        }
    };
    let degree = minpoly.len() - 1;
    if degree != k {
        return None;
    }
    // z is integral, so its eigenvalues are algebraic integers bounded by the ℓ¹ norm
    let bound: i64 = z.iter().zip(sizes).map(|(c, &s)| c.abs().to_i64().unwrap_or(0) * s as i64).sum();
    let roots: Vec<Rational> = (-bound..=bound)
        .map(Rational::from_int)
        .filter(|r| eval_poly(&minpoly, r).is_zero())
        .collect();
    if roots.len() != degree {
        return None;
    }
    let mut idems = Vec::new();
    for (i, ri) in roots.iter().enumerate() {
        let mut e = center.unit.clone();
        for (j, rj) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            let factor: Vec<Rational> = z.iter().zip(&center.unit).map(|(a, u)| a - &(rj * u)).collect();
            let denom = (ri - rj).recip().ok()?;
            e = center.mult(&e, &factor).iter().map(|c| c * &denom).collect();
        }
        idems.push(e);
    }
    Some(idems)
}

fn table_cache() -> &'static Mutex<HashMap<(usize, u64), Arc<IsotypicTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<IsotypicTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Splits H_n into isotypic two-sided ideals J^λ and labels them by strict partitions.
///
/// Blocks are cut out by central idempotents of a random even central element;
/// labels come from restriction multiplicities to H_{n−1}.
pub fn decompose_regular(n: usize, seed: u64) -> Result<Arc<IsotypicTable>, HeckeError> {
    if let Some(t) = table_cache().lock().unwrap().get(&(n, seed)) {
        return Ok(t.clone());
    }
    let table = Arc::new(decompose_uncached(n, seed)?);
    table_cache().lock().unwrap().insert((n, seed), table.clone());
    Ok(table)
}

fn decompose_uncached(n: usize, seed: u64) -> Result<IsotypicTable, HeckeError> {
    let alg = algebra(n);
    if n == 0 {
        let block = IsotypicBlock::new(StrictPartition::empty(), 1, 1, BlockType::M, alg.one());
        return Ok(IsotypicTable { n, blocks: vec![block] });
    }
    let d = alg.dim();
    let classes = alg.class_sums(0);
    let odd_classes = alg.class_sums(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32);
    let idems: Vec<SparseVec<usize, Rational>> = if classes.len() == 1 {
        vec![alg.one()]
    } else {
        let center = CenterAlgebra::new(&alg, &classes);
        let sizes: Vec<usize> = classes.iter().map(|c| c.terms.len()).collect();
        let coords = (0..SPLIT_ATTEMPTS)
            .find_map(|_| central_idempotents(&center, &sizes, &mut rng))
            .ok_or(HeckeError::SplitFailed { n, attempts: SPLIT_ATTEMPTS })?;
        coords
            .iter()
            .map(|e| {
                let mut v = Vec::new();
                for (c, class) in e.iter().zip(&classes) {
                    if !c.is_zero() {
                        v = crate::linalg::axpy(&v, c, &class.terms);
                    }
                }
                v
            })
            .collect()
    };

    // the rank of an idempotent operator is its trace, and left multiplication
    // by a word other than 1 has zero trace on the regular module
    let regular_rank = |f: &Rational| -> Result<usize, HeckeError> {
        let r = &Rational::from_int(d as i64) * f;
        r.to_i64()
            .filter(|_| r.is_integer())
            .map(|x| x as usize)
            .ok_or(HeckeError::NonIntegral { n, value: r.to_string() })
    };

    struct Raw {
        e: SparseVec<usize, Rational>,
        dim_j: usize,
        kind: BlockType,
        dim_s: usize,
    }
    let mut raw = Vec::new();
    for e in idems {
        let e_dense = dense(d, &e);
        let dim_j = regular_rank(&e_dense[0])?;
        let kind = if odd_classes
            .iter()
            .any(|z| odd_classes.iter().any(|c| !coefficient_at(&alg, &z.terms, &e_dense, c.rep).is_zero()))
        {
            BlockType::Q
        } else {
            BlockType::M
        };
        let dim_s = match kind {
            BlockType::M => isqrt(dim_j),
            BlockType::Q => isqrt(2 * dim_j),
        }
        .ok_or(HeckeError::NonIntegral { n, value: format!("√dim J for dim J = {dim_j}") })?;
        raw.push(Raw { e, dim_j, kind, dim_s });
    }

    // restriction to H_{n−1} against the Pieri-rule prediction
    let lower = decompose_regular(n - 1, seed)?;
    let one = StrictPartition::from_slice(&[1]);
    let mut predicted: Vec<(StrictPartition, BlockType, Vec<Rational>)> = Vec::new();
    for lambda in enumerate_strict(n) {
        let kind = if lambda.delta() == 1 { BlockType::Q } else { BlockType::M };
        let mut mults = Vec::new();
        for nu in &lower.blocks {
            let c = induct_mult(&one, &nu.lambda)?.get(&lambda).cloned().unwrap_or(Rational::ZERO);
            let shift = lambda.delta() as i64 - nu.lambda.delta() as i64;
            let f = if shift >= 0 { Rational::from_int(1 << shift) } else { Rational::new(1, 1 << -shift) };
            mults.push(&c * &f);
        }
        predicted.push((lambda, kind, mults));
    }
    let lifted: Vec<SparseVec<usize, Rational>> = lower
        .blocks
        .iter()
        .map(|nu| iota(&HCElement { n: n - 1, terms: nu.idempotent.clone() }, &HCElement::<Rational>::one(1)).terms)
        .collect();
    let mut blocks = Vec::new();
    for (bi, r) in raw.into_iter().enumerate() {
        let e_dense = dense(d, &r.e);
        let mut observed = Vec::new();
        for (nu, e_nu) in lower.blocks.iter().zip(&lifted) {
            // ι(e_ν)·J^λ = ι(e_ν)e_λ·H_n, an idempotent left multiple
            let rank = regular_rank(&coefficient_at(&alg, e_nu, &e_dense, 0))?;
            let value = Rational::new((rank * r.dim_s) as i64, (nu.dim_s * r.dim_j) as i64);
            if !value.is_integer() {
                return Err(HeckeError::NonIntegral { n, value: value.to_string() });
            }
            observed.push(value);
        }
        let candidates: Vec<StrictPartition> = predicted
            .iter()
            .filter(|(_, k, m)| *k == r.kind && *m == observed)
            .map(|(l, _, _)| l.clone())
            .collect();
        if candidates.len() != 1 {
            return Err(HeckeError::Ambiguous { n, block: bi, candidates });
        }
        blocks.push(IsotypicBlock::new(candidates[0].clone(), r.dim_j, r.dim_s, r.kind, r.e));
    }
    blocks.sort_by(|a, b| b.lambda.cmp(&a.lambda));
    let labels: BTreeSet<_> = blocks.iter().map(|b| b.lambda.clone()).collect();
    if labels.len() != blocks.len() {
        return Err(HeckeError::Ambiguous { n, block: 0, candidates: labels.into_iter().collect() });
    }
    Ok(IsotypicTable { n, blocks })
}

/// Σ(J): the two-sided ideal of H_{n+1} generated by ι_{1,n}(1⊗J).
pub fn sigma_step(n: usize, j: &Echelon<usize, Rational>) -> Echelon<usize, Rational> {
    let one = HCElement::<Rational>::one(1);
    let seeds: Vec<_> = j.rows().map(|r| iota(&one, &HCElement { n, terms: r.clone() }).terms).collect();
    algebra(n + 1).two_sided_closure(&seeds)
}

/// Isotypic support of a two-sided ideal: the λ with J^λ ⊆ I, and whether
/// these blocks exhaust I.
pub fn ideal_support(table: &IsotypicTable, ideal: &Echelon<usize, Rational>) -> (Vec<StrictPartition>, bool) {
    let mut support = Vec::new();
    let mut total = 0;
    for b in &table.blocks {
        if ideal.contains(&b.idempotent) {
            support.push(b.lambda.clone());
            total += b.dim_j;
        }
    }
    (support, total == ideal.rank())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorIdealCase {
    pub lambda: StrictPartition,
    pub m: usize,
    pub predicted_support: Vec<StrictPartition>,
    pub observed_support: Vec<StrictPartition>,
    pub dim: usize,
    pub pass: bool,
}

/// Σ^m(J^λ) for m = 0..=m_max, each compared with {μ ⊇ λ : |μ| = |λ|+m}.
pub fn tensor_ideal_cases(lambda: &StrictPartition, m_max: usize, seed: u64) -> Result<Vec<TensorIdealCase>, HeckeError> {
    let k = lambda.size();
    let table = decompose_regular(k, seed)?;
    let start = table.block(lambda).map(|b| b.basis().clone()).unwrap_or_default();
    let mut ideal = start;
    let mut out = Vec::new();
    for m in 0..=m_max {
        if m > 0 {
            ideal = sigma_step(k + m - 1, &ideal);
        }
        let t = decompose_regular(k + m, seed)?;
        let (observed, exhausted) = ideal_support(&t, &ideal);
        let mut predicted: Vec<StrictPartition> =
            enumerate_strict(k + m).into_iter().filter(|mu| lambda.is_contained_in(mu)).collect();
        predicted.sort_by(|a, b| b.cmp(a));
        let pass = exhausted && observed == predicted;
        out.push(TensorIdealCase {
            lambda: lambda.clone(),
            m,
            predicted_support: predicted,
            observed_support: observed,
            dim: ideal.rank(),
            pass,
        });
    }
    Ok(out)
}

/// Runs every (λ, m) with |λ| + m ≤ n_max.
pub fn verify_tensor_ideal_theorem(n_max: usize, seed: u64) -> Result<Vec<TensorIdealCase>, HeckeError> {
    let mut out = Vec::new();
    for k in 0..=n_max {
        for lambda in enumerate_strict(k) {
            out.extend(tensor_ideal_cases(&lambda, n_max - k, seed)?);
        }
    }
    Ok(out)
}

/// Dimension of each block keyed by label, for reports.
pub fn block_dims(table: &IsotypicTable) -> BTreeMap<StrictPartition, usize> {
    table.blocks.iter().map(|b| (b.lambda.clone(), b.dim_j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_relations() {
        let a1 = HCElement::<Cyclo8>::alpha(2, 1);
        let a2 = HCElement::<Cyclo8>::alpha(2, 2);
        assert_eq!(hc_mult(&a1, &a1), HCElement::one(2));
        let a1a2 = hc_mult(&a1, &a2);
        assert_eq!(hc_mult(&a2, &a1), a1a2.neg());
    }

    #[test]
    fn permutation_conjugates_generators() {
        let s1 = HCElement::<Cyclo8>::s(2, 1);
        let a1 = HCElement::alpha(2, 1);
        assert_eq!(hc_mult(&hc_mult(&s1, &a1), &s1), HCElement::alpha(2, 2));
    }

    #[test]
    fn transpose_examples() {
        let a1 = HCElement::<Cyclo8>::alpha(2, 1);
        assert_eq!(transpose(&a1), a1.scale(&Cyclo8::zeta()));
        let a1a2 = hc_mult(&a1, &HCElement::alpha(2, 2));
        assert_eq!(transpose(&a1a2), a1a2.neg());
        let p = HCElement::<Cyclo8>::perm(&[1, 2, 0]);
        assert_eq!(transpose(&p), HCElement::perm(&[2, 0, 1]));
    }

    #[test]
    fn iota_examples() {
        let a = HCElement::<Cyclo8>::alpha(1, 1);
        let one1 = HCElement::<Cyclo8>::one(1);
        assert_eq!(iota(&a, &one1), HCElement::alpha(2, 1));
        assert_eq!(iota(&one1, &a), HCElement::alpha(2, 2));
        let s1 = HCElement::<Cyclo8>::s(2, 1);
        assert_eq!(iota(&one1, &s1), HCElement::s(3, 2));
    }

    #[test]
    fn braid_examples() {
        assert_eq!(braid::<Cyclo8>(1, 1), HCElement::s(2, 1));
        assert_eq!(braid::<Cyclo8>(2, 0), HCElement::one(2));
        assert_eq!(hc_mult(&braid::<Cyclo8>(1, 2), &braid(2, 1)), HCElement::one(3));
    }

    #[test]
    fn braid_sign_depends_on_parities() {
        let a = HCElement::<Cyclo8>::alpha(1, 1);
        let one = HCElement::<Cyclo8>::one(1);
        assert_eq!(braid_conjugation_sign(&a, &one), Some(1));
        assert_eq!(braid_conjugation_sign(&a, &a), Some(-1));
    }

    #[test]
    fn dimensions() {
        assert_eq!(algebra(0).dim(), 1);
        assert_eq!(algebra(3).dim(), 48);
        assert_eq!(algebra(4).dim(), 384);
    }

    #[test]
    fn closures_of_trivial_sets() {
        let alg = algebra(3);
        assert_eq!(alg.two_sided_closure(&[alg.one::<Rational>()]).rank(), 48);
        assert_eq!(alg.two_sided_closure::<Rational>(&[]).rank(), 0);
    }

    #[test]
    fn small_decompositions() {
        let t1 = decompose_regular(1, 7).unwrap();
        assert_eq!(t1.report().blocks, vec![IsotypicRow {
            lambda: StrictPartition::from_slice(&[1]),
            dim_j: 2,
            dim_s: 2,
            kind: BlockType::Q
        }]);
        let t3 = decompose_regular(3, 7).unwrap();
        let rows: Vec<_> = t3.report().blocks.into_iter().map(|r| (r.lambda.to_string(), r.dim_j, r.kind)).collect();
        assert_eq!(rows, vec![("3".to_string(), 32, BlockType::Q), ("2,1".to_string(), 16, BlockType::M)]);
    }

    #[test]
    fn word_round_trip() {
        let alg = algebra(3);
        for i in 0..alg.dim() {
            assert_eq!(alg.index(&alg.word(i)), i);
        }
    }
}
