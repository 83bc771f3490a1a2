//! The queer Lie superalgebra q_n and its actions on V = ℂ^{n|n}, V^{⊗d} and
//! U = 2⁻¹(V⊗W).
//!
//! An element is stored by its blocks (a, b) of the matrix (a b; −b a), so X_ij
//! is a = E_ij and Y_ij is b = E_ij. Indices are 0-based; in V the basis is
//! e_0..e_{n−1} followed by f_0..f_{n−1}.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::heckeclifford::{algebra, decompose_regular, HeckeError};
use crate::linalg::{collect_sparse, Echelon, Matrix, SparseVec};
use crate::partitions::StrictPartition;
use crate::scalars::{Cyclo8, Rational};

/// Largest tensor degree for which dim_T is computed.
pub const MAX_TENSOR_DEGREE: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueerError {
    #[error("ranks differ: {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("matrix is not of the form (a b; −b a)")]
    NotQueer,
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("image of basis vector {0} leaves the span of the v, w basis")]
    LeavesHalfTensor(usize),
    #[error("degree {0} exceeds the supported bound {MAX_TENSOR_DEGREE}")]
    DegreeTooLarge(usize),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QnElement {
    pub n: usize,
    /// Even block.
    pub a: Matrix<Cyclo8>,
    /// Odd block.
    pub b: Matrix<Cyclo8>,
}

impl QnElement {
    pub fn zero(n: usize) -> Self {
        QnElement { n, a: Matrix::zeros(n, n), b: Matrix::zeros(n, n) }
    }

    pub fn from_blocks(a: Matrix<Cyclo8>, b: Matrix<Cyclo8>) -> Self {
        assert!(a.rows == a.cols && b.rows == b.cols && a.rows == b.rows, "blocks must be square of equal size");
        QnElement { n: a.rows, a, b }
    }

    pub fn x(n: usize, i: usize, j: usize) -> Self {
        let mut z = QnElement::zero(n);
        z.a.set(i, j, Cyclo8::one());
        z
    }

    pub fn y(n: usize, i: usize, j: usize) -> Self {
        let mut z = QnElement::zero(n);
        z.b.set(i, j, Cyclo8::one());
        z
    }

    /// X_ij for all i, j followed by Y_ij.
    pub fn basis(n: usize) -> Vec<QnElement> {
        let mut out = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(QnElement::x(n, i, j));
            }
        }
        for i in 0..n {
            for j in 0..n {
                out.push(QnElement::y(n, i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `None` if both blocks are nonzero; zero counts as even.
    pub fn parity(&self) -> Option<u8> {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => Some(0),
            (true, false) => Some(1),
            (false, false) => None,
        }
    }

    pub fn even_part(&self) -> QnElement {
        QnElement { n: self.n, a: self.a.clone(), b: Matrix::zeros(self.n, self.n) }
    }

    pub fn odd_part(&self) -> QnElement {
        QnElement { n: self.n, a: Matrix::zeros(self.n, self.n), b: self.b.clone() }
    }

    pub fn add(&self, other: &QnElement) -> QnElement {
        QnElement { n: self.n, a: self.a.add(&other.a), b: self.b.add(&other.b) }
    }

    pub fn sub(&self, other: &QnElement) -> QnElement {
        QnElement { n: self.n, a: self.a.sub(&other.a), b: self.b.sub(&other.b) }
    }

    pub fn scale(&self, s: &Cyclo8) -> QnElement {
        QnElement { n: self.n, a: self.a.scale(s), b: self.b.scale(s) }
    }

    /// The 2n×2n matrix (a b; −b a).
    pub fn to_matrix(&self) -> Matrix<Cyclo8> {
        let n = self.n;
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.a.get(i, j).clone());
                m.set(n + i, n + j, self.a.get(i, j).clone());
                m.set(i, n + j, self.b.get(i, j).clone());
                m.set(n + i, j, -self.b.get(i, j));
            }
        }
        m
    }

    pub fn from_matrix(m: &Matrix<Cyclo8>) -> Result<QnElement, QueerError> {
        if m.rows != m.cols || m.rows % 2 != 0 {
            return Err(QueerError::NotQueer);
        }
        let n = m.rows / 2;
        let mut a = Matrix::zeros(n, n);
        let mut b = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if m.get(n + i, n + j) != m.get(i, j) || &-m.get(n + i, j) != m.get(i, n + j) {
                    return Err(QueerError::NotQueer);
                }
                a.set(i, j, m.get(i, j).clone());
                b.set(i, j, m.get(i, n + j).clone());
            }
        }
        Ok(QnElement { n, a, b })
    }
}

/// Super-commutator xy − (−1)^{|x||y|}yx, extended bilinearly to mixed elements.
pub fn bracket(x: &QnElement, y: &QnElement) -> Result<QnElement, QueerError> {
    if x.n != y.n {
        return Err(QueerError::RankMismatch(x.n, y.n));
    }
    let mut out = Matrix::zeros(2 * x.n, 2 * x.n);
    for (p, xp) in [(0, x.even_part()), (1, x.odd_part())] {
        for (q, yq) in [(0, y.even_part()), (1, y.odd_part())] {
            let (mx, my) = (xp.to_matrix(), yq.to_matrix());
            let xy = mx.mul(&my);
            let yx = my.mul(&mx);
            out = if p * q == 1 { out.add(&xy).add(&yx) } else { out.add(&xy).sub(&yx) };
        }
    }
    QnElement::from_matrix(&out)
}

/// τ(a, b) = −(aᵗ, ζbᵗ).
pub fn chevalley(x: &QnElement) -> QnElement {
    QnElement { n: x.n, a: x.a.transpose().scale(&Cyclo8::from_int(-1)), b: x.b.transpose().scale(&-Cyclo8::zeta()) }
}

/// τ⁻¹(a, b) = (−aᵗ, ζbᵗ).
pub fn chevalley_inv(x: &QnElement) -> QnElement {
    QnElement { n: x.n, a: x.a.transpose().scale(&Cyclo8::from_int(-1)), b: x.b.transpose().scale(&Cyclo8::zeta()) }
}

pub fn act_on_v(x: &QnElement, v: &[Cyclo8]) -> Vec<Cyclo8> {
    x.to_matrix().apply(v)
}

/// A linear endomorphism given by the images of basis vectors, tagged with its parity.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionOperator {
    pub dim: usize,
    pub parity: u8,
    pub columns: Vec<SparseVec<usize, Cyclo8>>,
}

impl ActionOperator {
    pub fn zero(dim: usize, parity: u8) -> Self {
        ActionOperator { dim, parity, columns: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        ActionOperator { dim, parity: 0, columns: (0..dim).map(|i| vec![(i, Cyclo8::one())]).collect() }
    }

    pub fn apply(&self, v: &[(usize, Cyclo8)]) -> SparseVec<usize, Cyclo8> {
        let mut entries = Vec::new();
        for (i, c) in v {
            for (j, d) in &self.columns[*i] {
                entries.push((*j, c * d));
            }
        }
        collect_sparse(entries)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ActionOperator) -> ActionOperator {
        ActionOperator {
            dim: self.dim,
            parity: (self.parity + other.parity) % 2,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &ActionOperator) -> ActionOperator {
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(x, y)| collect_sparse(x.iter().chain(y).cloned()))
            .collect();
        ActionOperator { dim: self.dim, parity: self.parity, columns }
    }

    pub fn scale(&self, s: &Cyclo8) -> ActionOperator {
        let columns = self.columns.iter().map(|c| crate::linalg::scale(c, s)).collect();
        ActionOperator { dim: self.dim, parity: self.parity, columns }
    }

    pub fn sub(&self, other: &ActionOperator) -> ActionOperator {
        self.add(&other.scale(&Cyclo8::from_int(-1)))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// AB − (−1)^{|A||B|}BA.
    pub fn supercommutator(&self, other: &ActionOperator) -> ActionOperator {
        let ab = self.compose(other);
        let ba = other.compose(self);
        if self.parity * other.parity == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }
}

fn homogeneous(x: &QnElement) -> Result<u8, QueerError> {
    x.parity().ok_or(QueerError::Inhomogeneous)
}

/// Basis tuples of V^{⊗d} are base-2n digit strings, slot 0 most significant.
fn digits(mut idx: usize, base: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for k in (0..d).rev() {
        out[k] = idx % base;
        idx /= base;
    }
    out
}

fn undigits(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

/// ρ(x) on V^{⊗d}: x acts on each slot in turn, passing the earlier slots with the Koszul sign.
pub fn tensor_power_operator(x: &QnElement, d: usize) -> Result<ActionOperator, QueerError> {
    let parity = homogeneous(x)?;
    let n = x.n;
    let base = 2 * n;
    let m = x.to_matrix();
    let dim = base.pow(d as u32);
    let columns = (0..dim)
        .map(|idx| {
            let t = digits(idx, base, d);
            let mut entries = Vec::new();
            let mut before = 0usize;
            for k in 0..d {
                let sign = if parity == 1 && before % 2 == 1 { -1 } else { 1 };
                for r in 0..base {
                    let c = m.get(r, t[k]);
                    if c.is_zero() {
                        continue;
                    }
                    let mut s = t.clone();
                    s[k] = r;
                    entries.push((undigits(&s, base), if sign < 0 { -c } else { c.clone() }));
                }
                before += (t[k] >= n) as usize;
            }
            collect_sparse(entries)
        })
        .collect();
    Ok(ActionOperator { dim, parity, columns })
}

/// The Sergeev action of a word α^mask·σ of H_d on V^{⊗d}, as a signed basis map.
///
/// σ moves the vector in slot i to slot σ(i) with the Koszul sign, then each
/// αⱼ applies the queer structure to slot j past the earlier slots.
pub fn sergeev_word_image(n: usize, mask: u32, perm: &[u8], tuple: &[usize]) -> (Vec<usize>, i64) {
    let d = tuple.len();
    let odd = |v: usize| v >= n;
    let mut sign = 1;
    for i in 0..d {
        for j in i + 1..d {
            if perm[i] > perm[j] && odd(tuple[i]) && odd(tuple[j]) {
                sign = -sign;
            }
        }
    }
    let mut out = vec![0; d];
    for i in 0..d {
        out[perm[i] as usize] = tuple[i];
    }
    for j in (0..d).rev() {
        if mask >> j & 1 == 1 {
            if out[..j].iter().filter(|&&v| odd(v)).count() % 2 == 1 {
                sign = -sign;
            }
            out[j] = if odd(out[j]) { out[j] - n } else { out[j] + n };
        }
    }
    (out, sign)
}

/// The Sergeev action of an element of H_d on V^{⊗d}.
pub fn sergeev_operator(n: usize, d: usize, element: &[(usize, Rational)]) -> ActionOperator {
    let alg = algebra(d);
    let base = 2 * n;
    let dim = base.pow(d as u32);
    let parity = element.first().map(|(w, _)| alg.parity(*w)).unwrap_or(0);
    let columns = (0..dim)
        .map(|idx| {
            let t = digits(idx, base, d);
            let entries = element.iter().map(|(w, c)| {
                let word = alg.word(*w);
                let (img, s) = sergeev_word_image(n, word.clifford, &word.perm, &t);
                let c = Cyclo8::from_rational(c.clone());
                (undigits(&img, base), if s < 0 { -c } else { c })
            });
            collect_sparse(entries.collect::<Vec<_>>())
        })
        .collect();
    ActionOperator { dim, parity, columns }
}

/// Trace of a word on V^{⊗d}. A fixed tuple has a constant index along each
/// cycle of σ and the sign depends only on its parity pattern, so each fixed
/// pattern contributes ±n^{#cycles}.
fn word_trace(n: usize, mask: u32, perm: &[u8]) -> i64 {
    let d = perm.len();
    let mut seen = vec![false; d];
    let mut cycles = 0u32;
    for i in 0..d {
        if seen[i] {
            continue;
        }
        cycles += 1;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j] as usize;
        }
    }
    let mut signed = 0i64;
    for pattern in 0..1usize << d {
        let t: Vec<usize> = (0..d).map(|k| if pattern >> k & 1 == 1 { n } else { 0 }).collect();
        let (img, s) = sergeev_word_image(n, mask, perm, &t);
        if img == t {
            signed += s;
        }
    }
    signed * (n as i64).pow(cycles)
}

fn dim_t_cache() -> &'static Mutex<HashMap<(StrictPartition, usize), usize>> {
    static CACHE: OnceLock<Mutex<HashMap<(StrictPartition, usize), usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Total dimension of T_{λ,n}: the multiplicity space of S_λ in V^{⊗|λ|}.
///
/// dim e_λV^{⊗d} is the trace of ρ(e_λ), and
/// dim e_λV^{⊗d} = 2^{−δ(λ)}·dim S_λ·dim T_{λ,n}.
pub fn dim_t(lambda: &StrictPartition, n: usize) -> Result<usize, QueerError> {
    let d = lambda.size();
    if d > MAX_TENSOR_DEGREE {
        return Err(QueerError::DegreeTooLarge(d));
    }
    if let Some(&v) = dim_t_cache().lock().unwrap().get(&(lambda.clone(), n)) {
        return Ok(v);
    }
    let table = decompose_regular(d, 0)?;
    let block = table.block(lambda).ok_or(HeckeError::Ambiguous { n: d, block: 0, candidates: vec![lambda.clone()] })?;
    let alg = algebra(d);
    let mut trace = Rational::ZERO;
    for (w, c) in &block.idempotent {
        let word = alg.word(*w);
        let t = word_trace(n, word.clifford, &word.perm);
        if t != 0 {
            trace = &trace + &(c * &Rational::from_int(t));
        }
    }
    let value = &(&trace * &Rational::from_int(1 << lambda.delta())) / &Rational::from_int(block.dim_s as i64);
    let v = value
        .to_i64()
        .filter(|v| value.is_integer() && *v >= 0)
        .ok_or(HeckeError::NonIntegral { n: d, value: value.to_string() })? as usize;
    dim_t_cache().lock().unwrap().insert((lambda.clone(), n), v);
    Ok(v)
}

/// dim e_λV^{⊗|λ|} by rank of the explicit action, for cross-checking dim_t.
pub fn isotypic_rank(lambda: &StrictPartition, n: usize) -> Result<usize, QueerError> {
    let d = lambda.size();
    let table = decompose_regular(d, 0)?;
    let block = table.block(lambda).ok_or(HeckeError::Ambiguous { n: d, block: 0, candidates: vec![lambda.clone()] })?;
    let op = sergeev_operator(n, d, &block.idempotent);
    let mut ech = Echelon::new();
    for c in &op.columns {
        ech.insert(c);
    }
    Ok(ech.rank())
}

/// Weakly decreasing compositions of d with n parts.
fn dominant_weights(d: usize, n: usize, cap: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d.min(cap)).rev() {
        for mut rest in dominant_weights(d - first, n - 1, first) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

/// Distinct rearrangements of a sequence.
fn rearrangements(w: &[u8]) -> Vec<Vec<u8>> {
    let mut v = w.to_vec();
    v.sort();
    let mut out = vec![v.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..v.len().saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else { break };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
    out
}

fn character_cache() -> &'static Mutex<HashMap<(StrictPartition, usize), Arc<BTreeMap<Vec<u8>, usize>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(StrictPartition, usize), Arc<BTreeMap<Vec<u8>, usize>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Weight multiplicities (total dimension) of T_{λ,n}, from the rank of ρ(e_λ)
/// on each dominant weight space of V^{⊗|λ|}.
pub fn character(lambda: &StrictPartition, n: usize) -> Result<Arc<BTreeMap<Vec<u8>, usize>>, QueerError> {
    let d = lambda.size();
    if d > MAX_TENSOR_DEGREE {
        return Err(QueerError::DegreeTooLarge(d));
    }
    if let Some(c) = character_cache().lock().unwrap().get(&(lambda.clone(), n)) {
        return Ok(c.clone());
    }
    let table = decompose_regular(d, 0)?;
    let block = table.block(lambda).ok_or(HeckeError::Ambiguous { n: d, block: 0, candidates: vec![lambda.clone()] })?;
    let alg = algebra(d);
    let words: Vec<_> = block.idempotent.iter().map(|(w, c)| (alg.word(*w), c.clone())).collect();
    let base = 2 * n;
    let mut out = BTreeMap::new();
    for w in dominant_weights(d, n, d) {
        // index sequences with content w, then every parity pattern
        let content: Vec<u8> = w.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i as u8).take(k as usize)).collect();
        let mut ech: Echelon<usize, Rational> = Echelon::new();
        for seq in rearrangements(&content) {
            for pattern in 0..1usize << d {
                let t: Vec<usize> =
                    (0..d).map(|k| seq[k] as usize + if pattern >> k & 1 == 1 { n } else { 0 }).collect();
                let image = collect_sparse(
                    words
                        .iter()
                        .map(|(word, c)| {
                            let (img, s) = sergeev_word_image(n, word.clifford, &word.perm, &t);
                            (undigits(&img, base), if s < 0 { -c.clone() } else { c.clone() })
                        })
                        .collect::<Vec<_>>(),
                );
                ech.insert(&image);
            }
        }
        let value = Rational::new((ech.rank() << lambda.delta()) as i64, block.dim_s as i64);
        let mult = value
            .to_i64()
            .filter(|_| value.is_integer())
            .ok_or(HeckeError::NonIntegral { n: d, value: value.to_string() })? as usize;
        if mult > 0 {
            for r in rearrangements(&w) {
                out.insert(r, mult);
            }
        }
    }
    let out = Arc::new(out);
    character_cache().lock().unwrap().insert((lambda.clone(), n), out.clone());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// U = 2⁻¹(V⊗W) for V = ℂ^{n|n}, W = ℂ^{m|m}, with basis
/// v_ij = (1+ζ)e_i⊗e_j + (1−ζ)f_i⊗f_j (indices 0..nm) and
/// w_ij = (1+ζ)e_i⊗f_j + (1−ζ)f_i⊗e_j (indices nm..2nm).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UModule {
    pub n: usize,
    pub m: usize,
}

impl UModule {
    pub fn new(n: usize, m: usize) -> Self {
        UModule { n, m }
    }

    pub fn dim(&self) -> usize {
        2 * self.n * self.m
    }

    pub fn v(&self, i: usize, j: usize) -> usize {
        i * self.m + j
    }

    pub fn w(&self, i: usize, j: usize) -> usize {
        self.n * self.m + i * self.m + j
    }

    pub fn parity(&self, idx: usize) -> u8 {
        (idx >= self.n * self.m) as u8
    }

    /// (i, j) for either v_ij or w_ij.
    pub fn position(&self, idx: usize) -> (usize, usize) {
        let k = idx % (self.n * self.m);
        (k / self.m, k % self.m)
    }

    fn vw_index(&self, p: usize, q: usize) -> usize {
        p * 2 * self.m + q
    }

    /// Coordinates in V⊗W of a basis vector of U.
    pub fn embed(&self, idx: usize) -> SparseVec<usize, Cyclo8> {
        let (i, j) = self.position(idx);
        let (n, m) = (self.n, self.m);
        let plus = &Cyclo8::one() + &Cyclo8::zeta();
        let minus = &Cyclo8::one() - &Cyclo8::zeta();
        let (p, q) = if self.parity(idx) == 0 { ((i, j), (n + i, m + j)) } else { ((i, m + j), (n + i, j)) };
        collect_sparse(vec![(self.vw_index(p.0, p.1), plus), (self.vw_index(q.0, q.1), minus)])
    }

    /// Reads a vector of V⊗W back in the v, w basis.
    fn extract(&self, t: &[(usize, Cyclo8)], source: usize) -> Result<SparseVec<usize, Cyclo8>, QueerError> {
        let lookup: HashMap<usize, &Cyclo8> = t.iter().map(|(k, c)| (*k, c)).collect();
        let zero = Cyclo8::zero();
        let get = |k: usize| *lookup.get(&k).unwrap_or(&&zero);
        let plus = &Cyclo8::one() + &Cyclo8::zeta();
        let minus = &Cyclo8::one() - &Cyclo8::zeta();
        let mut out = Vec::new();
        let mut used = 0;
        for idx in 0..self.dim() {
            let emb = self.embed(idx);
            let c = get(emb[0].0).checked_div(&plus).expect("1+ζ is invertible");
            if &c * &minus != *get(emb[1].0) {
                return Err(QueerError::LeavesHalfTensor(source));
            }
            if !c.is_zero() {
                used += 2;
                out.push((idx, c));
            }
        }
        if used != t.len() {
            return Err(QueerError::LeavesHalfTensor(source));
        }
        Ok(out)
    }

    /// (x, 0) or (0, x) acting on V⊗W, with 1⊗x passing V by the Koszul sign.
    fn act_vw(&self, side: Side, x: &QnElement, t: &[(usize, Cyclo8)]) -> SparseVec<usize, Cyclo8> {
        let (n, m) = (self.n, self.m);
        let mut entries = Vec::new();
        for part in [x.even_part(), x.odd_part()] {
            if part.is_zero() {
                continue;
            }
            let odd = part.parity() == Some(1);
            let mat = part.to_matrix();
            for (k, c) in t {
                let (p, q) = (k / (2 * m), k % (2 * m));
                match side {
                    Side::Left => {
                        for r in 0..2 * n {
                            let a = mat.get(r, p);
                            if !a.is_zero() {
                                entries.push((self.vw_index(r, q), a * c));
                            }
                        }
                    }
                    Side::Right => {
                        let sign = odd && p >= n;
                        for r in 0..2 * m {
                            let a = mat.get(r, q);
                            if !a.is_zero() {
                                let v = a * c;
                                entries.push((self.vw_index(p, r), if sign { -v } else { v }));
                            }
                        }
                    }
                }
            }
        }
        collect_sparse(entries)
    }

    fn check_rank(&self, side: Side, x: &QnElement) -> Result<(), QueerError> {
        let expected = match side {
            Side::Left => self.n,
            Side::Right => self.m,
        };
        if x.n != expected {
            return Err(QueerError::RankMismatch(x.n, expected));
        }
        Ok(())
    }

    pub fn act(&self, side: Side, x: &QnElement, u: &[(usize, Cyclo8)]) -> Result<SparseVec<usize, Cyclo8>, QueerError> {
        self.check_rank(side, x)?;
        let mut out = Vec::new();
        for (idx, c) in u {
            let image = self.extract(&self.act_vw(side, x, &self.embed(*idx)), *idx)?;
            out = crate::linalg::axpy(&out, c, &image);
        }
        Ok(out)
    }

    pub fn operator(&self, side: Side, x: &QnElement) -> Result<ActionOperator, QueerError> {
        let parity = homogeneous(x)?;
        self.check_rank(side, x)?;
        let columns = (0..self.dim())
            .map(|idx| self.extract(&self.act_vw(side, x, &self.embed(idx)), idx))
            .collect::<Result<_, _>>()?;
        Ok(ActionOperator { dim: self.dim(), parity, columns })
    }

    /// (g₁, g₂) ∈ q_n × q_m acting as left g₁ plus right g₂.
    pub fn pair_operator(&self, g1: &QnElement, g2: &QnElement) -> Result<ActionOperator, QueerError> {
        let l = self.operator(Side::Left, g1)?;
        let r = self.operator(Side::Right, g2)?;
        if l.parity != r.parity && !(g1.is_zero() || g2.is_zero()) {
            return Err(QueerError::Inhomogeneous);
        }
        let parity = if g1.is_zero() { r.parity } else { l.parity };
        Ok(ActionOperator { parity, ..l.add(&r) })
    }
}

/// The 𝔥-element (x, τ⁻¹x).
pub fn h_element(x: &QnElement) -> (QnElement, QnElement) {
    (x.clone(), chevalley_inv(x))
}

/// Decomposition (g₁, g₂) = (c, τ⁻¹c) + (d, e) with d ∈ 𝔟 and e ∈ 𝔫.
#[derive(Debug, Clone, PartialEq)]
pub struct HkDecomposition {
    pub c: QnElement,
    pub d: QnElement,
    pub e: QnElement,
}

impl HkDecomposition {
    pub fn h_part(&self) -> (QnElement, QnElement) {
        h_element(&self.c)
    }

    pub fn k_part(&self) -> (QnElement, QnElement) {
        (self.d.clone(), self.e.clone())
    }

    pub fn reconstruct(&self) -> (QnElement, QnElement) {
        let (h1, h2) = self.h_part();
        (h1.add(&self.d), h2.add(&self.e))
    }
}

fn upper(m: &Matrix<Cyclo8>, strict: bool) -> Matrix<Cyclo8> {
    let mut out = Matrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            if j > i || (j == i && !strict) {
                out.set(i, j, m.get(i, j).clone());
            }
        }
    }
    out
}

fn strictly_lower(m: &Matrix<Cyclo8>) -> Matrix<Cyclo8> {
    m.sub(&upper(m, false))
}

fn is_upper(m: &Matrix<Cyclo8>, strict: bool) -> bool {
    upper(m, strict) == *m
}

/// Whether x lies in 𝔟 (both blocks upper triangular).
pub fn in_b(x: &QnElement) -> bool {
    is_upper(&x.a, false) && is_upper(&x.b, false)
}

/// Whether x lies in 𝔫 (both blocks strictly upper triangular).
pub fn in_n(x: &QnElement) -> bool {
    is_upper(&x.a, true) && is_upper(&x.b, true)
}

/// Splits (g₁, g₂) ∈ q × q along 𝔥 ⊕ 𝔨 by the triangular system
/// a₁ + b₁ᵗ = d₁ + e₁ᵗ and a₂ + ζb₂ᵗ = d₂ + ζe₂ᵗ, where g₁ = (a₁, a₂), g₂ = (b₁, b₂).
pub fn hk_decompose(g1: &QnElement, g2: &QnElement) -> Result<HkDecomposition, QueerError> {
    if g1.n != g2.n {
        return Err(QueerError::RankMismatch(g1.n, g2.n));
    }
    let zeta = Cyclo8::zeta();
    let m1 = g1.a.add(&g2.a.transpose());
    let d1 = upper(&m1, false);
    let e1 = strictly_lower(&m1).transpose();
    let m2 = g1.b.add(&g2.b.transpose().scale(&zeta));
    let d2 = upper(&m2, false);
    let e2 = strictly_lower(&m2).transpose().scale(&-zeta.clone());
    let c = QnElement::from_blocks(g1.a.sub(&d1), g1.b.sub(&d2));
    Ok(HkDecomposition { c, d: QnElement::from_blocks(d1, d2), e: QnElement::from_blocks(e1, e2) })
}
