//! The bivariate queer algebra A(n,m) = Sym(2⁻¹(ℂ^{n|n}⊗ℂ^{m|m})), truncated by degree.
//!
//! x_ij is variable i·m+j among the even ones and y_ij the same index among the
//! odd ones (0-based). A monomial stores even exponents and the set of odd
//! variables, read as x^a·y_{s₁}⋯y_{s_r} with s₁ < ⋯ < s_r.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{axpy, collect_sparse, kernel, Echelon, SparseVec};
use crate::partitions::{enumerate_strict_up_to, staircase, StrictPartition};
use crate::queer::{character, h_element, QnElement, QueerError, Side, UModule};
use crate::scalars::{Cyclo8, Rational};
use crate::symfunc::{induct_mult, SymfuncError};

pub const MAX_VARS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AModuleError {
    #[error("{0} variables exceed the supported {MAX_VARS}")]
    TooManyVariables(usize),
    #[error("jet with constant term {0} is not invertible")]
    NonUnit(String),
    #[error("leading weight {0:?} is not a strict partition")]
    NotDominant(Vec<u8>),
    #[error(transparent)]
    Queer(#[from] QueerError),
    #[error(transparent)]
    Symfunc(#[from] SymfuncError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub even: [u8; MAX_VARS],
    pub odd: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { even: [0; MAX_VARS], odd: 0 };

    pub fn even_var(k: usize) -> Self {
        let mut m = Monomial::ONE;
        m.even[k] = 1;
        m
    }

    pub fn odd_var(k: usize) -> Self {
        Monomial { even: [0; MAX_VARS], odd: 1 << k }
    }

    pub fn degree(&self) -> usize {
        self.even.iter().map(|&e| e as usize).sum::<usize>() + self.odd.count_ones() as usize
    }

    /// Product as (monomial, negated), or `None` when an odd variable repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let mut swaps = 0;
        let mut rest = other.odd;
        while rest != 0 {
            let t = rest.trailing_zeros();
            swaps += self.odd.checked_shr(t + 1).unwrap_or(0).count_ones();
            rest &= rest - 1;
        }
        let mut even = self.even;
        for (e, o) in even.iter_mut().zip(other.even.iter()) {
            *e += o;
        }
        Some((Monomial { even, odd: self.odd | other.odd }, swaps % 2 == 1))
    }

    pub fn odd_vars(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_VARS).filter(move |k| self.odd >> k & 1 == 1)
    }
}

pub type Terms = SparseVec<Monomial, Cyclo8>;

/// Product of two polynomials, dropping monomials above `cap` if given.
pub fn poly_mul(a: &[(Monomial, Cyclo8)], b: &[(Monomial, Cyclo8)], cap: Option<usize>) -> Terms {
    let mut acc: HashMap<Monomial, Cyclo8> = HashMap::new();
    for (ma, ca) in a {
        let da = ma.degree();
        for (mb, cb) in b {
            if cap.is_some_and(|k| da + mb.degree() > k) {
                continue;
            }
            if let Some((m, neg)) = ma.mul(mb) {
                let p = ca * cb;
                let e = acc.entry(m).or_insert_with(Cyclo8::zero);
                if neg {
                    *e -= &p;
                } else {
                    *e += &p;
                }
            }
        }
    }
    collect_sparse(acc)
}

/// An element of A(n,m).
#[derive(Debug, Clone, PartialEq)]
pub struct SuperPoly {
    pub n: usize,
    pub m: usize,
    pub terms: Terms,
}

impl SuperPoly {
    pub fn zero(n: usize, m: usize) -> Self {
        SuperPoly { n, m, terms: Vec::new() }
    }

    pub fn one(n: usize, m: usize) -> Self {
        SuperPoly { n, m, terms: vec![(Monomial::ONE, Cyclo8::one())] }
    }

    pub fn x(n: usize, m: usize, i: usize, j: usize) -> Self {
        SuperPoly { n, m, terms: vec![(Monomial::even_var(i * m + j), Cyclo8::one())] }
    }

    pub fn y(n: usize, m: usize, i: usize, j: usize) -> Self {
        SuperPoly { n, m, terms: vec![(Monomial::odd_var(i * m + j), Cyclo8::one())] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SuperPoly) -> SuperPoly {
        SuperPoly { terms: axpy(&self.terms, &Cyclo8::one(), &other.terms), ..*self }
    }

    pub fn sub(&self, other: &SuperPoly) -> SuperPoly {
        SuperPoly { terms: axpy(&self.terms, &Cyclo8::from_int(-1), &other.terms), ..*self }
    }

    pub fn scale(&self, s: &Cyclo8) -> SuperPoly {
        SuperPoly { terms: crate::linalg::scale(&self.terms, s), ..*self }
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(mono, c)| format!("({c})·{}", monomial_label(mono, self.m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// e.g. `x11^2·y12`, with 1-based indices.
pub fn monomial_label(mono: &Monomial, m: usize) -> String {
    let mut parts = Vec::new();
    for (k, &e) in mono.even.iter().enumerate() {
        if e > 0 {
            let base = format!("x{}{}", k / m + 1, k % m + 1);
            parts.push(if e == 1 { base } else { format!("{base}^{e}") });
        }
    }
    for k in mono.odd_vars() {
        parts.push(format!("y{}{}", k / m + 1, k % m + 1));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// Supercommutative product in A(n,m).
pub fn a_mult(p: &SuperPoly, q: &SuperPoly) -> SuperPoly {
    SuperPoly { n: p.n, m: p.m, terms: poly_mul(&p.terms, &q.terms, None) }
}

/// Torus biweight: row sums (n entries) followed by column sums (m entries).
pub fn biweight(mono: &Monomial, n: usize, m: usize) -> Vec<u8> {
    let mut w = vec![0u8; n + m];
    for i in 0..n {
        for j in 0..m {
            let k = i * m + j;
            let e = mono.even[k] + (mono.odd >> k & 1) as u8;
            w[i] += e;
            w[n + j] += e;
        }
    }
    w
}

/// An even or odd derivation of A(n,m), given by its values on the generators.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub label: String,
    pub parity: u8,
    /// Images of x variables followed by y variables.
    images: Vec<Terms>,
}

impl Derivation {
    fn from_operator(label: String, op: &crate::queer::ActionOperator, nm: usize) -> Self {
        let images = op
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(u, c)| {
                        let mono = if *u < nm { Monomial::even_var(*u) } else { Monomial::odd_var(*u - nm) };
                        (mono, c.clone())
                    })
                    .collect::<Vec<_>>()
            })
            .map(collect_sparse)
            .collect();
        Derivation { label, parity: op.parity, images }
    }

    /// Leibniz rule with the Koszul sign for passing odd variables.
    pub fn apply(&self, p: &[(Monomial, Cyclo8)]) -> Terms {
        let nm = self.images.len() / 2;
        let mut entries: Vec<(Monomial, Cyclo8)> = Vec::new();
        let mut push = |left: &Monomial, image: &Terms, right: &Monomial, c: &Cyclo8| {
            for (g, gc) in image {
                let Some((lg, s1)) = left.mul(g) else { continue };
                let Some((full, s2)) = lg.mul(right) else { continue };
                let v = c * gc;
                entries.push((full, if s1 != s2 { -v } else { v }));
            }
        };
        for (mono, c) in p {
            let odd_only = Monomial { even: [0; MAX_VARS], odd: mono.odd };
            for k in 0..nm {
                let e = mono.even[k];
                if e == 0 {
                    continue;
                }
                let mut rest = *mono;
                rest.even[k] -= 1;
                rest.odd = 0;
                push(&rest, &self.images[k], &odd_only, &c.scale(&Rational::from_int(e as i64)));
            }
            let odd: Vec<usize> = mono.odd_vars().collect();
            for (t, &s) in odd.iter().enumerate() {
                let mut left = *mono;
                left.odd = odd[..t].iter().fold(0, |acc, &v| acc | 1 << v);
                let right = Monomial { even: [0; MAX_VARS], odd: odd[t + 1..].iter().fold(0, |acc, &v| acc | 1 << v) };
                let c = if self.parity == 1 && t % 2 == 1 { -c } else { c.clone() };
                push(&left, &self.images[nm + s], &right, &c);
            }
        }
        collect_sparse(entries)
    }
}

/// A(n,m) with its derivation actions and monomial tables.
#[derive(Debug)]
pub struct AAlgebra {
    pub n: usize,
    pub m: usize,
    pub module: UModule,
    /// Left action of the basis of q_n, then right action of the basis of q_m.
    pub derivations: Vec<Derivation>,
    raising: Vec<usize>,
    /// Simple lowering derivations with the biweight slot p they move from (p to p+1).
    lowering: Vec<(usize, usize)>,
    monomials: Mutex<HashMap<usize, Arc<BTreeMap<Vec<u8>, Vec<Monomial>>>>>,
}

fn element_label(x: &QnElement) -> String {
    for i in 0..x.n {
        for j in 0..x.n {
            if !x.a.get(i, j).is_zero() {
                return format!("X{}{}", i + 1, j + 1);
            }
            if !x.b.get(i, j).is_zero() {
                return format!("Y{}{}", i + 1, j + 1);
            }
        }
    }
    "0".into()
}

impl AAlgebra {
    pub fn new(n: usize, m: usize) -> Result<Self, AModuleError> {
        if n * m > MAX_VARS {
            return Err(AModuleError::TooManyVariables(n * m));
        }
        let module = UModule::new(n, m);
        let mut derivations = Vec::new();
        let mut raising = Vec::new();
        let mut lowering = Vec::new();
        for (side, rank, tag, offset) in [(Side::Left, n, "L", 0), (Side::Right, m, "R", n)] {
            for (idx, x) in QnElement::basis(rank).into_iter().enumerate() {
                let (i, j) = ((idx % (rank * rank)) / rank, idx % rank);
                if j == i + 1 {
                    raising.push(derivations.len());
                }
                if i == j + 1 {
                    lowering.push((derivations.len(), offset + j));
                }
                let op = module.operator(side, &x)?;
                derivations.push(Derivation::from_operator(format!("{tag}:{}", element_label(&x)), &op, n * m));
            }
        }
        Ok(AAlgebra { n, m, module, derivations, raising, lowering, monomials: Mutex::new(HashMap::new()) })
    }

    /// Shared instance per (n, m).
    pub fn shared(n: usize, m: usize) -> Result<Arc<AAlgebra>, AModuleError> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<AAlgebra>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(a) = cache.lock().unwrap().get(&(n, m)) {
            return Ok(a.clone());
        }
        let a = Arc::new(AAlgebra::new(n, m)?);
        cache.lock().unwrap().insert((n, m), a.clone());
        Ok(a)
    }

    pub fn nvars(&self) -> usize {
        self.n * self.m
    }

    /// Derivation of (g, 0) or (0, g).
    pub fn derivation(&self, side: Side, g: &QnElement) -> Result<Derivation, AModuleError> {
        let op = self.module.operator(side, g)?;
        Ok(Derivation::from_operator(element_label(g), &op, self.nvars()))
    }

    /// Monomials of degree d grouped by biweight.
    pub fn monomials(&self, d: usize) -> Arc<BTreeMap<Vec<u8>, Vec<Monomial>>> {
        if let Some(t) = self.monomials.lock().unwrap().get(&d) {
            return t.clone();
        }
        let nv = self.nvars();
        let mut out: BTreeMap<Vec<u8>, Vec<Monomial>> = BTreeMap::new();
        for odd in 0u32..1 << nv {
            let k = odd.count_ones() as usize;
            if k > d {
                continue;
            }
            for exps in exponent_vectors(nv, d - k) {
                let mut mono = Monomial { even: [0; MAX_VARS], odd: odd as u16 };
                mono.even[..nv].copy_from_slice(&exps);
                out.entry(biweight(&mono, self.n, self.m)).or_default().push(mono);
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        let out = Arc::new(out);
        self.monomials.lock().unwrap().insert(d, out.clone());
        out
    }

    pub fn degree_dim(&self, d: usize) -> usize {
        self.monomials(d).values().map(Vec::len).sum()
    }

    fn piece_dim(&self, d: usize, w: &[u8]) -> usize {
        self.monomials(d).get(w).map_or(0, Vec::len)
    }

    pub fn apply(&self, side: Side, g: &QnElement, p: &SuperPoly) -> Result<SuperPoly, AModuleError> {
        let d = self.derivation(side, g)?;
        Ok(SuperPoly { n: self.n, m: self.m, terms: d.apply(&p.terms) })
    }
}

fn exponent_vectors(nvars: usize, d: usize) -> Vec<Vec<u8>> {
    if nvars == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponent_vectors(nvars - 1, d - first) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

/// Action by superderivation of (g, 0) (left) or (0, g) (right).
pub fn act(alg: &AAlgebra, side: Side, g: &QnElement, p: &SuperPoly) -> Result<SuperPoly, AModuleError> {
    alg.apply(side, g, p)
}

/// A subspace of A(n,m) spanned by bihomogeneous vectors, one echelon form per
/// (degree, biweight).
#[derive(Debug, Clone, Default)]
pub struct GradedSubspace {
    pieces: BTreeMap<(usize, Vec<u8>), Echelon<Monomial, Cyclo8>>,
}

impl GradedSubspace {
    pub fn new() -> Self {
        GradedSubspace::default()
    }

    fn key(v: &[(Monomial, Cyclo8)], n: usize, m: usize) -> (usize, Vec<u8>) {
        let mono = &v[0].0;
        (mono.degree(), biweight(mono, n, m))
    }

    /// Inserts a bihomogeneous vector; returns whether the span grew.
    pub fn insert(&mut self, alg: &AAlgebra, v: &[(Monomial, Cyclo8)]) -> bool {
        if v.is_empty() {
            return false;
        }
        let key = Self::key(v, alg.n, alg.m);
        debug_assert!(v.iter().all(|(mono, _)| Self::key(&[(*mono, Cyclo8::one())], alg.n, alg.m) == key));
        let full = alg.piece_dim(key.0, &key.1);
        let piece = self.pieces.entry(key).or_default();
        if piece.rank() == full {
            return false;
        }
        piece.insert(v)
    }

    pub fn contains(&self, alg: &AAlgebra, v: &[(Monomial, Cyclo8)]) -> bool {
        if v.is_empty() {
            return true;
        }
        let key = Self::key(v, alg.n, alg.m);
        match self.pieces.get(&key) {
            Some(p) => p.rank() == alg.piece_dim(key.0, &key.1) || p.contains(v),
            None => false,
        }
    }

    pub fn dim(&self) -> usize {
        self.pieces.values().map(Echelon::rank).sum()
    }

    pub fn dim_at(&self, d: usize) -> usize {
        self.pieces.iter().filter(|((deg, _), _)| *deg == d).map(|(_, p)| p.rank()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    /// Echelon rows of the given degree.
    pub fn rows(&self, d: usize) -> Vec<Terms> {
        self.pieces.iter().filter(|((deg, _), _)| *deg == d).flat_map(|(_, p)| p.rows().cloned()).collect()
    }

    pub fn all_rows(&self) -> Vec<Terms> {
        self.pieces.values().flat_map(|p| p.rows().cloned()).collect()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.pieces.iter().filter(|(_, p)| p.rank() > 0).map(|((d, _), _)| *d).max()
    }

    /// Whether every vector of `other` lies in `self`.
    pub fn contains_space(&self, alg: &AAlgebra, other: &GradedSubspace) -> bool {
        other.all_rows().iter().all(|r| self.contains(alg, r))
    }
}

/// Basis of the degree-d, biweight-w piece.
pub fn weight_space(alg: &AAlgebra, d: usize, w: &[u8]) -> Vec<SuperPoly> {
    alg.monomials(d)
        .get(w)
        .map(|ms| ms.iter().map(|m| SuperPoly { n: alg.n, m: alg.m, terms: vec![(*m, Cyclo8::one())] }).collect())
        .unwrap_or_default()
}

fn padded(lambda: &StrictPartition, len: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for (i, &p) in lambda.parts().iter().enumerate() {
        w[i] = p as u8;
    }
    w
}

/// Vectors of degree |λ| and biweight (λ, λ) killed by X_{i,i+1}, Y_{i,i+1} on both sides.
pub fn singular_vectors(alg: &AAlgebra, lambda: &StrictPartition) -> GradedSubspace {
    let mut out = GradedSubspace::new();
    if lambda.len() > alg.n.min(alg.m) {
        return out;
    }
    let mut w = padded(lambda, alg.n);
    w.extend(padded(lambda, alg.m));
    let d = lambda.size();
    let basis = alg.monomials(d).get(&w).cloned().unwrap_or_default();
    let images: Vec<SparseVec<(usize, Monomial), Cyclo8>> = basis
        .iter()
        .map(|mono| {
            let v = vec![(*mono, Cyclo8::one())];
            collect_sparse(
                alg.raising
                    .iter()
                    .flat_map(|&r| alg.derivations[r].apply(&v).into_iter().map(move |(mm, c)| ((r, mm), c)))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    for k in kernel(&images) {
        let v: Terms = collect_sparse(k.into_iter().map(|(i, c)| (basis[i], c)).collect::<Vec<_>>());
        out.insert(alg, &v);
    }
    out
}

/// Closure of `gens` under the q_n × q_m action, degree by degree.
pub fn lie_closure(alg: &AAlgebra, gens: &GradedSubspace) -> GradedSubspace {
    let mut out = GradedSubspace::new();
    let mut queue: Vec<Terms> = Vec::new();
    for r in gens.all_rows() {
        if out.insert(alg, &r) {
            queue.push(r);
        }
    }
    close_under_derivations(alg, &mut out, queue);
    out
}

fn close_under_derivations(alg: &AAlgebra, space: &mut GradedSubspace, mut queue: Vec<Terms>) {
    while let Some(v) = queue.pop() {
        for d in &alg.derivations {
            let w = d.apply(&v);
            if space.insert(alg, &w) {
                queue.push(w);
            }
        }
    }
}

/// Smallest graded ideal containing `gens` and stable under q_n × q_m, up to degree d_max.
pub fn ideal_closure(alg: &AAlgebra, gens: &GradedSubspace, d_max: usize) -> GradedSubspace {
    let mut out = GradedSubspace::new();
    let nv = alg.nvars();
    let vars: Vec<Monomial> = (0..nv).map(Monomial::even_var).chain((0..nv).map(Monomial::odd_var)).collect();
    for d in 0..=d_max {
        // products with generators of an equivariant subspace stay equivariant
        if d > 0 {
            for row in out.rows(d - 1) {
                for var in &vars {
                    let v = poly_mul(&row, &[(*var, Cyclo8::one())], None);
                    out.insert(alg, &v);
                }
            }
        }
        if out.dim_at(d) == alg.degree_dim(d) {
            continue;
        }
        let mut queue = Vec::new();
        for r in gens.rows(d) {
            if out.insert(alg, &r) {
                queue.push(r);
            }
        }
        close_under_derivations(alg, &mut out, queue);
    }
    out
}

/// Whether I contains the μ-summand, tested on its singular vectors.
pub fn summand_membership(alg: &AAlgebra, ideal: &GradedSubspace, mu: &StrictPartition) -> bool {
    let sv = singular_vectors(alg, mu);
    !sv.is_empty() && ideal.contains_space(alg, &sv)
}

/// Closure of the λ-summand, generated by its singular vectors.
pub fn summand_ideal(alg: &AAlgebra, lambda: &StrictPartition, d_max: usize) -> GradedSubspace {
    ideal_closure(alg, &singular_vectors(alg, lambda), d_max)
}

fn dominated(w: &[u8], top: &[u8]) -> bool {
    let (mut a, mut b) = (0usize, 0usize);
    w.iter().zip(top).all(|(x, y)| {
        a += *x as usize;
        b += *y as usize;
        a <= b
    })
}

/// The ideal generated by the λ-summand, computed one (degree, biweight) piece
/// at a time on demand.
///
/// At degree |λ| a piece is spanned by simple lowering operators applied to
/// pieces of higher weight, starting from the singular vectors; above it, by
/// variables times pieces one degree lower.
#[derive(Debug)]
pub struct SummandIdeal<'a> {
    alg: &'a AAlgebra,
    lambda: StrictPartition,
    top: Vec<u8>,
    pieces: HashMap<(usize, Vec<u8>), Echelon<Monomial, Cyclo8>>,
}

impl<'a> SummandIdeal<'a> {
    pub fn new(alg: &'a AAlgebra, lambda: &StrictPartition) -> Self {
        let mut top = padded(lambda, alg.n);
        top.extend(padded(lambda, alg.m));
        let mut pieces = HashMap::new();
        let sv = singular_vectors(alg, lambda);
        let mut e = Echelon::new();
        for r in sv.all_rows() {
            e.insert(&r);
        }
        pieces.insert((lambda.size(), top.clone()), e);
        SummandIdeal { alg, lambda: lambda.clone(), top, pieces }
    }

    pub fn lambda(&self) -> &StrictPartition {
        &self.lambda
    }

    fn in_range(&self, d: usize, w: &[u8]) -> bool {
        let (n, alg) = (self.alg.n, self.alg);
        d >= self.lambda.size()
            && self.lambda.len() <= alg.n.min(alg.m)
            && alg.piece_dim(d, w) > 0
            && (d > self.lambda.size() || (dominated(&w[..n], &self.top[..n]) && dominated(&w[n..], &self.top[n..])))
    }

    /// I in degree d and biweight w.
    pub fn piece(&mut self, d: usize, w: &[u8]) -> &Echelon<Monomial, Cyclo8> {
        let key = (d, w.to_vec());
        if !self.pieces.contains_key(&key) {
            let e = self.build(d, w);
            self.pieces.insert(key.clone(), e);
        }
        &self.pieces[&key]
    }

    fn build(&mut self, d: usize, w: &[u8]) -> Echelon<Monomial, Cyclo8> {
        let mut e = Echelon::new();
        if !self.in_range(d, w) {
            return e;
        }
        let alg = self.alg;
        let full = alg.piece_dim(d, w);
        if d == self.lambda.size() {
            for &(op, p) in &alg.lowering {
                if w[p + 1] == 0 {
                    continue;
                }
                let mut src = w.to_vec();
                src[p] += 1;
                src[p + 1] -= 1;
                let rows: Vec<Terms> = self.piece(d, &src).rows().cloned().collect();
                for r in rows {
                    e.insert(&alg.derivations[op].apply(&r));
                }
            }
        } else {
            let (n, m) = (alg.n, alg.m);
            for i in 0..n {
                for j in 0..m {
                    if w[i] == 0 || w[n + j] == 0 {
                        continue;
                    }
                    let mut src = w.to_vec();
                    src[i] -= 1;
                    src[n + j] -= 1;
                    let rows: Vec<Terms> = self.piece(d - 1, &src).rows().cloned().collect();
                    let k = i * m + j;
                    for var in [Monomial::even_var(k), Monomial::odd_var(k)] {
                        for r in &rows {
                            if e.rank() == full {
                                return e;
                            }
                            e.insert(&poly_mul(r, &[(var, Cyclo8::one())], None));
                        }
                    }
                }
            }
        }
        e
    }

    pub fn contains(&mut self, v: &[(Monomial, Cyclo8)]) -> bool {
        if v.is_empty() {
            return true;
        }
        let (d, w) = GradedSubspace::key(v, self.alg.n, self.alg.m);
        let full = self.alg.piece_dim(d, &w);
        let piece = self.piece(d, &w);
        piece.rank() == full || piece.contains(v)
    }

    /// Whether the μ-summand lies in I.
    pub fn contains_summand(&mut self, mu: &StrictPartition) -> bool {
        let sv = singular_vectors(self.alg, mu);
        !sv.is_empty() && sv.all_rows().iter().all(|r| self.contains(r))
    }

    /// Dimension of the piece in degree d, summed over biweights.
    pub fn dim_at(&mut self, d: usize) -> usize {
        let weights: Vec<Vec<u8>> = self.alg.monomials(d).keys().cloned().collect();
        weights.iter().map(|w| self.piece(d, w).rank()).sum()
    }
}

/// Strict partitions that index nonzero summands in A(n,m) up to degree d_max.
pub fn visible_partitions(n: usize, m: usize, d_max: usize) -> Vec<StrictPartition> {
    enumerate_strict_up_to(d_max).into_iter().filter(|p| p.len() <= n.min(m)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCase {
    pub lambda: StrictPartition,
    pub mu: StrictPartition,
    pub predicted: bool,
    pub observed: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub n: usize,
    pub m: usize,
    pub d_max: usize,
    pub cases: Vec<MembershipCase>,
}

impl MainTheoremReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

/// Membership of every visible μ-summand in the closure of the λ-summand.
pub fn main_theorem_row(alg: &AAlgebra, lambda: &StrictPartition, d_max: usize) -> Vec<MembershipCase> {
    let mut ideal = SummandIdeal::new(alg, lambda);
    visible_partitions(alg.n, alg.m, d_max)
        .into_iter()
        .map(|mu| {
            let predicted = lambda.is_contained_in(&mu);
            let observed = ideal.contains_summand(&mu);
            MembershipCase { lambda: lambda.clone(), mu, predicted, observed, pass: predicted == observed }
        })
        .collect()
}

pub fn verify_main_theorem(n: usize, m: usize, d_max: usize) -> Result<MainTheoremReport, AModuleError> {
    let alg = AAlgebra::shared(n, m)?;
    let cases = visible_partitions(n, m, d_max).iter().flat_map(|l| main_theorem_row(&alg, l, d_max)).collect();
    Ok(MainTheoremReport { n, m, d_max, cases })
}

/// Largest ℓ(μ) among visible summands missing from I.
pub fn quotient_length(ideal: &mut SummandIdeal<'_>, d_max: usize) -> usize {
    visible_partitions(ideal.alg.n, ideal.alg.m, d_max)
        .into_iter()
        .filter(|mu| !ideal.contains_summand(mu))
        .map(|mu| mu.len())
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lambda: StrictPartition,
    pub quotient_length: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantalReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub d_max: usize,
    pub generator: StrictPartition,
    pub predicted_support: Vec<StrictPartition>,
    pub observed_support: Vec<StrictPartition>,
    pub bounds: Vec<BoundCheck>,
    pub pass: bool,
}

fn bound_check(ideal: &mut SummandIdeal<'_>, d_max: usize) -> BoundCheck {
    let q = quotient_length(ideal, d_max);
    let lambda = ideal.lambda().clone();
    BoundCheck { holds: q < lambda.part(0), lambda, quotient_length: q }
}

/// Support of the staircase (r+1, r, …, 1) closure against {μ : ℓ(μ) > r}, with
/// the bound ℓ(A/I^λ) < λ₁ for the staircase and for the row (r+1).
pub fn determinantal_ideal_check(n: usize, m: usize, r: usize, d_max: usize) -> Result<DeterminantalReport, AModuleError> {
    let alg = AAlgebra::shared(n, m)?;
    let generator = staircase(r);
    let mut ideal = SummandIdeal::new(&alg, &generator);
    let visible = visible_partitions(n, m, d_max);
    let predicted_support: Vec<StrictPartition> = visible.iter().filter(|mu| mu.len() > r).cloned().collect();
    let observed_support: Vec<StrictPartition> =
        visible.iter().filter(|mu| ideal.contains_summand(mu)).cloned().collect();
    let mut bounds = vec![bound_check(&mut ideal, d_max)];
    let row = StrictPartition::from_slice(&[r + 1]);
    if row != generator {
        bounds.push(bound_check(&mut SummandIdeal::new(&alg, &row), d_max));
    }
    let pass = predicted_support == observed_support && bounds.iter().all(|b| b.holds);
    Ok(DeterminantalReport { n, m, r, d_max, generator, predicted_support, observed_support, bounds, pass })
}

type BiCharacter = BTreeMap<(Vec<u8>, Vec<u8>), Rational>;

fn a_character(alg: &AAlgebra, r: usize) -> BiCharacter {
    alg.monomials(r)
        .iter()
        .map(|(w, ms)| ((w[..alg.n].to_vec(), w[alg.n..].to_vec()), Rational::from_int(ms.len() as i64)))
        .collect()
}

fn outer(x: &BTreeMap<Vec<u8>, usize>, y: &BTreeMap<Vec<u8>, usize>) -> BiCharacter {
    let mut out = BTreeMap::new();
    for (wx, cx) in x {
        for (wy, cy) in y {
            out.insert((wx.clone(), wy.clone()), Rational::from_int((cx * cy) as i64));
        }
    }
    out
}

fn convolve(a: &BiCharacter, b: &BiCharacter) -> BiCharacter {
    let mut out: BiCharacter = BTreeMap::new();
    for ((ax, ay), ca) in a {
        for ((bx, by), cb) in b {
            let key = (
                ax.iter().zip(bx).map(|(p, q)| p + q).collect(),
                ay.iter().zip(by).map(|(p, q)| p + q).collect(),
            );
            let e = out.entry(key).or_insert(Rational::ZERO);
            *e = &*e + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn strict_from_weight(w: &[u8]) -> Result<StrictPartition, AModuleError> {
    let parts: Vec<usize> = w.iter().take_while(|&&x| x > 0).map(|&x| x as usize).collect();
    if parts.len() != w.iter().filter(|&&x| x > 0).count() || parts.windows(2).any(|p| p[0] <= p[1]) {
        return Err(AModuleError::NotDominant(w.to_vec()));
    }
    Ok(StrictPartition::from_slice(&parts))
}

/// Coefficients c_{λμ} with ch M = Σ c_{λμ}·ch T_λ·ch T_μ, peeled from the top weight.
fn decompose_bicharacter(mut ch: BiCharacter, n: usize, m: usize) -> Result<BTreeMap<(StrictPartition, StrictPartition), Rational>, AModuleError> {
    let mut out = BTreeMap::new();
    while let Some(((wx, wy), c)) = ch.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
        let lambda = strict_from_weight(&wx)?;
        let mu = strict_from_weight(&wy)?;
        let tl = character(&lambda, n)?;
        let tm = character(&mu, m)?;
        let top = Rational::from_int((tl[&wx] * tm[&wy]) as i64);
        let coeff = &c / &top;
        for ((kx, ky), v) in outer(&tl, &tm) {
            let e = ch.entry((kx, ky)).or_insert(Rational::ZERO);
            *e = &*e - &(&coeff * &v);
        }
        ch.retain(|_, v| !v.is_zero());
        out.insert((lambda, mu), coeff);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomTerm {
    pub gamma: StrictPartition,
    pub f_lambda: Rational,
    pub f_mu: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDimCase {
    pub lambda: StrictPartition,
    pub mu: StrictPartition,
    pub alpha: StrictPartition,
    pub beta: StrictPartition,
    pub brute_force: Rational,
    pub formula: Rational,
    /// brute_force·2^{δ(λ)+δ(μ)}, the total (even plus odd) Hom dimension.
    pub total_dim: Rational,
    pub terms: Vec<HomTerm>,
    pub pass: bool,
}

fn pow2(k: usize) -> Rational {
    Rational::from_int(1 << k)
}

/// Multiplicity of T_λ⊠T_μ in T_α⊠T_β⊗A, counted in the Grothendieck group
/// with ch T_λ·ch T_μ as the unit.
///
/// The brute-force side reads the multiplicity off characters of explicit
/// modules: T's from the Sergeev action and A_r from counting monomials. The
/// formula side is Σ_γ 2^{−δ(γ)}·f^λ_{αγ}·f^μ_{βγ} with f from Q-function
/// products.
pub fn hom_dim_check(
    alg: &AAlgebra,
    lambda: &StrictPartition,
    mu: &StrictPartition,
    alpha: &StrictPartition,
    beta: &StrictPartition,
) -> Result<HomDimCase, AModuleError> {
    let mut brute_force = Rational::ZERO;
    let mut formula = Rational::ZERO;
    let mut terms = Vec::new();
    if lambda.size() >= alpha.size() {
        let r = lambda.size() - alpha.size();
        let coeffs = module_decomposition(alg, alpha, beta, r)?;
        if let Some(c) = coeffs.get(&(lambda.clone(), mu.clone())) {
            brute_force = c.clone();
        }
        if mu.size() == beta.size() + r {
            for gamma in crate::partitions::enumerate_strict(r) {
                let fl = induct_mult(alpha, &gamma)?.get(lambda).cloned().unwrap_or(Rational::ZERO);
                let fm = induct_mult(beta, &gamma)?.get(mu).cloned().unwrap_or(Rational::ZERO);
                if fl.is_zero() || fm.is_zero() {
                    continue;
                }
                formula = &formula + &(&(&fl * &fm) / &pow2(gamma.delta()));
                terms.push(HomTerm { gamma, f_lambda: fl, f_mu: fm });
            }
        }
    }
    Ok(HomDimCase {
        lambda: lambda.clone(),
        mu: mu.clone(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        pass: brute_force == formula,
        total_dim: &brute_force * &pow2(lambda.delta() + mu.delta()),
        brute_force,
        formula,
        terms,
    })
}

type Decomposition = Arc<BTreeMap<(StrictPartition, StrictPartition), Rational>>;

fn module_decomposition(alg: &AAlgebra, alpha: &StrictPartition, beta: &StrictPartition, r: usize) -> Result<Decomposition, AModuleError> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, StrictPartition, StrictPartition, usize), Decomposition>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alg.n, alg.m, alpha.clone(), beta.clone(), r);
    if let Some(d) = cache.lock().unwrap().get(&key) {
        return Ok(d.clone());
    }
    let ta = character(alpha, alg.n)?;
    let tb = character(beta, alg.m)?;
    let ch = convolve(&outer(&ta, &tb), &a_character(alg, r));
    let d = Arc::new(decompose_bicharacter(ch, alg.n, alg.m)?);
    cache.lock().unwrap().insert(key, d.clone());
    Ok(d)
}

/// All cases with |α|, |β| ≤ size_max and |λ| ≤ |α| + r_max, |μ| ≤ |β| + r_max.
pub fn hom_dim_sweep(n: usize, m: usize, size_max: usize, r_max: usize) -> Result<Vec<HomDimCase>, AModuleError> {
    let alg = AAlgebra::shared(n, m)?;
    let mut out = Vec::new();
    for alpha in visible_partitions(n, m, size_max) {
        for beta in visible_partitions(n, m, size_max) {
            for lambda in visible_partitions(n, m, alpha.size() + r_max) {
                for mu in visible_partitions(n, m, beta.size() + r_max) {
                    out.push(hom_dim_check(&alg, &lambda, &mu, &alpha, &beta)?);
                }
            }
        }
    }
    Ok(out)
}

/// A truncated polynomial in even and odd variables: all terms of degree > order are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub order: usize,
    pub terms: Terms,
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        Jet { order, terms: Vec::new() }
    }

    pub fn constant(order: usize, c: Cyclo8) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial::ONE, c)] };
        Jet { order, terms }
    }

    pub fn even_var(order: usize, k: usize) -> Self {
        Jet { order, terms: if order >= 1 { vec![(Monomial::even_var(k), Cyclo8::one())] } else { Vec::new() } }
    }

    pub fn odd_var(order: usize, k: usize) -> Self {
        Jet { order, terms: if order >= 1 { vec![(Monomial::odd_var(k), Cyclo8::one())] } else { Vec::new() } }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Jet) -> Jet {
        Jet { order: self.order, terms: axpy(&self.terms, &Cyclo8::one(), &other.terms) }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        Jet { order: self.order, terms: axpy(&self.terms, &Cyclo8::from_int(-1), &other.terms) }
    }

    pub fn scale(&self, s: &Cyclo8) -> Jet {
        Jet { order: self.order, terms: crate::linalg::scale(&self.terms, s) }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        Jet { order: self.order, terms: poly_mul(&self.terms, &other.terms, Some(self.order)) }
    }

    pub fn constant_term(&self) -> Cyclo8 {
        self.terms.iter().find(|(m, _)| *m == Monomial::ONE).map_or(Cyclo8::zero(), |(_, c)| c.clone())
    }

    /// c(1 + t)⁻¹ = c⁻¹ Σ (−t)^k, finite since t has no constant term.
    pub fn inverse(&self) -> Result<Jet, AModuleError> {
        let c = self.constant_term();
        let ci = c.inverse().map_err(|_| AModuleError::NonUnit(c.to_string()))?;
        let t = self.scale(&ci).sub(&Jet::constant(self.order, Cyclo8::one()));
        let minus_t = t.scale(&Cyclo8::from_int(-1));
        let mut sum = Jet::constant(self.order, Cyclo8::one());
        let mut power = sum.clone();
        for _ in 0..self.order {
            power = power.mul(&minus_t);
            sum = sum.add(&power);
        }
        Ok(sum.scale(&ci))
    }

    /// Value at the origin of every variable.
    pub fn at_origin(&self) -> Cyclo8 {
        self.constant_term()
    }
}

/// Coordinates on K = B × U at rank n: a_ij, b_ij (i ≤ j) on B and a′_ij, b′_ij
/// (i < j) on U, re-centered so the identity is the origin (a_ii = 1 + ā_ii).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KCoordinates {
    pub n: usize,
}

impl KCoordinates {
    fn upper_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j);
        // pairs ordered by column, then row
        j * (j + 1) / 2 + i
    }

    fn strict_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        self.n * (self.n + 1) / 2 + j * (j - 1) / 2 + i
    }

    pub fn nvars(&self) -> usize {
        self.n * self.n
    }

    /// a_ij as a jet; a_ii includes the constant 1.
    pub fn a(&self, order: usize, i: usize, j: usize) -> Jet {
        let v = Jet::even_var(order, self.upper_index(i, j));
        if i == j {
            v.add(&Jet::constant(order, Cyclo8::one()))
        } else {
            v
        }
    }

    pub fn b(&self, order: usize, i: usize, j: usize) -> Jet {
        Jet::odd_var(order, self.upper_index(i, j))
    }

    /// a′_ij, with a′_ii = 1.
    pub fn a_prime(&self, order: usize, i: usize, j: usize) -> Jet {
        if i == j {
            Jet::constant(order, Cyclo8::one())
        } else {
            Jet::even_var(order, self.strict_index(i, j))
        }
    }

    /// b′_ij, with b′_ii = 0.
    pub fn b_prime(&self, order: usize, i: usize, j: usize) -> Jet {
        if i == j {
            Jet::zero(order)
        } else {
            Jet::odd_var(order, self.strict_index(i, j))
        }
    }
}

/// The algebra map φ: A(n,n) → ℂ[K], on jets of the given order.
#[derive(Debug, Clone)]
pub struct PhiMap {
    pub n: usize,
    pub order: usize,
    pub x: Vec<Jet>,
    pub y: Vec<Jet>,
}

pub fn phi_map(n: usize, order: usize) -> Result<PhiMap, AModuleError> {
    if n * n > MAX_VARS {
        return Err(AModuleError::TooManyVariables(n * n));
    }
    let k = KCoordinates { n };
    let zeta = Cyclo8::zeta();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut px = Jet::zero(order);
            let mut py = Jet::zero(order);
            for l in 0..=i.min(j) {
                let (a, b) = (k.a(order, l, i), k.b(order, l, i));
                let (ap, bp) = (k.a_prime(order, l, j), k.b_prime(order, l, j));
                px = px.add(&a.mul(&ap)).add(&b.mul(&bp).scale(&zeta));
                py = py.add(&a.mul(&bp)).sub(&b.mul(&ap).scale(&zeta));
            }
            x.push(px);
            y.push(py);
        }
    }
    Ok(PhiMap { n, order, x, y })
}

/// Evaluates an algebra map on a polynomial given images of even and odd variables.
fn substitute(p: &[(Monomial, Cyclo8)], even: &[Jet], odd: &[Jet], order: usize) -> Jet {
    let mut out = Jet::zero(order);
    for (mono, c) in p {
        let mut term = Jet::constant(order, c.clone());
        for (k, &e) in mono.even.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&even[k]);
            }
        }
        for k in mono.odd_vars() {
            term = term.mul(&odd[k]);
        }
        out = out.add(&term);
    }
    out
}

impl PhiMap {
    pub fn apply(&self, p: &SuperPoly) -> Jet {
        substitute(&p.terms, &self.x, &self.y, self.order)
    }
}

/// ψ on the generators of ℂ[K], valued in jets of A at 𝔪 (variables x_ij − δ_ij and y_ij).
#[derive(Debug, Clone)]
pub struct PsiMap {
    pub n: usize,
    pub order: usize,
    a: BTreeMap<(usize, usize), Jet>,
    b: BTreeMap<(usize, usize), Jet>,
    a_prime: BTreeMap<(usize, usize), Jet>,
    b_prime: BTreeMap<(usize, usize), Jet>,
}

/// x_ij as a jet at 𝔪.
pub fn x_at_identity(n: usize, order: usize, i: usize, j: usize) -> Jet {
    let v = Jet::even_var(order, i * n + j);
    if i == j {
        v.add(&Jet::constant(order, Cyclo8::one()))
    } else {
        v
    }
}

pub fn y_at_identity(n: usize, order: usize, i: usize, j: usize) -> Jet {
    Jet::odd_var(order, i * n + j)
}

impl PsiMap {
    pub fn a(&self, i: usize, j: usize) -> &Jet {
        &self.a[&(i, j)]
    }

    pub fn b(&self, i: usize, j: usize) -> &Jet {
        &self.b[&(i, j)]
    }

    pub fn a_prime(&self, i: usize, j: usize) -> Jet {
        if i == j {
            Jet::constant(self.order, Cyclo8::one())
        } else {
            self.a_prime[&(i, j)].clone()
        }
    }

    pub fn b_prime(&self, i: usize, j: usize) -> Jet {
        if i == j {
            Jet::zero(self.order)
        } else {
            self.b_prime[&(i, j)].clone()
        }
    }

    /// ψ of a jet in the K coordinates.
    pub fn apply(&self, p: &Jet) -> Jet {
        let kc = KCoordinates { n: self.n };
        let one = Jet::constant(self.order, Cyclo8::one());
        let mut even = vec![Jet::zero(self.order); kc.nvars()];
        let mut odd = vec![Jet::zero(self.order); kc.nvars()];
        for j in 0..self.n {
            for i in 0..=j {
                let u = kc.upper_index(i, j);
                even[u] = if i == j { self.a(i, j).sub(&one) } else { self.a(i, j).clone() };
                odd[u] = self.b(i, j).clone();
                if i < j {
                    let s = kc.strict_index(i, j);
                    even[s] = self.a_prime(i, j);
                    odd[s] = self.b_prime(i, j);
                }
            }
        }
        substitute(&p.terms, &even, &odd, self.order)
    }
}

/// Builds ψ column by column (pairs (i, j) with j more significant).
pub fn psi_map(n: usize, order: usize) -> Result<PsiMap, AModuleError> {
    if n * n > MAX_VARS {
        return Err(AModuleError::TooManyVariables(n * n));
    }
    let zeta = Cyclo8::zeta();
    let x = |i, j| x_at_identity(n, order, i, j);
    let y = |i, j| y_at_identity(n, order, i, j);
    let mut psi = PsiMap {
        n,
        order,
        a: BTreeMap::new(),
        b: BTreeMap::new(),
        a_prime: BTreeMap::new(),
        b_prime: BTreeMap::new(),
    };
    for j in 0..n {
        for i in 0..=j {
            let mut sa = Jet::zero(order);
            let mut sb = Jet::zero(order);
            for k in 0..i {
                sa = sa.add(&psi.a(k, j).mul(&psi.a_prime(k, i))).add(&psi.b(k, j).mul(&psi.b_prime(k, i)).scale(&zeta));
                sb = sb.add(&psi.a(k, j).mul(&psi.b_prime(k, i))).sub(&psi.b(k, j).mul(&psi.a_prime(k, i)).scale(&zeta));
            }
            psi.a.insert((i, j), x(j, i).sub(&sa));
            psi.b.insert((i, j), y(j, i).sub(&sb).scale(&zeta));
            if i < j {
                let mut r1 = x(i, j);
                let mut r2 = y(i, j);
                for k in 0..i {
                    r1 = r1.sub(&psi.a(k, i).mul(&psi.a_prime(k, j))).sub(&psi.b(k, i).mul(&psi.b_prime(k, j)).scale(&zeta));
                    r2 = r2.sub(&psi.a(k, i).mul(&psi.b_prime(k, j))).add(&psi.b(k, i).mul(&psi.a_prime(k, j)).scale(&zeta));
                }
                // (A N; −N A)⁻¹ = A⁻¹ − A⁻²N with A = ψ(a_ii) and N = ζψ(b_ii) odd
                let ainv = psi.a(i, i).inverse()?;
                let ainv2 = ainv.mul(&ainv);
                let nb = psi.b(i, i).scale(&zeta);
                let v1 = ainv.mul(&r1).sub(&ainv2.mul(&nb.mul(&r2)));
                let v2 = ainv.mul(&r2).add(&ainv2.mul(&nb.mul(&r1)));
                psi.a_prime.insert((i, j), v1);
                psi.b_prime.insert((i, j), v2);
            }
        }
    }
    Ok(psi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiPsiReport {
    pub n: usize,
    pub order: usize,
    /// Generators g with ψ(φ(g)) ≠ g.
    pub round_trip_failures: Vec<String>,
    /// 𝔪-generators whose image does not vanish at the identity.
    pub identity_failures: Vec<String>,
    pub samples: usize,
    /// Sampled pairs (p, q) with φ(pq) ≠ φ(p)φ(q).
    pub multiplicativity_failures: Vec<(String, String)>,
    pub pass: bool,
}

/// A random element of A(n,m) with up to three terms of degree ≤ max_degree.
pub fn random_poly(n: usize, m: usize, max_degree: usize, rng: &mut impl Rng) -> SuperPoly {
    let nv = n * m;
    let mut p = SuperPoly::zero(n, m);
    for _ in 0..rng.gen_range(1..=3) {
        let mut mono = Monomial::ONE;
        for _ in 0..rng.gen_range(0..=max_degree) {
            let k = rng.gen_range(0..2 * nv);
            if k < nv {
                mono.even[k] += 1;
            } else {
                mono.odd |= 1 << (k - nv);
            }
        }
        let c = Cyclo8::gaussian(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        p = p.add(&SuperPoly { n, m, terms: vec![(mono, c)] });
    }
    p
}

/// ψ∘φ = id on generators and φ(𝔪) vanishing at the identity, at rank n and jet order k.
pub fn phi_psi_check(n: usize, order: usize, samples: usize, seed: u64) -> Result<PhiPsiReport, AModuleError> {
    let phi = phi_map(n, order)?;
    let psi = psi_map(n, order)?;
    let mut round_trip_failures = Vec::new();
    let mut identity_failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let k = i * n + j;
            let label = format!("{}{}", i + 1, j + 1);
            if psi.apply(&phi.x[k]) != x_at_identity(n, order, i, j) {
                round_trip_failures.push(format!("x{label}"));
            }
            if psi.apply(&phi.y[k]) != y_at_identity(n, order, i, j) {
                round_trip_failures.push(format!("y{label}"));
            }
            let delta = Cyclo8::from_int((i == j) as i64);
            if phi.x[k].at_origin() != delta {
                identity_failures.push(format!("x{label}-δ"));
            }
            if !phi.y[k].at_origin().is_zero() {
                identity_failures.push(format!("y{label}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut multiplicativity_failures = Vec::new();
    for _ in 0..samples {
        let p = random_poly(n, n, 2, &mut rng);
        let q = random_poly(n, n, 2, &mut rng);
        if phi.apply(&a_mult(&p, &q)) != phi.apply(&p).mul(&phi.apply(&q)) {
            multiplicativity_failures.push((p.to_string(), q.to_string()));
        }
    }
    let pass = round_trip_failures.is_empty() && identity_failures.is_empty() && multiplicativity_failures.is_empty();
    Ok(PhiPsiReport { n, order, round_trip_failures, identity_failures, samples, multiplicativity_failures, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MStabilityReport {
    pub n: usize,
    pub checked: usize,
    /// (operator, generator) pairs sending a generator of 𝔪 outside 𝔪.
    pub offending: Vec<(String, String)>,
}

/// Every X′_ij, Y′_ij maps each generator x_kl − δ_kl, y_kl of 𝔪 into 𝔪.
///
/// The image is linear in the generators, so it lies in 𝔪 exactly when it
/// vanishes at x = 1, y = 0.
pub fn m_stability_check(n: usize) -> Result<MStabilityReport, AModuleError> {
    let alg = AAlgebra::shared(n, n)?;
    let mut checked = 0;
    let mut offending = Vec::new();
    for x in QnElement::basis(n) {
        let (g1, g2) = h_element(&x);
        let op = alg.module.pair_operator(&g1, &g2)?;
        let d = Derivation::from_operator(format!("{}'", element_label(&x)), &op, n * n);
        for k in 0..2 * n * n {
            let gen = if k < n * n { Monomial::even_var(k) } else { Monomial::odd_var(k - n * n) };
            let image = d.apply(&[(gen, Cyclo8::one())]);
            let mut at_identity = Cyclo8::zero();
            for (mono, c) in &image {
                if mono.odd == 0 {
                    let v = mono.even.iter().position(|&e| e == 1).unwrap();
                    if v / n == v % n {
                        at_identity += c;
                    }
                }
            }
            checked += 1;
            if !at_identity.is_zero() {
                let name = if k < n * n { format!("x{}{}-δ", k / n + 1, k % n + 1) } else { format!("y{}{}", (k - n * n) / n + 1, (k - n * n) % n + 1) };
                offending.push((d.label.clone(), name));
            }
        }
    }
    Ok(MStabilityReport { n, checked, offending })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_variables_anticommute() {
        let y11 = SuperPoly::y(2, 2, 0, 0);
        let y12 = SuperPoly::y(2, 2, 0, 1);
        assert!(a_mult(&y11, &y11).is_zero());
        assert_eq!(a_mult(&y12, &y11), a_mult(&y11, &y12).scale(&Cyclo8::from_int(-1)));
        let x11 = SuperPoly::x(2, 2, 0, 0);
        let sq = a_mult(&x11, &x11);
        assert_eq!(sq.terms.len(), 1);
        assert_eq!(sq.terms[0].0.even[0], 2);
    }

    #[test]
    fn weight_space_examples() {
        let a = AAlgebra::new(2, 2).unwrap();
        let w = weight_space(&a, 1, &[1, 0, 1, 0]);
        assert_eq!(w, vec![SuperPoly::y(2, 2, 0, 0), SuperPoly::x(2, 2, 0, 0)]);
        let b = AAlgebra::new(1, 1).unwrap();
        assert_eq!(weight_space(&b, 2, &[2, 2]).len(), 2);
        assert_eq!(weight_space(&a, 1, &[1, 0, 0, 1]), vec![SuperPoly::y(2, 2, 0, 1), SuperPoly::x(2, 2, 0, 1)]);
    }

    #[test]
    fn derivation_examples() {
        let a = AAlgebra::new(2, 2).unwrap();
        let x11 = SuperPoly::x(2, 2, 0, 0);
        assert!(a.apply(Side::Left, &QnElement::x(2, 0, 1), &x11).unwrap().is_zero());
        let (g1, g2) = h_element(&QnElement::x(2, 0, 1));
        let op = a.module.pair_operator(&g1, &g2).unwrap();
        let d = Derivation::from_operator("X12'".into(), &op, 4);
        let got = d.apply(&x11.terms);
        assert_eq!(got, SuperPoly::x(2, 2, 0, 1).scale(&Cyclo8::from_int(-1)).terms);
    }

    #[test]
    fn singular_vector_examples() {
        let a = AAlgebra::new(2, 2).unwrap();
        let s1 = singular_vectors(&a, &StrictPartition::from_slice(&[1]));
        assert_eq!(s1.dim(), 2);
        assert!(s1.contains(&a, &SuperPoly::x(2, 2, 0, 0).terms));
        assert!(s1.contains(&a, &SuperPoly::y(2, 2, 0, 0).terms));
        let b = AAlgebra::new(1, 1).unwrap();
        assert!(singular_vectors(&b, &StrictPartition::from_slice(&[2, 1])).is_empty());
        assert_eq!(singular_vectors(&b, &StrictPartition::from_slice(&[2])).dim(), 2);
    }

    #[test]
    fn jet_inverse() {
        let v = Jet::even_var(3, 0).add(&Jet::constant(3, Cyclo8::from_int(2)));
        let inv = v.inverse().unwrap();
        assert_eq!(v.mul(&inv), Jet::constant(3, Cyclo8::one()));
        assert!(Jet::even_var(3, 0).inverse().is_err());
    }

    #[test]
    fn phi_psi_base_case() {
        let phi = phi_map(2, 3).unwrap();
        let k = KCoordinates { n: 2 };
        assert_eq!(phi.x[0], k.a(3, 0, 0));
        assert_eq!(phi.y[0], k.b(3, 0, 0).scale(&-Cyclo8::zeta()));
        let psi = psi_map(2, 3).unwrap();
        assert_eq!(psi.a(0, 0), &x_at_identity(2, 3, 0, 0));
        assert_eq!(psi.b(0, 0), &y_at_identity(2, 3, 0, 0).scale(&Cyclo8::zeta()));
    }
}
