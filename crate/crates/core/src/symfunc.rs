//! The ring Γ spanned by Schur Q-functions.
//!
//! Elements are kept in the Q-basis; multiplication goes through explicit
//! polynomials in N variables followed by triangular straightening.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::linalg::accumulate;
use crate::partitions::{enumerate_strict, StrictPartition};
use crate::scalars::{half_power_of_two, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymfuncError {
    #[error("not in Γ span: residual has leading monomial {0:?}")]
    NotInSpan(Vec<u8>),
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("non-integral multiplicity {value} at {lambda:?}")]
    NonIntegral { lambda: StrictPartition, value: String },
    #[error("malformed polynomial text: {0}")]
    Parse(String),
}

/// A polynomial in x₁..x_N with rational coefficients, keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct NVarPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, Rational>,
}

impl NVarPoly {
    pub fn zero(nvars: usize) -> Self {
        NVarPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Rational::ONE)
    }

    pub fn monomial(exps: Vec<u8>, c: Rational) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        NVarPoly { nvars, terms }
    }

    /// x_i (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::ONE)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, Rational> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u8]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u8>, c: &Rational) {
        accumulate(&mut self.terms, e, c);
    }

    pub fn add(&self, other: &NVarPoly) -> NVarPoly {
        self.axpy(&Rational::ONE, other)
    }

    pub fn sub(&self, other: &NVarPoly) -> NVarPoly {
        self.axpy(&Rational::from_int(-1), other)
    }

    /// self + s·other.
    pub fn axpy(&self, s: &Rational, other: &NVarPoly) -> NVarPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &(s * c));
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> NVarPoly {
        if s.is_zero() {
            return NVarPoly::zero(self.nvars);
        }
        NVarPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &NVarPoly) -> NVarPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: HashMap<Vec<u8>, Rational> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let p = c1 * c2;
                match acc.get_mut(&e) {
                    Some(v) => *v += &p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        NVarPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Part of total degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> NVarPoly {
        let terms = self.terms.iter().filter(|(e, _)| degree_of(e) == d).map(|(e, c)| (e.clone(), c.clone())).collect();
        NVarPoly { nvars: self.nvars, terms }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| degree_of(e)).max()
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|e| degree_of(e) == d)
    }

    /// Invariance under the generators (1 2) and (1 2 ⋯ N) of the symmetric group.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            let mut swapped = e.clone();
            if swapped.len() > 1 {
                swapped.swap(0, 1);
            }
            let mut rotated = e.clone();
            rotated.rotate_left(1);
            self.terms.get(&swapped) == Some(c) && self.terms.get(&rotated) == Some(c)
        })
    }

    /// Textual form `c:e1,e2,..;c:...`, used by on-disk caches.
    pub fn to_wire(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let es: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("{}:{}", c, es.join(","))
            })
            .collect();
        parts.join(";")
    }

    pub fn from_wire(nvars: usize, s: &str) -> Result<NVarPoly, SymfuncError> {
        let mut p = NVarPoly::zero(nvars);
        let s = s.trim();
        if s.is_empty() {
            return Ok(p);
        }
        for term in s.split(';') {
            let (c, e) = term.split_once(':').ok_or_else(|| SymfuncError::Parse(term.to_string()))?;
            let c: Rational = c.parse().map_err(|_| SymfuncError::Parse(term.to_string()))?;
            let e: Vec<u8> = e
                .split(',')
                .map(|x| x.parse::<u8>())
                .collect::<Result<_, _>>()
                .map_err(|_| SymfuncError::Parse(term.to_string()))?;
            if e.len() != nvars {
                return Err(SymfuncError::Parse(term.to_string()));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

fn degree_of(e: &[u8]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl fmt::Debug for NVarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, x) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// q_r: coefficient of t^r in ∏ᵢ (1+xᵢt)/(1−xᵢt).
pub fn q_gen(r: usize, nvars: usize) -> NVarPoly {
    // each factor is 1 + 2Σ_{k≥1} xᵢᵏtᵏ; series[j] holds the t^j coefficient
    let mut series: Vec<NVarPoly> = (0..=r).map(|j| if j == 0 { NVarPoly::one(nvars) } else { NVarPoly::zero(nvars) }).collect();
    let two = Rational::from_int(2);
    for i in 0..nvars {
        let mut next = series.clone();
        for (j, s) in series.iter().enumerate() {
            for k in 1..=(r - j) {
                let mut e = vec![0u8; nvars];
                e[i] = k as u8;
                let term = s.mul(&NVarPoly::monomial(e, two.clone()));
                next[j + k] = next[j + k].add(&term);
            }
        }
        series = next;
    }
    series.swap_remove(r)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum PolyKey {
    Gen(usize),
    Pfaffian(Vec<usize>),
}

type PolyCache = Mutex<HashMap<(PolyKey, usize), Arc<NVarPoly>>>;

fn q_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn q_gen_cached(r: usize, nvars: usize) -> Arc<NVarPoly> {
    let key = (PolyKey::Gen(r), nvars);
    if let Some(p) = q_cache().lock().unwrap().get(&key) {
        return p.clone();
    }
    let p = Arc::new(q_gen(r, nvars));
    q_cache().lock().unwrap().insert(key, p.clone());
    p
}

fn two_row(a: usize, b: usize, nvars: usize) -> NVarPoly {
    let mut acc = q_gen_cached(a, nvars).mul(&q_gen_cached(b, nvars));
    for i in 1..=b {
        let sign = if i % 2 == 0 { 2 } else { -2 };
        let t = q_gen_cached(a + i, nvars).mul(&q_gen_cached(b - i, nvars));
        acc = acc.axpy(&Rational::from_int(sign), &t);
    }
    acc
}

/// Pfaffian expansion along the first row; `parts` has even length.
fn q_even(parts: &[usize], nvars: usize) -> Arc<NVarPoly> {
    let key = (PolyKey::Pfaffian(parts.to_vec()), nvars);
    if let Some(p) = q_cache().lock().unwrap().get(&key) {
        return p.clone();
    }
    let p = match parts.len() {
        0 => NVarPoly::one(nvars),
        2 => two_row(parts[0], parts[1], nvars),
        len => {
            let mut acc = NVarPoly::zero(nvars);
            for j in 1..len {
                let rest: Vec<usize> =
                    parts.iter().enumerate().filter(|&(i, _)| i != 0 && i != j).map(|(_, &x)| x).collect();
                let term = q_even(&[parts[0], parts[j]], nvars).mul(&q_even(&rest, nvars));
                let sign = if j % 2 == 1 { 1 } else { -1 };
                acc = acc.axpy(&Rational::from_int(sign), &term);
            }
            acc
        }
    };
    let p = Arc::new(p);
    q_cache().lock().unwrap().insert(key, p.clone());
    p
}

/// Schur Q-polynomial Q_λ(x₁..x_N).
pub fn q_poly(lambda: &StrictPartition, nvars: usize) -> Arc<NVarPoly> {
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    q_even(&parts, nvars)
}

/// Q_λ as an integer polynomial in q₁, q₂, …; each key lists q-indices in
/// decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QExpansion {
    pub terms: BTreeMap<Vec<usize>, i64>,
}

impl QExpansion {
    fn one() -> Self {
        QExpansion { terms: BTreeMap::from([(Vec::new(), 1)]) }
    }

    fn gen_pair(a: usize, b: usize, c: i64) -> Self {
        let mut key: Vec<usize> = [a, b].into_iter().filter(|&r| r > 0).collect();
        key.sort_unstable_by(|x, y| y.cmp(x));
        QExpansion { terms: BTreeMap::from([(key, c)]) }
    }

    fn add_scaled(&mut self, c: i64, other: &QExpansion) {
        for (k, v) in &other.terms {
            let e = self.terms.entry(k.clone()).or_insert(0);
            *e += c * v;
            if *e == 0 {
                self.terms.remove(k);
            }
        }
    }

    fn mul(&self, other: &QExpansion) -> QExpansion {
        let mut out = QExpansion::default();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let mut k: Vec<usize> = k1.iter().chain(k2).copied().collect();
                k.sort_unstable_by(|x, y| y.cmp(x));
                out.add_scaled(v1 * v2, &QExpansion { terms: BTreeMap::from([(k, 1)]) });
            }
        }
        out
    }

    /// Substitutes q_r(x₁..x_N).
    pub fn to_poly(&self, nvars: usize) -> NVarPoly {
        let mut out = NVarPoly::zero(nvars);
        for (k, c) in &self.terms {
            let term = k.iter().fold(NVarPoly::one(nvars), |acc, &r| acc.mul(&q_gen_cached(r, nvars)));
            out = out.axpy(&Rational::from_int(*c), &term);
        }
        out
    }
}

fn subscript(n: usize, digits: &[char; 10]) -> String {
    n.to_string().chars().map(|c| digits[c.to_digit(10).unwrap() as usize]).collect()
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
        const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, &c)) in self.terms.iter().enumerate() {
            let sign = match (i, c < 0) {
                (0, false) => "",
                (0, true) => "−",
                (_, false) => " + ",
                (_, true) => " − ",
            };
            let mut factors = String::new();
            let mut j = 0;
            while j < k.len() {
                let run = k[j..].iter().take_while(|&&r| r == k[j]).count();
                factors.push('q');
                factors.push_str(&subscript(k[j], &SUB));
                if run > 1 {
                    factors.push_str(&subscript(run, &SUP));
                }
                j += run;
            }
            let a = c.unsigned_abs();
            let coeff = if a == 1 && !factors.is_empty() { String::new() } else { a.to_string() };
            write!(f, "{sign}{coeff}{factors}")?;
        }
        Ok(())
    }
}

fn q_expansion_even(parts: &[usize]) -> QExpansion {
    match parts.len() {
        0 => QExpansion::one(),
        2 => {
            let (a, b) = (parts[0], parts[1]);
            let mut acc = QExpansion::gen_pair(a, b, 1);
            for i in 1..=b {
                acc.add_scaled(if i % 2 == 0 { 2 } else { -2 }, &QExpansion::gen_pair(a + i, b - i, 1));
            }
            acc
        }
        len => {
            let mut acc = QExpansion::default();
            for j in 1..len {
                let rest: Vec<usize> =
                    parts.iter().enumerate().filter(|&(i, _)| i != 0 && i != j).map(|(_, &x)| x).collect();
                let term = q_expansion_even(&[parts[0], parts[j]]).mul(&q_expansion_even(&rest));
                acc.add_scaled(if j % 2 == 1 { 1 } else { -1 }, &term);
            }
            acc
        }
    }
}

/// Q_λ written in the generators q_r.
pub fn q_expansion(lambda: &StrictPartition) -> QExpansion {
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    q_expansion_even(&parts)
}

/// Seeds the memo table, e.g. from an on-disk cache.
pub fn preload_q_poly(lambda: &StrictPartition, poly: NVarPoly) {
    let mut parts = lambda.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.push(0);
    }
    let key = (PolyKey::Pfaffian(parts), poly.nvars());
    q_cache().lock().unwrap().insert(key, Arc::new(poly));
}

/// Q_λ by summing over marked shifted tableaux.
///
/// Entries 1' < 1 < 2' < 2 < ⋯ are encoded as 2(k−1) for k' and 2(k−1)+1 for k.
pub fn tableau_oracle_q(lambda: &StrictPartition, nvars: usize) -> NVarPoly {
    let cells: Vec<(usize, usize)> = lambda
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (i..i + len).map(move |j| (i, j)))
        .collect();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, &c) in cells.iter().enumerate() {
        index.insert(c, k);
    }
    let mut out = NVarPoly::zero(nvars);
    let mut fill = vec![0usize; cells.len()];
    fn rec(
        pos: usize,
        cells: &[(usize, usize)],
        index: &HashMap<(usize, usize), usize>,
        fill: &mut Vec<usize>,
        nvars: usize,
        out: &mut NVarPoly,
    ) {
        if pos == cells.len() {
            let mut e = vec![0u8; nvars];
            for &v in fill.iter() {
                e[v / 2] += 1;
            }
            out.add_term(e, &Rational::ONE);
            return;
        }
        let (i, j) = cells[pos];
        for v in 0..2 * nvars {
            if let Some(&l) = j.checked_sub(1).and_then(|jj| index.get(&(i, jj))) {
                // rows: weakly increasing, a primed letter at most once
                if fill[l] > v || (fill[l] == v && v % 2 == 0) {
                    continue;
                }
            }
            if let Some(&u) = i.checked_sub(1).and_then(|ii| index.get(&(ii, j))) {
                // columns: weakly increasing, an unprimed letter at most once
                if fill[u] > v || (fill[u] == v && v % 2 == 1) {
                    continue;
                }
            }
            fill[pos] = v;
            rec(pos + 1, cells, index, fill, nvars, out);
        }
    }
    rec(0, &cells, &index, &mut fill, nvars, &mut out);
    out
}

/// A finite Q-linear combination of Schur Q-functions.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GammaElement {
    terms: BTreeMap<StrictPartition, Rational>,
}

impl GammaElement {
    pub fn zero() -> Self {
        GammaElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::basis(StrictPartition::empty())
    }

    /// Q_λ.
    pub fn basis(lambda: StrictPartition) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(lambda, Rational::ONE);
        GammaElement { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (StrictPartition, Rational)>) -> Self {
        let mut g = GammaElement::zero();
        for (l, c) in it {
            accumulate(&mut g.terms, l, &c);
        }
        g
    }

    pub fn terms(&self) -> &BTreeMap<StrictPartition, Rational> {
        &self.terms
    }

    pub fn coeff(&self, lambda: &StrictPartition) -> Rational {
        self.terms.get(lambda).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|l| l.size()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &GammaElement) -> GammaElement {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            accumulate(&mut out.terms, l.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> GammaElement {
        GammaElement::from_terms(self.terms.iter().map(|(l, c)| (l.clone(), c * s)))
    }

    pub fn to_poly(&self, nvars: usize) -> NVarPoly {
        let mut p = NVarPoly::zero(nvars);
        for (l, c) in &self.terms {
            p = p.axpy(c, &q_poly(l, nvars));
        }
        p
    }
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(l, c)| format!("{c}·Q({l})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Straightens a symmetric homogeneous polynomial into the Q-basis.
///
/// The lex-largest monomial of Q_μ is x^μ with coefficient 2^ℓ(μ), so peeling
/// off leading monomials is triangular.
pub fn expand_in_q(f: &NVarPoly, d: usize) -> Result<GammaElement, SymfuncError> {
    if !f.is_homogeneous(d) {
        return Err(SymfuncError::NotHomogeneous(d));
    }
    if !f.is_symmetric() {
        return Err(SymfuncError::NotSymmetric);
    }
    let nvars = f.nvars();
    let mut rest = f.clone();
    let mut out = GammaElement::zero();
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        let parts: Vec<usize> = lead.iter().take_while(|&&x| x > 0).map(|&x| x as usize).collect();
        let mu = StrictPartition::new(parts).map_err(|_| SymfuncError::NotInSpan(lead.clone()))?;
        let coef = &c / &Rational::from_int(1i64 << mu.len());
        rest = rest.axpy(&-&coef, &q_poly(&mu, nvars));
        accumulate(&mut out.terms, mu, &coef);
    }
    Ok(out)
}

/// Product in Γ, computed with as many variables as the total degree.
pub fn gamma_product(f: &GammaElement, g: &GammaElement) -> GammaElement {
    let total = f.max_degree() + g.max_degree();
    let nvars = total.max(1);
    let prod = f.to_poly(nvars).mul(&g.to_poly(nvars));
    let mut out = GammaElement::zero();
    for d in 0..=total {
        let part = prod.homogeneous_part(d);
        if part.is_zero() {
            continue;
        }
        let e = expand_in_q(&part, d).expect("products of Q-functions lie in Γ");
        out = out.add(&e);
    }
    out
}

/// Q₁·Q_λ by the combinatorial rule: 2 when ℓ is unchanged, 1 when it grows.
pub fn pieri(lambda: &StrictPartition) -> BTreeMap<StrictPartition, i64> {
    lambda
        .add_box()
        .into_iter()
        .map(|mu| {
            let c = if mu.len() == lambda.len() { 2 } else { 1 };
            (mu, c)
        })
        .collect()
}

fn ch_exponent(lambda: &StrictPartition) -> i64 {
    lambda.delta() as i64 - lambda.len() as i64
}

/// Multiplicities m^λ in [S_μ]·[S_ν] = Σ m^λ [S_λ], via ch[S_λ] = 2^((δ−ℓ)/2) Q_λ.
pub fn induct_mult(
    mu: &StrictPartition,
    nu: &StrictPartition,
) -> Result<BTreeMap<StrictPartition, Rational>, SymfuncError> {
    let prod = gamma_product(&GammaElement::basis(mu.clone()), &GammaElement::basis(nu.clone()));
    let mut out = BTreeMap::new();
    for (lambda, c) in prod.terms() {
        let factor = half_power_of_two(ch_exponent(mu) + ch_exponent(nu) - ch_exponent(lambda)).scale(c);
        let value = factor.as_rational().cloned().filter(Rational::is_integer).ok_or_else(|| {
            SymfuncError::NonIntegral { lambda: lambda.clone(), value: factor.to_string() }
        })?;
        out.insert(lambda.clone(), value);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("Cauchy identity fails in bidegree ({degree},{degree}) at y-exponent {y_exponent:?}")]
pub struct CauchyMismatch {
    pub degree: usize,
    pub y_exponent: Vec<u8>,
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

/// Checks ∏(1+xᵢyⱼ)/(1−xᵢyⱼ) = Σ_λ Q_λ(x)P_λ(y) through total degree `d` in each set.
///
/// The kernel factors over j as ∏ⱼ Σ_r q_r(x)yⱼʳ, so its y^b coefficient is ∏ⱼ q_{bⱼ}(x).
pub fn cauchy_check(d: usize, nvars: usize) -> Result<(), CauchyMismatch> {
    let mut lhs_memo: HashMap<Vec<u8>, NVarPoly> = HashMap::new();
    for k in 0..=d {
        let lambdas = enumerate_strict(k);
        let q_y: Vec<Arc<NVarPoly>> = lambdas.iter().map(|l| q_poly(l, nvars)).collect();
        let q_x = q_y.clone();
        for b in exponent_vectors(nvars, k) {
            let mut sorted = b.clone();
            sorted.sort_unstable_by(|a, c| c.cmp(a));
            let lhs = lhs_memo
                .entry(sorted.clone())
                .or_insert_with(|| {
                    sorted.iter().fold(NVarPoly::one(nvars), |acc, &r| acc.mul(&q_gen_cached(r as usize, nvars)))
                })
                .clone();
            let mut rhs = NVarPoly::zero(nvars);
            for ((lambda, qy), qx) in lambdas.iter().zip(&q_y).zip(&q_x) {
                let c = qy.coeff(&b);
                if c.is_zero() {
                    continue;
                }
                let p_coeff = &c / &Rational::from_int(1i64 << lambda.len());
                rhs = rhs.axpy(&p_coeff, qx);
            }
            if lhs != rhs {
                return Err(CauchyMismatch { degree: k, y_exponent: b });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: &[usize]) -> StrictPartition {
        StrictPartition::from_slice(p)
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn q_gen_small_cases() {
        let q1 = q_gen(1, 2);
        assert_eq!(q1.coeff(&[1, 0]), q(2));
        assert_eq!(q1.coeff(&[0, 1]), q(2));
        assert_eq!(q1.len(), 2);
        let q2 = q_gen(2, 2);
        assert_eq!(q2.coeff(&[2, 0]), q(2));
        assert_eq!(q2.coeff(&[0, 2]), q(2));
        assert_eq!(q2.coeff(&[1, 1]), q(4));
        assert_eq!(q2.len(), 3);
        assert_eq!(q_gen(0, 3), NVarPoly::one(3));
    }

    #[test]
    fn q_poly_small_cases() {
        assert_eq!(*q_poly(&sp(&[1]), 3), q_gen(1, 3));
        let q21 = q_gen(2, 3).mul(&q_gen(1, 3)).axpy(&q(-2), &q_gen(3, 3));
        assert_eq!(*q_poly(&sp(&[2, 1]), 3), q21);
        assert_eq!(q_poly(&sp(&[2]), 2).coeff(&[2, 0]), q(2));
    }

    #[test]
    fn oracle_small_cases() {
        let t = tableau_oracle_q(&sp(&[1]), 1);
        assert_eq!(t, NVarPoly::monomial(vec![1], q(2)));
        let t = tableau_oracle_q(&sp(&[2]), 1);
        assert_eq!(t, NVarPoly::monomial(vec![2], q(2)));
    }

    #[test]
    fn expand_examples() {
        let e = expand_in_q(&q_poly(&sp(&[3, 1]), 4), 4).unwrap();
        assert_eq!(e, GammaElement::basis(sp(&[3, 1])));
        let q1 = q_gen(1, 2);
        let e = expand_in_q(&q1.mul(&q1), 2).unwrap();
        assert_eq!(e, GammaElement::basis(sp(&[2])).scale(&q(2)));
        let e2 = NVarPoly::monomial(vec![1, 1], q(1));
        assert!(matches!(expand_in_q(&e2, 2), Err(SymfuncError::NotInSpan(_))));
        let asym = NVarPoly::monomial(vec![2, 0], q(1));
        assert_eq!(expand_in_q(&asym, 2), Err(SymfuncError::NotSymmetric));
    }

    #[test]
    fn product_examples() {
        let q1 = GammaElement::basis(sp(&[1]));
        assert_eq!(gamma_product(&q1, &q1), GammaElement::basis(sp(&[2])).scale(&q(2)));
        let p = gamma_product(&q1, &GammaElement::basis(sp(&[2])));
        assert_eq!(p, GammaElement::from_terms([(sp(&[3]), q(2)), (sp(&[2, 1]), q(1))]));
        let f = GammaElement::basis(sp(&[2, 1]));
        assert_eq!(gamma_product(&GammaElement::one(), &f), f);
    }

    #[test]
    fn pieri_examples() {
        let p = pieri(&sp(&[2]));
        assert_eq!(p, BTreeMap::from([(sp(&[3]), 2), (sp(&[2, 1]), 1)]));
        assert_eq!(pieri(&sp(&[])), BTreeMap::from([(sp(&[1]), 1)]));
        assert_eq!(pieri(&sp(&[3, 1])), BTreeMap::from([(sp(&[4, 1]), 2), (sp(&[3, 2]), 2)]));
    }

    #[test]
    fn induct_mult_examples() {
        assert_eq!(induct_mult(&sp(&[1]), &sp(&[1])).unwrap(), BTreeMap::from([(sp(&[2]), q(2))]));
        assert_eq!(induct_mult(&sp(&[1]), &sp(&[])).unwrap(), BTreeMap::from([(sp(&[1]), q(1))]));
        let m = induct_mult(&sp(&[1]), &sp(&[2])).unwrap();
        assert_eq!(m.keys().cloned().collect::<Vec<_>>(), vec![sp(&[2, 1]), sp(&[3])]);
    }

    #[test]
    fn cauchy_low_degrees() {
        assert_eq!(cauchy_check(0, 1), Ok(()));
        assert_eq!(cauchy_check(1, 2), Ok(()));
        assert_eq!(cauchy_check(3, 3), Ok(()));
    }

    #[test]
    fn wire_round_trip() {
        let p = q_poly(&sp(&[2, 1]), 3);
        let s = p.to_wire();
        assert_eq!(NVarPoly::from_wire(3, &s).unwrap(), *p);
        assert!(NVarPoly::from_wire(2, &s).is_err());
    }
}
