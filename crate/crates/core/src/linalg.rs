//! Sparse exact linear algebra: incremental row echelon forms and kernels.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::scalars::{Cyclo8, Rational};

/// The operations elimination needs from a scalar field.
pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::ZERO
    }
    fn one() -> Self {
        Rational::ONE
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_int(n)
    }
    fn inv(&self) -> Option<Self> {
        self.recip().ok()
    }
}

impl Field for Cyclo8 {
    fn zero() -> Self {
        Cyclo8::zero()
    }
    fn one() -> Self {
        Cyclo8::one()
    }
    fn is_zero(&self) -> bool {
        Cyclo8::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Cyclo8::from_int(n)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

/// A sparse vector: strictly increasing keys, no zero entries.
pub type SparseVec<K, F> = Vec<(K, F)>;

/// Builds a sparse vector from arbitrary (key, coefficient) pairs.
pub fn collect_sparse<K: Ord + Clone, F: Field>(entries: impl IntoIterator<Item = (K, F)>) -> SparseVec<K, F> {
    let mut acc: BTreeMap<K, F> = BTreeMap::new();
    for (k, c) in entries {
        accumulate(&mut acc, k, &c);
    }
    acc.into_iter().collect()
}

pub(crate) fn accumulate<K: Ord, F: Field>(acc: &mut BTreeMap<K, F>, k: K, c: &F) {
    if c.is_zero() {
        return;
    }
    match acc.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// a + s·b for sorted sparse vectors.
pub fn axpy<K: Ord + Clone, F: Field>(a: &[(K, F)], s: &F, b: &[(K, F)]) -> SparseVec<K, F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let c = s.mul(&b[j].1);
                if !c.is_zero() {
                    out.push((b[j].0.clone(), c));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = a[i].1.add(&s.mul(&b[j].1));
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn scale<K: Clone, F: Field>(v: &[(K, F)], s: &F) -> SparseVec<K, F> {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(k, c)| (k.clone(), c.mul(s))).collect()
}

/// Row echelon form of a subspace, each row normalized to leading coefficient 1.
///
/// Rows are indexed by their leading (smallest) key. Reduction against a row
/// only introduces keys larger than its pivot, so one ascending sweep suffices.
#[derive(Debug, Clone)]
pub struct Echelon<K, F> {
    rows: BTreeMap<K, SparseVec<K, F>>,
}

impl<K: Ord + Clone + Debug, F: Field> Default for Echelon<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone + Debug, F: Field> Echelon<K, F> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K, F>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &[(K, F)]) -> SparseVec<K, F> {
        let mut cur: SparseVec<K, F> = v.to_vec();
        let mut start = 0;
        loop {
            let hit = cur[start..]
                .iter()
                .position(|(k, _)| self.rows.contains_key(k))
                .map(|p| p + start);
            let Some(idx) = hit else { return cur };
            let (k, c) = cur[idx].clone();
            let row = &self.rows[&k];
            cur = axpy(&cur, &c.neg(), row);
            // entries before idx are untouched since row's keys are ≥ k
            start = idx;
        }
    }

    pub fn contains(&self, v: &[(K, F)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(K, F)]) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    fn insert_reduced(&mut self, r: SparseVec<K, F>) -> bool {
        let Some((k, c)) = r.first().cloned() else { return false };
        let inv = c.inv().expect("nonzero pivot");
        self.rows.insert(k, scale(&r, &inv));
        true
    }

    /// Whether every row of `other` lies in this span.
    pub fn contains_space(&self, other: &Echelon<K, F>) -> bool {
        other.rows().all(|r| self.contains(r))
    }
}

/// Kernel of the linear map sending the i-th basis vector to `images[i]`.
///
/// Kernel vectors are returned as sparse coordinate vectors over the indices.
pub fn kernel<K: Ord + Clone + Debug, F: Field>(images: &[SparseVec<K, F>]) -> Vec<SparseVec<usize, F>> {
    // rows carry (image part, combination of inputs producing it)
    let mut rows: BTreeMap<K, (SparseVec<K, F>, SparseVec<usize, F>)> = BTreeMap::new();
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut cur = img.clone();
        let mut combo: SparseVec<usize, F> = vec![(i, F::one())];
        let mut start = 0;
        loop {
            let hit = cur[start..].iter().position(|(k, _)| rows.contains_key(k)).map(|p| p + start);
            let Some(idx) = hit else { break };
            let (k, c) = cur[idx].clone();
            let (row, rc) = &rows[&k];
            let s = c.neg();
            cur = axpy(&cur, &s, row);
            combo = axpy(&combo, &s, rc);
            start = idx;
        }
        match cur.first().cloned() {
            None => out.push(combo),
            Some((k, c)) => {
                let inv = c.inv().expect("nonzero pivot");
                rows.insert(k, (scale(&cur, &inv), scale(&combo, &inv)));
            }
        }
    }
    out
}

/// Dense square matrix over a field, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let mut out: Matrix<F> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(F::zero(), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(&v[j]))
                    }
                })
            })
            .collect()
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut ech: Echelon<usize, F> = Echelon::new();
        for i in 0..self.rows {
            let row: SparseVec<usize, F> = (0..self.cols)
                .filter(|&j| !self.get(i, j).is_zero())
                .map(|j| (j, self.get(i, j).clone()))
                .collect();
            ech.insert(&row);
        }
        ech.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e: Echelon<u32, Rational> = Echelon::new();
        assert!(e.insert(&[(0, q(1)), (1, q(2))]));
        assert!(e.insert(&[(1, q(1)), (2, q(1))]));
        assert!(!e.insert(&[(0, q(2)), (1, q(5)), (2, q(1))]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&[(0, q(1)), (1, q(3)), (2, q(1))]));
        assert!(!e.contains(&[(2, q(1))]));
        assert!(!e.insert(&[]));
    }

    #[test]
    fn kernel_of_small_map() {
        // e0 → (1,1), e1 → (2,2), e2 → (0,1)
        let imgs: Vec<SparseVec<u8, Rational>> =
            vec![vec![(0, q(1)), (1, q(1))], vec![(0, q(2)), (1, q(2))], vec![(1, q(1))]];
        let k = kernel(&imgs);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![(0, q(-2)), (1, q(1))]);
    }

    #[test]
    fn axpy_cancels() {
        let a = vec![(1u8, q(1)), (3, q(2))];
        let b = vec![(1u8, q(1)), (2, q(1))];
        assert_eq!(axpy(&a, &q(-1), &b), vec![(2, q(-1)), (3, q(2))]);
    }

    #[test]
    fn matrix_rank_over_cyclo8() {
        let z = Cyclo8::zeta();
        let mut m: Matrix<Cyclo8> = Matrix::zeros(2, 2);
        m.set(0, 0, Cyclo8::one());
        m.set(0, 1, z.clone());
        m.set(1, 0, z.clone());
        m.set(1, 1, Cyclo8::from_int(-1));
        assert_eq!(m.rank(), 1);
        assert_eq!(Matrix::<Cyclo8>::identity(3).rank(), 3);
    }
}
