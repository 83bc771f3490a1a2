//! Super vector spaces, homogeneous super maps with the Koszul sign rule,
//! queer structures and half tensor products, and superalgebras given by
//! structure constants.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{accumulate, kernel, Matrix, SparseVec};
use crate::scalars::Cyclo8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuperError {
    #[error("map of parity {parity} sends basis line {line} of parity {from} to parity {to}")]
    NotHomogeneous { parity: u8, line: usize, from: u8, to: u8 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ζ-eigenspace has dimension {found}, expected {expected}")]
    EigenspaceDimension { found: usize, expected: usize },
    #[error("odd map does not square to the identity")]
    NotQueer,
}

/// A basis with a parity attached to each line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperSpace {
    labels: Vec<String>,
    parities: Vec<u8>,
}

impl SuperSpace {
    pub fn new(labels: Vec<String>, parities: Vec<u8>) -> Result<Self, SuperError> {
        if labels.len() != parities.len() {
            return Err(SuperError::Dimension("labels vs parities".into()));
        }
        Ok(SuperSpace { labels, parities: parities.into_iter().map(|p| p % 2).collect() })
    }

    /// ℂ^{n|n} with basis e₁..eₙ, f₁..fₙ.
    pub fn standard(n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("e{i}")).chain((1..=n).map(|i| format!("f{i}"))).collect();
        let parities = std::iter::repeat(0).take(n).chain(std::iter::repeat(1).take(n)).collect();
        SuperSpace { labels, parities }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parities[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// V⊗W with basis (i,j) ↦ i·dim W + j.
    pub fn tensor(&self, other: &SuperSpace) -> SuperSpace {
        let mut labels = Vec::with_capacity(self.dim() * other.dim());
        let mut parities = Vec::with_capacity(self.dim() * other.dim());
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                labels.push(format!("{}⊗{}", self.labels[i], other.labels[j]));
                parities.push((self.parities[i] + other.parities[j]) % 2);
            }
        }
        SuperSpace { labels, parities }
    }

    /// V[1].
    pub fn shift(&self) -> SuperSpace {
        SuperSpace { labels: self.labels.clone(), parities: self.parities.iter().map(|p| 1 - p).collect() }
    }
}

/// A homogeneous linear map between super spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperMap {
    pub domain: SuperSpace,
    pub codomain: SuperSpace,
    pub matrix: Matrix<Cyclo8>,
    pub parity: u8,
}

impl SuperMap {
    pub fn new(domain: SuperSpace, codomain: SuperSpace, matrix: Matrix<Cyclo8>, parity: u8) -> Result<Self, SuperError> {
        if matrix.rows != codomain.dim() || matrix.cols != domain.dim() {
            return Err(SuperError::Dimension(format!("{}x{} matrix", matrix.rows, matrix.cols)));
        }
        let parity = parity % 2;
        for c in 0..matrix.cols {
            for r in 0..matrix.rows {
                let (from, to) = (domain.parity(c), codomain.parity(r));
                if !matrix.get(r, c).is_zero() && (from + parity) % 2 != to {
                    return Err(SuperError::NotHomogeneous { parity, line: c, from, to });
                }
            }
        }
        Ok(SuperMap { domain, codomain, matrix, parity })
    }

    pub fn identity(space: &SuperSpace) -> Self {
        SuperMap { domain: space.clone(), codomain: space.clone(), matrix: Matrix::identity(space.dim()), parity: 0 }
    }

    /// Splits an arbitrary matrix into its even and odd homogeneous parts.
    pub fn split(domain: &SuperSpace, codomain: &SuperSpace, m: &Matrix<Cyclo8>) -> (SuperMap, SuperMap) {
        let mut parts = [Matrix::zeros(m.rows, m.cols), Matrix::zeros(m.rows, m.cols)];
        for r in 0..m.rows {
            for c in 0..m.cols {
                let p = ((domain.parity(c) + codomain.parity(r)) % 2) as usize;
                parts[p].set(r, c, m.get(r, c).clone());
            }
        }
        let [even, odd] = parts;
        (
            SuperMap { domain: domain.clone(), codomain: codomain.clone(), matrix: even, parity: 0 },
            SuperMap { domain: domain.clone(), codomain: codomain.clone(), matrix: odd, parity: 1 },
        )
    }

    /// self ∘ other.
    pub fn compose(&self, other: &SuperMap) -> SuperMap {
        SuperMap {
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&other.matrix),
            parity: (self.parity + other.parity) % 2,
        }
    }

    pub fn scale(&self, s: &Cyclo8) -> SuperMap {
        SuperMap { matrix: self.matrix.scale(s), ..self.clone() }
    }

    pub fn apply(&self, v: &[Cyclo8]) -> Vec<Cyclo8> {
        self.matrix.apply(v)
    }
}

/// f⊗g with (f⊗g)(v⊗w) = (−1)^{|g||v|} f(v)⊗g(w).
pub fn tensor_map(f: &SuperMap, g: &SuperMap) -> SuperMap {
    let (dv, dw) = (f.domain.dim(), g.domain.dim());
    let (cv, cw) = (f.codomain.dim(), g.codomain.dim());
    let mut m = Matrix::zeros(cv * cw, dv * dw);
    for i in 0..dv {
        let sign = if g.parity == 1 && f.domain.parity(i) == 1 { -Cyclo8::one() } else { Cyclo8::one() };
        for j in 0..dw {
            for a in 0..cv {
                let fa = f.matrix.get(a, i);
                if fa.is_zero() {
                    continue;
                }
                for b in 0..cw {
                    let gb = g.matrix.get(b, j);
                    if !gb.is_zero() {
                        m.set(a * cw + b, i * dw + j, &(fa * gb) * &sign);
                    }
                }
            }
        }
    }
    SuperMap {
        domain: f.domain.tensor(&g.domain),
        codomain: f.codomain.tensor(&g.codomain),
        matrix: m,
        parity: (f.parity + g.parity) % 2,
    }
}

/// The symmetry x⊗y ↦ (−1)^{|x||y|} y⊗x of V⊗W → W⊗V.
pub fn braiding(v: &SuperSpace, w: &SuperSpace) -> SuperMap {
    let (dv, dw) = (v.dim(), w.dim());
    let mut m = Matrix::zeros(dv * dw, dv * dw);
    for i in 0..dv {
        for j in 0..dw {
            let s = if v.parity(i) == 1 && w.parity(j) == 1 { -1 } else { 1 };
            m.set(j * dv + i, i * dw + j, Cyclo8::from_int(s));
        }
    }
    SuperMap { domain: v.tensor(w), codomain: w.tensor(v), matrix: m, parity: 0 }
}

/// A super space with an odd map α satisfying α² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QueerStructure {
    pub carrier: SuperSpace,
    pub alpha: SuperMap,
}

impl QueerStructure {
    pub fn new(alpha: SuperMap) -> Result<Self, SuperError> {
        if alpha.parity != 1 || alpha.domain != alpha.codomain {
            return Err(SuperError::NotQueer);
        }
        if alpha.compose(&alpha).matrix != Matrix::identity(alpha.domain.dim()) {
            return Err(SuperError::NotQueer);
        }
        Ok(QueerStructure { carrier: alpha.domain.clone(), alpha })
    }

    /// α(eᵢ) = fᵢ, α(fᵢ) = eᵢ on ℂ^{n|n}.
    pub fn standard(n: usize) -> Self {
        let space = SuperSpace::standard(n);
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m.set(n + i, i, Cyclo8::one());
            m.set(i, n + i, Cyclo8::one());
        }
        QueerStructure { carrier: space.clone(), alpha: SuperMap { domain: space.clone(), codomain: space, matrix: m, parity: 1 } }
    }
}

/// The ζ-eigenspace of α⊗β inside V⊗W.
#[derive(Debug, Clone)]
pub struct HalfTensor {
    pub space: SuperSpace,
    /// Columns are the basis vectors, in coordinates of V⊗W.
    pub embedding: Matrix<Cyclo8>,
}

pub fn half_tensor(v: &QueerStructure, w: &QueerStructure) -> Result<HalfTensor, SuperError> {
    let ab = tensor_map(&v.alpha, &w.alpha);
    let full = v.carrier.tensor(&w.carrier);
    let d = full.dim();
    let shifted = ab.matrix.sub(&Matrix::identity(d).scale(&Cyclo8::zeta()));
    // column i of the shifted map, split by parity so the kernel basis is homogeneous
    let mut basis: Vec<Vec<Cyclo8>> = Vec::new();
    let mut parities = Vec::new();
    for p in 0..2u8 {
        let idx: Vec<usize> = (0..d).filter(|&i| full.parity(i) == p).collect();
        let images: Vec<SparseVec<usize, Cyclo8>> = idx
            .iter()
            .map(|&c| (0..d).filter(|&r| !shifted.get(r, c).is_zero()).map(|r| (r, shifted.get(r, c).clone())).collect())
            .collect();
        for k in kernel(&images) {
            let mut v = vec![Cyclo8::zero(); d];
            for (i, c) in k {
                v[idx[i]] = c;
            }
            basis.push(v);
            parities.push(p);
        }
    }
    if 2 * basis.len() != d {
        return Err(SuperError::EigenspaceDimension { found: basis.len(), expected: d / 2 });
    }
    let mut emb = Matrix::zeros(d, basis.len());
    for (c, v) in basis.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            emb.set(r, c, x.clone());
        }
    }
    let labels = (0..basis.len()).map(|i| format!("u{i}")).collect();
    Ok(HalfTensor { space: SuperSpace { labels, parities }, embedding: emb })
}

/// Sparse element of a structure-constant algebra.
pub type AlgElement = SparseVec<usize, Cyclo8>;

/// A finite-dimensional superalgebra given by products of basis elements.
#[derive(Debug, Clone, PartialEq)]
pub struct StructAlgebra {
    parities: Vec<u8>,
    unit: usize,
    table: Vec<Vec<AlgElement>>,
}

impl StructAlgebra {
    pub fn new(parities: Vec<u8>, unit: usize, table: Vec<Vec<AlgElement>>) -> Result<Self, SuperError> {
        let d = parities.len();
        if table.len() != d || table.iter().any(|r| r.len() != d) || unit >= d {
            return Err(SuperError::Dimension("structure table".into()));
        }
        Ok(StructAlgebra { parities, unit, table })
    }

    /// The Clifford superalgebra Cl_n, basis indexed by bitmasks of generators.
    pub fn clifford(n: usize) -> Self {
        let d = 1usize << n;
        let parities = (0..d).map(|m: usize| (m.count_ones() % 2) as u8).collect();
        let table = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let sign = clifford_sign(a as u32, b as u32);
                        vec![(a ^ b, Cyclo8::from_int(sign))]
                    })
                    .collect()
            })
            .collect();
        StructAlgebra { parities, unit: 0, table }
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parities[i]
    }

    pub fn unit(&self) -> AlgElement {
        vec![(self.unit, Cyclo8::one())]
    }

    pub fn basis(&self, i: usize) -> AlgElement {
        vec![(i, Cyclo8::one())]
    }

    pub fn mult(&self, x: &AlgElement, y: &AlgElement) -> AlgElement {
        let mut acc = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in &self.table[*i][*j] {
                    accumulate(&mut acc, *k, &(&ab * c));
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Same space with x•y = (−1)^{|x||y|} yx.
    pub fn opposite(&self) -> StructAlgebra {
        let d = self.dim();
        let table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let prod = self.table[j][i].clone();
                        if self.parities[i] == 1 && self.parities[j] == 1 {
                            prod.into_iter().map(|(k, c)| (k, -c)).collect()
                        } else {
                            prod
                        }
                    })
                    .collect()
            })
            .collect();
        StructAlgebra { parities: self.parities.clone(), unit: self.unit, table }
    }
}

/// Sign from reordering αᵃ·αᵇ (bitmask monomials) into increasing order, with αᵢ² = 1.
pub fn clifford_sign(a: u32, b: u32) -> i64 {
    // each generator of b passes the generators of a with larger index
    let mut swaps = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}
