//! Small matrix groups over the tower: `GL_n(k_2)`, `U_n(k)`, `Sp_{2n}(k)`, the embedding
//! `U_n ↪ Sp_{2n}`, Jordan decomposition and the classification of `GL_2(k_2)` elements.

use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};
use serde::{Deserialize, Serialize};

/// Default cap on the size of an enumerated group.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// A square matrix over a single field `k_d` of the tower, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds the matrix whose `i`-th column is `cols[i]`.
    pub fn from_columns(cols: &[Vec<FieldElement>]) -> Self {
        let n = cols.len();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for c in cols {
                data.push(c[i]);
            }
        }
        Self { n, data }
    }

    pub fn identity(tower: &FieldTower, n: usize, degree: u32) -> Self {
        Self::scalar(tower, n, tower.one(degree))
    }

    pub fn scalar(tower: &FieldTower, n: usize, z: FieldElement) -> Self {
        let mut data = vec![tower.zero(z.degree()); n * n];
        for i in 0..n {
            data[i * n + i] = z;
        }
        Self { n, data }
    }

    pub fn diagonal(tower: &FieldTower, entries: &[FieldElement]) -> Self {
        let n = entries.len();
        let mut data = vec![tower.zero(entries[0].degree()); n * n];
        for (i, &z) in entries.iter().enumerate() {
            data[i * n + i] = z;
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.data[0].degree()
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.n + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, tower: &FieldTower, other: &Self) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = tower.zero(self.degree().max(other.degree()));
                for k in 0..n {
                    acc = tower.add(acc, tower.mul(self.get(i, k), other.get(k, j)));
                }
                data.push(acc);
            }
        }
        Self { n, data }
    }

    pub fn apply(&self, tower: &FieldTower, v: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(tower.zero(self.degree()), |acc, k| {
                    tower.add(acc, tower.mul(self.get(i, k), v[k]))
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        Self { n, data }
    }

    /// Entrywise `x ↦ x^{q^i}`.
    pub fn frobenius(&self, tower: &FieldTower, i: i64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&x| tower.frobenius_power(x, i)).collect(),
        }
    }

    pub fn sub(&self, tower: &FieldTower, other: &Self) -> Self {
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| tower.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, tower: &FieldTower, z: FieldElement) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&a| tower.mul(z, a)).collect(),
        }
    }

    /// Row echelon form; returns the rank and the determinant.
    fn eliminate(&self, tower: &FieldTower) -> (usize, FieldElement) {
        let n = self.n;
        let mut m = self.data.clone();
        let mut det = tower.one(self.degree());
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !m[r * n + col].is_zero()) else {
                det = tower.zero(self.degree());
                continue;
            };
            if pivot != rank {
                for c in 0..n {
                    m.swap(pivot * n + c, rank * n + c);
                }
                det = tower.neg(det);
            }
            let p = m[rank * n + col];
            det = tower.mul(det, p);
            let pinv = tower.inv(p).expect("pivot is nonzero");
            for r in rank + 1..n {
                let f = tower.mul(m[r * n + col], pinv);
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    m[r * n + c] = tower.sub(m[r * n + c], tower.mul(f, m[rank * n + c]));
                }
            }
            rank += 1;
        }
        if rank < n {
            det = tower.zero(self.degree());
        }
        (rank, det)
    }

    pub fn rank(&self, tower: &FieldTower) -> usize {
        self.eliminate(tower).0
    }

    pub fn det(&self, tower: &FieldTower) -> FieldElement {
        self.eliminate(tower).1
    }

    pub fn inverse(&self, tower: &FieldTower) -> Result<Self> {
        let n = self.n;
        let d = self.degree();
        let mut a = self.data.clone();
        let mut b = Self::identity(tower, n, d).data;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
                b.swap(pivot * n + c, col * n + c);
            }
            let pinv = tower.inv(a[col * n + col])?;
            for c in 0..n {
                a[col * n + c] = tower.mul(a[col * n + c], pinv);
                b[col * n + c] = tower.mul(b[col * n + c], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = tower.sub(a[r * n + c], tower.mul(f, a[col * n + c]));
                    b[r * n + c] = tower.sub(b[r * n + c], tower.mul(f, b[col * n + c]));
                }
            }
        }
        Ok(Self { n, data: b })
    }

    pub fn pow(&self, tower: &FieldTower, mut k: u64) -> Self {
        let mut result = Self::identity(tower, self.n, self.degree());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(tower, &base);
            }
            base = base.mul(tower, &base);
            k >>= 1;
        }
        result
    }

    pub fn is_identity(&self, tower: &FieldTower) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    tower.is_one(x)
                } else {
                    x.is_zero()
                }
            })
        })
    }

    /// Multiplicative order of an invertible matrix.
    pub fn order(&self, tower: &FieldTower) -> u64 {
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_identity(tower) {
            x = x.mul(tower, self);
            k += 1;
        }
        k
    }

    /// Re-tags every entry as an element of `k_d`.
    pub fn into_degree(&self, tower: &FieldTower, d: u32) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|&x| {
                if d >= x.degree() {
                    tower.embed(x, d)
                } else {
                    tower.into_subfield(x, d)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n: self.n, data })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `GL_n(k_2)`.
    GL,
    /// `U_n(k)` inside `GL_n(k_2)`, preserving `h(x, y) = Σ x_i^q y_i`.
    U,
    /// `Sp_{2n}(k)` for the form with Gram matrix `[[0, I], [-I, 0]]`.
    Sp,
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    pub form: Option<Matrix>,
}

impl GroupSpec {
    pub fn new(tower: &FieldTower, family: Family, n: usize) -> Self {
        let form = match family {
            Family::GL => None,
            Family::U => Some(Matrix::identity(tower, n, 2)),
            Family::Sp => Some(symplectic_gram(tower, n)),
        };
        Self { family, n, form }
    }

    /// Matrix size: `n` for `GL_n` and `U_n`, `2n` for `Sp_{2n}`.
    pub fn matrix_dim(&self) -> usize {
        match self.family {
            Family::Sp => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn entry_degree(&self) -> u32 {
        match self.family {
            Family::Sp => 1,
            _ => 2,
        }
    }

    pub fn order_formula(&self, q: u64) -> u64 {
        let n = self.n as u32;
        match self.family {
            Family::GL => {
                let big = q * q;
                (0..n).map(|i| big.pow(n) - big.pow(i)).product()
            }
            Family::U => {
                let sign = |i: u32| if i.is_multiple_of(2) { 1i64 } else { -1 };
                q.pow(n * (n - 1) / 2)
                    * (1..=n)
                        .map(|i| (q.pow(i) as i64 - sign(i)) as u64)
                        .product::<u64>()
            }
            Family::Sp => q.pow(n * n) * (1..=n).map(|i| q.pow(2 * i) - 1).product::<u64>(),
        }
    }

    pub fn contains(&self, tower: &FieldTower, g: &Matrix) -> Result<bool> {
        if g.dim() != self.matrix_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a group of {}x{} matrices",
                g.dim(),
                g.dim(),
                self.matrix_dim(),
                self.matrix_dim()
            )));
        }
        Ok(match self.family {
            Family::GL => !g.det(tower).is_zero(),
            Family::U => unitary_membership(tower, g)?,
            Family::Sp => {
                let j = self.form.as_ref().expect("symplectic form");
                &g.transpose().mul(tower, j).mul(tower, g) == j
            }
        })
    }

    /// All elements, in a deterministic order.
    pub fn enumerate(&self, tower: &FieldTower, cap: u64) -> Result<Vec<Matrix>> {
        let order = self.order_formula(tower.q());
        if order > cap {
            return Err(Error::CapExceeded(format!(
                "{:?}_{} has {order} elements, cap is {cap}",
                self.family, self.n
            )));
        }
        let d = self.entry_degree();
        let dim = self.matrix_dim();
        let vectors = all_vectors(tower, dim, d);
        let mut out = Vec::with_capacity(order as usize);
        let mut cols = Vec::with_capacity(dim);
        match self.family {
            Family::GL => extend_gl(tower, &vectors, &mut cols, dim, &mut out),
            Family::U => extend_unitary(tower, &vectors, &mut cols, dim, &mut out),
            Family::Sp => {
                let mut slots = vec![None; dim];
                extend_symplectic(tower, &vectors, &mut slots, 0, self.n, &mut out);
            }
        }
        if out.len() as u64 != order {
            return Err(Error::Internal(format!(
                "enumerated {} elements, expected {order}",
                out.len()
            )));
        }
        Ok(out)
    }
}

fn all_vectors(tower: &FieldTower, dim: usize, d: u32) -> Vec<Vec<FieldElement>> {
    let els = tower.elements(d);
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                els.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn extend_gl(
    tower: &FieldTower,
    vectors: &[Vec<FieldElement>],
    cols: &mut Vec<Vec<FieldElement>>,
    dim: usize,
    out: &mut Vec<Matrix>,
) {
    if cols.len() == dim {
        out.push(Matrix::from_columns(cols));
        return;
    }
    for v in vectors {
        cols.push(v.clone());
        if independent(tower, cols, dim) {
            extend_gl(tower, vectors, cols, dim, out);
        }
        cols.pop();
    }
}

fn independent(tower: &FieldTower, cols: &[Vec<FieldElement>], dim: usize) -> bool {
    // pad to a square matrix with zero columns and compare ranks
    let d = cols[0][0].degree();
    let mut padded = cols.to_vec();
    while padded.len() < dim {
        padded.push(vec![tower.zero(d); dim]);
    }
    Matrix::from_columns(&padded).rank(tower) == cols.len()
}

/// `h(x, y) = Σ x_i^q y_i`.
pub fn hermitian(tower: &FieldTower, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    x.iter().zip(y).fold(tower.zero(2), |acc, (&a, &b)| {
        tower.add(acc, tower.mul(tower.frobenius_power(a, 1), b))
    })
}

fn extend_unitary(
    tower: &FieldTower,
    vectors: &[Vec<FieldElement>],
    cols: &mut Vec<Vec<FieldElement>>,
    dim: usize,
    out: &mut Vec<Matrix>,
) {
    if cols.len() == dim {
        out.push(Matrix::from_columns(cols));
        return;
    }
    for v in vectors {
        if !tower.is_one(hermitian(tower, v, v)) {
            continue;
        }
        if cols.iter().any(|c| !hermitian(tower, c, v).is_zero()) {
            continue;
        }
        cols.push(v.clone());
        extend_unitary(tower, vectors, cols, dim, out);
        cols.pop();
    }
}

/// `⟨x, y⟩ = Σ_i (x_i y_{n+i} - x_{n+i} y_i)` on `k^{2n}`.
pub fn symplectic_pairing(tower: &FieldTower, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    let n = x.len() / 2;
    (0..n).fold(tower.zero(x[0].degree()), |acc, i| {
        let t = tower.sub(tower.mul(x[i], y[n + i]), tower.mul(x[n + i], y[i]));
        tower.add(acc, t)
    })
}

/// Gram matrix `[[0, I], [-I, 0]]`.
pub fn symplectic_gram(tower: &FieldTower, n: usize) -> Matrix {
    let mut m = Matrix::scalar(tower, 2 * n, tower.zero(1));
    for i in 0..n {
        m.set(i, n + i, tower.one(1));
        m.set(n + i, i, tower.from_int(1, -1));
    }
    m
}

fn extend_symplectic(
    tower: &FieldTower,
    vectors: &[Vec<FieldElement>],
    slots: &mut Vec<Option<Vec<FieldElement>>>,
    i: usize,
    n: usize,
    out: &mut Vec<Matrix>,
) {
    if i == n {
        let cols: Vec<_> = slots.iter().map(|c| c.clone().expect("filled")).collect();
        out.push(Matrix::from_columns(&cols));
        return;
    }
    let orthogonal = |v: &Vec<FieldElement>, slots: &[Option<Vec<FieldElement>>]| {
        slots
            .iter()
            .flatten()
            .all(|c| symplectic_pairing(tower, c, v).is_zero())
    };
    for e in vectors {
        if e.iter().all(|x| x.is_zero()) || !orthogonal(e, slots) {
            continue;
        }
        slots[i] = Some(e.clone());
        for f in vectors {
            if !tower.is_one(symplectic_pairing(tower, e, f)) {
                continue;
            }
            let others: Vec<_> = slots
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, c)| c.clone())
                .collect();
            if !orthogonal(f, &others) {
                continue;
            }
            slots[n + i] = Some(f.clone());
            extend_symplectic(tower, vectors, slots, i + 1, n, out);
            slots[n + i] = None;
        }
        slots[i] = None;
    }
}

/// `conj(g)^T · g = I` for the identity hermitian Gram matrix.
pub fn unitary_membership(tower: &FieldTower, g: &Matrix) -> Result<bool> {
    if g.degree() != 2 {
        return Err(Error::DimensionMismatch(
            "unitary matrices have entries in k_2".into(),
        ));
    }
    let lhs = g.frobenius(tower, 1).transpose().mul(tower, g);
    Ok(lhs.is_identity(tower))
}

/// Which trace-zero element defines the symplectic structure on `k_2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaChoice {
    /// `δ = g_2^{(q+1)/2}`.
    #[default]
    Standard,
    /// `δ·g_1`, another trace-zero element.
    Alternate,
}

/// `V = k_2^n` as a symplectic `k`-space with `⟨x, y⟩ = Tr_{k_2/k}(δ h(x, y))`.
///
/// The `k`-basis is `e_1, …, e_n, f_1, …, f_n` with `f_i = η e_i`, `η = 1/(2δ)`, which is a
/// standard symplectic basis.
#[derive(Clone, Debug)]
pub struct UnitaryEmbedding {
    pub delta: FieldElement,
    pub eta: FieldElement,
    two_eta_inv: FieldElement,
    half: FieldElement,
}

impl UnitaryEmbedding {
    pub fn new(tower: &FieldTower, choice: DeltaChoice) -> Self {
        let q = tower.q();
        let mut delta = tower.from_exponent(2, q.div_ceil(2));
        if choice == DeltaChoice::Alternate {
            delta = tower.mul(delta, tower.embed(tower.from_exponent(1, 1), 2).expect("k ⊂ k_2"));
        }
        let two = tower.from_int(2, 2);
        let eta = tower.inv(tower.mul(two, delta)).expect("δ is nonzero");
        Self {
            delta,
            eta,
            two_eta_inv: tower.inv(tower.mul(two, eta)).expect("η is nonzero"),
            half: tower.inv(two).expect("q is odd"),
        }
    }

    /// Coordinates in `k^{2n}` of a vector of `k_2^n`.
    pub fn coordinates(&self, tower: &FieldTower, v: &[FieldElement]) -> Vec<FieldElement> {
        let n = v.len();
        let mut out = vec![tower.zero(1); 2 * n];
        for (i, &x) in v.iter().enumerate() {
            let xq = tower.frobenius_power(x, 1);
            let a = tower.mul(tower.add(x, xq), self.half);
            let b = tower.mul(tower.sub(x, xq), self.two_eta_inv);
            out[i] = tower.into_subfield(a, 1).expect("a is fixed by Frobenius");
            out[n + i] = tower.into_subfield(b, 1).expect("b is fixed by Frobenius");
        }
        out
    }

    pub fn vector(&self, tower: &FieldTower, coords: &[FieldElement]) -> Vec<FieldElement> {
        let n = coords.len() / 2;
        (0..n)
            .map(|i| {
                let a = tower.embed(coords[i], 2).expect("k ⊂ k_2");
                let b = tower.embed(coords[n + i], 2).expect("k ⊂ k_2");
                tower.add(a, tower.mul(b, self.eta))
            })
            .collect()
    }

    pub fn pairing(&self, tower: &FieldTower, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let h = tower.mul(self.delta, hermitian(tower, x, y));
        tower.relative_trace(h, 1).expect("1 divides 2")
    }

    /// The matrix in `Sp_{2n}(k)` of a `k_2`-linear map of `k_2^n`.
    pub fn embed_linear(&self, tower: &FieldTower, g: &Matrix) -> Matrix {
        let n = g.dim();
        let cols: Vec<Vec<FieldElement>> = (0..2 * n)
            .map(|k| {
                let mut basis = vec![tower.zero(1); 2 * n];
                basis[k] = tower.one(1);
                let v = self.vector(tower, &basis);
                self.coordinates(tower, &g.apply(tower, &v))
            })
            .collect();
        Matrix::from_columns(&cols)
    }

    pub fn embed(&self, tower: &FieldTower, g: &Matrix) -> Result<Matrix> {
        if !unitary_membership(tower, g)? {
            return Err(Error::NotInGroup("matrix is not unitary".into()));
        }
        Ok(self.embed_linear(tower, g))
    }
}

/// `embed_unitary_in_symplectic` with the standard `δ`.
pub fn embed_unitary_in_symplectic(tower: &FieldTower, g: &Matrix) -> Result<Matrix> {
    UnitaryEmbedding::new(tower, DeltaChoice::Standard).embed(tower, g)
}

fn p_part(mut m: u64, p: u64) -> u64 {
    let mut out = 1;
    while m.is_multiple_of(p) {
        m /= p;
        out *= p;
    }
    out
}

/// `g = su = us` with `s` of order prime to `p` and `u` of `p`-power order.
pub fn jordan_decomposition(tower: &FieldTower, g: &Matrix) -> (Matrix, Matrix) {
    let m = g.order(tower);
    let mp = p_part(m, tower.p());
    let mq = m / mp;
    // x ≡ 1 mod m_{p'}, x ≡ 0 mod m_p
    let x = (0..m).find(|&x| x % mp == 0 && x % mq == 1 % mq).expect("CRT");
    let s = g.pow(tower, x);
    let u = g.pow(tower, (m + 1 - x) % m);
    (s, u)
}

/// `dim ker(g - 1)` over the field of the entries.
pub fn dim_fixed_space(tower: &FieldTower, g: &Matrix) -> usize {
    let id = Matrix::identity(tower, g.dim(), g.degree());
    g.dim() - g.sub(tower, &id).rank(tower)
}

/// Conjugacy type of an element of `GL_2(k_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gl2Class {
    Central(FieldElement),
    /// A single eigenvalue with a nontrivial Jordan block.
    NonSemisimple(FieldElement),
    /// Distinct eigenvalues in `k_2`.
    Split(FieldElement, FieldElement),
    /// Eigenvalues `x, x^{q^2}` with `x ∈ k_4 \ k_2`.
    Anisotropic(FieldElement),
}

pub fn classify_gl2_element(tower: &FieldTower, g: &Matrix) -> Result<Gl2Class> {
    if g.dim() != 2 || g.degree() != 2 {
        return Err(Error::DimensionMismatch("expected a 2x2 matrix over k_2".into()));
    }
    let tr = tower.add(g.get(0, 0), g.get(1, 1));
    let det = g.det(tower);
    let four = tower.from_int(2, 4);
    let disc = tower.sub(tower.mul(tr, tr), tower.mul(four, det));
    let half = tower.inv(tower.from_int(2, 2))?;
    if disc.is_zero() {
        let z = tower.mul(tr, half);
        let scalar = g.get(0, 1).is_zero() && g.get(1, 0).is_zero();
        return Ok(if scalar {
            Gl2Class::Central(z)
        } else {
            Gl2Class::NonSemisimple(z)
        });
    }
    if let Some(r) = tower.sqrt(disc) {
        let a = tower.mul(tower.add(tr, r), half);
        let b = tower.mul(tower.sub(tr, r), half);
        return Ok(Gl2Class::Split(a.min(b), a.max(b)));
    }
    let d4 = tower.embed(disc, 4)?;
    let r = tower
        .sqrt(d4)
        .ok_or_else(|| Error::Internal("k_2 element without root in k_4".into()))?;
    let x = tower.mul(tower.add(tower.embed(tr, 4)?, r), tower.embed(half, 4)?);
    let y = tower.frobenius_power(x, 2);
    Ok(Gl2Class::Anisotropic(x.min(y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower() -> FieldTower {
        FieldTower::new(3, 1, 4).unwrap()
    }

    #[test]
    fn orders_by_formula_and_enumeration() {
        let t = tower();
        for (family, n, expected) in [
            (Family::U, 1, 4),
            (Family::U, 2, 96),
            (Family::GL, 1, 8),
            (Family::Sp, 1, 24),
        ] {
            let spec = GroupSpec::new(&t, family, n);
            assert_eq!(spec.order_formula(3), expected);
            let els = spec.enumerate(&t, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(els.len() as u64, expected);
            for g in els.iter().step_by(5) {
                assert!(spec.contains(&t, g).unwrap());
            }
        }
        assert_eq!(GroupSpec::new(&t, Family::GL, 2).order_formula(3), 5760);
        assert_eq!(GroupSpec::new(&t, Family::Sp, 2).order_formula(3), 51840);
        assert!(GroupSpec::new(&t, Family::Sp, 2).enumerate(&t, 1000).is_err());
    }

    #[test]
    fn unitary_scalars() {
        let t = tower();
        assert!(unitary_membership(&t, &Matrix::identity(&t, 2, 2)).unwrap());
        for k in 0..8 {
            let z = t.from_exponent(2, k);
            let g = Matrix::scalar(&t, 2, z);
            assert_eq!(unitary_membership(&t, &g).unwrap(), k % 2 == 0);
        }
    }

    #[test]
    fn embedding_is_symplectic_homomorphism() {
        let t = tower();
        let u2 = GroupSpec::new(&t, Family::U, 2)
            .enumerate(&t, DEFAULT_GROUP_CAP)
            .unwrap();
        let sp = GroupSpec::new(&t, Family::Sp, 2);
        for choice in [DeltaChoice::Standard, DeltaChoice::Alternate] {
            let emb = UnitaryEmbedding::new(&t, choice);
            assert!(t.frobenius_power(emb.delta, 1) == t.neg(emb.delta));
            let images: Vec<_> = u2.iter().map(|g| emb.embed(&t, g).unwrap()).collect();
            for (g, img) in u2.iter().zip(&images) {
                assert!(sp.contains(&t, img).unwrap());
                assert_eq!(dim_fixed_space(&t, img), 2 * dim_fixed_space(&t, g));
            }
            let mut distinct = images.clone();
            distinct.sort();
            distinct.dedup();
            assert_eq!(distinct.len(), 96);
            for (a, ia) in u2.iter().zip(&images).step_by(7) {
                for (b, ib) in u2.iter().zip(&images).step_by(5) {
                    let lhs = emb.embed(&t, &a.mul(&t, b)).unwrap();
                    assert_eq!(lhs, ia.mul(&t, ib));
                }
            }
            assert!(emb
                .embed(&t, &Matrix::identity(&t, 2, 2))
                .unwrap()
                .is_identity(&t));
        }
    }

    #[test]
    fn pairing_matches_standard_form() {
        let t = tower();
        let emb = UnitaryEmbedding::new(&t, DeltaChoice::Standard);
        let vs = all_vectors(&t, 4, 1);
        for x in vs.iter().step_by(7) {
            for y in vs.iter().step_by(3) {
                let lhs = emb.pairing(&t, &emb.vector(&t, x), &emb.vector(&t, y));
                assert_eq!(lhs, symplectic_pairing(&t, x, y));
            }
            assert_eq!(&emb.coordinates(&t, &emb.vector(&t, x)), x);
        }
    }

    #[test]
    fn jordan_parts() {
        let t = tower();
        let u2 = GroupSpec::new(&t, Family::U, 2)
            .enumerate(&t, DEFAULT_GROUP_CAP)
            .unwrap();
        for g in &u2 {
            let (s, u) = jordan_decomposition(&t, g);
            assert_eq!(&s.mul(&t, &u), g);
            assert_eq!(s.mul(&t, &u), u.mul(&t, &s));
            assert!(!(s.order(&t) % 3 == 0));
            assert_eq!(3u64.pow(u.order(&t).ilog(3)), u.order(&t));
        }
        let id = Matrix::identity(&t, 2, 2);
        assert_eq!(jordan_decomposition(&t, &id), (id.clone(), id.clone()));
    }

    #[test]
    fn fixed_spaces() {
        let t = tower();
        let id = Matrix::identity(&t, 4, 1);
        assert_eq!(dim_fixed_space(&t, &id), 4);
        assert_eq!(dim_fixed_space(&t, &Matrix::scalar(&t, 4, t.from_int(1, -1))), 0);
        let mut u = Matrix::identity(&t, 2, 2);
        u.set(0, 1, t.one(2));
        assert_eq!(dim_fixed_space(&t, &u), 1);
    }

    #[test]
    fn gl2_classes() {
        let t = tower();
        let id = Matrix::identity(&t, 2, 2);
        assert_eq!(
            classify_gl2_element(&t, &id).unwrap(),
            Gl2Class::Central(t.one(2))
        );
        let (a, b) = (t.from_exponent(2, 1), t.from_exponent(2, 3));
        let d = Matrix::diagonal(&t, &[a, b]);
        assert_eq!(
            classify_gl2_element(&t, &d).unwrap(),
            Gl2Class::Split(a.min(b), a.max(b))
        );
        let mut u = id.clone();
        u.set(1, 0, t.one(2));
        assert_eq!(
            classify_gl2_element(&t, &u).unwrap(),
            Gl2Class::NonSemisimple(t.one(2))
        );
        // companion matrix of the minimal polynomial of g_4 over k_2
        let x = t.generator(4).unwrap();
        let xq = t.frobenius_power(x, 2);
        let tr = t.into_subfield(t.add(x, xq), 2).unwrap();
        let nm = t.into_subfield(t.mul(x, xq), 2).unwrap();
        let c = Matrix::from_rows(vec![vec![t.zero(2), t.neg(nm)], vec![t.one(2), tr]]).unwrap();
        assert_eq!(
            classify_gl2_element(&t, &c).unwrap(),
            Gl2Class::Anisotropic(x.min(xq))
        );
    }
}
