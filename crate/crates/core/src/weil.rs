//! The Weil representation of `Sp_{2n}(k)` in the Schrödinger model on functions on `k^n`.
//!
//! With `ρ(a, α) f(x) = ψ(α·x + ½ α·a) f(x + a)` the operators below satisfy
//! `ω(g) ρ(w) ω(g)^{-1} = ρ(g w)`:
//!
//! * `m(L) = diag(L, L^{-T})`: `f ↦ ϑ(det L) f(L^{-1} x)`
//! * `u(B) = [[1, 0], [B, 1]]`: `f ↦ ψ(-½ xᵀ B x) f(x)`
//! * `J = [[0, 1], [-1, 0]]`: `f ↦ c Σ_y ψ(x·y) f(y)`
//!
//! The scalar `c` is pinned down by the relations `ω(J)^2 = ω(-1)` and
//! `(ω(J) ω(u(1)))^3 = ω(-1)`, so the assignment is a genuine representation.

use crate::chars::{AddChar, CyclicGroup, GroupKind, MultChar};
use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};
use crate::groups::{dim_fixed_space, Family, GroupSpec, Matrix};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// Largest model dimension `q^n` for which operators are built.
pub const MAX_WEIL_DIM: u64 = 1000;

/// A dense square matrix with cyclotomic entries, acting by `(A f)(x) = Σ_y A[x][y] f(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op {
    dim: usize,
    data: Vec<Cyclo>,
}

impl Op {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Cyclo::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        for i in 0..dim {
            op.data[i * dim + i] = Cyclo::one();
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Cyclo {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }
}

/// The Weil representation attached to `ψ`, with operators cached per group element.
pub struct WeilRep {
    tower: Arc<FieldTower>,
    n: usize,
    psi: AddChar,
    points: Vec<Vec<FieldElement>>,
    weyl: Arc<Op>,
    minus_one: Arc<Op>,
    cache: RwLock<HashMap<Matrix, Arc<Op>>>,
}

fn element_index(x: FieldElement) -> usize {
    x.exponent().map_or(0, |l| l as usize + 1)
}

/// The Legendre-type character `ϑ` of `k^×`.
fn theta(tower: &FieldTower, x: FieldElement) -> Result<i128> {
    let x = tower.into_subfield(x, 1)?;
    match x.exponent() {
        None => Err(Error::DivisionByZero),
        Some(l) => Ok(if l % 2 == 0 { 1 } else { -1 }),
    }
}

impl WeilRep {
    pub fn new(tower: Arc<FieldTower>, n: usize, psi: AddChar) -> Result<Self> {
        let q = tower.q();
        if q.checked_pow(n as u32).is_none_or(|d| d > MAX_WEIL_DIM) {
            return Err(Error::CapExceeded(format!(
                "Weil model of dimension {q}^{n} exceeds {MAX_WEIL_DIM}"
            )));
        }
        if psi.p != tower.p() {
            return Err(Error::InvalidCharacter("ψ has the wrong characteristic".into()));
        }
        let els = tower.elements(1);
        let mut points = vec![vec![]];
        for _ in 0..n {
            points = points
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
        let mut rep = Self {
            tower,
            n,
            psi,
            points,
            weyl: Arc::new(Op::identity(1)),
            minus_one: Arc::new(Op::identity(1)),
            cache: RwLock::new(HashMap::new()),
        };
        let t = rep.tower.clone();
        let minus = Matrix::scalar(&t, n, t.from_int(1, -1));
        rep.minus_one = Arc::new(rep.levi(&minus)?);
        rep.weyl = Arc::new(rep.normalized_weyl()?);
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn psi(&self) -> AddChar {
        self.psi
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    fn index(&self, x: &[FieldElement]) -> usize {
        let q = self.tower.q() as usize;
        x.iter().fold(0, |acc, &c| acc * q + element_index(c))
    }

    fn psi_value(&self, x: FieldElement) -> Cyclo {
        self.psi.eval(&self.tower, x)
    }

    fn dot(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let t = &self.tower;
        x.iter()
            .zip(y)
            .fold(t.zero(1), |acc, (&a, &b)| t.add(acc, t.mul(a, b)))
    }

    /// `f ↦ ϑ(det L) f(L^{-1} x)`.
    fn levi(&self, l: &Matrix) -> Result<Op> {
        let t = &self.tower;
        let sign = theta(t, l.det(t))?;
        let linv = l.inverse(t)?;
        let dim = self.dim();
        let mut op = Op::zero(dim);
        for (i, x) in self.points.iter().enumerate() {
            let j = self.index(&linv.apply(t, x));
            op.data[i * dim + j] = Cyclo::from_int(sign);
        }
        Ok(op)
    }

    /// `f ↦ ψ(-½ xᵀ B x) f(x)` for symmetric `B`.
    fn siegel(&self, b: &Matrix) -> Op {
        let t = &self.tower;
        let minus_half = t.neg(t.inv(t.from_int(1, 2)).expect("q is odd"));
        let dim = self.dim();
        let mut op = Op::zero(dim);
        for (i, x) in self.points.iter().enumerate() {
            let qf = self.dot(x, &b.apply(t, x));
            op.data[i * dim + i] = self.psi_value(t.mul(minus_half, qf));
        }
        op
    }

    fn fourier(&self) -> Op {
        let dim = self.dim();
        let mut op = Op::zero(dim);
        for (i, x) in self.points.iter().enumerate() {
            for (j, y) in self.points.iter().enumerate() {
                op.data[i * dim + j] = self.psi_value(self.dot(x, y));
            }
        }
        op
    }

    fn normalized_weyl(&self) -> Result<Op> {
        let t = &self.tower;
        let w0 = self.fourier();
        let u1 = self.siegel(&Matrix::identity(t, self.n, 1));
        let step = w0.mul(&u1);
        let cube = step.mul(&step).mul(&step);
        // cube = λ·ω(-1); read λ off the entry at x = y = 0, where ω(-1) is ±1
        let lambda = cube.get(0, 0) * self.minus_one.get(0, 0);
        if cube != self.minus_one.scale(&lambda) {
            return Err(Error::Internal(
                "Weyl relation fails for the Fourier transform".into(),
            ));
        }
        let sign = theta(t, t.from_int(1, -1))?.pow(self.n as u32);
        let qn = (t.q() as i128).pow(self.n as u32);
        let lambda_inv = lambda
            .inv()
            .ok_or_else(|| Error::Internal("vanishing Weyl scalar".into()))?;
        let c = lambda_inv.scale(sign * qn, 1);
        let w = w0.scale(&c);
        if w.mul(&w) != *self.minus_one {
            return Err(Error::Internal("ω(J)^2 != ω(-1)".into()));
        }
        Ok(w)
    }

    fn weyl_inverse(&self) -> Op {
        self.minus_one.mul(&self.weyl)
    }

    fn blocks(&self, g: &Matrix) -> [Matrix; 4] {
        let n = self.n;
        let block = |r0: usize, c0: usize| {
            let rows = (0..n)
                .map(|i| (0..n).map(|j| g.get(r0 + i, c0 + j)).collect())
                .collect();
            Matrix::from_rows(rows).expect("square block")
        };
        [block(0, 0), block(0, n), block(n, 0), block(n, n)]
    }

    fn symmetric_matrices(&self) -> Vec<Matrix> {
        let t = &self.tower;
        let n = self.n;
        let els = t.elements(1);
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut out = vec![Matrix::scalar(t, n, t.zero(1))];
        for &(i, j) in &slots {
            out = out
                .into_iter()
                .flat_map(|m| {
                    els.iter().map(move |&x| {
                        let mut m = m.clone();
                        m.set(i, j, x);
                        m.set(j, i, x);
                        m
                    })
                })
                .collect();
        }
        out
    }

    /// `ω(g)` for `g = u(X) J m(B^{-T}) u(Y)` when the upper right block `B` is invertible.
    fn big_cell(&self, g: &Matrix) -> Result<Option<Op>> {
        let t = &self.tower;
        let [a, b, c, d] = self.blocks(g);
        let Ok(binv) = b.inverse(t) else {
            return Ok(None);
        };
        let l = binv.transpose();
        let x = d.mul(t, &binv);
        let y = binv.mul(t, &a);
        let check = x.mul(t, &b).mul(t, &y).sub(t, &l);
        if check != c {
            return Err(Error::NotInGroup("matrix is not symplectic".into()));
        }
        let op = self
            .siegel(&x)
            .mul(&self.weyl)
            .mul(&self.levi(&l)?)
            .mul(&self.siegel(&y));
        Ok(Some(op))
    }

    fn compute(&self, g: &Matrix) -> Result<Op> {
        let t = &self.tower;
        let n = self.n;
        let [a, b, c, d] = self.blocks(g);
        if b.rank(t) == n {
            return Ok(self.big_cell(g)?.expect("invertible block"));
        }
        if b.rank(t) == 0 {
            // g = u(C A^{-1}) m(A)
            let x = c.mul(t, &a.inverse(t)?);
            return Ok(self.siegel(&x).mul(&self.levi(&a)?));
        }
        for z in self.symmetric_matrices() {
            if b.sub(t, &z.mul(t, &d).scale(t, t.from_int(1, -1))).rank(t) < n {
                continue;
            }
            // n(Z) g has invertible upper right block B + Z D
            let nz = upper_unipotent(t, &z);
            let shifted = nz.mul(t, g);
            let Some(rest) = self.big_cell(&shifted)? else {
                continue;
            };
            let upper = self.weyl.mul(&self.siegel(&z)).mul(&self.weyl_inverse());
            return Ok(upper.mul(&rest));
        }
        Err(Error::NotInGroup("no Bruhat factorization found".into()))
    }

    /// `ω(g)` for `g ∈ Sp_{2n}(k)`.
    pub fn operator(&self, g: &Matrix) -> Result<Arc<Op>> {
        if g.dim() != 2 * self.n || g.degree() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}x{0} matrix over k",
                2 * self.n
            )));
        }
        if let Some(op) = self.cache.read().expect("Weil cache poisoned").get(g) {
            return Ok(op.clone());
        }
        let sp = GroupSpec::new(&self.tower, Family::Sp, self.n);
        if !sp.contains(&self.tower, g)? {
            return Err(Error::NotInGroup("matrix is not symplectic".into()));
        }
        let op = Arc::new(self.compute(g)?);
        Ok(self
            .cache
            .write()
            .expect("Weil cache poisoned")
            .entry(g.clone())
            .or_insert(op)
            .clone())
    }

    pub fn trace(&self, g: &Matrix) -> Result<Cyclo> {
        Ok(self.operator(g)?.trace())
    }
}

/// `n(Z) = [[1, Z], [0, 1]]`.
fn upper_unipotent(tower: &FieldTower, z: &Matrix) -> Matrix {
    let n = z.dim();
    let mut m = Matrix::identity(tower, 2 * n, 1);
    for i in 0..n {
        for j in 0..n {
            m.set(i, n + j, z.get(i, j));
        }
    }
    m
}

/// Builds the Weil representation of `Sp_{2n}(k)`.
pub fn build_weil_rep(tower: Arc<FieldTower>, n: usize, psi: AddChar) -> Result<WeilRep> {
    WeilRep::new(tower, n, psi)
}

/// `h ↦ tr ω(ι(h))` on the given unitary elements, `ι` the embedding into `Sp_{2n}`.
pub fn restrict_to_unitary(
    rep: &WeilRep,
    embedding: &crate::groups::UnitaryEmbedding,
    elements: &[Matrix],
) -> Result<Vec<Cyclo>> {
    elements
        .iter()
        .map(|h| rep.trace(&embedding.embed(rep.tower(), h)?))
        .collect()
}

/// One block of a maximal torus of `Sp_{2n}(k)`: `k_j^×` acting on `k_j ⊕ k_j` by
/// `(s, s^{-1})`, or `k^1_{2j}` acting on `k_{2j}` by multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpBlock {
    Split(u32),
    NormOne(u32),
}

impl SpBlock {
    pub fn j(&self) -> u32 {
        match *self {
            SpBlock::Split(j) | SpBlock::NormOne(j) => j,
        }
    }

    pub fn group(&self, q: u64) -> CyclicGroup {
        match *self {
            SpBlock::Split(j) => CyclicGroup::split(q, j),
            SpBlock::NormOne(j) => CyclicGroup::norm_one(q, j),
        }
    }
}

/// Every maximal torus type of `Sp_{2n}` as a sorted list of blocks with `Σ j = n`.
pub fn sp_torus_shapes(n: u32) -> Vec<Vec<SpBlock>> {
    fn go(n: u32, max: SpBlock, prefix: &mut Vec<SpBlock>, out: &mut Vec<Vec<SpBlock>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for j in 1..=n {
            for b in [SpBlock::Split(j), SpBlock::NormOne(j)] {
                if b > max {
                    continue;
                }
                prefix.push(b);
                go(n - j, b, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, SpBlock::NormOne(n), &mut Vec::new(), &mut out);
    out
}

/// `(-1)^l ϑ_T(s) q^{½ dim V^s}` for `s` given by per-block discrete logs; `l` counts the
/// nontrivial norm-one coordinates.
pub fn weil_char_torus_formula(q: u64, blocks: &[SpBlock], logs: &[u64]) -> Result<Cyclo> {
    if blocks.len() != logs.len() {
        return Err(Error::DimensionMismatch("one coordinate per block".into()));
    }
    let factors: Vec<CyclicGroup> = blocks.iter().map(|b| b.group(q)).collect();
    let theta_t = crate::chars::theta_t(&factors);
    let mut l = 0;
    let mut half_dim = 0;
    for ((b, g), &k) in blocks.iter().zip(&factors).zip(logs) {
        let trivial = k % g.order() == 0;
        if trivial {
            half_dim += b.j();
        } else if matches!(b, SpBlock::NormOne(_)) {
            l += 1;
        }
    }
    let sign = if l % 2 == 0 { 1 } else { -1 };
    let value = theta_t.value_at_logs(logs);
    Ok(value.scale(sign * (q as i128).pow(half_dim), 1))
}

/// Realizes elements of a maximal torus of `Sp_{2n}(k)` as matrices in the standard
/// symplectic basis.
pub struct SpTorus {
    pub blocks: Vec<SpBlock>,
    bases: Vec<(Vec<FieldElement>, Vec<FieldElement>)>,
}

impl SpTorus {
    pub fn new(tower: &FieldTower, blocks: &[SpBlock]) -> Result<Self> {
        let bases = blocks
            .iter()
            .map(|b| {
                let j = b.j();
                let g = tower.generator(j)?;
                let basis: Vec<_> = (0..j as i64).map(|i| tower.pow(g, i)).collect::<Result<_>>()?;
                let dual = trace_dual_basis(tower, &basis)?;
                Ok((basis, dual))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            blocks: blocks.to_vec(),
            bases,
        })
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.j() as usize).sum()
    }

    /// The symplectic matrix of the torus element with per-block discrete logs `logs`.
    pub fn element(&self, tower: &FieldTower, logs: &[u64]) -> Result<Matrix> {
        let n = self.n();
        let mut cols = vec![vec![]; 2 * n];
        let mut offset = 0;
        for ((block, (basis, dual)), &k) in self.blocks.iter().zip(&self.bases).zip(logs) {
            let j = block.j() as usize;
            let s = block.group(tower.q()).element(tower, k);
            for i in 0..j {
                let (e_img, f_img) = match block {
                    SpBlock::Split(_) => {
                        let sinv = tower.inv(s)?;
                        (
                            (tower.mul(s, basis[i]), tower.zero(j as u32)),
                            (tower.zero(j as u32), tower.mul(sinv, dual[i])),
                        )
                    }
                    SpBlock::NormOne(_) => {
                        let eta = norm_one_eta(tower, j as u32)?;
                        let e = tower.mul(s, tower.embed(basis[i], 2 * j as u32)?);
                        let f = tower.mul(s, tower.mul(eta, tower.embed(dual[i], 2 * j as u32)?));
                        (
                            split_k2j(tower, e, eta, j as u32)?,
                            split_k2j(tower, f, eta, j as u32)?,
                        )
                    }
                };
                cols[offset + i] = self.global(tower, n, offset, j, basis, dual, e_img)?;
                cols[n + offset + i] = self.global(tower, n, offset, j, basis, dual, f_img)?;
            }
            offset += j;
        }
        Ok(Matrix::from_columns(&cols))
    }

    /// Global coordinates of a block vector `(a, b)` meaning `Σ a-part in basis, b-part in dual`.
    #[allow(clippy::too_many_arguments)]
    fn global(
        &self,
        tower: &FieldTower,
        n: usize,
        offset: usize,
        j: usize,
        basis: &[FieldElement],
        dual: &[FieldElement],
        (a, b): (FieldElement, FieldElement),
    ) -> Result<Vec<FieldElement>> {
        let mut v = vec![tower.zero(1); 2 * n];
        for i in 0..j {
            // coefficient of basis[i] in a is Tr(a·dual[i]); of dual[i] in b is Tr(b·basis[i])
            v[offset + i] = tower.relative_trace(tower.mul(a, dual[i]), 1)?;
            v[n + offset + i] = tower.relative_trace(tower.mul(b, basis[i]), 1)?;
        }
        Ok(v)
    }
}

/// `η_j = 1/(2δ_j)` for `δ_j = g_{2j}^{(q^j+1)/2}`, which satisfies `δ_j^{q^j} = -δ_j`.
fn norm_one_eta(tower: &FieldTower, j: u32) -> Result<FieldElement> {
    let delta = tower.from_exponent(2 * j, tower.q().pow(j).div_ceil(2));
    tower.inv(tower.mul(tower.from_int(2 * j, 2), delta))
}

/// Writes `v ∈ k_{2j}` as `a + η b` with `a, b ∈ k_j`.
fn split_k2j(
    tower: &FieldTower,
    v: FieldElement,
    eta: FieldElement,
    j: u32,
) -> Result<(FieldElement, FieldElement)> {
    let vq = tower.frobenius_power(v, i64::from(j));
    let two = tower.from_int(2 * j, 2);
    let a = tower.div(tower.add(v, vq), two)?;
    let b = tower.div(tower.sub(v, vq), tower.mul(two, eta))?;
    Ok((tower.into_subfield(a, j)?, tower.into_subfield(b, j)?))
}

/// The basis of `k_j` dual to `basis` under `(x, y) ↦ Tr_{k_j/k}(xy)`.
fn trace_dual_basis(tower: &FieldTower, basis: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let j = basis.len();
    let rows = basis
        .iter()
        .map(|&x| {
            basis
                .iter()
                .map(|&y| tower.relative_trace(tower.mul(x, y), 1))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let gram_inv = Matrix::from_rows(rows)?.inverse(tower)?;
    Ok((0..j)
        .map(|k| {
            (0..j).fold(tower.zero(j as u32), |acc, l| {
                let c = tower.embed(gram_inv.get(k, l), j as u32).expect("k ⊂ k_j");
                tower.add(acc, tower.mul(c, basis[l]))
            })
        })
        .collect())
}

/// `(-1)^n ϑ_T(s) (-q)^{dim_{k_2} V^s}` for a semisimple `s ∈ U_n(k)`, `n <= 2`, with torus
/// coordinates read off from the eigenvalues.
pub fn unitary_weil_char(tower: &FieldTower, s: &Matrix) -> Result<Cyclo> {
    let n = s.dim();
    let q = tower.q();
    let fixed = dim_fixed_space(tower, s) as u32;
    let theta_value = match n {
        1 => {
            let u = CyclicGroup::norm_one(q, 1);
            crate::chars::quadratic_char(q, 1, GroupKind::NormOne)
                .value_at_logs(&[u.log_of(tower, s.get(0, 0))?])
        }
        2 => {
            use crate::groups::{classify_gl2_element, Gl2Class};
            let (a, b) = match classify_gl2_element(tower, s)? {
                Gl2Class::Central(z) => (z, z),
                Gl2Class::Split(a, b) => (a, b),
                Gl2Class::NonSemisimple(_) => {
                    return Err(Error::InvalidJordanPair("element is not semisimple".into()))
                }
                Gl2Class::Anisotropic(_) => {
                    return Err(Error::Internal(
                        "unitary element with eigenvalues outside k_2".into(),
                    ))
                }
            };
            let u = CyclicGroup::norm_one(q, 1);
            if let (Ok(la), Ok(lb)) = (u.log_of(tower, a), u.log_of(tower, b)) {
                let th = crate::chars::theta_t(&[u, u]);
                th.value_at_logs(&[la, lb])
            } else {
                // eigenvalues x, x^{-q}: the torus k_2^×
                let th = MultChar::single(CyclicGroup::split(q, 2), ((q * q - 1) / 2) as i64);
                th.value_at_logs(&[a.exponent().ok_or(Error::DivisionByZero)?])
            }
        }
        _ => return Err(Error::UnsupportedRank(format!("unitary formula for n = {n}"))),
    };
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let power = (-(q as i128)).pow(fixed);
    Ok(theta_value.scale(sign * power, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{DeltaChoice, UnitaryEmbedding, DEFAULT_GROUP_CAP};

    fn setup(n: usize) -> (Arc<FieldTower>, WeilRep) {
        let t = Arc::new(FieldTower::new(3, 1, 4).unwrap());
        let rep = build_weil_rep(t.clone(), n, AddChar::new(3, 1).unwrap()).unwrap();
        (t, rep)
    }

    #[test]
    fn dimensions_and_identity() {
        for n in 1..=2 {
            let (t, rep) = setup(n);
            assert_eq!(rep.dim(), 3usize.pow(n as u32));
            let id = Matrix::identity(&t, 2 * n, 1);
            assert!(rep.operator(&id).unwrap().is_identity());
            assert_eq!(rep.trace(&id).unwrap(), Cyclo::from_int(3i128.pow(n as u32)));
        }
        let t = Arc::new(FieldTower::new(3, 1, 4).unwrap());
        assert!(build_weil_rep(t, 7, AddChar::new(3, 1).unwrap()).is_err());
    }

    #[test]
    fn minus_identity_trace() {
        let (t, rep) = setup(1);
        let m = Matrix::scalar(&t, 2, t.from_int(1, -1));
        assert_eq!(rep.trace(&m).unwrap(), Cyclo::from_int(-1));
    }

    #[test]
    fn multiplicative_on_sp2() {
        let (t, rep) = setup(1);
        let sp = GroupSpec::new(&t, Family::Sp, 1)
            .enumerate(&t, DEFAULT_GROUP_CAP)
            .unwrap();
        for g in &sp {
            for h in &sp {
                let lhs = rep.operator(&g.mul(&t, h)).unwrap();
                let rhs = rep.operator(g).unwrap().mul(&rep.operator(h).unwrap());
                assert_eq!(*lhs, rhs);
            }
        }
    }

    #[test]
    fn torus_formula_sp2() {
        let (t, rep) = setup(1);
        for blocks in sp_torus_shapes(1) {
            let torus = SpTorus::new(&t, &blocks).unwrap();
            let order = blocks[0].group(3).order();
            for k in 0..order {
                let s = torus.element(&t, &[k]).unwrap();
                let formula = weil_char_torus_formula(3, &blocks, &[k]).unwrap();
                assert_eq!(rep.trace(&s).unwrap(), formula, "{blocks:?} {k}");
            }
        }
    }

    #[test]
    fn unitary_formula_n1() {
        let (t, rep) = setup(1);
        let emb = UnitaryEmbedding::new(&t, DeltaChoice::Standard);
        let u1 = GroupSpec::new(&t, Family::U, 1)
            .enumerate(&t, DEFAULT_GROUP_CAP)
            .unwrap();
        let traces = restrict_to_unitary(&rep, &emb, &u1).unwrap();
        for (h, tr) in u1.iter().zip(&traces) {
            assert_eq!(*tr, unitary_weil_char(&t, h).unwrap());
        }
        let norm: Cyclo = traces.iter().map(|x| x * &x.conj()).sum();
        assert!(norm.scale(1, 4).is_rational_integer());
    }

    #[test]
    fn torus_formula_sp4() {
        let (t, rep) = setup(2);
        for blocks in sp_torus_shapes(2) {
            let torus = SpTorus::new(&t, &blocks).unwrap();
            let factors: Vec<_> = blocks.iter().map(|b| b.group(3)).collect();
            for logs in crate::chars::group_logs(&factors) {
                let s = torus.element(&t, &logs).unwrap();
                let formula = weil_char_torus_formula(3, &blocks, &logs).unwrap();
                assert_eq!(rep.trace(&s).unwrap(), formula, "{blocks:?} {logs:?}");
            }
        }
    }

    #[test]
    fn unitary_n2_formula_and_products() {
        let (t, rep) = setup(2);
        let emb = UnitaryEmbedding::new(&t, DeltaChoice::Standard);
        let u2 = GroupSpec::new(&t, Family::U, 2)
            .enumerate(&t, DEFAULT_GROUP_CAP)
            .unwrap();
        let traces = restrict_to_unitary(&rep, &emb, &u2).unwrap();
        for (h, tr) in u2.iter().zip(&traces) {
            if h.order(&t) % 3 != 0 {
                assert_eq!(*tr, unitary_weil_char(&t, h).unwrap());
            }
        }
        for g in u2.iter().step_by(11) {
            for h in u2.iter().step_by(13) {
                let lhs = rep.operator(&emb.embed(&t, &g.mul(&t, h)).unwrap()).unwrap();
                let a = rep.operator(&emb.embed(&t, g).unwrap()).unwrap();
                let b = rep.operator(&emb.embed(&t, h).unwrap()).unwrap();
                assert_eq!(*lhs, a.mul(&b));
            }
        }
    }

    #[test]
    fn sp_torus_shape_counts() {
        assert_eq!(sp_torus_shapes(1).len(), 2);
        assert_eq!(sp_torus_shapes(2).len(), 5);
    }
}
