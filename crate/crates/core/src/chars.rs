//! Characters of the cyclic groups `k_j^×` and `k^1_{2j}`, their products, additive
//! characters of finite fields, and the quadratic characters `ϑ_j`, `ϑ'_j`, `ϑ_T`.

use crate::cyclotomic::Cyclo;
use crate::dl::{weyl_group_data, TorusCharacter, TorusShape};
use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};
use serde::{Deserialize, Serialize};

/// Largest product group whose value table is enumerated.
pub const MAX_TABLE_GROUP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    /// `k_j^×`, cyclic of order `q^j - 1`, generated by `g_j`.
    Split,
    /// `k^1_{2j}`, cyclic of order `q^j + 1`, generated by `g_{2j}^{q^j - 1}`.
    NormOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicGroup {
    pub kind: GroupKind,
    pub j: u32,
    pub q: u64,
}

impl CyclicGroup {
    pub fn split(q: u64, j: u32) -> Self {
        Self {
            kind: GroupKind::Split,
            j,
            q,
        }
    }

    pub fn norm_one(q: u64, j: u32) -> Self {
        Self {
            kind: GroupKind::NormOne,
            j,
            q,
        }
    }

    pub fn order(&self) -> u64 {
        match self.kind {
            GroupKind::Split => self.q.pow(self.j) - 1,
            GroupKind::NormOne => self.q.pow(self.j) + 1,
        }
    }

    /// Degree over `k` of the field on which Frobenius acts.
    pub fn field_degree(&self) -> u32 {
        match self.kind {
            GroupKind::Split => self.j,
            GroupKind::NormOne => 2 * self.j,
        }
    }

    /// Discrete log of `x` relative to the fixed generator of this group.
    pub fn log_of(&self, tower: &FieldTower, x: FieldElement) -> Result<u64> {
        let d = self.field_degree();
        let y = tower.into_subfield(x, d)?;
        let l = y.exponent().ok_or(Error::DivisionByZero)?;
        match self.kind {
            GroupKind::Split => Ok(l),
            GroupKind::NormOne => {
                let step = self.q.pow(self.j) - 1;
                if l % step != 0 {
                    return Err(Error::GroupMismatch(format!(
                        "element is not of norm one in k_{d}"
                    )));
                }
                Ok(l / step)
            }
        }
    }

    /// The element with discrete log `k`.
    pub fn element(&self, tower: &FieldTower, k: u64) -> FieldElement {
        match self.kind {
            GroupKind::Split => tower.from_exponent(self.j, k),
            GroupKind::NormOne => tower.from_exponent(2 * self.j, k * (self.q.pow(self.j) - 1)),
        }
    }
}

/// A character of a finite product of cyclic groups: `χ(g^k) = ζ_m^{a k}` on each factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultChar {
    pub factors: Vec<CyclicGroup>,
    pub exponents: Vec<u64>,
}

impl MultChar {
    pub fn new(factors: Vec<CyclicGroup>, exponents: Vec<i64>) -> Result<Self> {
        if factors.len() != exponents.len() {
            return Err(Error::InvalidCharacter(format!(
                "{} exponents for {} factors",
                exponents.len(),
                factors.len()
            )));
        }
        let exponents = factors
            .iter()
            .zip(&exponents)
            .map(|(g, &a)| a.rem_euclid(g.order() as i64) as u64)
            .collect();
        Ok(Self { factors, exponents })
    }

    pub fn single(group: CyclicGroup, a: i64) -> Self {
        Self::new(vec![group], vec![a]).expect("one exponent for one factor")
    }

    pub fn trivial(factors: Vec<CyclicGroup>) -> Self {
        let exponents = vec![0; factors.len()];
        Self { factors, exponents }
    }

    pub fn group_order(&self) -> u64 {
        self.factors.iter().map(CyclicGroup::order).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    fn check_same_group(&self, other: &Self) -> Result<()> {
        if self.factors != other.factors {
            return Err(Error::GroupMismatch(format!(
                "{:?} vs {:?}",
                self.factors, other.factors
            )));
        }
        Ok(())
    }

    /// Value at the element whose per-factor discrete logs are `logs`.
    pub fn value_at_logs(&self, logs: &[u64]) -> Cyclo {
        let (num, den) = self.phase_at_logs(logs);
        Cyclo::root_of_unity(den as u32, num as i64)
    }

    /// The value at `logs` as a fraction `num/den` of a full turn, reduced to a common
    /// denominator equal to the lcm of the factor orders.
    pub fn phase_at_logs(&self, logs: &[u64]) -> (u64, u64) {
        use num_integer::Integer;
        let den = self.factors.iter().fold(1u64, |acc, g| acc.lcm(&g.order()));
        let mut num: u128 = 0;
        for ((g, &a), &k) in self.factors.iter().zip(&self.exponents).zip(logs) {
            let m = g.order();
            let local = (u128::from(a) * u128::from(k % m)) % u128::from(m);
            num += local * u128::from(den / m);
        }
        ((num % u128::from(den)) as u64, den)
    }

    /// Value at a tuple of field elements, one per factor.
    pub fn eval(&self, tower: &FieldTower, xs: &[FieldElement]) -> Result<Cyclo> {
        if xs.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} factors",
                xs.len(),
                self.factors.len()
            )));
        }
        let logs = self
            .factors
            .iter()
            .zip(xs)
            .map(|(g, &x)| g.log_of(tower, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.value_at_logs(&logs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        let exponents = self
            .factors
            .iter()
            .zip(self.exponents.iter().zip(&other.exponents))
            .map(|(g, (&a, &b))| (a + b) % g.order())
            .collect();
        Ok(Self {
            factors: self.factors.clone(),
            exponents,
        })
    }

    pub fn pow(&self, k: i64) -> Self {
        let exponents = self
            .factors
            .iter()
            .zip(&self.exponents)
            .map(|(g, &a)| {
                let m = i128::from(g.order());
                (i128::from(a) * i128::from(k)).rem_euclid(m) as u64
            })
            .collect();
        Self {
            factors: self.factors.clone(),
            exponents,
        }
    }

    /// All values, indexed by per-factor discrete logs in lexicographic order.
    pub fn values(&self) -> Result<Vec<Cyclo>> {
        let size = self.group_order();
        if size > MAX_TABLE_GROUP {
            return Err(Error::CapExceeded(format!("group of order {size}")));
        }
        Ok(group_logs(&self.factors)
            .map(|logs| self.value_at_logs(&logs))
            .collect())
    }
}

/// Every element of a product of cyclic groups as per-factor logs, lexicographically.
pub fn group_logs(factors: &[CyclicGroup]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let size: u64 = factors.iter().map(CyclicGroup::order).product();
    (0..size).map(move |mut idx| {
        let mut logs = vec![0u64; factors.len()];
        for (i, g) in factors.iter().enumerate().rev() {
            logs[i] = idx % g.order();
            idx /= g.order();
        }
        logs
    })
}

/// The unique character of order two on `k_j^×` or `k^1_{2j}`.
pub fn quadratic_char(q: u64, j: u32, kind: GroupKind) -> MultChar {
    let g = CyclicGroup { kind, j, q };
    MultChar::single(g, (g.order() / 2) as i64)
}

/// The product of the quadratic characters of the factors.
pub fn theta_t(factors: &[CyclicGroup]) -> MultChar {
    MultChar {
        factors: factors.to_vec(),
        exponents: factors.iter().map(|g| g.order() / 2).collect(),
    }
}

fn single_factor(chi: &MultChar) -> Result<CyclicGroup> {
    match chi.factors.as_slice() {
        [g] => Ok(*g),
        _ => Err(Error::GroupMismatch(
            "expected a character of a single cyclic factor".into(),
        )),
    }
}

/// `{χ^{q^i} : 0 <= i < d}` for a character of a single factor attached to `k_d`.
pub fn galois_orbit(chi: &MultChar) -> Result<Vec<MultChar>> {
    let g = single_factor(chi)?;
    let mut out: Vec<MultChar> = (0..g.field_degree())
        .map(|i| chi.pow(g.q.pow(i) as i64))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn in_gamma_orbit(chi: &MultChar, theta: &MultChar) -> Result<bool> {
    chi.check_same_group(theta)?;
    Ok(galois_orbit(theta)?.contains(chi))
}

/// The canonical subgroups a character can be restricted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restriction {
    /// `k_d^× ⊂ k_{d'}^×` through the fixed embedding.
    Subfield { degree: u32 },
    /// `k^1_{2j} ⊂ k_{2j}^×`.
    NormOne,
    /// `k_{2j}^× → (k_{2j}^×)^2`, `x ↦ (x, x^{sign·q^j})`.
    FrobeniusPair { sign: i8 },
}

pub fn restrict_char(chi: &MultChar, to: Restriction) -> Result<MultChar> {
    match to {
        Restriction::Subfield { degree } => {
            let g = single_factor(chi)?;
            if g.kind != GroupKind::Split || degree == 0 || g.j % degree != 0 {
                return Err(Error::GroupMismatch(format!(
                    "k_{degree}^× is not a canonical subgroup of {g:?}"
                )));
            }
            Ok(MultChar::single(
                CyclicGroup::split(g.q, degree),
                chi.exponents[0] as i64,
            ))
        }
        Restriction::NormOne => {
            let g = single_factor(chi)?;
            if g.kind != GroupKind::Split || g.j % 2 != 0 {
                return Err(Error::GroupMismatch(format!("no norm-one subgroup in {g:?}")));
            }
            Ok(MultChar::single(
                CyclicGroup::norm_one(g.q, g.j / 2),
                chi.exponents[0] as i64,
            ))
        }
        Restriction::FrobeniusPair { sign } => {
            let [g1, g2] = chi.factors.as_slice() else {
                return Err(Error::GroupMismatch("pair restriction needs two factors".into()));
            };
            if g1 != g2 || g1.kind != GroupKind::Split || g1.j % 2 != 0 || sign.abs() != 1 {
                return Err(Error::GroupMismatch(format!(
                    "invalid pair restriction of {g1:?} x {g2:?}"
                )));
            }
            let m = i128::from(g1.order());
            let twist = i128::from(sign) * i128::from(g1.q.pow(g1.j / 2));
            let a = i128::from(chi.exponents[0]) + twist * i128::from(chi.exponents[1]);
            Ok(MultChar::single(*g1, a.rem_euclid(m) as i64))
        }
    }
}

/// Trivial stabilizer in the Weyl group of the torus.
pub fn is_regular(shape: &TorusShape, chi: &TorusCharacter) -> Result<bool> {
    if chi.shape() != shape {
        return Err(Error::InvalidCharacter("character is for another shape".into()));
    }
    Ok(weyl_group_data(shape).stabilizer_order(chi) == 1)
}

/// `(1/|G|) Σ_x f(x) conj(h(x))` over value tables indexed by the same elements.
pub fn inner_product(f: &[Cyclo], h: &[Cyclo]) -> Result<Cyclo> {
    if f.len() != h.len() {
        return Err(Error::DimensionMismatch(format!(
            "value tables of sizes {} and {}",
            f.len(),
            h.len()
        )));
    }
    if f.is_empty() {
        return Err(Error::DimensionMismatch("empty group".into()));
    }
    let s: Cyclo = f.iter().zip(h).map(|(a, b)| a * &b.conj()).sum();
    Ok(s.scale(1, f.len() as i128))
}

pub fn char_inner_product(chi: &MultChar, theta: &MultChar) -> Result<Cyclo> {
    chi.check_same_group(theta)?;
    inner_product(&chi.values()?, &theta.values()?)
}

/// `ψ(x) = ζ_p^{c·Tr(x)}` with the absolute trace, so on `k_ν` this is `ψ ∘ Tr_{k_ν/k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddChar {
    pub p: u64,
    pub c: u64,
}

impl AddChar {
    pub fn new(p: u64, c: u64) -> Result<Self> {
        if c.is_multiple_of(p) {
            return Err(Error::InvalidCharacter(
                "additive character must be nontrivial".into(),
            ));
        }
        Ok(Self { p, c: c % p })
    }

    /// `c·Tr(x)` modulo `p`.
    pub fn phase(&self, tower: &FieldTower, x: FieldElement) -> u64 {
        (self.c * tower.absolute_trace(x)) % self.p
    }

    pub fn eval(&self, tower: &FieldTower, x: FieldElement) -> Cyclo {
        Cyclo::root_of_unity(self.p as u32, self.phase(tower, x) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_characters() {
        let t = quadratic_char(3, 1, GroupKind::Split);
        assert_eq!(t.exponents, vec![1]);
        let t2 = quadratic_char(3, 2, GroupKind::Split);
        assert_eq!(t2.exponents, vec![4]);
        assert_eq!(t2.factors[0].order(), 8);
        let tp = quadratic_char(3, 1, GroupKind::NormOne);
        assert_eq!((tp.exponents[0], tp.factors[0].order()), (2, 4));
        for k in 0..8u64 {
            assert_eq!(t2.value_at_logs(&[2 * k]), Cyclo::one());
        }
    }

    #[test]
    fn theta_t_on_squares() {
        let fs = [CyclicGroup::norm_one(3, 1), CyclicGroup::norm_one(3, 1)];
        let th = theta_t(&fs);
        assert_eq!(th.value_at_logs(&[1, 1]), Cyclo::one());
        assert_eq!(th.value_at_logs(&[1, 0]), Cyclo::from_int(-1));
        for logs in group_logs(&fs) {
            let sq: Vec<u64> = logs.iter().map(|l| 2 * l).collect();
            assert_eq!(th.value_at_logs(&sq), Cyclo::one());
        }
    }

    #[test]
    fn orbits() {
        let g = CyclicGroup::split(3, 2);
        let orbit: Vec<u64> = galois_orbit(&MultChar::single(g, 1))
            .unwrap()
            .iter()
            .map(|c| c.exponents[0])
            .collect();
        assert_eq!(orbit, vec![1, 3]);
        assert_eq!(galois_orbit(&MultChar::single(g, 0)).unwrap().len(), 1);
        assert_eq!(galois_orbit(&MultChar::single(g, 4)).unwrap().len(), 1);
        assert!(in_gamma_orbit(&MultChar::single(g, 3), &MultChar::single(g, 1)).unwrap());
        assert!(!in_gamma_orbit(&MultChar::single(g, 0), &MultChar::single(g, 4)).unwrap());
        let other = MultChar::single(CyclicGroup::split(3, 1), 1);
        assert!(in_gamma_orbit(&other, &MultChar::single(g, 1)).is_err());
    }

    #[test]
    fn restrictions() {
        let g4 = CyclicGroup::split(3, 4);
        let r = restrict_char(&MultChar::single(g4, 13), Restriction::Subfield { degree: 2 }).unwrap();
        assert_eq!(r.exponents, vec![5]);
        let tower = FieldTower::new(3, 1, 4).unwrap();
        // χ(G^{10 k}) = ζ_80^{13·10k} = ζ_8^{13 k}
        for k in 0..8 {
            let x = tower.from_exponent(2, k);
            let lhs = r.eval(&tower, &[x]).unwrap();
            let rhs = MultChar::single(g4, 13)
                .eval(&tower, &[tower.embed(x, 4).unwrap()])
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        let g2 = CyclicGroup::split(3, 2);
        let n1 = restrict_char(&MultChar::single(g2, 2), Restriction::NormOne).unwrap();
        assert_eq!(n1, quadratic_char(3, 1, GroupKind::NormOne));
        assert!(restrict_char(&MultChar::single(g2, 0), Restriction::NormOne)
            .unwrap()
            .is_trivial());
        let pair = MultChar::new(vec![g2, g2], vec![1, 1]).unwrap();
        assert_eq!(
            restrict_char(&pair, Restriction::FrobeniusPair { sign: 1 })
                .unwrap()
                .exponents,
            vec![4]
        );
        assert_eq!(
            restrict_char(&pair, Restriction::FrobeniusPair { sign: -1 })
                .unwrap()
                .exponents,
            vec![6]
        );
        assert!(restrict_char(
            &MultChar::single(CyclicGroup::split(3, 1), 1),
            Restriction::NormOne
        )
        .is_err());
    }

    #[test]
    fn orthogonality_exhaustive() {
        for g in [
            CyclicGroup::split(3, 1),
            CyclicGroup::split(3, 2),
            CyclicGroup::norm_one(3, 1),
            CyclicGroup::split(5, 2),
            CyclicGroup::norm_one(3, 2),
        ] {
            let m = g.order() as i64;
            for a in 0..m {
                for b in 0..m {
                    let ip = char_inner_product(&MultChar::single(g, a), &MultChar::single(g, b)).unwrap();
                    assert_eq!(ip, Cyclo::from_int(i128::from(a == b)));
                }
            }
        }
    }

    #[test]
    fn homomorphism_on_field_elements() {
        let tower = FieldTower::new(3, 1, 4).unwrap();
        let g = CyclicGroup::split(3, 4);
        let chi = MultChar::single(g, 7);
        let els = tower.elements(4);
        for &x in els[1..].iter().step_by(3) {
            for &y in els[1..].iter().step_by(7) {
                let lhs = chi.eval(&tower, &[tower.mul(x, y)]).unwrap();
                let rhs = chi.eval(&tower, &[x]).unwrap() * chi.eval(&tower, &[y]).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let u = CyclicGroup::norm_one(3, 1);
        for k in 0..4 {
            assert_eq!(u.log_of(&tower, u.element(&tower, k)).unwrap(), k);
        }
        assert!(u.log_of(&tower, tower.from_exponent(2, 1)).is_err());
    }

    #[test]
    fn additive_character() {
        let tower = FieldTower::new(3, 1, 2).unwrap();
        let psi = AddChar::new(3, 1).unwrap();
        assert!(AddChar::new(3, 3).is_err());
        let els = tower.elements(2);
        let total: Cyclo = els.iter().map(|&x| psi.eval(&tower, x)).sum();
        assert!(total.is_zero());
        for &x in &els {
            for &y in &els {
                assert_eq!(
                    psi.eval(&tower, tower.add(x, y)),
                    psi.eval(&tower, x) * psi.eval(&tower, y)
                );
            }
        }
    }
}
