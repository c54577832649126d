//! Maximal tori of `GL_n(k_2)`, their characters and Weyl groups, and the
//! Deligne-Lusztig virtual characters `R_{T,χ}` for `n <= 2`.

use crate::chars::{CyclicGroup, MultChar};
use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::fields::{FieldElement, FieldTower};
use crate::groups::{classify_gl2_element, Family, Gl2Class, GroupSpec, Matrix, DEFAULT_GROUP_CAP};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

/// `λ = (λ_1, λ_2, …)` with `Σ j·λ_j = n`; the torus is `T^F = ∏_j (k_{2j}^×)^{λ_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusShape {
    n: u32,
    lambda: Vec<u32>,
}

impl TorusShape {
    pub fn new(n: u32, lambda: &[u32]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidShape("n must be positive".into()));
        }
        let total: u32 = lambda.iter().enumerate().map(|(i, &l)| (i as u32 + 1) * l).sum();
        if total != n {
            return Err(Error::InvalidShape(format!(
                "sum of j*lambda_j is {total}, expected {n}"
            )));
        }
        let mut lambda = lambda.to_vec();
        while lambda.last() == Some(&0) {
            lambda.pop();
        }
        Ok(Self { n, lambda })
    }

    /// Parses a comma-separated `λ` such as `0,1`.
    pub fn parse(n: u32, text: &str) -> Result<Self> {
        let lambda = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidShape(format!("cannot parse {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, &lambda)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    /// `λ_j`, zero past the end.
    pub fn lambda_j(&self, j: u32) -> u32 {
        self.lambda.get(j as usize - 1).copied().unwrap_or(0)
    }

    pub fn max_j(&self) -> u32 {
        self.lambda.len() as u32
    }

    /// The block index `j` of every coordinate, in storage order.
    pub fn slots(&self) -> Vec<u32> {
        self.lambda
            .iter()
            .enumerate()
            .flat_map(|(i, &l)| std::iter::repeat_n(i as u32 + 1, l as usize))
            .collect()
    }

    /// Coordinate indices belonging to block `j`.
    pub fn block(&self, j: u32) -> std::ops::Range<usize> {
        let start: u32 = self.lambda.iter().take(j as usize - 1).sum();
        start as usize..(start + self.lambda_j(j)) as usize
    }

    /// `rk_{k'} T = Σ_j λ_j`.
    pub fn rank(&self) -> u32 {
        self.lambda.iter().sum()
    }

    /// A single block `j = n`: anisotropic modulo the centre.
    pub fn is_cuspidal(&self) -> bool {
        self.rank() == 1
    }

    pub fn factors(&self, q: u64) -> Vec<CyclicGroup> {
        self.slots()
            .into_iter()
            .map(|j| CyclicGroup::split(q, 2 * j))
            .collect()
    }

    /// Largest field degree over `k` appearing in the torus.
    pub fn max_field_degree(&self) -> u32 {
        2 * self.max_j()
    }

    pub fn label(&self) -> String {
        self.lambda
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn partitions(n: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

/// One shape per partition of `n`, starting from the split torus.
pub fn torus_shapes(n: u32) -> Vec<TorusShape> {
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    parts.reverse();
    parts
        .into_iter()
        .map(|p| {
            let mut lambda = vec![0u32; n as usize];
            for part in p {
                lambda[part as usize - 1] += 1;
            }
            TorusShape::new(n, &lambda).expect("partition gives a valid shape")
        })
        .collect()
}

/// A character of `T^F`: one exponent on `k_{2j}^×` per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusCharacter {
    q: u64,
    shape: TorusShape,
    exponents: Vec<u64>,
}

impl TorusCharacter {
    /// Rejects exponents outside `[0, q^{2j} - 1)`.
    pub fn new(q: u64, shape: &TorusShape, exponents: &[u64]) -> Result<Self> {
        let slots = shape.slots();
        if slots.len() != exponents.len() {
            return Err(Error::InvalidCharacter(format!(
                "shape {} needs {} exponents, got {}",
                shape.label(),
                slots.len(),
                exponents.len()
            )));
        }
        for (&j, &a) in slots.iter().zip(exponents) {
            let m = q.pow(2 * j) - 1;
            if a >= m {
                return Err(Error::InvalidCharacter(format!(
                    "exponent {a} out of range for k_{}^x of order {m}",
                    2 * j
                )));
            }
        }
        Ok(Self {
            q,
            shape: shape.clone(),
            exponents: exponents.to_vec(),
        })
    }

    pub fn trivial(q: u64, shape: &TorusShape) -> Self {
        Self {
            q,
            shape: shape.clone(),
            exponents: vec![0; shape.rank() as usize],
        }
    }

    /// Every character of `T^F`, lexicographic in the exponents.
    pub fn all(q: u64, shape: &TorusShape) -> Vec<Self> {
        let factors = shape.factors(q);
        crate::chars::group_logs(&factors)
            .map(|exponents| Self {
                q,
                shape: shape.clone(),
                exponents,
            })
            .collect()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn shape(&self) -> &TorusShape {
        &self.shape
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    pub fn as_mult_char(&self) -> MultChar {
        MultChar {
            factors: self.shape.factors(self.q),
            exponents: self.exponents.clone(),
        }
    }

    /// The character of coordinate `i` alone.
    pub fn coordinate(&self, i: usize) -> MultChar {
        let j = self.shape.slots()[i];
        MultChar::single(CyclicGroup::split(self.q, 2 * j), self.exponents[i] as i64)
    }
}

/// An element of `W_G(T)^F = ∏_j (Z/j ≀ S_{λ_j})`.
///
/// It sends `χ` to the character with coordinates `χ_{perm[i]}^{Q^{twist[i]}}`, `Q = q^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub twist: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    shape: TorusShape,
    elements: Vec<WeylElement>,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// The Weyl group of the torus of the given shape, with its action on characters.
pub fn weyl_group_data(shape: &TorusShape) -> WeylGroup {
    let slots = shape.slots();
    let mut elements = vec![WeylElement {
        perm: (0..slots.len()).collect(),
        twist: vec![0; slots.len()],
    }];
    for j in 1..=shape.max_j() {
        let block: Vec<usize> = shape.block(j).collect();
        if block.is_empty() {
            continue;
        }
        let perms = permutations(&block);
        let twists = j.pow(block.len() as u32);
        let mut next = Vec::with_capacity(elements.len() * perms.len() * twists as usize);
        for w in &elements {
            for p in &perms {
                for mut code in 0..twists {
                    let mut e = w.clone();
                    for (k, &slot) in block.iter().enumerate() {
                        e.perm[slot] = p[k];
                        e.twist[slot] = code % j;
                        code /= j;
                    }
                    next.push(e);
                }
            }
        }
        elements = next;
    }
    WeylGroup {
        shape: shape.clone(),
        elements,
    }
}

impl WeylGroup {
    /// `∏_j j^{λ_j} λ_j!`.
    pub fn order_formula(shape: &TorusShape) -> u64 {
        (1..=shape.max_j())
            .map(|j| {
                let l = shape.lambda_j(j);
                u64::from(j).pow(l) * (1..=u64::from(l)).product::<u64>()
            })
            .product()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn shape(&self) -> &TorusShape {
        &self.shape
    }

    pub fn act(&self, w: &WeylElement, chi: &TorusCharacter) -> TorusCharacter {
        let q = chi.q;
        let slots = self.shape.slots();
        let exponents = slots
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                let m = u128::from(q.pow(2 * j) - 1);
                let frob = u128::from(q * q).pow(w.twist[i]) % m;
                ((u128::from(chi.exponents[w.perm[i]]) * frob) % m) as u64
            })
            .collect();
        TorusCharacter {
            q,
            shape: chi.shape.clone(),
            exponents,
        }
    }

    pub fn stabilizer_order(&self, chi: &TorusCharacter) -> usize {
        self.elements.iter().filter(|w| &self.act(w, chi) == chi).count()
    }

    /// The orbit of `χ`, sorted.
    pub fn orbit(&self, chi: &TorusCharacter) -> Vec<TorusCharacter> {
        let mut out: Vec<_> = self.elements.iter().map(|w| self.act(w, chi)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// The least element of the orbit of `χ`.
    pub fn canonical(&self, chi: &TorusCharacter) -> TorusCharacter {
        self.elements
            .iter()
            .map(|w| self.act(w, chi))
            .min()
            .expect("Weyl group contains the identity")
    }

    /// Number of `w` with `w·χ = χ'`.
    pub fn transporter_count(&self, chi: &TorusCharacter, other: &TorusCharacter) -> usize {
        self.elements
            .iter()
            .filter(|w| &self.act(w, chi) == other)
            .count()
    }
}

/// A conjugacy class label in `GL_n(k_2)` for `n <= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Gl1(FieldElement),
    Gl2(Gl2Class),
}

pub fn classify(tower: &FieldTower, g: &Matrix) -> Result<ClassLabel> {
    match g.dim() {
        1 => {
            let z = g.get(0, 0);
            if z.is_zero() {
                return Err(Error::NotInGroup("singular 1x1 matrix".into()));
            }
            Ok(ClassLabel::Gl1(z))
        }
        2 => {
            if g.det(tower).is_zero() {
                return Err(Error::NotInGroup("singular 2x2 matrix".into()));
            }
            Ok(ClassLabel::Gl2(classify_gl2_element(tower, g)?))
        }
        n => Err(Error::UnsupportedRank(format!(
            "Deligne-Lusztig characters are implemented for n <= 2, got {n}"
        ))),
    }
}

/// Semisimple part of a class of `GL_2(k_2)`, up to conjugacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Semisimple {
    Central(FieldElement),
    Split(FieldElement, FieldElement),
    Anisotropic(FieldElement),
}

/// `R_{T,χ}` as a class function on `GL_n(k_2)`, `n <= 2`.
#[derive(Clone, Debug)]
pub struct DlCharacter {
    tower: Arc<FieldTower>,
    chi: TorusCharacter,
}

pub fn dl_character(tower: Arc<FieldTower>, chi: &TorusCharacter) -> Result<DlCharacter> {
    let n = chi.shape().n();
    if n > 2 {
        return Err(Error::UnsupportedRank(format!(
            "Deligne-Lusztig characters are implemented for n <= 2, got {n}"
        )));
    }
    if tower.q() != chi.q() {
        return Err(Error::GroupMismatch(format!(
            "character over q = {}, tower over q = {}",
            chi.q(),
            tower.q()
        )));
    }
    let need = 2 * n;
    if !tower.supports(need) {
        return Err(Error::UnsupportedDegree {
            degree: need,
            max_degree: tower.max_degree(),
        });
    }
    Ok(DlCharacter {
        tower,
        chi: chi.clone(),
    })
}

impl DlCharacter {
    pub fn character(&self) -> &TorusCharacter {
        &self.chi
    }

    pub fn degree(&self) -> Result<Cyclo> {
        let n = self.chi.shape().n() as usize;
        self.value(&Matrix::identity(&self.tower, n, 2))
    }

    pub fn value(&self, g: &Matrix) -> Result<Cyclo> {
        if g.dim() != self.chi.shape().n() as usize || g.degree() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}x{0} matrix over k_2",
                self.chi.shape().n()
            )));
        }
        self.value_on_class(&classify(&self.tower, g)?)
    }

    pub fn value_on_class(&self, class: &ClassLabel) -> Result<Cyclo> {
        match *class {
            ClassLabel::Gl1(z) => self.chi.coordinate(0).eval(&self.tower, &[z]),
            ClassLabel::Gl2(c) => {
                let (s, u_regular) = match c {
                    Gl2Class::Central(z) => (Semisimple::Central(z), false),
                    Gl2Class::NonSemisimple(z) => (Semisimple::Central(z), true),
                    Gl2Class::Split(a, b) => (Semisimple::Split(a, b), false),
                    Gl2Class::Anisotropic(x) => (Semisimple::Anisotropic(x), false),
                };
                self.reduction(s, u_regular)
            }
        }
    }

    /// `Σ_{γ̄ ∈ N̄(s,T)} (^γχ)(s) · Q^{C(s)}_{γT}(u)` for `n = 2`.
    fn reduction(&self, s: Semisimple, u_regular: bool) -> Result<Cyclo> {
        let t = &*self.tower;
        let q2 = (t.q() * t.q()) as i128;
        let split = self.chi.shape().lambda_j(1) == 2;
        let c0 = self.chi.coordinate(0);
        Ok(if split {
            let c1 = self.chi.coordinate(1);
            match s {
                Semisimple::Central(z) => {
                    let green = if u_regular { 1 } else { q2 + 1 };
                    (c0.eval(t, &[z])? * c1.eval(t, &[z])?).scale(green, 1)
                }
                Semisimple::Split(a, b) => {
                    c0.eval(t, &[a])? * c1.eval(t, &[b])? + c0.eval(t, &[b])? * c1.eval(t, &[a])?
                }
                Semisimple::Anisotropic(_) => Cyclo::zero(),
            }
        } else {
            match s {
                Semisimple::Central(z) => {
                    let green = if u_regular { 1 } else { 1 - q2 };
                    c0.eval(t, &[t.embed(z, 4)?])?.scale(green, 1)
                }
                Semisimple::Split(..) => Cyclo::zero(),
                Semisimple::Anisotropic(x) => c0.eval(t, &[x])? + c0.eval(t, &[t.frobenius_power(x, 2)])?,
            }
        })
    }

    /// For the split torus: `Ind_B^G(χ_1 ⊗ χ_2)(g)` summed over the `g`-stable lines.
    pub fn induced_value(&self, g: &Matrix) -> Result<Cyclo> {
        if self.chi.shape().lambda_j(1) != 2 {
            return Err(Error::InvalidShape(
                "the induced-character formula needs the split torus of GL_2".into(),
            ));
        }
        let t = &*self.tower;
        let det = g.det(t);
        let (c0, c1) = (self.chi.coordinate(0), self.chi.coordinate(1));
        let mut lines = vec![[t.one(2), t.zero(2)]];
        lines.extend(t.elements(2).into_iter().map(|x| [x, t.one(2)]));
        let mut total = Cyclo::zero();
        for v in lines {
            let w = g.apply(t, &v);
            // g·v = a·v for some a
            let a = if v[0].is_zero() {
                t.div(w[1], v[1])?
            } else {
                t.div(w[0], v[0])?
            };
            if w[0] == t.mul(a, v[0]) && w[1] == t.mul(a, v[1]) {
                total += c0.eval(t, &[a])? * c1.eval(t, &[t.div(det, a)?])?;
            }
        }
        Ok(total)
    }
}

/// `R_{T,χ}(su)` from a Jordan pair `(s, u)` in `GL_2(k_2)`.
pub fn reduction_formula_value(dl: &DlCharacter, s: &Matrix, u: &Matrix) -> Result<Cyclo> {
    let t = &*dl.tower;
    if s.dim() != 2 || u.dim() != 2 || dl.chi.shape().n() != 2 {
        return Err(Error::DimensionMismatch("expected 2x2 matrices".into()));
    }
    if s.mul(t, u) != u.mul(t, s) {
        return Err(Error::InvalidJordanPair("s and u do not commute".into()));
    }
    let s_class = match classify_gl2_element(t, s)? {
        Gl2Class::Central(z) => Semisimple::Central(z),
        Gl2Class::Split(a, b) => Semisimple::Split(a, b),
        Gl2Class::Anisotropic(x) => Semisimple::Anisotropic(x),
        Gl2Class::NonSemisimple(_) => return Err(Error::InvalidJordanPair("s is not semisimple".into())),
    };
    let u_regular = match classify_gl2_element(t, u)? {
        Gl2Class::Central(z) if t.is_one(z) => false,
        Gl2Class::NonSemisimple(z) if t.is_one(z) => true,
        _ => return Err(Error::InvalidJordanPair("u is not unipotent".into())),
    };
    dl.reduction(s_class, u_regular)
}

/// Conjugacy classes of `GL_n(k_2)` with their sizes.
#[derive(Clone, Debug)]
pub struct ClassCensus {
    n: u32,
    order: u64,
    classes: Vec<(ClassLabel, u64)>,
}

impl ClassCensus {
    pub fn new(tower: &FieldTower, n: u32) -> Result<Self> {
        if n > 2 {
            return Err(Error::UnsupportedRank(format!("class census for n = {n}")));
        }
        let spec = GroupSpec::new(tower, Family::GL, n as usize);
        let mut counts: HashMap<ClassLabel, u64> = HashMap::new();
        let elements = spec.enumerate(tower, DEFAULT_GROUP_CAP)?;
        for g in &elements {
            *counts.entry(classify(tower, g)?).or_default() += 1;
        }
        let mut classes: Vec<_> = counts.into_iter().collect();
        classes.sort();
        Ok(Self {
            n,
            order: elements.len() as u64,
            classes,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn classes(&self) -> &[(ClassLabel, u64)] {
        &self.classes
    }
}

/// `⟨R, R'⟩_{GL_n(k_2)}`; errors if the result is not an integer.
pub fn dl_inner_product(census: &ClassCensus, a: &DlCharacter, b: &DlCharacter) -> Result<i128> {
    if a.chi.shape().n() != census.n || b.chi.shape().n() != census.n {
        return Err(Error::GroupMismatch("characters and census disagree on n".into()));
    }
    let mut total = Cyclo::zero();
    for (class, size) in &census.classes {
        total += (a.value_on_class(class)? * b.value_on_class(class)?.conj()).scale(*size as i128, 1);
    }
    total
        .scale(1, census.order as i128)
        .to_integer()
        .ok_or_else(|| Error::Internal(format!("non-integral inner product {total}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(torus_shapes(1).len(), 1);
        let s2 = torus_shapes(2);
        assert_eq!(s2.len(), 2);
        assert_eq!(s2[0].lambda(), &[2]);
        assert_eq!(s2[1].lambda(), &[0, 1]);
        assert_eq!(torus_shapes(4).len(), 5);
        assert_eq!(torus_shapes(5).len(), 7);
        assert!(TorusShape::parse(2, "3").is_err());
        assert_eq!(TorusShape::parse(2, "0,1").unwrap(), s2[1]);
        assert_eq!(TorusShape::new(2, &[2, 0]).unwrap().lambda(), &[2]);
    }

    #[test]
    fn weyl_orders() {
        for n in 1..=5 {
            for s in torus_shapes(n) {
                assert_eq!(weyl_group_data(&s).order() as u64, WeylGroup::order_formula(&s));
            }
        }
        let w = weyl_group_data(&TorusShape::new(2, &[0, 1]).unwrap());
        assert_eq!(w.order(), 2);
        assert_eq!(weyl_group_data(&TorusShape::new(2, &[2]).unwrap()).order(), 2);
    }

    #[test]
    fn character_validation() {
        let s = TorusShape::new(2, &[0, 1]).unwrap();
        assert!(TorusCharacter::new(3, &s, &[80]).is_err());
        assert!(TorusCharacter::new(3, &s, &[79]).is_ok());
        assert_eq!(TorusCharacter::all(3, &s).len(), 80);
        let s2 = TorusShape::new(2, &[2]).unwrap();
        assert_eq!(TorusCharacter::all(3, &s2).len(), 64);
    }

    #[test]
    fn weyl_action() {
        let s = TorusShape::new(2, &[0, 1]).unwrap();
        let w = weyl_group_data(&s);
        let chi = TorusCharacter::new(3, &s, &[1]).unwrap();
        let orbit: Vec<u64> = w.orbit(&chi).iter().map(|c| c.exponents()[0]).collect();
        assert_eq!(orbit, vec![1, 9]);
        let fixed = TorusCharacter::new(3, &s, &[10]).unwrap();
        assert_eq!(w.stabilizer_order(&fixed), 2);
        let s2 = TorusShape::new(2, &[2]).unwrap();
        let w2 = weyl_group_data(&s2);
        let a = TorusCharacter::new(3, &s2, &[1, 2]).unwrap();
        let b = TorusCharacter::new(3, &s2, &[2, 1]).unwrap();
        assert_eq!(w2.transporter_count(&a, &b), 1);
        assert_eq!(w2.canonical(&b), a);
    }

    fn tower() -> Arc<FieldTower> {
        Arc::new(FieldTower::new(3, 1, 4).unwrap())
    }

    #[test]
    fn degrees() {
        let t = tower();
        let split = TorusShape::new(2, &[2]).unwrap();
        let ell = TorusShape::new(2, &[0, 1]).unwrap();
        let r = dl_character(t.clone(), &TorusCharacter::new(3, &split, &[1, 5]).unwrap()).unwrap();
        assert_eq!(r.degree().unwrap(), Cyclo::from_int(10));
        let r = dl_character(t.clone(), &TorusCharacter::new(3, &ell, &[7]).unwrap()).unwrap();
        assert_eq!(r.degree().unwrap(), Cyclo::from_int(-8));
        let one = TorusShape::new(1, &[1]).unwrap();
        let r = dl_character(t, &TorusCharacter::new(3, &one, &[0]).unwrap()).unwrap();
        assert_eq!(r.degree().unwrap(), Cyclo::one());
    }

    #[test]
    fn induced_formula_matches_classification() {
        let t = tower();
        let split = TorusShape::new(2, &[2]).unwrap();
        let gl2 = GroupSpec::new(&t, Family::GL, 2)
            .enumerate(&t, DEFAULT_GROUP_CAP)
            .unwrap();
        for exps in [[0, 0], [1, 3], [2, 2], [5, 7]] {
            let r = dl_character(t.clone(), &TorusCharacter::new(3, &split, &exps).unwrap()).unwrap();
            for g in gl2.iter().step_by(7) {
                assert_eq!(r.induced_value(g).unwrap(), r.value(g).unwrap());
            }
        }
    }

    #[test]
    fn conjugation_invariance() {
        let t = tower();
        let ell = TorusShape::new(2, &[0, 1]).unwrap();
        let r = dl_character(t.clone(), &TorusCharacter::new(3, &ell, &[11]).unwrap()).unwrap();
        let gl2 = GroupSpec::new(&t, Family::GL, 2)
            .enumerate(&t, DEFAULT_GROUP_CAP)
            .unwrap();
        for (k, g) in gl2.iter().step_by(13).enumerate() {
            let h = &gl2[(k * 389) % gl2.len()];
            let conj = h.mul(&t, g).mul(&t, &h.inverse(&t).unwrap());
            assert_eq!(r.value(g).unwrap(), r.value(&conj).unwrap());
        }
    }

    #[test]
    fn jordan_pairs() {
        let t = tower();
        let ell = TorusShape::new(2, &[0, 1]).unwrap();
        let r = dl_character(t.clone(), &TorusCharacter::new(3, &ell, &[11]).unwrap()).unwrap();
        let z = t.from_exponent(2, 3);
        let s = Matrix::scalar(&t, 2, z);
        let u = Matrix::from_rows(vec![vec![t.one(2), t.one(2)], vec![t.zero(2), t.one(2)]]).unwrap();
        let su = s.mul(&t, &u);
        assert_eq!(
            reduction_formula_value(&r, &s, &u).unwrap(),
            r.value(&su).unwrap()
        );
        assert!(matches!(
            reduction_formula_value(&r, &su, &u),
            Err(Error::InvalidJordanPair(_))
        ));
    }

    #[test]
    fn orthogonality_relations() {
        let t = tower();
        let census = ClassCensus::new(&t, 2).unwrap();
        assert_eq!(census.order(), 5760);
        let shapes = torus_shapes(2);
        let chars: Vec<_> = shapes
            .iter()
            .flat_map(|s| TorusCharacter::all(3, s).into_iter().step_by(9))
            .collect();
        for a in &chars {
            for b in &chars {
                let ra = dl_character(t.clone(), a).unwrap();
                let rb = dl_character(t.clone(), b).unwrap();
                let expected = if a.shape() == b.shape() {
                    weyl_group_data(a.shape()).transporter_count(a, b) as i128
                } else {
                    0
                };
                assert_eq!(
                    dl_inner_product(&census, &ra, &rb).unwrap(),
                    expected,
                    "{a:?} {b:?}"
                );
            }
        }
    }
}
