//! The tower of finite fields `k = F_q ⊂ k_d = F_{q^d}` for every `d | D`.
//!
//! All fields live inside one ambient field `F_{q^D} = F_p[x]/(f)` where `f` is the
//! lexicographically least primitive polynomial of degree `e·D` over `F_p`. The ambient
//! generator `G = x` fixes the generator `g_d = G^{(q^D-1)/(q^d-1)}` of every subfield, so
//! the embeddings `k_d ⊂ k_{d'}` are compatible by construction and the generators are
//! norm-compatible: `N_{k_{d'}/k_d}(g_{d'}) = g_d`.
//!
//! Elements are stored as discrete logarithms relative to `g_d`; addition goes through a
//! Zech logarithm table of the ambient field.

use crate::error::{Error, Result};
use num_integer::Integer;

/// Largest ambient field size for which tables are built.
pub const MAX_TABLE_SIZE: u64 = 10_000_000;

/// Identifier of the defining-polynomial selection rule, recorded in run manifests.
pub const POLYNOMIAL_RULE: &str = "lex-least-primitive/F_p";

const NO_LOG: u32 = u32::MAX;

/// An element of `k_d`: either zero or `g_d^exponent` with `0 <= exponent < q^d - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    degree: u32,
    log: Option<u32>,
}

impl FieldElement {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Discrete log relative to the fixed generator of `k_d^×`, `None` for zero.
    pub fn exponent(&self) -> Option<u64> {
        self.log.map(u64::from)
    }

    pub fn is_zero(&self) -> bool {
        self.log.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u64,
    e: u32,
    q: u64,
    max_degree: u32,
    /// `q^D - 1`, the order of the ambient multiplicative group.
    ambient_order: u64,
    /// Monic defining polynomial over `F_p`, low degree first (leading 1 omitted).
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial arithmetic modulo a monic `f` over `F_p`, used only while searching for
/// the defining polynomial.
struct PolyRing<'a> {
    p: u64,
    f: &'a [u64],
}

impl PolyRing<'_> {
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.f.len();
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // x^k = -f_{k-1} x^{k-1} - ... - f_0
        for top in (k..2 * k).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, &fj) in self.f.iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + self.p - (c * fj) % self.p) % self.p;
            }
        }
        prod.truncate(k);
        prod
    }

    fn pow_x(&self, mut exponent: u64) -> Vec<u64> {
        let k = self.f.len();
        let mut result = vec![0u64; k];
        result[0] = 1;
        let mut base = vec![0u64; k];
        if k == 1 {
            base[0] = (self.p - self.f[0]) % self.p;
        } else {
            base[1] = 1;
        }
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            exponent >>= 1;
        }
        result
    }

    fn is_one(v: &[u64]) -> bool {
        v[0] == 1 && v[1..].iter().all(|&c| c == 0)
    }
}

fn find_primitive_polynomial(p: u64, k: u32) -> Vec<u64> {
    let size = p.pow(k);
    let order = size - 1;
    let primes = prime_factors(order);
    for t in 0..size {
        let mut coeffs = Vec::with_capacity(k as usize);
        let mut rest = t;
        for _ in 0..k {
            coeffs.push(rest % p);
            rest /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        let ring = PolyRing { p, f: &coeffs };
        if !PolyRing::is_one(&ring.pow_x(order)) {
            continue;
        }
        if primes.iter().all(|&r| !PolyRing::is_one(&ring.pow_x(order / r))) {
            return coeffs;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

impl FieldTower {
    /// Builds the tower over `k = F_{p^e}` supporting every degree dividing `max_degree`.
    pub fn new(p: u64, e: u32, max_degree: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        if e == 0 {
            return Err(Error::InvalidTower("base exponent must be positive".into()));
        }
        if max_degree == 0 {
            return Err(Error::InvalidTower("maximal degree must be positive".into()));
        }
        let k = e
            .checked_mul(max_degree)
            .ok_or_else(|| Error::InvalidTower("degree overflow".into()))?;
        let size = p.checked_pow(k).filter(|&s| s <= MAX_TABLE_SIZE).ok_or_else(|| {
            Error::CapExceeded(format!("ambient field of size {p}^{k} exceeds {MAX_TABLE_SIZE}"))
        })?;
        let q = p.pow(e);
        let ambient_order = size - 1;
        let modulus = find_primitive_polynomial(p, k);

        let mut exp = vec![0u32; ambient_order as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut current = vec![0u64; k as usize];
        current[0] = 1;
        let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32;
        for i in 0..ambient_order as usize {
            let code = encode(&current);
            exp[i] = code;
            log[code as usize] = i as u32;
            // multiply by x
            let top = current[k as usize - 1];
            for j in (1..k as usize).rev() {
                current[j] = current[j - 1];
            }
            current[0] = 0;
            if top != 0 {
                for (j, &fj) in modulus.iter().enumerate() {
                    current[j] = (current[j] + p - (top * fj) % p) % p;
                }
            }
        }
        let zech = exp
            .iter()
            .map(|&code| {
                let c0 = u64::from(code) % p;
                let shifted = u64::from(code) - c0 + (c0 + 1) % p;
                if shifted == 0 {
                    NO_LOG
                } else {
                    log[shifted as usize]
                }
            })
            .collect();
        Ok(Self {
            p,
            e,
            q,
            max_degree,
            ambient_order,
            modulus,
            exp,
            log,
            zech,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Defining polynomial of the ambient field over `F_p`, low degree first, monic.
    pub fn defining_polynomial(&self) -> Vec<u64> {
        let mut v = self.modulus.clone();
        v.push(1);
        v
    }

    pub fn supports(&self, d: u32) -> bool {
        d > 0 && self.max_degree.is_multiple_of(d)
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if self.supports(d) {
            Ok(())
        } else {
            Err(Error::UnsupportedDegree {
                degree: d,
                max_degree: self.max_degree,
            })
        }
    }

    /// `|k_d^×| = q^d - 1`.
    pub fn mult_order(&self, d: u32) -> u64 {
        self.q.pow(d) - 1
    }

    fn cofactor(&self, d: u32) -> u64 {
        self.ambient_order / self.mult_order(d)
    }

    fn to_ambient(&self, x: FieldElement) -> Option<u64> {
        x.log.map(|l| u64::from(l) * self.cofactor(x.degree))
    }

    fn from_ambient(&self, d: u32, a: Option<u64>) -> FieldElement {
        let log = a.map(|a| {
            let c = self.cofactor(d);
            debug_assert_eq!(a % c, 0, "element does not lie in k_{d}");
            (a / c) as u32
        });
        FieldElement { degree: d, log }
    }

    fn lies_in(&self, x: FieldElement, d: u32) -> bool {
        match self.to_ambient(x) {
            None => true,
            Some(a) => a % self.cofactor(d) == 0,
        }
    }

    fn common_degree(&self, x: FieldElement, y: FieldElement) -> u32 {
        x.degree.lcm(&y.degree)
    }

    pub fn zero(&self, d: u32) -> FieldElement {
        FieldElement { degree: d, log: None }
    }

    pub fn one(&self, d: u32) -> FieldElement {
        FieldElement {
            degree: d,
            log: Some(0),
        }
    }

    /// The fixed generator `g_d` of `k_d^×`.
    pub fn generator(&self, d: u32) -> Result<FieldElement> {
        self.check_degree(d)?;
        Ok(self.from_exponent(d, 1))
    }

    /// `g_d^k`.
    pub fn from_exponent(&self, d: u32, k: u64) -> FieldElement {
        FieldElement {
            degree: d,
            log: Some((k % self.mult_order(d)) as u32),
        }
    }

    /// The image of the integer `m` in `k_d`.
    pub fn from_int(&self, d: u32, m: i64) -> FieldElement {
        let r = m.rem_euclid(self.p as i64) as usize;
        if r == 0 {
            return self.zero(d);
        }
        let a = u64::from(self.log[r]);
        self.from_ambient(d, Some(a))
    }

    /// The integer in `[0, p)` representing `x` when `x` lies in the prime field.
    pub fn to_prime_int(&self, x: FieldElement) -> Option<u64> {
        match self.to_ambient(x) {
            None => Some(0),
            Some(a) => {
                let code = u64::from(self.exp[a as usize]);
                (code < self.p).then_some(code)
            }
        }
    }

    /// All elements of `k_d`: zero first, then `g_d^0, g_d^1, ...`.
    pub fn elements(&self, d: u32) -> Vec<FieldElement> {
        std::iter::once(self.zero(d))
            .chain((0..self.mult_order(d)).map(|k| self.from_exponent(d, k)))
            .collect()
    }

    /// Re-tags `x` as an element of `k_d` when it lies there.
    pub fn into_subfield(&self, x: FieldElement, d: u32) -> Result<FieldElement> {
        self.check_degree(d)?;
        if !self.lies_in(x, d) {
            return Err(Error::NotADivisor {
                from: x.degree,
                to: d,
            });
        }
        Ok(self.from_ambient(d, self.to_ambient(x)))
    }

    /// Smallest supported degree containing `x`.
    pub fn minimal_degree(&self, x: FieldElement) -> u32 {
        (1..=x.degree)
            .find(|&d| x.degree.is_multiple_of(d) && self.lies_in(x, d))
            .unwrap_or(x.degree)
    }

    /// Image of `x ∈ k_d` under the fixed embedding `k_d ⊂ k_{d'}`.
    pub fn embed(&self, x: FieldElement, target: u32) -> Result<FieldElement> {
        self.check_degree(target)?;
        if !target.is_multiple_of(x.degree) {
            return Err(Error::NotADivisor {
                from: x.degree,
                to: target,
            });
        }
        Ok(self.from_ambient(target, self.to_ambient(x)))
    }

    fn add_ambient(&self, a: Option<u64>, b: Option<u64>) -> Option<u64> {
        match (a, b) {
            (None, y) => y,
            (x, None) => x,
            (Some(a), Some(b)) => {
                let m = self.ambient_order;
                let diff = (b + m - a) % m;
                let z = self.zech[diff as usize];
                (z != NO_LOG).then(|| (a + u64::from(z)) % m)
            }
        }
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let d = self.common_degree(x, y);
        let s = self.add_ambient(self.to_ambient(x), self.to_ambient(y));
        self.from_ambient(d, s)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        match x.log {
            None => x,
            Some(l) => {
                let m = self.mult_order(x.degree);
                FieldElement {
                    degree: x.degree,
                    log: Some(((u64::from(l) + m / 2) % m) as u32),
                }
            }
        }
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let d = self.common_degree(x, y);
        match (self.to_ambient(x), self.to_ambient(y)) {
            (Some(a), Some(b)) => self.from_ambient(d, Some((a + b) % self.ambient_order)),
            _ => self.zero(d),
        }
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        let l = x.log.ok_or(Error::DivisionByZero)?;
        let m = self.mult_order(x.degree);
        Ok(FieldElement {
            degree: x.degree,
            log: Some(((m - u64::from(l)) % m) as u32),
        })
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^k`; negative powers of zero are an error.
    pub fn pow(&self, x: FieldElement, k: i64) -> Result<FieldElement> {
        match x.log {
            None if k > 0 => Ok(x),
            None if k == 0 => Ok(self.one(x.degree)),
            None => Err(Error::DivisionByZero),
            Some(l) => {
                let m = self.mult_order(x.degree) as i128;
                let e = (i128::from(l) * i128::from(k)).rem_euclid(m);
                Ok(FieldElement {
                    degree: x.degree,
                    log: Some(e as u32),
                })
            }
        }
    }

    /// `x^{q^i}` for any integer `i`.
    pub fn frobenius_power(&self, x: FieldElement, i: i64) -> FieldElement {
        match x.log {
            None => x,
            Some(l) => {
                let d = x.degree;
                let m = self.mult_order(d);
                let shift = i.rem_euclid(i64::from(d)) as u32;
                let factor = self.q.pow(shift) % m;
                FieldElement {
                    degree: d,
                    log: Some(((u128::from(l) * u128::from(factor)) % u128::from(m)) as u32),
                }
            }
        }
    }

    /// `N_{k_{d'}/k_d}(x) = ∏_{i < d'/d} x^{q^{d i}}`.
    pub fn relative_norm(&self, x: FieldElement, d: u32) -> Result<FieldElement> {
        self.check_degree(d)?;
        if !x.degree.is_multiple_of(d) {
            return Err(Error::NotADivisor {
                from: d,
                to: x.degree,
            });
        }
        // N(g_{d'}) = g_d, so the exponent is simply reduced.
        Ok(match x.log {
            None => self.zero(d),
            Some(l) => self.from_exponent(d, u64::from(l)),
        })
    }

    /// `Tr_{k_{d'}/k_d}(x) = Σ_{i < d'/d} x^{q^{d i}}`.
    pub fn relative_trace(&self, x: FieldElement, d: u32) -> Result<FieldElement> {
        self.check_degree(d)?;
        if !x.degree.is_multiple_of(d) {
            return Err(Error::NotADivisor {
                from: d,
                to: x.degree,
            });
        }
        let mut acc = self.zero(x.degree);
        for i in 0..x.degree / d {
            acc = self.add(acc, self.frobenius_power(x, i64::from(d * i)));
        }
        self.into_subfield(acc, d)
    }

    /// `Tr_{k_d/F_p}(x)` as an integer in `[0, p)`.
    pub fn absolute_trace(&self, x: FieldElement) -> u64 {
        let m = self.ambient_order;
        let mut acc = None;
        if let Some(a) = self.to_ambient(x) {
            let mut cur = a;
            for _ in 0..self.e * x.degree {
                acc = self.add_ambient(acc, Some(cur));
                cur = (cur * self.p) % m;
            }
        }
        match acc {
            None => 0,
            Some(a) => u64::from(self.exp[a as usize]),
        }
    }

    /// The kernel of `N: k_{2j}^× → k_j^×`, enumerated as `h^0, h^1, ...` for the fixed
    /// generator `h = g_{2j}^{q^j - 1}`.
    pub fn norm_one_subgroup(&self, j: u32) -> Result<Vec<FieldElement>> {
        self.check_degree(2 * j)?;
        let step = self.q.pow(j) - 1;
        Ok((0..self.q.pow(j) + 1)
            .map(|i| self.from_exponent(2 * j, i * step))
            .collect())
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElement) -> Result<u64> {
        let l = x.log.ok_or(Error::DivisionByZero)?;
        let m = self.mult_order(x.degree);
        Ok(m / m.gcd(&u64::from(l)))
    }

    pub fn is_square(&self, x: FieldElement) -> bool {
        x.log.is_none_or(|l| l % 2 == 0)
    }

    /// A square root of `x` inside `k_d`, when one exists.
    pub fn sqrt(&self, x: FieldElement) -> Option<FieldElement> {
        match x.log {
            None => Some(x),
            Some(l) if l % 2 == 0 => Some(FieldElement {
                degree: x.degree,
                log: Some(l / 2),
            }),
            _ => None,
        }
    }

    pub fn is_one(&self, x: FieldElement) -> bool {
        x.log == Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t3() -> FieldTower {
        FieldTower::new(3, 1, 4).unwrap()
    }

    #[test]
    fn tower_orders() {
        let t = t3();
        assert_eq!(t.mult_order(4), 80);
        assert_eq!(t.mult_order(2), 8);
        assert_eq!(FieldTower::new(3, 1, 2).unwrap().mult_order(2), 8);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            FieldTower::new(2, 1, 2),
            Err(Error::UnsupportedCharacteristic(2))
        ));
        assert!(FieldTower::new(9, 1, 2).is_err());
        assert!(FieldTower::new(3, 1, 0).is_err());
        assert!(matches!(FieldTower::new(3, 1, 20), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn generators_have_full_order() {
        for (p, e, d) in [(3, 1, 4), (5, 1, 4), (3, 2, 2), (7, 1, 2)] {
            let t = FieldTower::new(p, e, d).unwrap();
            for k in (1..=d).filter(|k| d % k == 0) {
                let g = t.generator(k).unwrap();
                assert_eq!(t.element_order(g).unwrap(), t.mult_order(k));
                // the order is certified independently of the log bookkeeping
                let mut x = g;
                let mut n = 1;
                while !t.is_one(x) {
                    x = t.mul(x, g);
                    n += 1;
                }
                assert_eq!(n, t.mult_order(k));
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_k2() {
        let t = t3();
        let els = t.elements(2);
        for &x in &els {
            assert_eq!(t.add(x, t.neg(x)), t.zero(2));
            for &y in &els {
                assert_eq!(t.add(x, y), t.add(y, x));
                for &z in els.iter().step_by(3) {
                    let lhs = t.mul(x, t.add(y, z));
                    let rhs = t.add(t.mul(x, y), t.mul(x, z));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn relative_norm_of_generator() {
        let t = t3();
        let g = t.generator(2).unwrap();
        let n = t.relative_norm(g, 1).unwrap();
        assert_eq!(n, t.pow(g, 4).unwrap().pipe(|x| t.into_subfield(x, 1).unwrap()));
        assert_eq!(n, t.from_int(1, -1));
        assert_eq!(t.relative_norm(t.one(2), 1).unwrap(), t.one(1));
        let image: std::collections::BTreeSet<_> = t.elements(2)[1..]
            .iter()
            .map(|&x| t.relative_norm(x, 1).unwrap())
            .collect();
        assert_eq!(image.len(), 2);
    }

    #[test]
    fn norm_matches_product_of_conjugates() {
        let t = t3();
        for (dp, d) in [(2, 1), (4, 1), (4, 2)] {
            for &x in &t.elements(dp) {
                let mut prod = t.one(dp);
                for i in 0..dp / d {
                    prod = t.mul(prod, t.frobenius_power(x, i64::from(d * i)));
                }
                if x.is_zero() {
                    continue;
                }
                assert_eq!(t.into_subfield(prod, d).unwrap(), t.relative_norm(x, d).unwrap());
            }
        }
    }

    #[test]
    fn norm_of_embedding_is_power() {
        let t = t3();
        for (d, dp) in [(1, 2), (1, 4), (2, 4)] {
            for &x in &t.elements(d)[1..] {
                let y = t.embed(x, dp).unwrap();
                let n = t.relative_norm(y, d).unwrap();
                assert_eq!(n, t.pow(x, i64::from(dp / d)).unwrap());
            }
        }
    }

    #[test]
    fn traces() {
        let t = t3();
        assert_eq!(t.relative_trace(t.one(2), 1).unwrap(), t.from_int(1, 2));
        assert_eq!(t.relative_trace(t.zero(2), 1).unwrap(), t.zero(1));
        let els = t.elements(4);
        for &x in els.iter().step_by(7) {
            for &y in els.iter().step_by(5) {
                let lhs = t.relative_trace(t.add(x, y), 2).unwrap();
                let rhs = t.add(t.relative_trace(x, 2).unwrap(), t.relative_trace(y, 2).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
        let image: std::collections::BTreeSet<_> =
            els.iter().map(|&x| t.relative_trace(x, 1).unwrap()).collect();
        assert_eq!(image.len(), 3);
    }

    #[test]
    fn frobenius() {
        let t = t3();
        for &x in &t.elements(1) {
            assert_eq!(
                t.frobenius_power(t.embed(x, 4).unwrap(), 1),
                t.embed(x, 4).unwrap()
            );
        }
        let g = t.generator(2).unwrap();
        assert_eq!(t.frobenius_power(g, 1), t.pow(g, 3).unwrap());
        let g4 = t.generator(4).unwrap();
        let order = (1..=4).find(|&i| t.frobenius_power(g4, i) == g4).unwrap();
        assert_eq!(order, 4);
        for &x in &t.elements(4) {
            assert_eq!(t.frobenius_power(x, 4), x);
        }
        let els = t.elements(2);
        for &x in &els {
            for &y in &els {
                let f = |z| t.frobenius_power(z, 1);
                assert_eq!(f(t.add(x, y)), t.add(f(x), f(y)));
                assert_eq!(f(t.mul(x, y)), t.mul(f(x), f(y)));
            }
        }
    }

    #[test]
    fn norm_one_subgroups() {
        let t = t3();
        let u1 = t.norm_one_subgroup(1).unwrap();
        assert_eq!(u1.len(), 4);
        let u2 = t.norm_one_subgroup(2).unwrap();
        assert_eq!(u2.len(), 10);
        for (j, grp) in [(1u32, &u1), (2, &u2)] {
            for &x in grp.iter() {
                assert_eq!(t.pow(x, 3i64.pow(j) + 1).unwrap(), t.one(2 * j));
                assert!(t.is_one(t.relative_norm(x, j).unwrap()));
            }
        }
    }

    #[test]
    fn embedding_consistency() {
        let t = t3();
        assert_eq!(t.embed(t.one(1), 2).unwrap(), t.one(2));
        let g = t.generator(2).unwrap();
        let g4 = t.embed(g, 4).unwrap();
        assert_eq!(t.element_order(g4).unwrap(), 8);
        for &x in &t.elements(1) {
            let via = t.embed(t.embed(x, 2).unwrap(), 4).unwrap();
            assert_eq!(via, t.embed(x, 4).unwrap());
        }
        assert!(t.embed(g, 3).is_err());
    }

    #[test]
    fn prime_field_conversion() {
        let t = FieldTower::new(5, 1, 2).unwrap();
        for m in 0..5 {
            let x = t.from_int(2, m);
            assert_eq!(t.to_prime_int(x), Some(m as u64));
        }
        assert_eq!(t.absolute_trace(t.one(2)), 2);
        let t9 = FieldTower::new(3, 2, 2).unwrap();
        assert_eq!(t9.q(), 9);
        assert_eq!(t9.absolute_trace(t9.one(1)), 2);
    }

    trait Pipe: Sized {
        fn pipe<R>(self, f: impl FnOnce(Self) -> R) -> R {
            f(self)
        }
    }
    impl<T> Pipe for T {}

    proptest::proptest! {
        #[test]
        fn field_laws(a in 0u64..81, b in 0u64..81, c in 0u64..81, i in 0i64..4) {
            let t = t3();
            // index 80 stands for zero
            let el = |k: u64| if k == 80 { t.zero(4) } else { t.from_exponent(4, k) };
            let (x, y, z) = (el(a), el(b), el(c));
            proptest::prop_assert_eq!(t.mul(x, t.add(y, z)), t.add(t.mul(x, y), t.mul(x, z)));
            proptest::prop_assert_eq!(
                t.frobenius_power(t.add(x, t.mul(y, z)), i),
                t.add(t.frobenius_power(x, i), t.mul(t.frobenius_power(y, i), t.frobenius_power(z, i)))
            );
            proptest::prop_assert_eq!(
                t.relative_trace(t.add(x, y), 2).unwrap(),
                t.add(t.relative_trace(x, 2).unwrap(), t.relative_trace(y, 2).unwrap())
            );
            if !x.is_zero() && !y.is_zero() {
                let n = |v| t.relative_norm(v, 2).unwrap();
                proptest::prop_assert_eq!(n(t.mul(x, y)), t.mul(n(x), n(y)));
                proptest::prop_assert_eq!(t.embed(n(x), 4).unwrap(), t.pow(x, 10).unwrap());
                proptest::prop_assert!(t.is_one(t.mul(x, t.inv(x).unwrap())));
            }
        }
    }
}
