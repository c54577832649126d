//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! A scalar is stored in the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}` with a common positive
//! denominator, so two scalars of the same conductor are equal iff their stored data are.
//! Scalars of different conductors are lifted to the lcm before any operation.

use num_complex::Complex64;
use num_integer::Integer;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

/// Reduction data for one conductor: row `e` holds `ζ_N^e` in the power basis.
#[derive(Debug)]
struct Field {
    n: u32,
    phi: usize,
    powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both low degree first, den monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = poly_div_exact(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

impl Field {
    fn build(n: u32) -> Self {
        let phi_poly = cyclotomic_polynomial(n);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * phi_poly[i];
                }
            }
        }
        Field { n, phi, powers }
    }
}

fn field(n: u32) -> Arc<Field> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = cache.read().expect("cyclotomic cache poisoned").get(&n) {
        return f.clone();
    }
    let built = Arc::new(Field::build(n));
    cache
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(n)
        .or_insert(built)
        .clone()
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<Field>,
    num: Vec<i128>,
    den: i128,
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo({self})")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = self.to_rational() {
            return if b == 1 {
                write!(f, "{a}")
            } else {
                write!(f, "{a}/{b}")
            };
        }
        let mut first = true;
        for (i, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}*z{}^{i}", self.field.n)?,
            }
        }
        if self.den != 1 {
            write!(f, " (/{})", self.den)?;
        }
        Ok(())
    }
}

impl Cyclo {
    fn from_parts(field: Arc<Field>, mut num: Vec<i128>, mut den: i128) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|c| *c = -*c);
        }
        let g = num.iter().fold(den, |g, &c| g.gcd(&c));
        if g > 1 {
            num.iter_mut().for_each(|c| *c /= g);
            den /= g;
        }
        Cyclo { field, num, den }
    }

    /// Builds `Σ c_e ζ_N^e / den` from an exponent-indexed dense vector of any length.
    fn reduce(field: Arc<Field>, dense: &[i128], den: i128) -> Self {
        let n = field.n as usize;
        let mut num = vec![0i128; field.phi];
        for (e, &c) in dense.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = &field.powers[e % n];
            for (acc, &r) in num.iter_mut().zip(row) {
                if r != 0 {
                    *acc += c * i128::from(r);
                }
            }
        }
        Self::from_parts(field, num, den)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i128) -> Self {
        Cyclo {
            field: field(1),
            num: vec![c],
            den: 1,
        }
    }

    pub fn from_ratio(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_parts(field(1), vec![num], den)
    }

    /// `ζ_N^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "conductor must be positive");
        let f = field(n);
        let e = k.rem_euclid(i64::from(n)) as usize;
        let num = f.powers[e].iter().map(|&c| i128::from(c)).collect();
        Cyclo {
            field: f,
            num,
            den: 1,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    /// The same number viewed in `Q(ζ_m)` for a multiple `m` of the conductor.
    pub fn lift(&self, m: u32) -> Self {
        let n = self.field.n;
        assert!(m.is_multiple_of(n), "conductor {m} is not a multiple of {n}");
        if m == n {
            return self.clone();
        }
        let f = field(m);
        let step = (m / n) as usize;
        let mut dense = vec![0i128; m as usize];
        for (i, &c) in self.num.iter().enumerate() {
            dense[(i * step) % m as usize] += c;
        }
        Self::reduce(f, &dense, self.den)
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let (n, m) = (a.field.n, b.field.n);
        if n == m {
            (a.clone(), b.clone())
        } else {
            let l = n.lcm(&m);
            (a.lift(l), b.lift(l))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }

    /// `Some((a, b))` with `b > 0` when the scalar is the rational number `a/b`.
    pub fn to_rational(&self) -> Option<(i128, i128)> {
        self.num[1..]
            .iter()
            .all(|&c| c == 0)
            .then(|| (self.num[0], self.den))
    }

    pub fn to_integer(&self) -> Option<i128> {
        self.to_rational().and_then(|(a, b)| (b == 1).then_some(a))
    }

    pub fn is_rational_integer(&self) -> bool {
        self.to_integer().is_some()
    }

    /// Image under `ζ_N ↦ exp(2πi/N)`.
    pub fn to_complex(&self) -> Complex64 {
        let n = f64::from(self.field.n);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in self.num.iter().enumerate() {
            if c != 0 {
                acc += Complex64::from_polar(c as f64, std::f64::consts::TAU * i as f64 / n);
            }
        }
        acc / self.den as f64
    }

    /// The Galois automorphism `ζ_N ↦ ζ_N^k`, `gcd(k, N) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let n = i64::from(self.field.n);
        debug_assert_eq!(k.gcd(&n), 1);
        let mut dense = vec![0i128; n as usize];
        for (i, &c) in self.num.iter().enumerate() {
            dense[(i as i64 * k).rem_euclid(n) as usize] += c;
        }
        Self::reduce(self.field.clone(), &dense, self.den)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// `self · num / den`.
    pub fn scale(&self, num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        self.scale_simple(num, den)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = i64::from(self.field.n);
        let mut others = Self::one().lift(self.field.n);
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = &others * self;
        let (a, b) = norm
            .to_rational()
            .expect("norm of a cyclotomic number is rational");
        Some(others.scale(b, a))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn add_impl(&self, other: &Self, sign: i128) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign == 1 { other.clone() } else { -other };
        }
        let (a, b) = Self::aligned(self, other);
        let l = a.den.lcm(&b.den);
        let (fa, fb) = (l / a.den, l / b.den);
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(&x, &y)| x * fa + sign * y * fb)
            .collect();
        Self::from_parts(a.field, num, l)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if let Some((p, q)) = other.to_rational() {
            return self.scale_simple(p, q);
        }
        if let Some((p, q)) = self.to_rational() {
            return other.scale_simple(p, q);
        }
        let (a, b) = Self::aligned(self, other);
        let phi = a.field.phi;
        let mut dense = vec![0i128; 2 * phi];
        for (i, &x) in a.num.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.num.iter().enumerate() {
                if y != 0 {
                    dense[i + j] += x * y;
                }
            }
        }
        Self::reduce(a.field, &dense, a.den * b.den)
    }

    fn scale_simple(&self, p: i128, q: i128) -> Self {
        let num = self.num.iter().map(|&c| c * p).collect();
        Self::from_parts(self.field.clone(), num, self.den * q)
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::aligned(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyclo {}

impl Default for Cyclo {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i128> for Cyclo {
    fn from(c: i128) -> Self {
        Self::from_int(c)
    }
}

impl From<i64> for Cyclo {
    fn from(c: i64) -> Self {
        Self::from_int(i128::from(c))
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            field: self.field.clone(),
            num: self.num.iter().map(|&c| -c).collect(),
            den: self.den,
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                $body(self, rhs)
            }
        }
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                $body(&self, rhs)
            }
        }
        impl $tr<Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Cyclo, b: &Cyclo| a.add_impl(b, 1));
binop!(Sub, sub, |a: &Cyclo, b: &Cyclo| a.add_impl(b, -1));
binop!(Mul, mul, |a: &Cyclo, b: &Cyclo| a.mul_impl(b));

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        *self = self.add_impl(rhs, 1);
    }
}

impl AddAssign for Cyclo {
    fn add_assign(&mut self, rhs: Cyclo) {
        *self = self.add_impl(&rhs, 1);
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        *self = self.add_impl(rhs, -1);
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = self.mul_impl(rhs);
    }
}

impl std::iter::Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Self {
        iter.fold(Cyclo::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Cyclo> for Cyclo {
    fn sum<I: Iterator<Item = &'a Cyclo>>(iter: I) -> Self {
        iter.fold(Cyclo::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Cyclo {
    fn product<I: Iterator<Item = Cyclo>>(iter: I) -> Self {
        iter.fold(Cyclo::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8).len(), 5);
        assert_eq!(cyclotomic_polynomial(80).len(), 33);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in [2u32, 3, 4, 8, 12, 15, 80] {
            let s: Cyclo = (0..n).map(|k| Cyclo::root_of_unity(n, k.into())).sum();
            assert!(s.is_zero(), "n = {n}");
            assert_eq!(Cyclo::root_of_unity(n, n.into()), Cyclo::one());
        }
    }

    #[test]
    fn mixed_conductors() {
        let i = Cyclo::root_of_unity(4, 1);
        let z8 = Cyclo::root_of_unity(8, 1);
        assert_eq!(&z8 * &z8, i);
        assert_eq!(Cyclo::root_of_unity(6, 2), Cyclo::root_of_unity(3, 1));
        assert_eq!(Cyclo::root_of_unity(2, 1), Cyclo::from_int(-1));
        let w = Cyclo::root_of_unity(3, 1);
        assert_eq!(&w * &i, Cyclo::root_of_unity(12, 7));
    }

    #[test]
    fn gauss_sum_squares() {
        // (Σ_x ζ_3^{x²})² = -3
        let g: Cyclo = (0..3i64).map(|x| Cyclo::root_of_unity(3, x * x)).sum();
        assert_eq!(&g * &g, Cyclo::from_int(-3));
        let g5: Cyclo = (0..5i64).map(|x| Cyclo::root_of_unity(5, x * x)).sum();
        assert_eq!(&g5 * &g5, Cyclo::from_int(5));
        assert_eq!(&g5 * &g5.conj(), Cyclo::from_int(5));
    }

    #[test]
    fn inverse_and_scaling() {
        let x = Cyclo::from_int(2) + Cyclo::root_of_unity(5, 1);
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Cyclo::one());
        let h = Cyclo::from_ratio(3, 6);
        assert_eq!(h.to_rational(), Some((1, 2)));
        assert_eq!(h.scale(4, 1), Cyclo::from_int(2));
        assert_eq!(x.scale(2, 4).scale(2, 1), x);
        assert_eq!(x.scale(3, 9).scale(6, 2), x);
        assert!(Cyclo::zero().inv().is_none());
    }

    #[test]
    fn complex_embedding() {
        let z = Cyclo::root_of_unity(8, 3);
        let c = z.to_complex();
        assert!((c - Complex64::from_polar(1.0, std::f64::consts::TAU * 3.0 / 8.0)).norm() < 1e-12);
        let mut prod = Cyclo::one();
        let mut approx = Complex64::new(1.0, 0.0);
        for k in 0..100 {
            let mut f = Cyclo::root_of_unity(80, k * 7);
            if k % 5 == 0 {
                f += Cyclo::from_ratio(1, 2);
            }
            approx *= f.to_complex();
            prod = &prod * &f;
        }
        assert!((prod.to_complex() - approx).norm() < 1e-9 * approx.norm().max(1.0));
    }

    proptest::proptest! {
        #[test]
        fn ring_laws(
            a in proptest::collection::vec((0i64..12, -3i128..4), 1..4),
            b in proptest::collection::vec((0i64..8, -3i128..4), 1..4),
        ) {
            // sums of roots of unity of orders 12 and 8 live in Q(ζ_24)
            let x: Cyclo = a.iter().map(|&(k, c)| Cyclo::root_of_unity(12, k).scale(c, 1)).sum();
            let y: Cyclo = b.iter().map(|&(k, c)| Cyclo::root_of_unity(8, k).scale(c, 1)).sum();
            let diff = (&x * &y).to_complex() - x.to_complex() * y.to_complex();
            proptest::prop_assert!(diff.norm() < 1e-9);
            proptest::prop_assert_eq!(&(&x + &y) - &y, x.clone());
            proptest::prop_assert_eq!((&x * &y).conj(), x.conj() * y.conj());
            if !x.is_zero() {
                proptest::prop_assert_eq!(&x * &x.inv().unwrap(), Cyclo::one());
            }
        }
    }
}
