//! Combinatorial evaluation of `⟨R_{T,χ}, ω_ψ⟩` for `(Res GL_n, U_n)`: index sets,
//! subtorus counts, normalizer orders, signs, closed forms and the general bound.

use crate::chars::{
    in_gamma_orbit, is_regular, quadratic_char, restrict_char, CyclicGroup, GroupKind, MultChar, Restriction,
};
use crate::dl::{TorusCharacter, TorusShape};
use crate::error::{Error, Result};
use num_integer::binomial;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Sign in the pair restriction `x ↦ χ_{t1}(x)·χ_{t2}(x^{sign·q^j})`.
///
/// A pair glued into one `k_{2j}^×` factor meets the unitary group in `x ↦ (x, x^{-q^j})`,
/// and `-1` is the sign that matches the brute-force oracle; `+1` does not.
pub const DEFAULT_PAIR_SIGN: i8 = -1;

/// Which rank enters the sign `(−1)^{rk T + rk G}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankConvention {
    /// Ranks over `k' = k_2`: `rk T = Σ λ_j`, `rk G = n`.
    KPrime,
    /// Absolute ranks of the Weil restrictions, both `2n`; the sign is always `+1`.
    K,
}

impl RankConvention {
    pub const ALL: [RankConvention; 2] = [RankConvention::KPrime, RankConvention::K];

    pub fn sign(self, shape: &TorusShape) -> i64 {
        match self {
            RankConvention::KPrime => parity_sign(shape.rank() + shape.n()),
            RankConvention::K => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RankConvention::KPrime => "kprime",
            RankConvention::K => "k",
        }
    }
}

fn parity_sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn factorial(n: u32) -> u128 {
    (1..=u128::from(n)).product()
}

/// Shape of `Z_κ` (`ν`) together with the split `2μ_j + μ'_j = ν_j` for odd `j`.
///
/// Vectors are indexed by `j - 1`; `μ` and `μ'` are zero at even `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubtorusDatum {
    nu: Vec<u32>,
    mu: Vec<u32>,
    mu_prime: Vec<u32>,
}

impl SubtorusDatum {
    pub fn new(shape: &TorusShape, nu: &[u32], mu: &[u32], mu_prime: &[u32]) -> Result<Self> {
        let len = shape.max_j() as usize;
        let pad = |v: &[u32]| -> Result<Vec<u32>> {
            if v.len() > len && v[len..].iter().any(|&x| x != 0) {
                return Err(Error::InvalidDatum(format!("{v:?} is longer than the shape")));
            }
            let mut out = v.to_vec();
            out.resize(len, 0);
            Ok(out)
        };
        let (nu, mu, mu_prime) = (pad(nu)?, pad(mu)?, pad(mu_prime)?);
        for j in 1..=shape.max_j() {
            let i = j as usize - 1;
            if nu[i] > shape.lambda_j(j) {
                return Err(Error::InvalidDatum(format!(
                    "nu_{j} = {} exceeds lambda_{j} = {}",
                    nu[i],
                    shape.lambda_j(j)
                )));
            }
            if j % 2 == 0 {
                if mu[i] != 0 || mu_prime[i] != 0 {
                    return Err(Error::InvalidDatum(format!("mu_{j} must vanish for even j")));
                }
            } else if 2 * mu[i] + mu_prime[i] != nu[i] {
                return Err(Error::InvalidDatum(format!(
                    "2*mu_{j} + mu'_{j} = {} but nu_{j} = {}",
                    2 * mu[i] + mu_prime[i],
                    nu[i]
                )));
            }
        }
        Ok(Self { nu, mu, mu_prime })
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn mu_prime(&self) -> &[u32] {
        &self.mu_prime
    }

    /// `l(Z_κ) = Σ_j μ'_j`, the number of anisotropic factors.
    pub fn anisotropic_factors(&self) -> u32 {
        self.mu_prime.iter().sum()
    }

    fn check_shape(&self, shape: &TorusShape) -> Result<()> {
        Self::new(shape, &self.nu, &self.mu, &self.mu_prime).map(|_| ())
    }
}

/// Every valid datum for the shape, lexicographic in `(ν, μ')`.
pub fn subtorus_data(shape: &TorusShape) -> Vec<SubtorusDatum> {
    let len = shape.max_j() as usize;
    let mut out = vec![(vec![], vec![])];
    for j in 1..=shape.max_j() {
        let mut next = Vec::new();
        for (nu, mp) in &out {
            for v in 0..=shape.lambda_j(j) {
                let splits: Vec<u32> = if j % 2 == 0 {
                    vec![0]
                } else {
                    (0..=v).filter(|m| (v - m) % 2 == 0).collect()
                };
                for m in splits {
                    let (mut nu, mut mp) = (nu.clone(), mp.clone());
                    nu.push(v);
                    mp.push(m);
                    next.push((nu, mp));
                }
            }
        }
        out = next;
    }
    let mut data: Vec<SubtorusDatum> = out
        .into_iter()
        .map(|(nu, mu_prime)| {
            let mu = (0..len)
                .map(|i| if i % 2 == 0 { (nu[i] - mu_prime[i]) / 2 } else { 0 })
                .collect();
            SubtorusDatum { nu, mu, mu_prime }
        })
        .collect();
    data.sort_by(|a, b| (&a.nu, &a.mu_prime).cmp(&(&b.nu, &b.mu_prime)));
    data
}

/// Number of subtori `T_ȷ` attached to the datum.
pub fn count_subtori(shape: &TorusShape, datum: &SubtorusDatum) -> Result<u128> {
    datum.check_shape(shape)?;
    let mut total = 1u128;
    for j in 1..=shape.max_j() {
        let i = j as usize - 1;
        let (l, v) = (shape.lambda_j(j), datum.nu[i]);
        if j % 2 == 0 {
            total *= binomial(u128::from(l), u128::from(v));
        } else {
            let (m, mp) = (datum.mu[i], datum.mu_prime[i]);
            total *= binomial(u128::from(l), u128::from(mp)) * factorial(l - mp)
                / (2u128.pow(m) * factorial(l - v) * factorial(m));
        }
    }
    Ok(total)
}

/// `|N̄(ȷ, T)^F|` for any `ȷ` attached to the datum.
pub fn normalizer_order(shape: &TorusShape, datum: &SubtorusDatum) -> Result<u128> {
    datum.check_shape(shape)?;
    let mut total = 1u128;
    for j in 1..=shape.max_j() {
        let i = j as usize - 1;
        let (l, v) = (shape.lambda_j(j), datum.nu[i]);
        let jj = u128::from(j);
        if j % 2 == 0 {
            total *= jj.pow(v) * factorial(v) * binomial(u128::from(l), u128::from(v));
        } else {
            let (m, mp) = (datum.mu[i], datum.mu_prime[i]);
            total *= jj.pow(m + mp)
                * factorial(m)
                * factorial(mp)
                * binomial(u128::from(l), u128::from(mp))
                * factorial(l - mp)
                / (factorial(l - v) * factorial(m));
        }
    }
    Ok(total)
}

/// Index sets of one block, with 1-based positions inside the block.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockIndexSets {
    pub j: u32,
    /// `I_j` for even `j`.
    pub singles: Vec<usize>,
    /// `I_j` for odd `j`: unordered pairs `t1 < t2`.
    pub pairs: Vec<(usize, usize)>,
    /// `I'_j` for odd `j`.
    pub norm_one: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSets {
    pub blocks: Vec<BlockIndexSets>,
}

impl IndexSets {
    /// `r = Σ_j |I_j|`.
    pub fn r(&self) -> usize {
        self.blocks.iter().map(|b| b.singles.len() + b.pairs.len()).sum()
    }

    pub fn all_norm_one_empty(&self) -> bool {
        self.blocks.iter().all(|b| b.norm_one.is_empty())
    }
}

fn pair_restriction(q: u64, j: u32, a: &MultChar, b: &MultChar, sign: i8) -> Result<MultChar> {
    let g = CyclicGroup::split(q, 2 * j);
    let pair = MultChar::new(vec![g, g], vec![a.exponents[0] as i64, b.exponents[0] as i64])?;
    restrict_char(&pair, Restriction::FrobeniusPair { sign })
}

fn even_condition(q: u64, j: u32, c: &MultChar) -> Result<bool> {
    let r = restrict_char(c, Restriction::Subfield { degree: j })?;
    in_gamma_orbit(&r, &quadratic_char(q, j, GroupKind::Split))
}

fn norm_one_condition(q: u64, j: u32, c: &MultChar) -> Result<bool> {
    let r = restrict_char(c, Restriction::NormOne)?;
    in_gamma_orbit(&r, &quadratic_char(q, j, GroupKind::NormOne))
}

fn pair_condition(q: u64, j: u32, a: &MultChar, b: &MultChar, sign: i8) -> Result<bool> {
    let r = pair_restriction(q, j, a, b, sign)?;
    in_gamma_orbit(&r, &quadratic_char(q, 2 * j, GroupKind::Split))
}

pub fn index_sets(shape: &TorusShape, chi: &TorusCharacter, sign: i8) -> Result<IndexSets> {
    if chi.shape() != shape {
        return Err(Error::InvalidCharacter("character is for another shape".into()));
    }
    let q = chi.q();
    let mut blocks = Vec::new();
    for j in 1..=shape.max_j() {
        let block: Vec<MultChar> = shape.block(j).map(|i| chi.coordinate(i)).collect();
        let mut sets = BlockIndexSets {
            j,
            ..Default::default()
        };
        for (t, c) in block.iter().enumerate() {
            if j % 2 == 0 {
                if even_condition(q, j, c)? {
                    sets.singles.push(t + 1);
                }
            } else {
                if norm_one_condition(q, j, c)? {
                    sets.norm_one.push(t + 1);
                }
                for (u, d) in block.iter().enumerate().skip(t + 1) {
                    if pair_condition(q, j, c, d, sign)? {
                        sets.pairs.push((t + 1, u + 1));
                    }
                }
            }
        }
        blocks.push(sets);
    }
    Ok(IndexSets { blocks })
}

/// The regular-character evaluation: the signed sum and the claimed closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularMultiplicity {
    pub index_sets: IndexSets,
    /// `Σ_ν Σ_{(μ,μ')} (−1)^{Σλ + Σμ' + n} ∏ C(|I_j|, ν_j) ∏ C(|I_j|, μ_j) C(|I'_j|, μ'_j)`.
    pub signed: i64,
    /// `(−1)^{Σλ + n}·2^r` when every `I'_j` is empty, otherwise `0`.
    pub closed_form_signed: i64,
}

impl RegularMultiplicity {
    /// `(−1)^{rk_{k'} T + rk_{k'} G}` times the signed value.
    pub fn normalized(&self, shape: &TorusShape) -> i64 {
        RankConvention::KPrime.sign(shape) * self.signed
    }

    pub fn closed_form_normalized(&self, shape: &TorusShape) -> i64 {
        RankConvention::KPrime.sign(shape) * self.closed_form_signed
    }

    pub fn closed_form_holds(&self) -> bool {
        self.signed == self.closed_form_signed
    }
}

fn require_regular(shape: &TorusShape, chi: &TorusCharacter) -> Result<()> {
    if !is_regular(shape, chi)? {
        return Err(Error::NotRegular(format!(
            "character {:?} of shape ({}) has a nontrivial Weyl stabilizer",
            chi.exponents(),
            shape.label()
        )));
    }
    Ok(())
}

pub fn regular_multiplicity(
    shape: &TorusShape,
    chi: &TorusCharacter,
    sign: i8,
) -> Result<RegularMultiplicity> {
    require_regular(shape, chi)?;
    let sets = index_sets(shape, chi, sign)?;
    let base = RankConvention::KPrime.sign(shape);
    let mut signed = 0i64;
    for datum in subtorus_data(shape) {
        let mut term: i64 = base * parity_sign(datum.anisotropic_factors());
        for (i, b) in sets.blocks.iter().enumerate() {
            let c = |n: usize, k: u32| binomial(n as i64, i64::from(k));
            if b.j % 2 == 0 {
                term *= c(b.singles.len(), datum.nu[i]);
            } else {
                term *= c(b.pairs.len(), datum.mu[i]) * c(b.norm_one.len(), datum.mu_prime[i]);
            }
        }
        signed += term;
    }
    let closed_form_signed = if sets.all_norm_one_empty() {
        base * (1i64 << sets.r())
    } else {
        0
    };
    Ok(RegularMultiplicity {
        index_sets: sets,
        signed,
        closed_form_signed,
    })
}

/// `(−1)^{rk T + rk G}` under the given reading of `rk`.
pub fn unipotent_multiplicity(shape: &TorusShape, convention: RankConvention) -> i64 {
    convention.sign(shape)
}

/// The cuspidal dichotomy for `T^F = k_{2n}^×`, already normalized by the rank sign.
pub fn cuspidal_multiplicity(shape: &TorusShape, chi: &TorusCharacter) -> Result<i64> {
    let n = shape.n();
    if !shape.is_cuspidal() || shape.lambda_j(n) != 1 {
        return Err(Error::InvalidShape(format!(
            "shape ({}) is not anisotropic modulo the centre",
            shape.label()
        )));
    }
    require_regular(shape, chi)?;
    let c = chi.coordinate(0);
    Ok(if n.is_multiple_of(2) {
        if even_condition(chi.q(), n, &c)? {
            2
        } else {
            1
        }
    } else if norm_one_condition(chi.q(), n, &c)? {
        0
    } else {
        1
    })
}

/// Ordered choices of distinct slots: `pairs` ordered pairs followed by `singles` slots.
fn ordered_choices(slots: usize, pairs: u32, singles: u32) -> Vec<(Vec<(usize, usize)>, Vec<usize>)> {
    fn rec(
        used: &mut Vec<bool>,
        pairs: u32,
        singles: u32,
        acc: &mut (Vec<(usize, usize)>, Vec<usize>),
        out: &mut Vec<(Vec<(usize, usize)>, Vec<usize>)>,
    ) {
        if pairs > 0 {
            for a in 0..used.len() {
                for b in 0..used.len() {
                    if a == b || used[a] || used[b] {
                        continue;
                    }
                    used[a] = true;
                    used[b] = true;
                    acc.0.push((a, b));
                    rec(used, pairs - 1, singles, acc, out);
                    acc.0.pop();
                    used[a] = false;
                    used[b] = false;
                }
            }
        } else if singles > 0 {
            for a in 0..used.len() {
                if used[a] {
                    continue;
                }
                used[a] = true;
                acc.1.push(a);
                rec(used, 0, singles - 1, acc, out);
                acc.1.pop();
                used[a] = false;
            }
        } else {
            out.push(acc.clone());
        }
    }
    let mut out = Vec::new();
    rec(
        &mut vec![false; slots],
        pairs,
        singles,
        &mut (vec![], vec![]),
        &mut out,
    );
    out
}

/// Number of embeddings of `T_ȷ` into one block: ordered slot choices with one
/// `Z/j` twist per glued factor.
fn block_embeddings(j: u32, lambda: u32, pairs: u32, singles: u32) -> u128 {
    (ordered_choices(lambda as usize, pairs, singles).len() as u128) * u128::from(j).pow(pairs + singles)
}

/// Embeddings `e` of `T_ȷ` into one block with `χ∘e = ϑ_{T_ȷ}`.
fn block_matches(q: u64, j: u32, block: &[MultChar], pairs: u32, singles: u32, sign: i8) -> Result<u128> {
    let frob = |c: &MultChar, e: u32| c.pow((q * q).pow(e) as i64);
    let mut total = 0u128;
    for (ps, ss) in ordered_choices(block.len(), pairs, singles) {
        // each glued factor contributes independently over its j twists
        let mut ways = 1u128;
        for &(a, b) in &ps {
            let target = quadratic_char(q, 2 * j, GroupKind::Split);
            let mut hits = 0;
            for e in 0..j {
                if pair_restriction(q, j, &frob(&block[a], e), &frob(&block[b], e), sign)? == target {
                    hits += 1;
                }
            }
            ways *= hits;
        }
        for &a in &ss {
            let mut hits = 0;
            for e in 0..j {
                let c = frob(&block[a], e);
                let (r, target) = if j.is_multiple_of(2) {
                    (
                        restrict_char(&c, Restriction::Subfield { degree: j })?,
                        quadratic_char(q, j, GroupKind::Split),
                    )
                } else {
                    (
                        restrict_char(&c, Restriction::NormOne)?,
                        quadratic_char(q, j, GroupKind::NormOne),
                    )
                };
                if r == target {
                    hits += 1;
                }
            }
            ways *= hits;
        }
        total += ways;
    }
    Ok(total)
}

/// The general multiplicity formula evaluated term by term: for each datum,
/// `(−1)^{rk T + rk G + l(Z_κ)}·#{ȷ}·#{e : χ∘e = ϑ_{T_ȷ}} / |N̄(ȷ,T)|`.
pub fn general_multiplicity(shape: &TorusShape, chi: &TorusCharacter, sign: i8) -> Result<i64> {
    require_regular(shape, chi)?;
    let q = chi.q();
    let base = RankConvention::KPrime.sign(shape);
    let mut total = Ratio::from_integer(0i128);
    for datum in subtorus_data(shape) {
        let mut matches = 1u128;
        for j in 1..=shape.max_j() {
            let i = j as usize - 1;
            let block: Vec<MultChar> = shape.block(j).map(|t| chi.coordinate(t)).collect();
            let (pairs, singles) = if j % 2 == 0 {
                (0, datum.nu[i])
            } else {
                (datum.mu[i], datum.mu_prime[i])
            };
            matches *= block_matches(q, j, &block, pairs, singles, sign)?;
        }
        if matches == 0 {
            continue;
        }
        let s = base * parity_sign(datum.anisotropic_factors());
        let count = count_subtori(shape, &datum)? as i128;
        let norm = normalizer_order(shape, &datum)? as i128;
        total += Ratio::new(i128::from(s) * count * matches as i128, norm);
    }
    if !total.is_integer() {
        return Err(Error::Internal(format!(
            "general formula gave the non-integer {total} for {:?}",
            chi.exponents()
        )));
    }
    Ok(total.to_integer() as i64)
}

/// `2^n (n!)^{3/2}` as `coefficient·√radicand`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub coefficient: u128,
    pub radicand: u128,
}

impl Bound {
    /// Exact test of `|m| <= coefficient·√radicand`.
    pub fn admits(&self, m: i128) -> bool {
        let m = m.unsigned_abs();
        m * m <= self.coefficient * self.coefficient * self.radicand
    }

    pub fn to_f64(&self) -> f64 {
        self.coefficient as f64 * (self.radicand as f64).sqrt()
    }
}

pub fn multiplicity_bound(n: u32) -> Result<Bound> {
    if n == 0 || n > 12 {
        return Err(Error::UnsupportedRank(format!("bound for n = {n}")));
    }
    let f = factorial(n);
    Ok(Bound {
        coefficient: (1u128 << n) * f,
        radicand: f,
    })
}

/// A subtorus of one block in the abstract model: unordered singles and unordered pairs.
type BlockStructure = (BTreeSet<usize>, BTreeSet<(usize, usize)>);

/// Enumerates every block structure by assigning each slot a role.
fn block_structures(lambda: usize, glue: bool) -> Vec<BlockStructure> {
    fn rec(
        t: usize,
        lambda: usize,
        glue: bool,
        acc: &mut BlockStructure,
        taken: &mut Vec<bool>,
        out: &mut Vec<BlockStructure>,
    ) {
        if t == lambda {
            out.push(acc.clone());
            return;
        }
        if taken[t] {
            rec(t + 1, lambda, glue, acc, taken, out);
            return;
        }
        rec(t + 1, lambda, glue, acc, taken, out);
        acc.0.insert(t);
        rec(t + 1, lambda, glue, acc, taken, out);
        acc.0.remove(&t);
        if glue {
            for u in t + 1..lambda {
                if taken[u] {
                    continue;
                }
                taken[u] = true;
                acc.1.insert((t, u));
                rec(t + 1, lambda, glue, acc, taken, out);
                acc.1.remove(&(t, u));
                taken[u] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        lambda,
        glue,
        &mut Default::default(),
        &mut vec![false; lambda],
        &mut out,
    );
    out
}

/// Subtorus count and normalizer order by enumeration in the abstract model, for
/// comparison with [`count_subtori`] and [`normalizer_order`].
pub fn enumerate_counts(shape: &TorusShape, datum: &SubtorusDatum) -> Result<(u128, u128)> {
    datum.check_shape(shape)?;
    let mut count = 1u128;
    let mut normalizer = 1u128;
    for j in 1..=shape.max_j() {
        let i = j as usize - 1;
        let l = shape.lambda_j(j);
        let odd = j % 2 == 1;
        let (pairs, singles) = if odd {
            (datum.mu[i], datum.mu_prime[i])
        } else {
            (0, datum.nu[i])
        };
        count *= block_structures(l as usize, odd)
            .iter()
            .filter(|(s, p)| s.len() == singles as usize && p.len() == pairs as usize)
            .count() as u128;
        normalizer *= block_embeddings(j, l, pairs, singles);
    }
    Ok((count, normalizer))
}

/// Number of subtori of `Z`-shape `ν`, by enumeration.
pub fn enumerate_subtori_of_shape(shape: &TorusShape, nu: &[u32]) -> u128 {
    (1..=shape.max_j())
        .map(|j| {
            let target = nu.get(j as usize - 1).copied().unwrap_or(0) as usize;
            block_structures(shape.lambda_j(j) as usize, j % 2 == 1)
                .iter()
                .filter(|(s, p)| s.len() + 2 * p.len() == target)
                .count() as u128
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::{torus_shapes, weyl_group_data, WeylGroup};
    use proptest::prelude::*;

    fn shape(n: u32, l: &[u32]) -> TorusShape {
        TorusShape::new(n, l).unwrap()
    }

    #[test]
    fn counting_examples() {
        let s = shape(2, &[2]);
        let d = SubtorusDatum::new(&s, &[1], &[0], &[1]).unwrap();
        assert_eq!(count_subtori(&s, &d).unwrap(), 2);
        assert_eq!(normalizer_order(&s, &d).unwrap(), 2);
        let d = SubtorusDatum::new(&s, &[2], &[1], &[0]).unwrap();
        assert_eq!(count_subtori(&s, &d).unwrap(), 1);
        let d = SubtorusDatum::new(&s, &[0], &[0], &[0]).unwrap();
        assert_eq!(count_subtori(&s, &d).unwrap(), 1);
        assert_eq!(normalizer_order(&s, &d).unwrap(), 1);
        let e = shape(2, &[0, 1]);
        let d = SubtorusDatum::new(&e, &[0, 1], &[], &[]).unwrap();
        assert_eq!(normalizer_order(&e, &d).unwrap(), 2);
        assert!(SubtorusDatum::new(&s, &[2], &[0], &[1]).is_err());
        assert!(SubtorusDatum::new(&s, &[3], &[0], &[3]).is_err());
    }

    #[test]
    fn data_order_is_lexicographic() {
        let data = subtorus_data(&shape(2, &[2]));
        let keys: Vec<_> = data.iter().map(|d| (d.nu()[0], d.mu_prime()[0])).collect();
        assert_eq!(keys, vec![(0, 0), (1, 1), (2, 0), (2, 2)]);
    }

    #[test]
    fn counts_match_enumeration() {
        for n in 1..=5 {
            for s in torus_shapes(n) {
                let order = WeylGroup::order_formula(&s) as u128;
                for d in subtorus_data(&s) {
                    let (c, nz) = enumerate_counts(&s, &d).unwrap();
                    assert_eq!(count_subtori(&s, &d).unwrap(), c, "{s:?} {d:?}");
                    assert_eq!(normalizer_order(&s, &d).unwrap(), nz, "{s:?} {d:?}");
                    assert_eq!(order % nz, 0);
                }
            }
        }
    }

    #[test]
    fn counts_sum_over_splits() {
        for n in 1..=5 {
            for s in torus_shapes(n) {
                let data = subtorus_data(&s);
                let mut nus: Vec<_> = data.iter().map(|d| d.nu().to_vec()).collect();
                nus.dedup();
                for nu in nus {
                    let total: u128 = data
                        .iter()
                        .filter(|d| d.nu() == nu.as_slice())
                        .map(|d| count_subtori(&s, d).unwrap())
                        .sum();
                    assert_eq!(total, enumerate_subtori_of_shape(&s, &nu));
                }
            }
        }
    }

    #[test]
    fn index_set_examples() {
        let s = shape(1, &[1]);
        let sets = index_sets(&s, &TorusCharacter::new(3, &s, &[2]).unwrap(), 1).unwrap();
        assert_eq!(sets.blocks[0].norm_one, vec![1]);
        let sets = index_sets(&s, &TorusCharacter::new(3, &s, &[1]).unwrap(), 1).unwrap();
        assert!(sets.blocks[0].norm_one.is_empty());
        for sh in torus_shapes(2) {
            let sets = index_sets(&sh, &TorusCharacter::trivial(3, &sh), 1).unwrap();
            assert_eq!(sets.r(), 0);
            assert!(sets.all_norm_one_empty());
        }
    }

    #[test]
    fn regular_examples() {
        let s = shape(1, &[1]);
        let m = regular_multiplicity(&s, &TorusCharacter::new(3, &s, &[2]).unwrap(), 1).unwrap();
        assert_eq!((m.signed, m.closed_form_signed), (0, 0));
        let m = regular_multiplicity(&s, &TorusCharacter::new(3, &s, &[1]).unwrap(), 1).unwrap();
        assert_eq!(m.normalized(&s), 1);
        let e = shape(2, &[0, 1]);
        // restriction to k_2^x is the quadratic character: exponent 4 mod 8
        let chi = TorusCharacter::new(3, &e, &[4]).unwrap();
        let m = regular_multiplicity(&e, &chi, 1).unwrap();
        assert_eq!(m.signed, -2);
        assert_eq!(m.normalized(&e), 2);
        assert_eq!(cuspidal_multiplicity(&e, &chi).unwrap(), 2);
        assert!(regular_multiplicity(&e, &TorusCharacter::new(3, &e, &[10]).unwrap(), 1).is_err());
    }

    #[test]
    fn unipotent_signs() {
        assert_eq!(unipotent_multiplicity(&shape(1, &[1]), RankConvention::KPrime), 1);
        assert_eq!(unipotent_multiplicity(&shape(2, &[2]), RankConvention::KPrime), 1);
        assert_eq!(
            unipotent_multiplicity(&shape(2, &[0, 1]), RankConvention::KPrime),
            -1
        );
        assert_eq!(unipotent_multiplicity(&shape(2, &[0, 1]), RankConvention::K), 1);
    }

    #[test]
    fn cuspidal_matches_regular_n1() {
        let s = shape(1, &[1]);
        for q in [3, 5] {
            for chi in TorusCharacter::all(q, &s) {
                if !is_regular(&s, &chi).unwrap() {
                    continue;
                }
                let m = regular_multiplicity(&s, &chi, 1).unwrap();
                assert_eq!(m.normalized(&s), cuspidal_multiplicity(&s, &chi).unwrap());
            }
        }
    }

    #[test]
    fn general_formula_matches_signed_sum() {
        for sh in torus_shapes(2).into_iter().chain(torus_shapes(1)) {
            for chi in TorusCharacter::all(3, &sh) {
                if !is_regular(&sh, &chi).unwrap() {
                    continue;
                }
                for sign in [1, -1] {
                    let m = regular_multiplicity(&sh, &chi, sign).unwrap();
                    assert_eq!(
                        general_multiplicity(&sh, &chi, sign).unwrap(),
                        m.signed,
                        "{chi:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn bound_values() {
        let b = multiplicity_bound(1).unwrap();
        assert_eq!((b.coefficient, b.radicand), (2, 1));
        let b = multiplicity_bound(2).unwrap();
        assert!((b.to_f64() - 8.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(b.admits(11) && !b.admits(12) && b.admits(-11));
    }

    proptest! {
        #[test]
        fn weyl_invariance(a in 0u64..80, b in 0u64..8, c in 0u64..8, w in 0usize..2) {
            let e = shape(2, &[0, 1]);
            let chi = TorusCharacter::new(3, &e, &[a]).unwrap();
            let wg = weyl_group_data(&e);
            if is_regular(&e, &chi).unwrap() {
                let moved = wg.act(&wg.elements()[w], &chi);
                prop_assert_eq!(
                    regular_multiplicity(&e, &chi, 1).unwrap().signed,
                    regular_multiplicity(&e, &moved, 1).unwrap().signed
                );
            }
            let s = shape(2, &[2]);
            let chi = TorusCharacter::new(3, &s, &[b, c]).unwrap();
            let wg = weyl_group_data(&s);
            if is_regular(&s, &chi).unwrap() {
                for sign in [1, -1] {
                    let moved = wg.act(&wg.elements()[w], &chi);
                    prop_assert_eq!(
                        regular_multiplicity(&s, &chi, sign).unwrap().signed,
                        regular_multiplicity(&s, &moved, sign).unwrap().signed
                    );
                }
            }
        }
    }
}
