//! Brute-force `⟨R_{T,χ}, ω_ψ⟩_{U_n(k)}` by exact summation over the unitary group,
//! and comparison against the combinatorial closed forms.

use crate::chars::{is_regular, AddChar};
use crate::cyclotomic::Cyclo;
use crate::dl::{classify, dl_character, weyl_group_data, ClassLabel, TorusCharacter, TorusShape};
use crate::error::{Error, Result};
use crate::fields::FieldTower;
use crate::groups::{DeltaChoice, Family, GroupSpec, Matrix, UnitaryEmbedding, DEFAULT_GROUP_CAP};
use crate::mult::{
    cuspidal_multiplicity, general_multiplicity, regular_multiplicity, unipotent_multiplicity,
    RankConvention, DEFAULT_PAIR_SIGN,
};
use crate::weil::WeilRep;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Degree of the ambient field: enough for `k_4`, where the elliptic torus of `GL_2(k_2)` lives.
pub const ORACLE_TOWER_DEGREE: u32 = 4;

/// The choices the Weil character depends on: `ψ(x) = ζ_p^{c·Tr x}` and the scalar `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Convention {
    pub psi: u64,
    pub delta: DeltaChoice,
}

/// The unitary group with its `GL_n(k_2)` class labels and cached Weil data.
pub struct OracleContext {
    tower: Arc<FieldTower>,
    n: u32,
    elements: Vec<Matrix>,
    labels: Vec<ClassLabel>,
    /// Per convention: `Σ_{h ∈ class} conj(tr ω(h))`, keyed by class.
    weil_sums: Mutex<HashMap<Convention, Arc<BTreeMap<ClassLabel, Cyclo>>>>,
}

impl OracleContext {
    /// `q` must be an odd prime; `n <= 2`.
    pub fn new(q: u64, n: u32) -> Result<Self> {
        if n == 0 || n > 2 {
            return Err(Error::UnsupportedRank(format!(
                "the oracle needs n <= 2, got {n}"
            )));
        }
        if q < 3 || crate::fields::prime_factors(q).len() != 1 || crate::fields::prime_factors(q)[0] != q {
            return Err(Error::UnsupportedCharacteristic(q));
        }
        let tower = Arc::new(FieldTower::new(q, 1, ORACLE_TOWER_DEGREE)?);
        let elements = GroupSpec::new(&tower, Family::U, n as usize).enumerate(&tower, DEFAULT_GROUP_CAP)?;
        let labels = elements
            .iter()
            .map(|g| classify(&tower, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            tower,
            n,
            elements,
            labels,
            weil_sums: Mutex::new(HashMap::new()),
        })
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    /// `ψ` residues: `1` and the least non-square of `k`.
    pub fn psi_choices(&self) -> [u64; 2] {
        let q = self.q();
        let nonsquare = (2..q)
            .find(|&c| !self.tower.is_square(self.tower.from_int(1, c as i64)))
            .expect("odd q has a non-square");
        [1, nonsquare]
    }

    pub fn conventions(&self) -> Vec<Convention> {
        let mut out = Vec::new();
        for psi in self.psi_choices() {
            for delta in [DeltaChoice::Standard, DeltaChoice::Alternate] {
                out.push(Convention { psi, delta });
            }
        }
        out
    }

    pub fn default_convention(&self) -> Convention {
        Convention {
            psi: 1,
            delta: DeltaChoice::Standard,
        }
    }

    /// `tr ω_ψ(ι_δ(h))` for every `h`, in enumeration order.
    pub fn weil_traces(&self, conv: Convention) -> Result<Vec<Cyclo>> {
        let psi = AddChar::new(self.q(), conv.psi)?;
        let rep = WeilRep::new(self.tower.clone(), self.n as usize, psi)?;
        let emb = UnitaryEmbedding::new(&self.tower, conv.delta);
        self.elements
            .par_iter()
            .map(|h| rep.trace(&emb.embed(&self.tower, h)?))
            .collect()
    }

    fn weil_sums(&self, conv: Convention) -> Result<Arc<BTreeMap<ClassLabel, Cyclo>>> {
        if let Some(s) = self.weil_sums.lock().expect("oracle cache poisoned").get(&conv) {
            return Ok(s.clone());
        }
        let traces = self.weil_traces(conv)?;
        let mut sums: BTreeMap<ClassLabel, Cyclo> = BTreeMap::new();
        for (label, t) in self.labels.iter().zip(&traces) {
            *sums.entry(*label).or_default() += t.conj();
        }
        let sums = Arc::new(sums);
        self.weil_sums
            .lock()
            .expect("oracle cache poisoned")
            .insert(conv, sums.clone());
        Ok(sums)
    }
}

/// `(1/|U_n|) Σ_h R_{T,χ}(h)·conj(tr ω_ψ(h))`; a non-integer value is an error.
pub fn brute_force_multiplicity(ctx: &OracleContext, chi: &TorusCharacter, conv: Convention) -> Result<i64> {
    if chi.shape().n() != ctx.n || chi.q() != ctx.q() {
        return Err(Error::GroupMismatch(
            "character does not match the oracle context".into(),
        ));
    }
    let r = dl_character(ctx.tower.clone(), chi)?;
    let sums = ctx.weil_sums(conv)?;
    let mut total = Cyclo::zero();
    for (label, w) in sums.iter() {
        total += r.value_on_class(label)? * w;
    }
    let m = total.scale(1, ctx.elements.len() as i128);
    m.to_integer()
        .map(|v| v as i64)
        .ok_or_else(|| Error::Internal(format!("non-integral multiplicity {m} for {:?}", chi.exponents())))
}

/// One line of output. Every value is the signed inner product `⟨R_{T,χ}, ω_ψ⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub q: u64,
    pub n: u32,
    pub lambda: Vec<u32>,
    pub chi: Vec<u64>,
    pub psi: u64,
    pub regular: bool,
    pub closed_form: Option<i64>,
    pub thm11: Option<i64>,
    pub oracle: Option<i64>,
    pub sign_convention: Option<RankConvention>,
    pub agree: Option<bool>,
}

pub const CSV_HEADER: &str = "q,n,lambda,chi,psi,regular,closed_form,thm11,oracle,sign_convention,agree";

impl MultiplicityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let lambda: Vec<u64> = self.lambda.iter().map(|&x| u64::from(x)).collect();
        [
            self.q.to_string(),
            self.n.to_string(),
            join(&lambda),
            join(&self.chi),
            self.psi.to_string(),
            self.regular.to_string(),
            opt(&self.closed_form),
            opt(&self.thm11),
            opt(&self.oracle),
            self.sign_convention
                .map(|c| c.label().to_string())
                .unwrap_or_default(),
            opt(&self.agree),
        ]
        .join(",")
    }

    pub fn category(&self) -> Category {
        if self.chi.iter().all(|&a| a == 0) {
            Category::Unipotent
        } else if !self.regular {
            Category::OracleOnly
        } else if self.lambda.len() as u32 == self.n && self.lambda.iter().sum::<u32>() == 1 {
            Category::Cuspidal
        } else {
            Category::Regular
        }
    }
}

/// Builds the report for one character. `convention` fixes the sign of the unipotent
/// closed form; `oracle` is skipped when no context is given.
pub fn report(
    q: u64,
    chi: &TorusCharacter,
    ctx: Option<&OracleContext>,
    conv: Option<Convention>,
    convention: RankConvention,
) -> Result<MultiplicityReport> {
    let shape = chi.shape();
    let regular = is_regular(shape, chi)?;
    let oracle = match ctx {
        Some(c) => Some(brute_force_multiplicity(
            c,
            chi,
            conv.unwrap_or(c.default_convention()),
        )?),
        None => None,
    };
    let mut closed_form = None;
    let mut thm11 = None;
    let mut sign_convention = None;
    let mut consistent = true;
    if regular {
        let m = regular_multiplicity(shape, chi, DEFAULT_PAIR_SIGN)?;
        closed_form = Some(m.closed_form_signed);
        thm11 = Some(general_multiplicity(shape, chi, DEFAULT_PAIR_SIGN)?);
        sign_convention = Some(RankConvention::KPrime);
        consistent &= m.closed_form_holds() && thm11 == Some(m.signed);
        if shape.is_cuspidal() && shape.lambda_j(shape.n()) == 1 {
            consistent &= cuspidal_multiplicity(shape, chi)? == m.closed_form_normalized(shape);
        }
    }
    if chi.is_trivial() {
        let u = unipotent_multiplicity(shape, convention);
        consistent &= closed_form.is_none_or(|c| c == u);
        closed_form = Some(u);
        sign_convention = Some(convention);
    }
    let agree = closed_form.map(|c| consistent && oracle.is_none_or(|o| o == c));
    Ok(MultiplicityReport {
        q,
        n: shape.n(),
        lambda: shape.lambda().to_vec(),
        chi: chi.exponents().to_vec(),
        psi: conv.map_or(1, |c| c.psi),
        regular,
        closed_form,
        thm11,
        oracle,
        sign_convention,
        agree,
    })
}

/// The rank reading that matches the oracle on `χ = 1` for every shape of the context,
/// preferring `kprime` when both fit. `None` when neither does.
pub fn resolve_rank_convention(ctx: &OracleContext, conv: Convention) -> Result<Option<RankConvention>> {
    let mut fits = RankConvention::ALL.to_vec();
    for shape in crate::dl::torus_shapes(ctx.n) {
        let m = brute_force_multiplicity(ctx, &TorusCharacter::trivial(ctx.q(), &shape), conv)?;
        fits.retain(|c| unipotent_multiplicity(&shape, *c) == m);
    }
    Ok(fits.first().copied())
}

/// One report per character of `T^F`, or per Weyl orbit with `dedup`.
pub fn sweep(
    ctx: &OracleContext,
    shape: &TorusShape,
    conv: Convention,
    convention: RankConvention,
    dedup: bool,
) -> Result<Vec<MultiplicityReport>> {
    if shape.n() != ctx.n {
        return Err(Error::InvalidShape(format!(
            "shape ({}) is not a torus of GL_{}",
            shape.label(),
            ctx.n
        )));
    }
    let mut chars = TorusCharacter::all(ctx.q(), shape);
    if dedup {
        let w = weyl_group_data(shape);
        chars.retain(|c| &w.canonical(c) == c);
    }
    // fill the Weil cache before going parallel
    ctx.weil_sums(conv)?;
    chars
        .par_iter()
        .map(|chi| report(ctx.q(), chi, Some(ctx), Some(conv), convention))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Regular,
    Cuspidal,
    Unipotent,
    OracleOnly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub agree: usize,
    pub disagree: usize,
    /// Rows without a closed form to compare against.
    pub unchecked: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub categories: BTreeMap<Category, CategoryCounts>,
}

impl Summary {
    pub fn disagreements(&self) -> usize {
        self.categories.values().map(|c| c.disagree).sum()
    }
}

pub fn compare(reports: &[MultiplicityReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        let c = s.categories.entry(r.category()).or_default();
        match r.agree {
            Some(true) => c.agree += 1,
            Some(false) => c.disagree += 1,
            None => c.unchecked += 1,
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(q: u64, n: u32, l: &[u32], e: &[u64]) -> TorusCharacter {
        TorusCharacter::new(q, &TorusShape::new(n, l).unwrap(), e).unwrap()
    }

    #[test]
    fn n1_examples() {
        let ctx = OracleContext::new(3, 1).unwrap();
        let conv = ctx.default_convention();
        assert_eq!(
            brute_force_multiplicity(&ctx, &chi(3, 1, &[1], &[1]), conv).unwrap(),
            1
        );
        assert_eq!(
            brute_force_multiplicity(&ctx, &chi(3, 1, &[1], &[2]), conv).unwrap(),
            0
        );
        assert_eq!(
            brute_force_multiplicity(&ctx, &chi(3, 1, &[1], &[0]), conv).unwrap(),
            1
        );
    }

    #[test]
    fn weil_norm() {
        // ⟨ω, ω⟩ over U_1(F_3) is positive
        let ctx = OracleContext::new(3, 1).unwrap();
        let t = ctx.weil_traces(ctx.default_convention()).unwrap();
        let norm: Cyclo = t.iter().map(|x| x * &x.conj()).sum();
        let v = norm.scale(1, t.len() as i128).to_integer().unwrap();
        assert!(v > 0);
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(OracleContext::new(9, 1).is_err());
        assert!(OracleContext::new(3, 3).is_err());
        let ctx = OracleContext::new(3, 1).unwrap();
        assert!(brute_force_multiplicity(&ctx, &chi(3, 2, &[0, 1], &[1]), ctx.default_convention()).is_err());
    }

    #[test]
    fn sweep_n1() {
        let ctx = OracleContext::new(3, 1).unwrap();
        let shape = TorusShape::new(1, &[1]).unwrap();
        let conv = ctx.default_convention();
        let rc = resolve_rank_convention(&ctx, conv).unwrap().unwrap();
        let reports = sweep(&ctx, &shape, conv, rc, false).unwrap();
        assert_eq!(reports.len(), 8);
        assert!(reports.iter().all(|r| r.agree == Some(true)));
        let zeros: Vec<u64> = reports
            .iter()
            .filter(|r| r.oracle == Some(0))
            .map(|r| r.chi[0])
            .collect();
        assert_eq!(zeros, vec![2, 6]);
        assert_eq!(compare(&reports).disagreements(), 0);
        let dedup = sweep(&ctx, &shape, conv, rc, true).unwrap();
        assert_eq!(dedup.len(), 8);
    }

    #[test]
    fn compare_flags_faults() {
        let ctx = OracleContext::new(3, 1).unwrap();
        let shape = TorusShape::new(1, &[1]).unwrap();
        let conv = ctx.default_convention();
        let mut reports = sweep(&ctx, &shape, conv, RankConvention::KPrime, false).unwrap();
        reports[3].agree = Some(false);
        assert_eq!(compare(&reports).disagreements(), 1);
    }

    #[test]
    fn json_schema() {
        let r = MultiplicityReport {
            q: 3,
            n: 2,
            lambda: vec![0, 1],
            chi: vec![10],
            psi: 1,
            regular: false,
            closed_form: None,
            thm11: None,
            oracle: Some(1),
            sign_convention: None,
            agree: None,
        };
        assert_eq!(
            r.to_json(),
            r#"{"q":3,"n":2,"lambda":[0,1],"chi":[10],"psi":1,"regular":false,"closed_form":null,"thm11":null,"oracle":1,"sign_convention":null,"agree":null}"#
        );
        assert_eq!(r.to_csv(), "3,2,0 1,10,1,false,,,1,,");
        assert_eq!(r.category(), Category::OracleOnly);
    }
}
