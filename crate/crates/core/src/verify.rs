//! The verification suites behind `ggp verify` and the acceptance tests.

use crate::chars::is_regular;
use crate::chars::{group_logs, AddChar};
use crate::cyclotomic::Cyclo;
use crate::dl::{
    dl_character, dl_inner_product, torus_shapes, weyl_group_data, ClassCensus, TorusCharacter, TorusShape,
};
use crate::error::Result;
use crate::fields::FieldTower;
use crate::groups::{
    embed_unitary_in_symplectic, jordan_decomposition, Family, GroupSpec, DEFAULT_GROUP_CAP,
};
use crate::mult::{
    count_subtori, cuspidal_multiplicity, enumerate_counts, general_multiplicity, multiplicity_bound,
    normalizer_order, regular_multiplicity, subtorus_data, unipotent_multiplicity, RankConvention,
    DEFAULT_PAIR_SIGN,
};
use crate::oracle::{brute_force_multiplicity, Convention, OracleContext};
use crate::weil::{sp_torus_shapes, unitary_weil_char, weil_char_torus_formula, SpTorus, WeilRep};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Weil,
    Combinatorics,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [&'static str] {
        match self {
            Suite::Core => &["A1", "A2", "A3", "A4", "A7", "A9", "A10"],
            Suite::Weil => &["A5", "A6"],
            Suite::Combinatorics => &["A8"],
            Suite::All => &["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"],
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyOptions {
    /// Field size for the `n = 2` criteria.
    pub q: u64,
    /// Largest `n`; the oracle criteria stop at 2.
    pub nmax: u32,
    /// Seed for the sampled orthogonality pairs.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            q: 3,
            nmax: 5,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {} ({} checks, {} ms) {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.checked,
            self.millis,
            self.detail
        )
    }
}

/// A multiplicity produced while checking A1–A4, kept for the bound check.
#[derive(Clone, Debug)]
struct Seen {
    n: u32,
    value: i64,
    what: String,
}

/// Oracle contexts shared between criteria.
struct Contexts {
    map: HashMap<(u64, u32), Arc<OracleContext>>,
}

impl Contexts {
    fn get(&mut self, q: u64, n: u32) -> Result<Arc<OracleContext>> {
        if let Some(c) = self.map.get(&(q, n)) {
            return Ok(c.clone());
        }
        let c = Arc::new(OracleContext::new(q, n)?);
        self.map.insert((q, n), c.clone());
        Ok(c)
    }
}

/// Runs the criteria of `suite` in order.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<CriterionResult>> {
    let mut ctxs = Contexts { map: HashMap::new() };
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for &id in suite.criteria() {
        let start = Instant::now();
        let (passed, checked, detail) = match id {
            "A1" => a1(&mut ctxs, opts, &mut seen)?,
            "A2" => a2(&mut ctxs, opts, &mut seen)?,
            "A3" => a3(&mut ctxs, opts, &mut seen)?,
            "A4" => a4(&mut ctxs, opts, &mut seen)?,
            "A5" => a5(opts)?,
            "A6" => a6(opts)?,
            "A7" => a7(opts)?,
            "A8" => a8(opts)?,
            "A9" => a9(&seen)?,
            "A10" => a10(&mut ctxs, opts)?,
            _ => unreachable!("unknown criterion {id}"),
        };
        out.push(CriterionResult {
            id,
            passed,
            checked,
            detail,
            millis: start.elapsed().as_millis(),
        });
    }
    Ok(out)
}

type Outcome = (bool, usize, String);

fn summarize(failures: &[String], ok: &str) -> String {
    if failures.is_empty() {
        ok.to_string()
    } else {
        let shown: Vec<&str> = failures.iter().take(8).map(String::as_str).collect();
        format!("{} mismatches: {}", failures.len(), shown.join("; "))
    }
}

/// `n = 1`: closed forms, the general formula and the oracle agree for every character.
fn a1(ctxs: &mut Contexts, _opts: &VerifyOptions, seen: &mut Vec<Seen>) -> Result<Outcome> {
    let shape = TorusShape::new(1, &[1])?;
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut zeros_q3 = Vec::new();
    for q in [3, 5] {
        let ctx = ctxs.get(q, 1)?;
        let conv = ctx.default_convention();
        for chi in TorusCharacter::all(q, &shape) {
            checked += 1;
            let oracle = brute_force_multiplicity(&ctx, &chi, conv)?;
            seen.push(Seen {
                n: 1,
                value: oracle,
                what: format!("A1 q={q} chi={:?}", chi.exponents()),
            });
            let reg = regular_multiplicity(&shape, &chi, DEFAULT_PAIR_SIGN)?;
            let thm11 = general_multiplicity(&shape, &chi, DEFAULT_PAIR_SIGN)?;
            let cusp = cuspidal_multiplicity(&shape, &chi)? * RankConvention::KPrime.sign(&shape);
            let mut values = vec![reg.signed, reg.closed_form_signed, thm11, cusp];
            if chi.is_trivial() {
                values.push(unipotent_multiplicity(&shape, RankConvention::KPrime));
            }
            if values.iter().any(|&v| v != oracle) {
                failures.push(format!(
                    "q={q} chi={:?} oracle={oracle} formulas={values:?}",
                    chi.exponents()
                ));
            }
            if q == 3 && oracle == 0 {
                zeros_q3.push(chi.exponents()[0]);
            }
            if q == 3 && chi.is_trivial() && oracle != 1 {
                failures.push(format!("q=3 trivial character gives {oracle}"));
            }
        }
    }
    if zeros_q3 != [2, 6] {
        failures.push(format!("zeros at q=3 are {zeros_q3:?}, expected [2, 6]"));
    }
    Ok((
        failures.is_empty(),
        checked,
        summarize(&failures, "zeros at q=3: exponents 2, 6"),
    ))
}

/// `n = 2`, elliptic torus: regular characters against the cuspidal dichotomy.
fn a2(ctxs: &mut Contexts, opts: &VerifyOptions, seen: &mut Vec<Seen>) -> Result<Outcome> {
    let q = opts.q;
    let shape = TorusShape::new(2, &[0, 1])?;
    let ctx = ctxs.get(q, 2)?;
    let conv = ctx.default_convention();
    let sign = RankConvention::KPrime.sign(&shape);
    let mut failures = Vec::new();
    let (mut regular, mut oracle_only) = (0, 0);
    for chi in TorusCharacter::all(q, &shape) {
        let oracle = brute_force_multiplicity(&ctx, &chi, conv)?;
        seen.push(Seen {
            n: 2,
            value: oracle,
            what: format!("A2 chi={:?}", chi.exponents()),
        });
        if !is_regular(&shape, &chi)? {
            oracle_only += 1;
            continue;
        }
        regular += 1;
        let expected = cuspidal_multiplicity(&shape, &chi)?;
        if sign * oracle != expected {
            failures.push(format!(
                "chi={:?} oracle={} dichotomy={expected}",
                chi.exponents(),
                sign * oracle
            ));
        }
    }
    let detail = format!(
        "{regular} regular, {oracle_only} oracle-only; {}",
        summarize(&failures, "all regular agree")
    );
    Ok((failures.is_empty(), regular, detail))
}

/// `n = 2`, split torus: regular pairs against `±2^r / 0` and the general formula.
fn a3(ctxs: &mut Contexts, opts: &VerifyOptions, seen: &mut Vec<Seen>) -> Result<Outcome> {
    let q = opts.q;
    let shape = TorusShape::new(2, &[2])?;
    let ctx = ctxs.get(q, 2)?;
    let conv = ctx.default_convention();
    let mut failures = Vec::new();
    let mut checked = 0;
    for chi in TorusCharacter::all(q, &shape) {
        let oracle = brute_force_multiplicity(&ctx, &chi, conv)?;
        seen.push(Seen {
            n: 2,
            value: oracle,
            what: format!("A3 chi={:?}", chi.exponents()),
        });
        if !is_regular(&shape, &chi)? {
            continue;
        }
        checked += 1;
        let m = regular_multiplicity(&shape, &chi, DEFAULT_PAIR_SIGN)?;
        let thm11 = general_multiplicity(&shape, &chi, DEFAULT_PAIR_SIGN)?;
        if oracle != m.closed_form_signed || thm11 != m.closed_form_signed || m.signed != thm11 {
            failures.push(format!(
                "chi={:?} oracle={oracle} closed_form={} signed_sum={} general={thm11} sets={:?}",
                chi.exponents(),
                m.closed_form_signed,
                m.signed,
                m.index_sets.blocks
            ));
        }
    }
    Ok((
        failures.is_empty(),
        checked,
        summarize(&failures, "all regular pairs agree"),
    ))
}

/// `χ = 1`: exactly one rank convention matches the oracle everywhere.
fn a4(ctxs: &mut Contexts, _opts: &VerifyOptions, seen: &mut Vec<Seen>) -> Result<Outcome> {
    let mut fits = RankConvention::ALL.to_vec();
    let mut checked = 0;
    let mut values = Vec::new();
    for q in [3, 5] {
        for n in 1..=2 {
            let ctx = ctxs.get(q, n)?;
            for shape in torus_shapes(n) {
                checked += 1;
                let m = brute_force_multiplicity(
                    &ctx,
                    &TorusCharacter::trivial(q, &shape),
                    ctx.default_convention(),
                )?;
                seen.push(Seen {
                    n,
                    value: m,
                    what: format!("A4 q={q} ({})", shape.label()),
                });
                values.push(format!("q={q} ({})={m}", shape.label()));
                fits.retain(|c| unipotent_multiplicity(&shape, *c) == m);
            }
        }
    }
    let passed = fits.len() == 1;
    let detail = match fits.as_slice() {
        [c] => format!("convention {}: {}", c.label(), values.join(", ")),
        [] => format!("no convention fits: {}", values.join(", ")),
        _ => format!("conventions indistinguishable: {}", values.join(", ")),
    };
    Ok((passed, checked, detail))
}

/// Weil trace against the torus formula on `Sp_2`, `Sp_4` and the unitary formula on `U_n`.
fn a5(opts: &VerifyOptions) -> Result<Outcome> {
    let q = opts.q;
    let tower = Arc::new(FieldTower::new(q, 1, 4)?);
    let psi = AddChar::new(q, 1)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=opts.nmax.min(2) {
        let rep = WeilRep::new(tower.clone(), n as usize, psi)?;
        for blocks in sp_torus_shapes(n) {
            let torus = SpTorus::new(&tower, &blocks)?;
            let factors: Vec<_> = blocks.iter().map(|b| b.group(q)).collect();
            for logs in group_logs(&factors) {
                checked += 1;
                let s = torus.element(&tower, &logs)?;
                let lhs = rep.trace(&s)?;
                let rhs = weil_char_torus_formula(q, &blocks, &logs)?;
                if lhs != rhs {
                    failures.push(format!(
                        "Sp_{} torus {blocks:?} logs {logs:?}: {lhs} vs {rhs}",
                        2 * n
                    ));
                }
            }
        }
        for h in GroupSpec::new(&tower, Family::U, n as usize).enumerate(&tower, DEFAULT_GROUP_CAP)? {
            let (_, u) = jordan_decomposition(&tower, &h);
            if !u.is_identity(&tower) {
                continue;
            }
            checked += 1;
            let lhs = rep.trace(&embed_unitary_in_symplectic(&tower, &h)?)?;
            let rhs = unitary_weil_char(&tower, &h)?;
            if lhs != rhs {
                failures.push(format!("U_{n} element {h:?}: {lhs} vs {rhs}"));
            }
        }
    }
    Ok((
        failures.is_empty(),
        checked,
        summarize(&failures, "all traces agree"),
    ))
}

/// `ω(ι(g)ι(h)) = ω(ι(g))ω(ι(h))` on `U_n(k)`, plus `ω(1) = 1`.
fn a6(opts: &VerifyOptions) -> Result<Outcome> {
    let q = opts.q;
    let tower = Arc::new(FieldTower::new(q, 1, 4)?);
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=opts.nmax.min(2) {
        let rep = WeilRep::new(tower.clone(), n as usize, AddChar::new(q, 1)?)?;
        let els = GroupSpec::new(&tower, Family::U, n as usize).enumerate(&tower, DEFAULT_GROUP_CAP)?;
        let embedded = els
            .iter()
            .map(|g| embed_unitary_in_symplectic(&tower, g))
            .collect::<Result<Vec<_>>>()?;
        let ops = embedded
            .iter()
            .map(|g| rep.operator(g))
            .collect::<Result<Vec<_>>>()?;
        let id = rep.operator(&crate::groups::Matrix::identity(&tower, 2 * n as usize, 1))?;
        let qn = Cyclo::from_int((q as i128).pow(n));
        if !id.is_identity() || id.trace() != qn {
            failures.push(format!("ω(1) is not the identity of trace q^{n}"));
        }
        use rayon::prelude::*;
        let bad: Vec<String> = (0..els.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let (rep, embedded, ops, tower) = (&rep, &embedded, &ops, &tower);
                (0..els.len()).filter_map(move |j| {
                    let prod = embedded[i].mul(tower, &embedded[j]);
                    match rep.operator(&prod) {
                        Ok(op) if *op == ops[i].mul(&ops[j]) => None,
                        Ok(_) => Some(format!("U_{n} pair ({i}, {j})")),
                        Err(e) => Some(format!("U_{n} pair ({i}, {j}): {e}")),
                    }
                })
            })
            .collect();
        checked += els.len() * els.len();
        failures.extend(bad);
    }
    Ok((
        failures.is_empty(),
        checked,
        summarize(&failures, "all products agree"),
    ))
}

/// DL orthogonality on sampled pairs for each pair of torus types of `GL_2`.
fn a7(opts: &VerifyOptions) -> Result<Outcome> {
    const SAMPLES: usize = 50;
    let q = opts.q;
    let tower = Arc::new(FieldTower::new(q, 1, 4)?);
    let census = ClassCensus::new(&tower, 2)?;
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let shapes = torus_shapes(2);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (ia, sa) in shapes.iter().enumerate() {
        for sb in &shapes[ia..] {
            let ca = TorusCharacter::all(q, sa);
            let cb = TorusCharacter::all(q, sb);
            for k in 0..SAMPLES {
                let a = ca.choose(&mut rng).expect("nonempty");
                // every fifth pair on the diagonal, so that nonzero counts are exercised
                let b = if sa == sb && k % 5 == 0 {
                    let w = weyl_group_data(sa);
                    w.act(w.elements().choose(&mut rng).expect("nonempty"), a)
                } else {
                    cb.choose(&mut rng).expect("nonempty").clone()
                };
                checked += 1;
                let got = dl_inner_product(
                    &census,
                    &dl_character(tower.clone(), a)?,
                    &dl_character(tower.clone(), &b)?,
                )?;
                let expected = if sa == sb {
                    weyl_group_data(sa).transporter_count(a, &b) as i128
                } else {
                    0
                };
                if got != expected {
                    failures.push(format!(
                        "{:?} vs {:?}: {got} != {expected}",
                        a.exponents(),
                        b.exponents()
                    ));
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        checked,
        summarize(&failures, "all sampled pairs agree"),
    ))
}

/// Subtorus counts and normalizer orders against enumeration, `n <= nmax`.
fn a8(opts: &VerifyOptions) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=opts.nmax {
        for shape in torus_shapes(n) {
            for d in subtorus_data(&shape) {
                checked += 1;
                let formula = (count_subtori(&shape, &d)?, normalizer_order(&shape, &d)?);
                let counted = enumerate_counts(&shape, &d)?;
                if formula != counted {
                    failures.push(format!("({}) {d:?}: {formula:?} vs {counted:?}", shape.label()));
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        checked,
        summarize(&failures, "all data agree"),
    ))
}

/// `|m| <= 2^n (n!)^{3/2}` for every multiplicity met in A1–A4.
fn a9(seen: &[Seen]) -> Result<Outcome> {
    let mut failures = Vec::new();
    for s in seen {
        if !multiplicity_bound(s.n)?.admits(i128::from(s.value)) {
            failures.push(format!("{}: {}", s.what, s.value));
        }
    }
    let detail = if seen.is_empty() {
        "no multiplicities recorded (run with A1-A4)".to_string()
    } else {
        let max = seen.iter().map(|s| s.value.abs()).max().unwrap_or(0);
        summarize(&failures, &format!("largest |m| = {max}"))
    };
    Ok((failures.is_empty() && !seen.is_empty(), seen.len(), detail))
}

/// A1–A3 oracle values do not depend on the `ψ` residue or on `δ`.
fn a10(ctxs: &mut Contexts, opts: &VerifyOptions) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut cases: Vec<(u64, u32, TorusShape)> = vec![
        (3, 1, TorusShape::new(1, &[1])?),
        (5, 1, TorusShape::new(1, &[1])?),
    ];
    for shape in torus_shapes(2) {
        cases.push((opts.q, 2, shape));
    }
    for (q, n, shape) in cases {
        let ctx = ctxs.get(q, n)?;
        let convs: Vec<Convention> = ctx.conventions();
        for chi in TorusCharacter::all(q, &shape) {
            checked += 1;
            let values = convs
                .iter()
                .map(|c| brute_force_multiplicity(&ctx, &chi, *c))
                .collect::<Result<Vec<_>>>()?;
            if values.iter().any(|&v| v != values[0]) {
                failures.push(format!(
                    "q={q} ({}) chi={:?}: {values:?} over {convs:?}",
                    shape.label(),
                    chi.exponents()
                ));
            }
        }
    }
    Ok((
        failures.is_empty(),
        checked,
        summarize(&failures, "no dependence on ψ or δ"),
    ))
}
