//! Exclusion rules applied to candidate tables.
//!
//! Each rule is a predicate on a [`FibrationModel`] that, when it fires,
//! returns a short evidence string. Rules are tried in catalog order and the
//! first match is recorded. Predicates that depend on general members of a
//! linear system evaluate random sections over a prime field from a fixed seed
//! (see [`crate::genericity`]).

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::chowring::{admissible_monomials, fmt_q, h0, ChowClass, DivisorClass, Q};
use crate::enumerate::CandidateTable;
use crate::error::{Error, Result};
use crate::genericity::{common_zero, Form, Sampler, SectionMatrix};
use crate::golden::{excluded_id, GoldenData};
use crate::models::{
    anticanonical, inequality_values, picard_expressible, Degree, FibrationModel, Twists,
};

/// Identifier of an exclusion rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    TrivialRank,
    NefEqualityFamily,
    SingS0,
    CiSingS0,
    ForcedFactor,
    SubbundlePicard,
    Dim1Sing,
    KtrivSurface,
    R3Pic,
    R5NegK,
    R5Triple,
    R5Collapse,
    R5Reducible,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TrivialRank => "R-TRIVIAL-RANK",
            Self::NefEqualityFamily => "R-NEF-EQUALITY-FAMILY",
            Self::SingS0 => "R-SING-S0",
            Self::CiSingS0 => "R-CI-SING-S0",
            Self::ForcedFactor => "R-FORCED-FACTOR",
            Self::SubbundlePicard => "R-SUBBUNDLE-PICARD",
            Self::Dim1Sing => "R-DIM1-SING",
            Self::KtrivSurface => "R-KTRIV-SURFACE",
            Self::R3Pic => "R3-PIC",
            Self::R5NegK => "R5-NEGK",
            Self::R5Triple => "R5-TRIPLE",
            Self::R5Collapse => "R5-COLLAPSE",
            Self::R5Reducible => "R5-REDUCIBLE",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

type Predicate = fn(&FibrationModel, u64) -> Option<String>;

/// One rule of the catalog.
#[derive(Clone, Copy)]
pub struct ExclusionRule {
    pub id: RuleId,
    pub degrees: &'static [Degree],
    /// What the rule detects.
    pub summary: &'static str,
    predicate: Predicate,
}

impl ExclusionRule {
    pub fn applies_to(&self, d: Degree) -> bool {
        self.degrees.contains(&d)
    }

    /// Evidence if the rule excludes the model.
    pub fn check(&self, model: &FibrationModel, seed: u64) -> Option<String> {
        if !self.applies_to(model.degree()) {
            return None;
        }
        (self.predicate)(model, seed)
    }
}

impl fmt::Debug for ExclusionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExclusionRule")
            .field("id", &self.id)
            .finish()
    }
}

use Degree::*;

/// The rule catalog in first-match order.
pub fn catalog() -> Vec<ExclusionRule> {
    vec![
        ExclusionRule {
            id: RuleId::TrivialRank,
            degrees: &[D1, D2, D3, D4, D5, D8],
            summary: "trivial bundle and twists: V is a product and its Picard rank exceeds 2",
            predicate: trivial_rank,
        },
        ExclusionRule {
            id: RuleId::R5NegK,
            degrees: &[D5],
            summary: "s0 lies in V and -K_V is negative on it",
            predicate: r5_negk,
        },
        ExclusionRule {
            id: RuleId::R3Pic,
            degrees: &[D3],
            summary: "V meets a sub-bundle in surfaces whose classes leave <H_V, F_V>",
            predicate: r3_pic,
        },
        ExclusionRule {
            id: RuleId::NefEqualityFamily,
            degrees: &[D1, D2, D3, D4, D5, D8, D9],
            summary: "nef value zero along a moving family of K-trivial curves",
            predicate: nef_equality_family,
        },
        ExclusionRule {
            id: RuleId::SingS0,
            degrees: &[D2, D3, D8],
            summary: "general member contains s0 and is singular at a point of it",
            predicate: sing_s0,
        },
        ExclusionRule {
            id: RuleId::CiSingS0,
            degrees: &[D4],
            summary: "both quadrics contain s0 and their linear parts drop rank on it",
            predicate: ci_sing_s0,
        },
        ExclusionRule {
            id: RuleId::ForcedFactor,
            degrees: &[D2, D3, D8],
            summary: "every admissible monomial shares a variable: general member reducible",
            predicate: forced_factor,
        },
        ExclusionRule {
            id: RuleId::SubbundlePicard,
            degrees: &[D4],
            summary: "a zero-weight sub-bundle surface lies in V with class outside <H_V, F_V>",
            predicate: subbundle_picard,
        },
        ExclusionRule {
            id: RuleId::Dim1Sing,
            degrees: &[D4],
            summary: "one quadric is singular along a locus of a sub-bundle that meets the other",
            predicate: dim1_sing,
        },
        ExclusionRule {
            id: RuleId::KtrivSurface,
            degrees: &[D8],
            summary: "a surface in V carries a K-trivial ruling",
            predicate: ktriv_surface,
        },
        ExclusionRule {
            id: RuleId::R5Triple,
            degrees: &[D5],
            summary:
                "m45 vanishes and m15, m25, m35 cut a P2-bundle: V contains a non-Picard surface",
            predicate: r5_triple,
        },
        ExclusionRule {
            id: RuleId::R5Collapse,
            degrees: &[D5],
            summary:
                "a change of coordinates kills m45, then the P2-bundle surface argument applies",
            predicate: r5_collapse,
        },
        ExclusionRule {
            id: RuleId::R5Reducible,
            degrees: &[D5],
            summary: "the matrix has rank 2 on a 3-dimensional locus: V is reducible",
            predicate: r5_reducible,
        },
    ]
}

/// Outcome of applying the catalog to one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Survivor,
    Excluded { rule: RuleId, evidence: String },
}

/// Verdict for one candidate row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionVerdict {
    pub row: u32,
    /// `theorem.item` for survivors, `T<table>.<row>` otherwise.
    pub case_id: String,
    pub model: FibrationModel,
    pub outcome: Outcome,
}

impl ExclusionVerdict {
    pub fn survives(&self) -> bool {
        self.outcome == Outcome::Survivor
    }

    pub fn rule(&self) -> Option<RuleId> {
        match &self.outcome {
            Outcome::Excluded { rule, .. } => Some(*rule),
            Outcome::Survivor => None,
        }
    }
}

/// First matching rule of `rules` for `model`.
pub fn first_match(
    model: &FibrationModel,
    rules: &[ExclusionRule],
    seed: u64,
) -> Option<(RuleId, String)> {
    rules
        .iter()
        .find_map(|r| r.check(model, seed).map(|ev| (r.id, ev)))
}

/// Apply `rules` to every row without consulting reference data. Case ids
/// are provisional (`T<table>.<row>` for every row).
pub fn apply_catalog(
    table: &CandidateTable,
    rules: &[ExclusionRule],
    seed: u64,
) -> Vec<ExclusionVerdict> {
    table
        .rows
        .iter()
        .map(|r| {
            let outcome = match first_match(&r.model, rules, seed) {
                Some((rule, evidence)) => Outcome::Excluded { rule, evidence },
                None => Outcome::Survivor,
            };
            ExclusionVerdict {
                row: r.no,
                case_id: excluded_id(table.degree, r.no),
                model: r.model.clone(),
                outcome,
            }
        })
        .collect()
}

/// Apply the catalog and check the result against the reference exclusion
/// list. Survivors receive their theorem case ids.
pub fn apply_rules(
    table: &CandidateTable,
    golden: &GoldenData,
    seed: u64,
) -> Result<Vec<ExclusionVerdict>> {
    let mut verdicts = apply_catalog(table, &catalog(), seed);
    let d = table.degree;
    let expected = golden.excluded_rows(d)?;
    for v in &mut verdicts {
        let listed = expected.contains(&v.row);
        match (&v.outcome, listed) {
            (Outcome::Survivor, false) => {
                v.case_id = golden.survivor_id(d, v.row)?.ok_or_else(|| {
                    Error::Consistency(format!(
                        "degree {d} row {} ({}) survives every rule but is not a theorem case",
                        v.row, v.model
                    ))
                })?;
            }
            (Outcome::Survivor, true) => {
                return Err(Error::Consistency(format!(
                    "degree {d} row {} ({}) is listed as excluded but no rule fires",
                    v.row, v.model
                )));
            }
            (Outcome::Excluded { rule, .. }, false) => {
                return Err(Error::Consistency(format!(
                    "degree {d} row {} ({}) is a theorem case but {rule} fires",
                    v.row, v.model
                )));
            }
            (Outcome::Excluded { .. }, true) => {}
        }
    }
    Ok(verdicts)
}

/// Surviving verdicts of a degree, in theorem order.
pub fn survivors(
    table: &CandidateTable,
    golden: &GoldenData,
    seed: u64,
) -> Result<Vec<ExclusionVerdict>> {
    let verdicts = apply_rules(table, golden, seed)?;
    let mut out: Vec<ExclusionVerdict> = Vec::new();
    for case in golden.cases(table.degree)? {
        let v = verdicts
            .iter()
            .find(|v| v.row == case.row.no)
            .ok_or_else(|| {
                Error::Consistency(format!(
                    "theorem case {} has no candidate row",
                    case.case_id
                ))
            })?;
        out.push(v.clone());
    }
    if out.len() != verdicts.iter().filter(|v| v.survives()).count() {
        return Err(Error::Consistency(format!(
            "degree {}: survivor count differs from the theorem table",
            table.degree
        )));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Shared helpers

/// `(m, b)` for hypersurface models `V in |mH + bF|`; the branch divisor for
/// the double cover.
pub fn hypersurface(model: &FibrationModel) -> Option<(u32, i64)> {
    match (model.degree(), model.twists()) {
        (D8, Twists::K(k)) => Some((2, *k)),
        (D3, Twists::K(k)) => Some((3, *k)),
        (D2, Twists::K(k)) => Some((4, 2 * k)),
        _ => None,
    }
}

fn twist_pair(model: &FibrationModel) -> Option<(i64, i64)> {
    match model.twists() {
        Twists::Pair(a, b) => Some((*a, *b)),
        _ => None,
    }
}

fn signed(b: i64) -> String {
    if b < 0 {
        format!("- {}F", -b)
    } else {
        format!("+ {b}F")
    }
}

fn divisor(model: &FibrationModel, a: i64, b: i64) -> ChowClass {
    model.ambient().ring().divisor(&DivisorClass::int(a, b))
}

// ---------------------------------------------------------------------------
// Predicates

fn trivial_rank(model: &FibrationModel, _seed: u64) -> Option<String> {
    let zero_twists = model.twists().to_vec().iter().all(|&k| k == 0);
    let zero_weights = model.weights().iter().all(|&a| a == 0);
    (zero_twists && zero_weights).then(|| "all weights and twists are zero".to_string())
}

/// Nef value zero with a positive-dimensional family of curves realizing it.
pub fn nef_equality_family(model: &FibrationModel, _seed: u64) -> Option<String> {
    let report = inequality_values(model);
    let nef = report.get("nef")?;
    if !nef.is_zero() {
        return None;
    }
    match (model.degree(), model.twists()) {
        (D1, Twists::K(0)) => {
            Some("nef value 0 with k = 0: the K-trivial sections move".to_string())
        }
        (D1, _) => None,
        _ => {
            let w = model.weights();
            let n = w.len() - 1;
            (w[n - 2] == w[n - 1]).then(|| {
                format!(
                    "nef value 0 and a{} = a{} = {}: the K-trivial curves move in a family",
                    n - 2,
                    n - 1,
                    w[n - 1]
                )
            })
        }
    }
}

/// `V` (or the branch divisor) contains `s0` and the linear parts of its
/// equation along `s0` share a zero.
pub fn sing_s0(model: &FibrationModel, seed: u64) -> Option<String> {
    let (m, b) = hypersurface(model)?;
    if b >= 0 {
        return None;
    }
    let w = model.weights();
    let mut sampler = Sampler::new(seed);
    let degrees: Vec<i64> = w[1..].iter().map(|a| a + b).collect();
    let forms: Vec<Form> = degrees
        .iter()
        .map(|&d| Form {
            poly: sampler.section(d),
            degree: d,
        })
        .collect();
    common_zero(&forms).then(|| {
        format!(
            "s0 lies in |{m}H {}|; the linear parts along s0 are sections of O({}) and share a zero",
            signed(b),
            degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
        )
    })
}

fn ci_sing_s0(model: &FibrationModel, seed: u64) -> Option<String> {
    let (k1, k2) = twist_pair(model)?;
    if k1 >= 0 || k2 >= 0 {
        return None;
    }
    let w = model.weights();
    let mut sampler = Sampler::new(seed);
    let m = SectionMatrix::general(&[k1, k2], &w[1..], &mut sampler);
    (!m.everywhere_full_rank()).then(|| {
        format!(
            "both quadrics contain s0 (k = {k1}, {k2}) and their linear parts along s0 drop rank"
        )
    })
}

fn forced_factor(model: &FibrationModel, _seed: u64) -> Option<String> {
    let (m, b) = hypersurface(model)?;
    let bundle = model.bundle()?;
    let mons = admissible_monomials(bundle, m, b);
    if mons.is_empty() {
        return Some(format!("|{m}H {}| is empty", signed(b)));
    }
    (0..bundle.rank())
        .find(|&v| mons.iter().all(|e| e[v] >= 1))
        .map(|v| {
            format!(
            "every admissible monomial of |{m}H {}| contains x{v}: the divisor x{v} = 0 splits off",
            signed(b)
        )
        })
}

/// Indices `j` with `a_j = 0`.
fn zero_weight_indices(w: &[i64]) -> Vec<usize> {
    (0..w.len()).filter(|&j| w[j] == 0).collect()
}

/// Degree of `H_V^2 F_V`.
fn fiber_degree(model: &FibrationModel) -> Q {
    model.deg_on_v(&[
        DivisorClass::int(1, 0),
        DivisorClass::int(1, 0),
        DivisorClass::int(0, 1),
    ])
}

fn subbundle_picard(model: &FibrationModel, _seed: u64) -> Option<String> {
    let (k1, k2) = twist_pair(model)?;
    let w = model.weights();
    let z = zero_weight_indices(&w);
    if z.len() != 2 || k1 >= 0 || k2 >= 0 {
        return None;
    }
    // The sub-bundle P[0^2] is a surface in V; it meets a fiber in a line.
    let fd = fiber_degree(model);
    let divisible = (Q::one() / &fd).is_integer();
    (!divisible).then(|| {
        format!(
            "P[0^2] lies in both quadrics (k = {k1}, {k2}); it meets F_V in a line, \
             but H_V^2.F_V = {} does not divide 1",
            fmt_q(&fd)
        )
    })
}

fn dim1_sing(model: &FibrationModel, seed: u64) -> Option<String> {
    let (k1, k2) = twist_pair(model)?;
    let w = model.weights();
    for (ki, kj, label) in [(k1, k2, 1), (k2, k1, 2)] {
        if ki >= 0 {
            continue;
        }
        let l: Vec<usize> = (0..w.len()).filter(|&j| 2 * w[j] + ki < 0).collect();
        if l.len() < 2 {
            continue;
        }
        let top = w[*l.last().expect("nonempty")];
        if 2 * top + kj < 0 {
            // The sub-bundle lies in both quadrics.
            continue;
        }
        let rest: Vec<usize> = (0..w.len()).filter(|j| !l.contains(j)).collect();
        let rows: Vec<i64> = rest.iter().map(|&m| w[m] + ki).collect();
        let cols: Vec<i64> = l.iter().map(|&p| w[p]).collect();
        let mut sampler = Sampler::new(seed);
        let m = SectionMatrix::general(&rows, &cols, &mut sampler);
        let r = m.generic_rank(&mut sampler);
        if r < l.len() {
            return Some(format!(
                "W{label} contains T = P[{}]; its partial derivatives along T have generic rank \
                 {r} < {}, so it is singular along a locus of T that meets the other quadric",
                l.iter()
                    .map(|&j| w[j].to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                l.len()
            ));
        }
    }
    None
}

fn ktriv_surface(model: &FibrationModel, _seed: u64) -> Option<String> {
    let bundle = model.bundle()?;
    let w = bundle.weights();
    let n = bundle.n();
    if zero_weight_indices(w).len() != n {
        return None;
    }
    let ring = bundle.ring();
    let k = ring.divisor(&anticanonical(model));
    let l = divisor(model, 1, -w[n]);
    let cls = ring.product(&[k.clone(), k, l]).ok()?;
    let v = model.deg_class_on_v(&cls).ok()?;
    v.is_zero().then(|| {
        format!("S = V . P[0^{n}] has (-K_V)^2.S = 0, so S is covered by K-trivial curves")
    })
}

fn r3_pic(model: &FibrationModel, _seed: u64) -> Option<String> {
    let (m, b) = hypersurface(model)?;
    if model.degree() != D3 {
        return None;
    }
    let bundle = model.bundle()?;
    let w = bundle.weights();
    let n = bundle.n();
    let sub = crate::chowring::BundleSpec::new(w[..n].to_vec()).ok()?;
    let mons = admissible_monomials(&sub, m, b);
    if mons.is_empty() {
        return None;
    }
    let support: BTreeSet<usize> = mons
        .iter()
        .flat_map(|e| (0..n).filter(move |&v| e[v] > 0))
        .collect();
    let vars: Vec<usize> = support.into_iter().collect();
    if vars.len() != 2 || w[vars[0]] != w[vars[1]] || w[vars[0]] <= 0 {
        return None;
    }
    let constant = mons
        .iter()
        .all(|e| crate::chowring::weight_of(e, &w[..n]) + b == 0);
    if !constant {
        return None;
    }
    let fd = fiber_degree(model);
    let divisible = (Q::one() / &fd).is_integer();
    (!divisible).then(|| {
        format!(
            "on P[{}] the equation is a binary cubic in x{}, x{} with constant coefficients: \
             three surfaces meeting F_V in lines, while H_V^2.F_V = {}",
            w[..n]
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(","),
            vars[0],
            vars[1],
            fmt_q(&fd)
        )
    })
}

fn r5_negk(model: &FibrationModel, _seed: u64) -> Option<String> {
    let m = model.w_matrix()?;
    let t = model.t()?;
    let val = 2 - model.weight_sum() - t;
    (m.w(2, 3) < 0 && val < 0).then(|| {
        format!(
            "w23 = {} < 0 puts s0 in V, and -K_V.s0 = {val} < 0",
            m.w(2, 3)
        )
    })
}

/// The surface `(f5) . Y` for a P2-bundle `Y` on which the fifth row of the
/// matrix vanishes, with the decision whether its class is a combination of
/// `H_V` and `F_V`.
fn triple_surface(model: &FibrationModel, seed: u64) -> Option<String> {
    let m = model.w_matrix()?;
    let w = model.weights();
    let Twists::Five(k) = model.twists() else {
        return None;
    };
    let ring = model.ambient().ring();
    let f5 = divisor(model, 2, k[4]);
    let w15 = m.w(1, 5);
    let (factors, how): (Vec<ChowClass>, String) = if w[2] + w15 < 0 {
        let idx = [0usize, 1, 2];
        let f = (0..w.len())
            .filter(|l| !idx.contains(l))
            .map(|l| divisor(model, 1, -w[l]))
            .collect();
        (f, format!("P[{},{},{}]", w[0], w[1], w[2]))
    } else {
        let cols = [m.w(1, 5), m.w(2, 5), m.w(3, 5)];
        let mut sampler = Sampler::new(seed);
        let mat = SectionMatrix::general(&w, &cols, &mut sampler);
        if !mat.everywhere_full_rank() {
            return None;
        }
        let f = cols.iter().map(|&c| divisor(model, 1, c)).collect();
        (f, "the P2-bundle m15 = m25 = m35 = 0".to_string())
    };
    let mut all = vec![f5];
    all.extend(factors);
    let s = ring.product(&all).ok()?;
    let (p, q) = (s.coeff(4, 0).clone(), s.coeff(3, 1).clone());
    (!picard_expressible(model, &p, &q)).then(|| {
        format!(
            "S = (f5) . {how} has class {}H^4 {} H^3F, not a combination of H_V and F_V",
            fmt_q(&p),
            if q < Q::zero() {
                format!("- {}", fmt_q(&-q))
            } else {
                format!("+ {}", fmt_q(&q))
            }
        )
    })
}

fn r5_triple(model: &FibrationModel, seed: u64) -> Option<String> {
    let m = model.w_matrix()?;
    let w = model.weights();
    if w[5] + m.w(4, 5) >= 0 {
        return None;
    }
    triple_surface(model, seed).map(|s| format!("m45 = 0 since a5 + w45 < 0; {s}"))
}

fn r5_collapse(model: &FibrationModel, seed: u64) -> Option<String> {
    let m = model.w_matrix()?;
    let bundle = model.bundle()?;
    let w = bundle.weights();
    let w45 = m.w(4, 5);
    if w[5] + w45 < 0 {
        return None;
    }
    let sections = h0(bundle, 1, w45);
    let same = (1..=3).filter(|&i| m.w(i, 5) == w45).count() as u64;
    if sections > same {
        return None;
    }
    triple_surface(model, seed).map(|s| {
        format!(
            "{same} entries of column 5 share the twist {w45} but h0(E({w45})) = {sections}, \
             so m45 can be cleared; {s}"
        )
    })
}

fn r5_reducible(model: &FibrationModel, _seed: u64) -> Option<String> {
    let m = model.w_matrix()?;
    let w = model.weights();
    for s in 4..=w.len() {
        let top = w[s - 1];
        for p in 1..=5usize {
            let idx: Vec<usize> = (1..=5).filter(|&i| i != p).collect();
            let mut nonzero = Vec::new();
            for x in 0..4 {
                for y in x + 1..4 {
                    if top + m.w(idx[x], idx[y]) >= 0 {
                        nonzero.push((idx[x], idx[y]));
                    }
                }
            }
            if nonzero.len() <= 1.min(s - 3) {
                let cut = match nonzero.first() {
                    Some((i, j)) => format!(" cut by m{i}{j}"),
                    None => String::new(),
                };
                return Some(format!(
                    "on P[{}]{cut} only row {p} of M survives, so M has rank 2 on a 3-fold in V",
                    w[..s]
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ));
            }
        }
    }
    None
}
