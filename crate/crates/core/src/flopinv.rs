//! Numerical invariants on the flop side.
//!
//! Strict-transform slopes of curves, the deformation invariant built from the
//! anticanonical intersection form on `<H_V, F_V>`, and the flopping-curve
//! counts that reduce to a Bezout product or a pairing on a surface lattice.

use num_traits::Zero;
use serde::Serialize;

use crate::chowring::{q, q_to_i64, DivisorClass, Q};
use crate::error::{Error, Result};
use crate::golden::{CaseRef, GoldenData};
use crate::models::{
    anticanonical, anticanonical_cube, build_model, cube_form, Degree, FibrationModel,
};

/// A flopping curve `C_i` with `(H.C_i, F.C_i) = (alpha, beta)` meeting the
/// curve `Z` in `n` points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FloppingCurve {
    pub alpha: i64,
    pub beta: i64,
    pub n: i64,
}

/// A curve `Z` with `(H.Z, F.Z) = (a, b)` together with the flopping curves it
/// meets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopDatum {
    pub a: i64,
    pub b: i64,
    pub curves: Vec<FloppingCurve>,
}

/// Slope `(a + sum n_i alpha_i) / (b + sum n_i beta_i)` of the strict
/// transform of `Z` after the flop.
pub fn strict_transform_slope(d: &FlopDatum) -> Result<Q> {
    let num = d.a + d.curves.iter().map(|c| c.n * c.alpha).sum::<i64>();
    let den = d.b + d.curves.iter().map(|c| c.n * c.beta).sum::<i64>();
    if den == 0 {
        return Err(Error::InfiniteSlope);
    }
    Ok(Q::new(num.into(), den.into()))
}

/// One surviving case with its model and reference invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRecord {
    pub case_id: String,
    pub degree: Degree,
    pub model: FibrationModel,
    pub minus_k_cube: i64,
    pub e: u32,
    pub e_note: Option<String>,
    pub ray_type: Option<String>,
    pub contraction: String,
}

impl CaseRecord {
    pub fn from_ref(c: &CaseRef<'_>) -> Result<Self> {
        let model = build_model(c.degree, &c.row.tail, &c.row.twists)?;
        Ok(Self {
            case_id: c.case_id.clone(),
            degree: c.degree,
            model,
            minus_k_cube: c.case.cube,
            e: c.case.e,
            e_note: c.case.e_note.clone(),
            ray_type: c.case.ray_type.clone(),
            contraction: c.case.contraction.clone(),
        })
    }

    /// Whether the reference cube agrees with the intersection-theoretic one.
    pub fn cube_matches(&self) -> bool {
        anticanonical_cube(&self.model) == q(self.minus_k_cube)
    }
}

/// All surviving cases of the dataset as records.
pub fn case_records(golden: &GoldenData) -> Result<Vec<CaseRecord>> {
    golden
        .all_cases()?
        .iter()
        .map(CaseRecord::from_ref)
        .collect()
}

/// Determinant of the form `(D, D') -> -K_V . D . D'` on `<H_V, F_V>`.
pub fn deformation_invariant_of(model: &FibrationModel) -> Result<i64> {
    let k = anticanonical(model);
    let h = DivisorClass::int(1, 0);
    let f = DivisorClass::int(0, 1);
    let hh = model.deg_on_v(&[k.clone(), h.clone(), h.clone()]);
    let hf = model.deg_on_v(&[k.clone(), h, f.clone()]);
    let ff = model.deg_on_v(&[k, f.clone(), f]);
    if !ff.is_zero() {
        return Err(Error::Consistency(format!(
            "{model}: -K_V.F_V^2 = {ff} is not zero"
        )));
    }
    let det = &hh * &ff - &hf * &hf;
    q_to_i64(&det).ok_or_else(|| Error::Consistency(format!("{model}: non-integral invariant")))
}

/// The deformation invariant `d(V)` of a case.
pub fn deformation_invariant(case: &CaseRecord) -> Result<i64> {
    deformation_invariant_of(&case.model)
}

/// A flopping-curve count that reduces to a mechanical computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CrossCheck {
    /// Points cut out by general hypersurfaces of the given degrees.
    Bezout { degrees: Vec<i64> },
    /// `u^T G v` on a rank-2 surface lattice with Gram matrix `G`.
    Lattice {
        gram: [[i64; 2]; 2],
        u: [i64; 2],
        v: [i64; 2],
    },
}

impl CrossCheck {
    pub fn count(&self) -> i64 {
        match self {
            Self::Bezout { degrees } => degrees.iter().product(),
            Self::Lattice { gram, u, v } => (0..2)
                .flat_map(|i| (0..2).map(move |j| u[i] * gram[i][j] * v[j]))
                .sum(),
        }
    }
}

/// One curated count with the reference value it must reproduce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckResult {
    pub case_id: String,
    pub description: &'static str,
    pub check: CrossCheck,
    pub computed: i64,
    pub golden: u32,
}

impl CrossCheckResult {
    pub fn passes(&self) -> bool {
        self.computed == i64::from(self.golden)
    }
}

/// Curated cases: degree, item number, description and check.
fn curated() -> Vec<(Degree, u32, &'static str, CrossCheck)> {
    use CrossCheck::*;
    vec![
        (
            Degree::D8,
            5,
            "two conics in a plane",
            Bezout {
                degrees: vec![2, 2],
            },
        ),
        (
            Degree::D8,
            7,
            "three quadrics in P3",
            Bezout {
                degrees: vec![2, 2, 2],
            },
        ),
        (
            Degree::D3,
            6,
            "two cubics in a plane",
            Bezout {
                degrees: vec![3, 3],
            },
        ),
        (
            Degree::D3,
            7,
            "three cubics in P3",
            Bezout {
                degrees: vec![3, 3, 3],
            },
        ),
        (
            Degree::D4,
            9,
            "four quadrics in P4",
            Bezout {
                degrees: vec![2, 2, 2, 2],
            },
        ),
        (
            Degree::D4,
            10,
            "four quadrics in P4",
            Bezout {
                degrees: vec![2, 2, 2, 2],
            },
        ),
        (
            Degree::D5,
            8,
            "self-intersection of 2e + 3f on the Hirzebruch surface F1",
            Lattice {
                gram: [[-1, 1], [1, 0]],
                u: [2, 3],
                v: [2, 3],
            },
        ),
        (
            Degree::D5,
            9,
            "pairing S0.S1 = 4 + 9 on a unimodular rank-2 lattice",
            Lattice {
                gram: [[1, 0], [0, 1]],
                u: [2, 3],
                v: [2, 3],
            },
        ),
    ]
}

/// Recompute the curated flopping-curve counts and compare with the reference.
pub fn flop_count_crosschecks(golden: &GoldenData) -> Result<Vec<CrossCheckResult>> {
    let mut out = Vec::new();
    for (d, item, description, check) in curated() {
        let cases = golden.cases(d)?;
        let c = cases
            .iter()
            .find(|c| c.case.item == item)
            .ok_or_else(|| Error::Consistency(format!("degree {d} has no theorem item {item}")))?;
        let computed = check.count();
        out.push(CrossCheckResult {
            case_id: c.case_id.clone(),
            description,
            check,
            computed,
            golden: c.case.e,
        });
    }
    Ok(out)
}

/// Like [`flop_count_crosschecks`], but a mismatch is an error.
pub fn verified_crosschecks(golden: &GoldenData) -> Result<Vec<CrossCheckResult>> {
    let out = flop_count_crosschecks(golden)?;
    if let Some(bad) = out.iter().find(|r| !r.passes()) {
        return Err(Error::Consistency(format!(
            "{}: computed {} flopping curves, reference {}",
            bad.case_id, bad.computed, bad.golden
        )));
    }
    Ok(out)
}

/// Values of `(aH_V + bF_V)^3` on the grid `[-r, r]^2`.
pub fn cube_form_grid(model: &FibrationModel, r: i64) -> Vec<((i64, i64), Q)> {
    (-r..=r)
        .flat_map(|a| (-r..=r).map(move |b| (a, b)))
        .map(|(a, b)| ((a, b), cube_form(model, a, b)))
        .collect()
}

/// Whether every cube-form value on the grid is an integer divisible by 4.
pub fn cube_form_divisible_by_four(model: &FibrationModel, r: i64) -> bool {
    cube_form_grid(model, r)
        .iter()
        .all(|(_, v)| v.is_integer() && (v.to_integer() % 4u8).is_zero())
}
