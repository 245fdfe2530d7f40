//! Enumeration of numerical candidates inside a finite search box.
//!
//! For each degree the integer closed forms of the nef, effectivity and
//! bigness conditions (and the degree-specific extra conditions) are scanned
//! over all normalized weight and twist tuples in the box. Every surviving
//! tuple is then rebuilt as a [`FibrationModel`] and re-checked against the
//! intrinsic intersection numbers. A candidate touching the boundary of the
//! box is reported as an error, so a successful run certifies that the box
//! contains every solution.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exclusions::sing_s0;
use crate::golden::GoldenData;
use crate::models::{big4_intrinsic, build_model, inequality_values, Degree, FibrationModel};

/// Bounds on the weights `a_i` and twists `k_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBox {
    pub weight_max: i64,
    pub twist_min: i64,
    pub twist_max: i64,
}

impl Default for SearchBox {
    fn default() -> Self {
        Self {
            weight_max: 6,
            twist_min: -8,
            twist_max: 8,
        }
    }
}

impl SearchBox {
    /// The box grown by `by` in every direction.
    pub fn enlarged(&self, by: i64) -> Self {
        Self {
            weight_max: self.weight_max + by,
            twist_min: self.twist_min - by,
            twist_max: self.twist_max + by,
        }
    }

    fn on_boundary(&self, tail: &[i64], twists: &[i64]) -> bool {
        tail.iter().any(|&a| a >= self.weight_max)
            || twists
                .iter()
                .any(|&k| k <= self.twist_min || k >= self.twist_max)
    }
}

/// One numbered row of a candidate table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub no: u32,
    pub model: FibrationModel,
}

/// The candidates of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateTable {
    pub degree: Degree,
    pub rows: Vec<TableRow>,
}

impl CandidateTable {
    pub fn row(&self, no: u32) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.no == no)
    }

    /// `(tail, twists)` of every row, in row order.
    pub fn tuples(&self) -> Vec<(Vec<i64>, Vec<i64>)> {
        self.rows
            .iter()
            .map(|r| (r.model.tail(), r.model.twists().to_vec()))
            .collect()
    }
}

/// Nondecreasing sequences of length `len` with entries in `lo..=hi`.
pub fn nondecreasing(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn rec(len: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().copied().unwrap_or(lo);
        for x in start..=hi {
            cur.push(x);
            rec(len, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, lo, hi, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Whether a weight and twist tuple passes the closed-form conditions of its
/// degree. `tail` omits `a_0 = 0`; in degree 1 it is `[a]`.
pub fn passes_closed_forms(degree: Degree, tail: &[i64], twists: &[i64], seed: u64) -> bool {
    let a: Vec<i64> = std::iter::once(0).chain(tail.iter().copied()).collect();
    let c1: i64 = tail.iter().sum();
    match degree {
        Degree::D9 => 2 - a[1] - a[2] >= 0,
        Degree::D8 => {
            let k = twists[0];
            let nef = 2 * (a[1] + 2 - a[2] - a[3]);
            nef >= 0 && 2 * a[1] + k >= 0 && 6 - c1 - 2 * k > 0 && !(nef == 0 && a[1] == a[2])
        }
        Degree::D2 => {
            let k = twists[0];
            let nef = 2 - a[1] - a[2] - k;
            nef >= 0
                && 6 - 2 * a[1] - 2 * a[2] - 3 * k > 0
                && a[2] + 2 * k >= 0
                && !(nef == 0 && a[1] == 0)
        }
        Degree::D3 => {
            let k = twists[0];
            let ok =
                6 - 3 * a[2] - 3 * a[3] - 2 * k >= 0 && 3 * a[1] + k >= 0 && 9 - 3 * c1 - 4 * k > 0;
            ok && match build_model(degree, tail, twists) {
                Ok(m) => sing_s0(&m, seed).is_none(),
                Err(_) => false,
            }
        }
        Degree::D4 => {
            let (k1, k2) = (twists[0], twists[1]);
            let nef = 4 - k1 - k2 - 2 * (a[3] + a[4]);
            nef >= 0
                && 2 * (a[1] + a[2]) + k1 + k2 >= 0
                && big4_intrinsic(tail, k1, k2) > 0
                && a[4] + k1 >= 0
                && a[4] + k2 >= 0
                && !(nef == 0 && a[2] == a[3])
        }
        Degree::D5 => {
            let sum: i64 = twists.iter().sum();
            if sum % 2 != 0 {
                return false;
            }
            let t = sum / 2;
            let w = |i: usize, j: usize| t - twists[i - 1] - twists[j - 1];
            10 - 5 * (a[4] + a[5]) - 2 * t >= 0
                && 5 * (a[1] + a[2] + a[3]) + 3 * t >= 0
                && 30 - 12 * t - 10 * c1 > 0
                && a[0] + w(1, 2) >= 0
                && a[5] + w(3, 5) >= 0
                && a[2] + w(1, 4) >= 0
                && a[4] + w(2, 5) >= 0
                && a[4] + w(3, 4) >= 0
                && (a[0] + w(1, 4) >= 0 || a[5] + w(4, 5) >= 0)
                && a[1] + w(1, 4) >= 0
                && a[1] + w(2, 3) >= 0
        }
        Degree::D1 => {
            let (a, k) = (tail[0], twists[0]);
            2 * (1 - k) - a >= 0 && a + k >= 0 && 6 - 2 * a - 4 * k > 0 && (a + 6 * k).max(k) >= 0
        }
    }
}

/// All `(tail, twists)` tuples of a degree inside the box that pass the
/// closed-form conditions.
pub fn scan(degree: Degree, sbox: &SearchBox, seed: u64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let tails: Vec<Vec<i64>> = match degree {
        Degree::D1 => (0..=sbox.weight_max).map(|a| vec![a]).collect(),
        d => {
            let n = d.bundle_rank().expect("split bundle") - 1;
            nondecreasing(n, 0, sbox.weight_max)
        }
    };
    let twist_sets = nondecreasing(degree.twist_arity(), sbox.twist_min, sbox.twist_max);
    let mut out = Vec::new();
    for tail in &tails {
        for tw in &twist_sets {
            if passes_closed_forms(degree, tail, tw, seed) {
                out.push((tail.clone(), tw.clone()));
            }
        }
    }
    out
}

/// Candidates of a degree in canonical order (descending anticanonical cube,
/// then weights, then twists), numbered from 1.
pub fn enumerate_canonical(degree: Degree, sbox: &SearchBox, seed: u64) -> Result<CandidateTable> {
    let mut models = Vec::new();
    for (tail, tw) in scan(degree, sbox, seed) {
        if sbox.on_boundary(&tail, &tw) {
            return Err(Error::BoundaryHit {
                degree: degree.value(),
                candidate: format!("tail {tail:?}, twists {tw:?}"),
            });
        }
        let model = build_model(degree, &tail, &tw)?;
        let report = inequality_values(&model);
        if !report.admissible() {
            return Err(Error::Consistency(format!(
                "{model}: closed forms admit it but the intrinsic values violate {:?}",
                report.violations()
            )));
        }
        models.push(model);
    }
    models.sort_by_key(|m| m.order_key());
    let rows = models
        .into_iter()
        .zip(1..)
        .map(|(model, no)| TableRow { no, model })
        .collect();
    Ok(CandidateTable { degree, rows })
}

/// Candidates numbered as in the reference table. The enumerated set must
/// coincide with the reference rows.
pub fn enumerate_with(
    degree: Degree,
    sbox: &SearchBox,
    seed: u64,
    golden: &GoldenData,
) -> Result<CandidateTable> {
    let canonical = enumerate_canonical(degree, sbox, seed)?;
    let reference = golden.table(degree)?;
    let index: BTreeMap<(Vec<i64>, Vec<i64>), u32> = reference
        .rows
        .iter()
        .map(|r| ((r.tail.clone(), r.twists.clone()), r.no))
        .collect();
    if canonical.rows.len() != index.len() {
        return Err(Error::Consistency(format!(
            "degree {degree}: enumerated {} candidates, the reference table has {}",
            canonical.rows.len(),
            index.len()
        )));
    }
    let mut rows = Vec::with_capacity(canonical.rows.len());
    for r in canonical.rows {
        let key = (r.model.tail(), r.model.twists().to_vec());
        let no = *index.get(&key).ok_or_else(|| {
            Error::Consistency(format!(
                "degree {degree}: {} is not a reference row",
                r.model
            ))
        })?;
        rows.push(TableRow { no, model: r.model });
    }
    rows.sort_by_key(|r| r.no);
    Ok(CandidateTable { degree, rows })
}

/// Candidates of a degree in the default box, with reference numbering.
pub fn enumerate(degree: Degree) -> Result<CandidateTable> {
    enumerate_with(
        degree,
        &SearchBox::default(),
        crate::genericity::DEFAULT_SEED,
        &GoldenData::embedded(),
    )
}

/// Sizes of the three degree-5 branches `a4 + a5 = 2 - k1`, `-k1`, `1 - k1`.
/// Tuples in none of the branches are reported as an error.
pub fn verify_branch_partition(tuples: &[(Vec<i64>, Vec<i64>)]) -> Result<[usize; 3]> {
    let mut counts = [0usize; 3];
    for (tail, tw) in tuples {
        if tail.len() != 5 || tw.len() != 5 {
            return Err(Error::Consistency(format!(
                "not a degree-5 tuple: {tail:?} {tw:?}"
            )));
        }
        let s = tail[3] + tail[4];
        let k1 = tw[0];
        let branch = if s == 2 - k1 {
            0
        } else if s == -k1 {
            1
        } else if s == 1 - k1 {
            2
        } else {
            return Err(Error::Consistency(format!(
                "a4 + a5 = {s} lies in no branch for k1 = {k1}"
            )));
        };
        counts[branch] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nondecreasing_counts() {
        assert_eq!(nondecreasing(2, 0, 2).len(), 6);
        assert_eq!(nondecreasing(0, 0, 2), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn enlarged_box() {
        let b = SearchBox::default().enlarged(2);
        assert_eq!((b.weight_max, b.twist_min, b.twist_max), (8, -10, 10));
    }

    #[test]
    fn degree_one_rows() {
        let t = enumerate_canonical(Degree::D1, &SearchBox::default(), 1).unwrap();
        let got: Vec<(i64, i64)> = t.tuples().iter().map(|(a, k)| (k[0], a[0])).collect();
        let mut got = got;
        got.sort();
        assert_eq!(got, vec![(0, 0), (0, 1), (0, 2), (1, 0)]);
    }

    #[test]
    fn boundary_is_detected() {
        let tiny = SearchBox {
            weight_max: 1,
            twist_min: -8,
            twist_max: 8,
        };
        assert!(matches!(
            enumerate_canonical(Degree::D9, &tiny, 1),
            Err(Error::BoundaryHit { .. })
        ));
    }
}
