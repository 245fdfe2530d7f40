//! Reference classification data shipped with the engine.
//!
//! The dataset holds the candidate tables, the theorem tables of surviving
//! cases and the per-degree exclusion lists. It is embedded at compile time and
//! can be exported to, or replaced by, a JSON file of the same shape.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::Degree;

const EMBEDDED: &str = include_str!("../data/golden.json");

/// One printed row of a candidate table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub no: u32,
    /// Weights `a_1..a_n` (the leading `a_0 = 0` is implicit); `[a]` in degree 1.
    pub tail: Vec<i64>,
    pub twists: Vec<i64>,
    /// `-K_V = alpha H_V + beta F_V` where printed.
    pub anti_k: Option<(i64, i64)>,
    /// `(-K_V)^3` where printed.
    pub cube: Option<i64>,
    /// `D = lambda l + sigma s_0` where printed.
    pub d_class: Option<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub degree: Degree,
    pub table: String,
    pub rows: Vec<GoldenRow>,
}

/// One surviving case of a theorem table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCase {
    pub item: u32,
    /// Row number in the candidate table of the same degree.
    pub row: u32,
    pub anti_k: (i64, i64),
    pub cube: i64,
    /// Number of flopping curves on a general member.
    pub e: u32,
    /// Structure of the flopping curves where the count is not all sections.
    pub e_note: Option<String>,
    /// Type of the extremal ray after the flop, where printed.
    pub ray_type: Option<String>,
    pub contraction: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremTable {
    pub degree: Degree,
    /// Theorem number, e.g. `2.3`; case ids are `<theorem>.<item>`.
    pub theorem: String,
    pub cases: Vec<TheoremCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedRows {
    pub degree: Degree,
    pub rows: Vec<u32>,
}

/// The complete reference dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenData {
    pub candidates: Vec<GoldenTable>,
    pub theorems: Vec<TheoremTable>,
    pub excluded: Vec<ExcludedRows>,
}

/// A theorem case joined with its candidate row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRef<'a> {
    pub case_id: String,
    pub degree: Degree,
    pub case: &'a TheoremCase,
    pub row: &'a GoldenRow,
}

impl GoldenData {
    /// The dataset compiled into the binary.
    pub fn embedded() -> Self {
        Self::from_json(EMBEDDED).expect("embedded golden data is well formed")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let data: Self =
            serde_json::from_str(s).map_err(|e| Error::Consistency(format!("golden data: {e}")))?;
        data.validate()?;
        Ok(data)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Consistency(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("golden data serializes")
    }

    /// Check referential integrity: every theorem case and excluded row names
    /// an existing candidate row, and every degree is present exactly once.
    pub fn validate(&self) -> Result<()> {
        for d in Degree::ALL {
            let table = self.table(d)?;
            let rows: BTreeSet<u32> = table.rows.iter().map(|r| r.no).collect();
            if rows.len() != table.rows.len() {
                return Err(Error::Consistency(format!(
                    "degree {d}: duplicate row numbers"
                )));
            }
            let mut used = BTreeSet::new();
            for c in &self.theorem(d)?.cases {
                if !rows.contains(&c.row) || !used.insert(c.row) {
                    return Err(Error::Consistency(format!(
                        "degree {d}: theorem item {} refers to row {}",
                        c.item, c.row
                    )));
                }
            }
            for r in self.excluded_rows(d)? {
                if !rows.contains(&r) || !used.insert(r) {
                    return Err(Error::Consistency(format!("degree {d}: excluded row {r}")));
                }
            }
        }
        Ok(())
    }

    pub fn table(&self, d: Degree) -> Result<&GoldenTable> {
        self.candidates
            .iter()
            .find(|t| t.degree == d)
            .ok_or_else(|| Error::Consistency(format!("no candidate table for degree {d}")))
    }

    pub fn theorem(&self, d: Degree) -> Result<&TheoremTable> {
        self.theorems
            .iter()
            .find(|t| t.degree == d)
            .ok_or_else(|| Error::Consistency(format!("no theorem table for degree {d}")))
    }

    pub fn excluded_rows(&self, d: Degree) -> Result<BTreeSet<u32>> {
        self.excluded
            .iter()
            .find(|e| e.degree == d)
            .map(|e| e.rows.iter().copied().collect())
            .ok_or_else(|| Error::Consistency(format!("no exclusion list for degree {d}")))
    }

    /// Surviving cases of a degree, in theorem order.
    pub fn cases(&self, d: Degree) -> Result<Vec<CaseRef<'_>>> {
        let table = self.table(d)?;
        let thm = self.theorem(d)?;
        thm.cases
            .iter()
            .map(|c| {
                let row = table.rows.iter().find(|r| r.no == c.row).ok_or_else(|| {
                    Error::Consistency(format!("degree {d}: missing row {}", c.row))
                })?;
                Ok(CaseRef {
                    case_id: format!("{}.{}", thm.theorem, c.item),
                    degree: d,
                    case: c,
                    row,
                })
            })
            .collect()
    }

    /// All surviving cases across degrees.
    pub fn all_cases(&self) -> Result<Vec<CaseRef<'_>>> {
        let mut out = Vec::new();
        for d in Degree::ALL {
            out.extend(self.cases(d)?);
        }
        Ok(out)
    }

    /// Look up a case by its `theorem.item` id.
    pub fn case(&self, id: &str) -> Result<CaseRef<'_>> {
        self.all_cases()?
            .into_iter()
            .find(|c| c.case_id == id)
            .ok_or_else(|| Error::UnknownCase(id.to_string()))
    }

    /// The survivor id of a candidate row, if it survives.
    pub fn survivor_id(&self, d: Degree, row: u32) -> Result<Option<String>> {
        Ok(self
            .cases(d)?
            .into_iter()
            .find(|c| c.row.no == row)
            .map(|c| c.case_id))
    }
}

/// Identifier of a candidate row that does not survive: `T<table>.<row>`.
pub fn excluded_id(d: Degree, row: u32) -> String {
    let table = match d {
        Degree::D9 => "T0",
        Degree::D8 => "T1",
        Degree::D2 => "T2",
        Degree::D3 => "T3",
        Degree::D4 => "T4",
        Degree::D5 if row <= 2 => "T5",
        Degree::D5 if row <= 16 => "T6",
        Degree::D5 => "T7",
        Degree::D1 => "T9",
    };
    format!("{table}.{row}")
}
