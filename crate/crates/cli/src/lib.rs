//! Command-line front end: argument parsing, output records and renderers.
//!
//! [`run`] takes the raw argument list and returns the text destined for
//! standard output and standard error together with the process exit code,
//! so every command can be exercised in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use dpfib::chowring::{fmt_q, parse_q, CurveClass, DivisorClass, Q};
use dpfib::enumerate::{enumerate_with, CandidateTable, SearchBox};
use dpfib::exclusions::{apply_rules, ExclusionVerdict, Outcome};
use dpfib::flopinv::{deformation_invariant_of, CaseRecord};
use dpfib::genericity::DEFAULT_SEED;
use dpfib::golden::{excluded_id, GoldenData};
use dpfib::models::{
    anticanonical, anticanonical_cube, d_class, inequality_values, Degree, FibrationModel,
};
use dpfib::verify::{render, verify};
use dpfib::Error;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code when verification finds a mismatch.
pub const EXIT_VERIFY: i32 = 1;
/// Exit code for invalid input.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for an internal consistency error.
pub const EXIT_CONSISTENCY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "dpfib",
    version,
    about = "Classify weak Fano threefolds with a del Pezzo fibration"
)]
pub struct Cli {
    /// Reference dataset to use instead of the embedded one.
    #[arg(long, global = true, value_name = "PATH")]
    pub golden: Option<PathBuf>,

    /// Seed for the randomized genericity checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the candidate table of a degree.
    Enumerate(Selection),
    /// Apply the exclusion rules and list survivors and excluded rows.
    Classify(Selection),
    /// Recompute everything and compare with the reference dataset.
    Verify,
    /// Print every invariant of one surviving case.
    Case {
        /// Case id such as 2.3.8.
        id: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write the reference dataset as JSON.
    ExportGolden,
}

#[derive(Args, Debug)]
pub struct Selection {
    /// Degree of the del Pezzo fibration.
    #[arg(long, value_parser = parse_degree, required_unless_present = "all", conflicts_with = "all")]
    pub degree: Option<Degree>,
    /// Every degree.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

fn parse_degree(s: &str) -> Result<Degree, String> {
    let d: u8 = s.parse().map_err(|_| format!("{s} is not a degree"))?;
    Degree::new(d).map_err(|e| e.to_string())
}

/// An integer, or a non-integral rational written `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Ratio(String),
}

impl Num {
    pub fn from_q(x: &Q) -> Self {
        match dpfib::chowring::q_to_i64(x) {
            Some(n) => Num::Int(n),
            None => Num::Ratio(fmt_q(x)),
        }
    }

    pub fn to_q(&self) -> Option<Q> {
        match self {
            Num::Int(n) => Some(dpfib::chowring::q(*n)),
            Num::Ratio(s) => parse_q(s),
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Num::Int(n) => write!(f, "{n}"),
            Num::Ratio(s) => f.write_str(s),
        }
    }
}

/// One row of machine-readable output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub degree: u8,
    pub case_id: String,
    pub weights: Vec<i64>,
    pub twists: Vec<i64>,
    pub anti_k: [Num; 2],
    pub minus_k_cube: Num,
    pub d_class: Option<[Num; 2]>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<String>,
}

impl OutputRecord {
    /// A record with the numerical columns of a model filled in.
    pub fn from_model(model: &FibrationModel, case_id: String, verdict: &str) -> Self {
        let k = anticanonical(model);
        Self {
            degree: model.degree().value(),
            case_id,
            weights: model.weights(),
            twists: model.twists().to_vec(),
            anti_k: [Num::from_q(&k.alpha), Num::from_q(&k.beta)],
            minus_k_cube: Num::from_q(&anticanonical_cube(model)),
            d_class: d_class(model)
                .ok()
                .map(|c| [Num::from_q(&c.lambda), Num::from_q(&c.sigma)]),
            verdict: verdict.to_string(),
            rule_id: None,
            e: None,
            ray_type: None,
            contraction: None,
        }
    }

    fn from_verdict(v: &ExclusionVerdict, golden: &GoldenData) -> Self {
        match &v.outcome {
            Outcome::Excluded { rule, .. } => {
                let mut r = Self::from_model(&v.model, v.case_id.clone(), "excluded");
                r.rule_id = Some(rule.as_str().to_string());
                r
            }
            Outcome::Survivor => {
                let mut r = Self::from_model(&v.model, v.case_id.clone(), "survivor");
                if let Ok(c) = golden.case(&v.case_id) {
                    r.e = Some(c.case.e);
                    r.ray_type = c.case.ray_type.clone();
                    r.contraction = Some(c.case.contraction.clone());
                }
                r
            }
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl RunOutcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::UnknownCase(_) | Error::UnsupportedDegree(_) => EXIT_USAGE,
        _ => EXIT_CONSISTENCY,
    }
}

fn from_error(e: Error) -> RunOutcome {
    RunOutcome::fail(error_code(&e), format!("error: {e}\n"))
}

/// Parse arguments and run the selected command.
pub fn run<I, T>(args: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                RunOutcome::ok(text)
            } else {
                RunOutcome::fail(code, text)
            };
        }
    };
    let golden = match &cli.golden {
        None => GoldenData::embedded(),
        Some(p) => {
            if !p.is_file() {
                return RunOutcome::fail(
                    EXIT_USAGE,
                    format!("error: {} is not a file\n", p.display()),
                );
            }
            match GoldenData::load(p) {
                Ok(g) => g,
                Err(e) => return RunOutcome::fail(EXIT_USAGE, format!("error: {e}\n")),
            }
        }
    };
    match cli.command {
        Command::Enumerate(sel) => cmd_enumerate(&sel, &golden, cli.seed),
        Command::Classify(sel) => cmd_classify(&sel, &golden, cli.seed),
        Command::Verify => cmd_verify(&golden, cli.seed),
        Command::Case { id, format } => cmd_case(&id, format, &golden),
        Command::ExportGolden => RunOutcome::ok(golden.to_json() + "\n"),
    }
}

fn degrees(sel: &Selection) -> Vec<Degree> {
    match sel.degree {
        Some(d) => vec![d],
        None => Degree::ALL.to_vec(),
    }
}

fn tables(sel: &Selection, golden: &GoldenData, seed: u64) -> Result<Vec<CandidateTable>, Error> {
    degrees(sel)
        .into_iter()
        .map(|d| enumerate_with(d, &SearchBox::default(), seed, golden))
        .collect()
}

fn cmd_enumerate(sel: &Selection, golden: &GoldenData, seed: u64) -> RunOutcome {
    let tables = match tables(sel, golden, seed) {
        Ok(t) => t,
        Err(e) => return from_error(e),
    };
    let records: Vec<OutputRecord> = tables
        .iter()
        .flat_map(|t| {
            t.rows.iter().map(move |r| {
                OutputRecord::from_model(&r.model, excluded_id(t.degree, r.no), "candidate")
            })
        })
        .collect();
    let out = match sel.format {
        Format::Json => render_json(&records),
        Format::Csv => render_csv(&records),
        Format::Text => {
            let mut s = String::new();
            for t in &tables {
                let _ = writeln!(s, "degree {}: {} candidates", t.degree, t.rows.len());
                for r in &t.rows {
                    let rec = OutputRecord::from_model(&r.model, String::new(), "candidate");
                    let _ = writeln!(
                        s,
                        "  {:>3}  {:<22} {:<22} -K = {}  (-K)^3 = {}{}",
                        r.no,
                        r.model.ambient_label(),
                        r.model.twist_label(),
                        divisor_text(&rec.anti_k),
                        rec.minus_k_cube,
                        rec.d_class
                            .as_ref()
                            .map(|d| format!("  D = {}", curve_text(d)))
                            .unwrap_or_default()
                    );
                }
            }
            s
        }
    };
    RunOutcome::ok(out)
}

fn classify_all(
    sel: &Selection,
    golden: &GoldenData,
    seed: u64,
) -> Result<Vec<(Degree, Vec<ExclusionVerdict>)>, Error> {
    let mut out = Vec::new();
    for t in tables(sel, golden, seed)? {
        let v = apply_rules(&t, golden, seed)?;
        out.push((t.degree, v));
    }
    Ok(out)
}

fn cmd_classify(sel: &Selection, golden: &GoldenData, seed: u64) -> RunOutcome {
    let results = match classify_all(sel, golden, seed) {
        Ok(r) => r,
        Err(e) => return from_error(e),
    };
    let records: Vec<OutputRecord> = results
        .iter()
        .flat_map(|(_, vs)| vs.iter().map(|v| OutputRecord::from_verdict(v, golden)))
        .collect();
    let out = match sel.format {
        Format::Json => render_json(&records),
        Format::Csv => render_csv(&records),
        Format::Text => {
            let mut s = String::new();
            let mut total = 0;
            for (d, vs) in &results {
                let survivors = vs.iter().filter(|v| v.survives()).count();
                total += survivors;
                let _ = writeln!(
                    s,
                    "degree {d}: {survivors} survivors, {} excluded",
                    vs.len() - survivors
                );
                for v in vs {
                    let rec = OutputRecord::from_verdict(v, golden);
                    let tail = match &v.outcome {
                        Outcome::Excluded { rule, evidence } => {
                            format!("excluded by {rule}: {evidence}")
                        }
                        Outcome::Survivor => format!(
                            "e = {}  R' = {}  {}",
                            rec.e.map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
                            rec.ray_type.as_deref().unwrap_or("-"),
                            rec.contraction.as_deref().unwrap_or("")
                        ),
                    };
                    let _ = writeln!(
                        s,
                        "  {:<7} {:<22} {:<22} (-K)^3 = {:<3} {tail}",
                        v.case_id,
                        v.model.ambient_label(),
                        v.model.twist_label(),
                        rec.minus_k_cube
                    );
                }
            }
            if sel.all {
                let _ = writeln!(s, "{total} cases");
            }
            s
        }
    };
    RunOutcome::ok(out)
}

fn cmd_verify(golden: &GoldenData, seed: u64) -> RunOutcome {
    let report = verify(golden, seed);
    let text = render(&report);
    if report.passed() {
        RunOutcome::ok(text + "verify: pass\n")
    } else {
        let mut err = String::from("verify: fail\n");
        for c in report.failures() {
            let _ = writeln!(err, "  {}. {}: {}", c.group, c.name, c.detail);
        }
        RunOutcome {
            stdout: text,
            stderr: err,
            code: EXIT_VERIFY,
        }
    }
}

fn cmd_case(id: &str, format: Format, golden: &GoldenData) -> RunOutcome {
    let case = match golden.case(id) {
        Ok(c) => c,
        Err(e) => return from_error(e),
    };
    let rec = match CaseRecord::from_ref(&case) {
        Ok(r) => r,
        Err(e) => return from_error(e),
    };
    let mut out = OutputRecord::from_model(&rec.model, rec.case_id.clone(), "survivor");
    out.e = Some(rec.e);
    out.ray_type = rec.ray_type.clone();
    out.contraction = Some(rec.contraction.clone());
    match format {
        Format::Json => RunOutcome::ok(render_json(&[out])),
        Format::Csv => RunOutcome::ok(render_csv(&[out])),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "case {}  (degree {}, row {})",
                rec.case_id, rec.degree, case.row.no
            );
            let _ = writeln!(s, "ambient        {}", rec.model.ambient_label());
            let _ = writeln!(s, "weights        {:?}", out.weights);
            let _ = writeln!(s, "twists         {:?}", out.twists);
            let _ = writeln!(s, "-K_V           {}", divisor_text(&out.anti_k));
            let _ = writeln!(s, "(-K_V)^3       {}", out.minus_k_cube);
            let _ = writeln!(
                s,
                "D              {}",
                out.d_class
                    .as_ref()
                    .map(curve_text)
                    .unwrap_or_else(|| "-".to_string())
            );
            for c in &inequality_values(&rec.model).entries {
                let _ = writeln!(
                    s,
                    "{:<14} {} {}",
                    c.id,
                    fmt_q(&c.value),
                    c.relation.symbol()
                );
            }
            match deformation_invariant_of(&rec.model) {
                Ok(d) => {
                    let _ = writeln!(s, "d(V)           {d}");
                }
                Err(e) => return from_error(e),
            }
            let _ = writeln!(
                s,
                "e              {}{}",
                rec.e,
                rec.e_note
                    .as_ref()
                    .map(|n| format!("  ({n})"))
                    .unwrap_or_default()
            );
            let _ = writeln!(
                s,
                "R'             {}",
                rec.ray_type.as_deref().unwrap_or("-")
            );
            let _ = writeln!(s, "contraction    {}", rec.contraction);
            RunOutcome::ok(s)
        }
    }
}

fn coefficients(c: &[Num; 2]) -> (Q, Q) {
    let get = |n: &Num| n.to_q().expect("records hold valid rationals");
    (get(&c[0]), get(&c[1]))
}

fn divisor_text(c: &[Num; 2]) -> String {
    let (a, b) = coefficients(c);
    DivisorClass::new(a, b).to_string()
}

fn curve_text(c: &[Num; 2]) -> String {
    let (a, b) = coefficients(c);
    CurveClass::new(a, b).to_string()
}

/// Records as a pretty-printed JSON array.
pub fn render_json(records: &[OutputRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize") + "\n"
}

const CSV_HEADER: [&str; 12] = [
    "degree",
    "case_id",
    "weights",
    "twists",
    "anti_k",
    "minus_k_cube",
    "d_class",
    "verdict",
    "rule_id",
    "e",
    "ray_type",
    "contraction",
];

fn json_cell<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("cell serializes")
}

/// Records as CSV with a header row; list-valued cells hold JSON arrays.
pub fn render_csv(records: &[OutputRecord]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        w.write_record([
            r.degree.to_string(),
            r.case_id.clone(),
            json_cell(&r.weights),
            json_cell(&r.twists),
            json_cell(&r.anti_k),
            r.minus_k_cube.to_string(),
            r.d_class.as_ref().map(json_cell).unwrap_or_default(),
            r.verdict.clone(),
            r.rule_id.clone().unwrap_or_default(),
            r.e.map(|e| e.to_string()).unwrap_or_default(),
            r.ray_type.clone().unwrap_or_default(),
            r.contraction.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 output")
}

/// Parse the JSON emitted by [`render_json`].
pub fn parse_json(s: &str) -> serde_json::Result<Vec<OutputRecord>> {
    serde_json::from_str(s)
}
