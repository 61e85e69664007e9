//! Configuration, suite orchestration, CSV emission and golden-file comparison.

pub mod criteria;
pub mod tables;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{delta, delta0, delta0_kink, delta_kink, to_f64, Q};
use crate::rootsys::{build_catalog, SpaceDescriptor};

pub use criteria::{CriterionContext, CriterionOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Exponents,
    Asymptotics,
    Envelopes,
    Kernels,
    Beams,
    All,
}

impl Suite {
    /// Acceptance criteria exercised by the suite.
    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::Exponents => vec![1, 2],
            Suite::Asymptotics => vec![4, 8],
            Suite::Envelopes => vec![3, 5],
            Suite::Kernels => vec![6, 7, 10],
            Suite::Beams => vec![9],
            Suite::All => (1..=10).collect(),
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_lowercase())).map_err(|_| Error::Config(format!("unknown suite {s}")))
    }
}

/// Named tolerances with defaults taken from the acceptance criteria.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("c3.drift", 0.1),
    ("c4.h2_rel_factor", 2.0),
    ("c4.h2_constant", 0.01),
    ("c4.halving_center", 1.5),
    ("c4.halving_halfwidth", 0.2),
    ("c4.decay_slope", 0.15),
    ("c4.sl3r_constant", 0.02),
    ("c5.drift", 0.1),
    ("c6.k0_slope", 0.05),
    ("c6.far_slope", 0.1),
    ("c6.round_trip", 1e-5),
    ("c6.drift", 0.1),
    ("c7.sup_slope", 0.1),
    ("c7.transform_slope", 0.1),
    ("c7.kink_slope", 0.15),
    ("c8.hessian", 1e-4),
    ("c8.wall", 1e-6),
    ("c9.l2_slope", 0.05),
    ("c9.lp_slope", 0.1),
    ("c9.schur", 1e-8),
    ("c10.band", 1e-6),
    ("c10.pole_slope", 0.1),
    ("c10.pointwise_spread", 2.0),
    ("golden.abs", 1e-9),
    ("golden.rel", 1e-6),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub suite: Suite,
    #[serde(default)]
    pub spaces: Vec<String>,
    pub t_ladder: Vec<f64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_output() -> PathBuf {
    PathBuf::from("sphx-out")
}

fn default_workers() -> usize {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: Suite::All,
            spaces: vec![],
            t_ladder: vec![20.0, 40.0, 80.0, 160.0],
            tolerances: BTreeMap::new(),
            seed: 0,
            output_dir: default_output(),
            workers: default_workers(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_ladder.is_empty() {
            return Err(Error::Config("t_ladder is empty".into()));
        }
        if self.t_ladder.windows(2).any(|w| w[1] <= w[0]) || self.t_ladder.iter().any(|t| !(*t > 1.0) || !t.is_finite()) {
            return Err(Error::Config("t_ladder must be strictly increasing and above 1".into()));
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Config(format!("tolerance {k} = {v} is not positive")));
        }
        if let Some(k) = self.tolerances.keys().find(|k| !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == k)) {
            return Err(Error::Config(format!("unknown tolerance {k}")));
        }
        let cat = build_catalog();
        if let Some(s) = self.spaces.iter().find(|s| !cat.contains_key(*s)) {
            return Err(Error::Config(format!("unknown catalog space {s}")));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be positive".into()));
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        tolerance_lookup(&self.tolerances, name)
    }

    pub fn context(&self) -> CriterionContext {
        CriterionContext {
            spaces: if self.spaces.is_empty() { None } else { Some(self.spaces.iter().cloned().collect::<BTreeSet<_>>()) },
            t_ladder: self.t_ladder.clone(),
            tolerances: self.tolerances.clone(),
            seed: self.seed,
        }
    }
}

pub fn tolerance_lookup(overrides: &BTreeMap<String, f64>, name: &str) -> f64 {
    overrides
        .get(name)
        .copied()
        .or_else(|| DEFAULT_TOLERANCES.iter().find(|(n, _)| *n == name).map(|(_, v)| *v))
        .unwrap_or_else(|| panic!("no tolerance named {name}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub criterion: u8,
    pub status: Status,
    pub measured: f64,
    pub bound: f64,
    /// The check compares against a statement recorded as inconsistent; it is reported but not required.
    pub documented_deviation: bool,
    pub detail: String,
    pub artifacts: Vec<PathBuf>,
}

impl CheckResult {
    /// Passes iff `measured <= bound`.
    pub fn within(name: impl Into<String>, criterion: u8, measured: f64, bound: f64, detail: impl Into<String>) -> Self {
        let status = if measured.is_finite() && measured <= bound { Status::Pass } else { Status::Fail };
        CheckResult { name: name.into(), criterion, status, measured, bound, documented_deviation: false, detail: detail.into(), artifacts: vec![] }
    }

    pub fn flag(name: impl Into<String>, criterion: u8, ok: bool, detail: impl Into<String>) -> Self {
        Self::within(name, criterion, if ok { 0.0 } else { 1.0 }, 0.0, detail)
    }

    pub fn deviation(mut self) -> Self {
        self.documented_deviation = true;
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs the selected suites, writing one CSV per check table and `summary.json`.
pub fn run_suite(config: &RunConfig) -> Result<Vec<CheckResult>> {
    config.validate()?;
    let ctx = config.context();
    let ids = config.suite.criteria();
    let outcomes = run_criteria(&ids, &ctx, config.workers)?;
    fs::create_dir_all(&config.output_dir).map_err(|e| Error::Io(e.to_string()))?;
    let mut results = Vec::new();
    for o in outcomes {
        let mut files = Vec::new();
        for (name, csv) in &o.tables {
            let path = config.output_dir.join(name);
            fs::write(&path, csv).map_err(|e| Error::Io(e.to_string()))?;
            files.push(path);
        }
        for mut c in o.checks {
            c.artifacts = files.clone();
            results.push(c);
        }
    }
    let summary = serde_json::to_string_pretty(&results).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(config.output_dir.join("summary.json"), summary).map_err(|e| Error::Io(e.to_string()))?;
    Ok(results)
}

/// Evaluates criteria on a pool of `workers` threads; output order follows `ids`.
pub fn run_criteria(ids: &[u8], ctx: &CriterionContext, workers: usize) -> Result<Vec<CriterionOutcome>> {
    let mut slots: Vec<Option<Result<CriterionOutcome>>> = (0..ids.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let done = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|sc| {
        for _ in 0..workers.max(1).min(ids.len().max(1)) {
            sc.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= ids.len() {
                    break;
                }
                let r = criteria::run(ids[i], ctx);
                done.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every criterion ran")).collect()
}

pub fn fmt_num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

/// CSV `inv_p,delta0,delta` over the grid.
pub fn emit_exponent_graph(space: &SpaceDescriptor, grid: &[Q]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["inv_p", "delta0", "delta"]).map_err(csv_err)?;
    for &s in grid {
        let d0 = delta0(s, space.n as i64)?;
        let d = delta(s, space.n as i64, space.r as i64)?;
        w.write_record([fmt_num(to_f64(s)), fmt_num(to_f64(d0)), fmt_num(to_f64(d))]).map_err(csv_err)?;
    }
    finish(w)
}

/// Grid of `count` evenly spaced values of `1/p` in `[0, 1/2]` plus both kinks.
pub fn graph_grid(space: &SpaceDescriptor, count: usize) -> Vec<Q> {
    let mut g: Vec<Q> = (0..count).map(|i| Q::new(i as i64, 2 * (count as i64 - 1).max(1))).collect();
    g.push(delta0_kink(space.n as i64));
    g.push(delta_kink(space.n as i64, space.r as i64));
    g.sort();
    g.dedup();
    g
}

pub(crate) fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

/// Builds a CSV document from a header and rows of cells.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    finish(w)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Drift {
    pub file: String,
    pub row: usize,
    pub column: String,
    pub golden: String,
    pub observed: String,
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(|e| Error::Schema { file: path.display().to_string(), detail: e.to_string() })?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

/// Compares every CSV in `golden_dir` with its namesake in `run_dir`.
///
/// Schema problems (missing files, header or row-count changes) are returned as `Error::Schema`;
/// value drift yields a failing check naming file, row and column.
pub fn golden_compare(run_dir: &Path, golden_dir: &Path, column_tol: &BTreeMap<String, f64>, abs_tol: f64, rel_tol: f64) -> Result<(CheckResult, Vec<Drift>)> {
    let mut names: Vec<PathBuf> = fs::read_dir(golden_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", golden_dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    names.sort();
    if names.is_empty() {
        return Err(Error::Config(format!("no golden CSV files in {}", golden_dir.display())));
    }
    let mut drifts = Vec::new();
    let mut worst: f64 = 0.0;
    for g in &names {
        let file = g.file_name().unwrap().to_string_lossy().to_string();
        let observed = run_dir.join(&file);
        if !observed.exists() {
            return Err(Error::Schema { file, detail: "missing from run directory".into() });
        }
        let (gh, grows) = read_table(g)?;
        let (oh, orows) = read_table(&observed)?;
        if gh != oh {
            return Err(Error::Schema { file, detail: format!("header {oh:?} differs from golden {gh:?}") });
        }
        if grows.len() != orows.len() {
            return Err(Error::Schema { file, detail: format!("{} rows, golden has {}", orows.len(), grows.len()) });
        }
        for (i, (gr, or)) in grows.iter().zip(&orows).enumerate() {
            for (j, col) in gh.iter().enumerate() {
                let (a, b) = (&gr[j], &or[j]);
                let bad = match (a.parse::<f64>(), b.parse::<f64>()) {
                    (Ok(x), Ok(y)) => {
                        let tol = column_tol.get(col).copied().unwrap_or(abs_tol + rel_tol * x.abs());
                        let d = (x - y).abs();
                        if x.is_finite() && y.is_finite() {
                            worst = worst.max(d / tol);
                            d > tol
                        } else {
                            x != y && !(x.is_nan() && y.is_nan())
                        }
                    }
                    _ => a != b,
                };
                if bad {
                    drifts.push(Drift { file: file.clone(), row: i + 1, column: col.clone(), golden: a.clone(), observed: b.clone() });
                }
            }
        }
    }
    let detail = match drifts.first() {
        None => format!("{} files match", names.len()),
        Some(d) => format!("{} drifting cells; first {} row {} column {}: golden {} observed {}", drifts.len(), d.file, d.row, d.column, d.golden, d.observed),
    };
    let mut check = CheckResult::flag("golden", 0, drifts.is_empty(), detail);
    check.measured = worst;
    check.bound = 1.0;
    Ok((check, drifts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_catalog;

    #[test]
    fn exponent_graph_rows() {
        let cat = build_catalog();
        let csv = emit_exponent_graph(&cat["SL3R"], &graph_grid(&cat["SL3R"], 11)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "inv_p,delta0,delta");
        assert_eq!(lines[1], "0,2,1.5");
        assert_eq!(*lines.last().unwrap(), "0.5,0,0");
        let g = graph_grid(&cat["SL3R"], 11);
        assert!(g.contains(&Q::new(1, 3)) && g.contains(&Q::new(3, 14)));
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::default();
        assert!(c.validate().is_ok());
        c.t_ladder.clear();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = RunConfig { spaces: vec!["H9".into()], ..RunConfig::default() };
        assert!(c.validate().is_err());
        c.spaces = vec!["H2".into()];
        c.tolerances.insert("c3.drift".into(), -1.0);
        assert!(c.validate().is_err());
        assert!(RunConfig::from_json(r#"{"suite":"exponents","t_ladder":[20,40],"bogus":1}"#).is_err());
        let c = RunConfig::from_json(r#"{"suite":"exponents","t_ladder":[20,40]}"#).unwrap();
        assert_eq!(c.suite, Suite::Exponents);
        assert_eq!(c.tolerance("c3.drift"), 0.1);
    }
}
