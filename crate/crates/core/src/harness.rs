//! Benchmark plumbing: per-run records (JSON lines), Table-style CSV
//! summaries and the best-known reference values.
//!
//! CSV summary layout, one row per instance then a final `nb closed` row:
//!
//! ```text
//! instance,<cfg> value,<cfg> proven,<cfg> record,...,<cfg> time_to_best,<cfg> time_to_proof,...
//! ```
//!
//! Value, proven and record columns for every configuration come first (in
//! configuration order), followed by all timing columns, so that two runs can
//! be compared on the leading columns alone.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::instance::Cost;
use crate::strategies::{MatrixResult, SearchReport, TracePoint};

/// Reference values for one SOPLIB instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestKnownEntry {
    pub instance: String,
    pub bklb: Cost,
    pub bkub: Cost,
    #[serde(deserialize_with = "dash_as_none")]
    pub bs_pe_p: Option<Cost>,
    #[serde(deserialize_with = "dash_as_none")]
    pub bs_pe_io: Option<Cost>,
    #[serde(deserialize_with = "dash_as_none")]
    pub bs_pe_mst: Option<Cost>,
    #[serde(deserialize_with = "dash_as_none")]
    pub bs_p: Option<Cost>,
    #[serde(deserialize_with = "dash_as_none")]
    pub dfs_pe_p: Option<Cost>,
    #[serde(deserialize_with = "dash_as_none")]
    pub lds_pe_p: Option<Cost>,
    #[serde(deserialize_with = "dash_as_none")]
    pub t_record: Option<f64>,
    #[serde(deserialize_with = "dash_as_none")]
    pub t_opt: Option<f64>,
    /// Lower and upper bound differed before the reference runs.
    pub open: bool,
    pub bs_pe_p_closed: bool,
    pub bs_pe_p_record: bool,
}

impl BestKnownEntry {
    /// Precedence density encoded as the last dotted field of the name.
    pub fn density(&self) -> Option<u32> {
        self.instance.rsplit('.').next()?.parse().ok()
    }

    /// Vertex count encoded as the second dotted field of the name.
    pub fn size(&self) -> Option<usize> {
        self.instance.split('.').nth(1)?.parse().ok()
    }

    /// Known optimum when the bounds meet.
    pub fn optimum(&self) -> Option<Cost> {
        (self.bklb == self.bkub).then_some(self.bkub)
    }
}

fn dash_as_none<'de, D, T>(de: D) -> Result<Option<T>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    let s = String::deserialize(de)?;
    match s.trim() {
        "-" | "" => Ok(None),
        v => v.parse().map(Some).map_err(serde::de::Error::custom),
    }
}

/// Best-known table shipped with the crate.
pub const BEST_KNOWN_CSV: &str = include_str!("../data/best_known.csv");

#[derive(Debug, Clone, Default)]
pub struct BestKnown {
    entries: BTreeMap<String, BestKnownEntry>,
}

impl BestKnown {
    pub fn bundled() -> Self {
        Self::from_reader(BEST_KNOWN_CSV.as_bytes()).expect("bundled best-known table is valid")
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self, csv::Error> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn from_reader<R: io::Read>(reader: R) -> Result<Self, csv::Error> {
        let mut entries = BTreeMap::new();
        for row in csv::Reader::from_reader(reader).deserialize() {
            let e: BestKnownEntry = row?;
            entries.insert(e.instance.clone(), e);
        }
        Ok(Self { entries })
    }

    pub fn get(&self, instance: &str) -> Option<&BestKnownEntry> {
        self.entries.get(instance.trim_end_matches(".sop"))
    }

    pub fn iter(&self) -> impl Iterator<Item = &BestKnownEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One (instance, configuration) run as written to the JSON-lines output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub config: String,
    pub best_value: Option<Cost>,
    pub optimal: bool,
    pub infeasible: bool,
    pub time_to_best: Option<f64>,
    pub time_to_proof: Option<f64>,
    pub elapsed: f64,
    pub nodes_opened: u64,
    pub nodes_cut_bound: u64,
    pub nodes_cut_equivalence: u64,
    pub nodes_cut_heuristic: u64,
    pub trace: Vec<TracePoint>,
    pub best_permutation: Option<Vec<usize>>,
    /// Best known upper bound, when a reference table was given.
    pub bkub: Option<Cost>,
    /// Strictly better than `bkub`.
    pub record: Option<bool>,
}

impl RunRecord {
    pub fn from_report(report: &SearchReport, best_known: Option<&BestKnown>) -> Self {
        let bkub = best_known
            .and_then(|bk| bk.get(&report.instance))
            .map(|e| e.bkub);
        Self {
            instance: report.instance.clone(),
            config: report.config.clone(),
            best_value: report.best_value,
            optimal: report.optimal_proven,
            infeasible: report.infeasible,
            time_to_best: report.time_to_best,
            time_to_proof: report.time_to_proof,
            elapsed: report.elapsed,
            nodes_opened: report.counters.nodes_opened,
            nodes_cut_bound: report.counters.nodes_cut_bound,
            nodes_cut_equivalence: report.counters.nodes_cut_equivalence,
            nodes_cut_heuristic: report.counters.nodes_cut_heuristic,
            trace: report.trace.clone(),
            best_permutation: report.best_permutation.clone().map(|p| p.into_vec()),
            bkub,
            record: bkub.map(|b| report.best_value.is_some_and(|v| v < b)),
        }
    }

    pub fn value_label(&self) -> String {
        self.best_value
            .map_or_else(|| "-".to_string(), |v| v.to_string())
    }
}

/// JSON schema for [`RunRecord`] lines.
pub const RUN_RECORD_SCHEMA: &str = include_str!("../schema/run_record.schema.json");

pub fn write_jsonl<W: Write>(mut out: W, records: &[RunRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> io::Result<Vec<RunRecord>> {
    input
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| serde_json::from_str(&l?).map_err(io::Error::from))
        .collect()
}

fn opt_secs(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |t| format!("{t:.3}"))
}

/// Writes the instance × configuration summary described in the module docs.
pub fn write_summary_csv<W: Write>(
    out: W,
    matrix: &MatrixResult,
    best_known: Option<&BestKnown>,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["instance".to_string()];
    for c in &matrix.configs {
        header.push(format!("{c} value"));
        header.push(format!("{c} proven"));
        header.push(format!("{c} record"));
    }
    for c in &matrix.configs {
        header.push(format!("{c} time_to_best"));
        header.push(format!("{c} time_to_proof"));
    }
    w.write_record(&header)?;
    for (i, name) in matrix.instances.iter().enumerate() {
        let mut row = vec![name.clone()];
        let records: Vec<RunRecord> = (0..matrix.configs.len())
            .map(|c| RunRecord::from_report(&matrix.cell(i, c).report, best_known))
            .collect();
        for r in &records {
            row.push(r.value_label());
            row.push(r.optimal.to_string());
            row.push(r.record.map_or_else(|| "-".to_string(), |b| b.to_string()));
        }
        for r in &records {
            row.push(opt_secs(r.time_to_best));
            row.push(opt_secs(r.time_to_proof));
        }
        w.write_record(&row)?;
    }
    let mut closed = vec!["nb closed".to_string()];
    for count in matrix.closed_counts() {
        closed.extend([count.to_string(), String::new(), String::new()]);
    }
    closed.extend(std::iter::repeat_n(String::new(), 2 * matrix.configs.len()));
    w.write_record(&closed)?;
    w.flush()?;
    Ok(())
}
