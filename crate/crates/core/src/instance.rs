//! Sequential Ordering Problem instances.
//!
//! An instance is a full asymmetric cost matrix in which an entry of `-1` at
//! row `i`, column `j` says that `j` must be visited before `i` (and that the
//! arc `i -> j` is unusable). Vertex `0` is the start and vertex `n - 1` the
//! end, following the SOPLIB layout. Two textual layouts are accepted:
//!
//! * bare: the dimension followed by `n * n` integers in row-major order;
//! * TSPLIB-style: `KEY: value` header lines, then `EDGE_WEIGHT_SECTION`
//!   holding the full matrix (optionally preceded by the dimension, as the
//!   SOPLIB files do) and an optional trailing `EOF`.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;

/// Arc and tour costs.
pub type Cost = i64;

/// Matrix marker for "column vertex precedes row vertex".
pub const PRECEDENCE_MARK: Cost = -1;

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("io error")]
    Io(#[from] std::io::Error),
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("expected {expected} matrix entries for dimension {n}, found {found}")]
    NotSquare {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("an instance needs at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("invalid entry {value} at row {row}, column {col}")]
    InvalidEntry { row: usize, col: usize, value: Cost },
    #[error("precedence constraints contain a cycle through vertex {0}")]
    Cyclic(usize),
    #[error("start vertex {start} has predecessors {preds:?}")]
    StartHasPredecessors { start: usize, preds: Vec<usize> },
    #[error("end vertex {end} is required before vertex {vertex}")]
    EndNotLast { end: usize, vertex: usize },
    #[error("infeasible permutation: {0}")]
    Infeasible(Violation),
}

/// Why a vertex sequence is not a feasible solution.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("expected {expected} vertices, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("vertex {0} appears twice")]
    Repeated(usize),
    #[error("sequence must start at {expected}, starts at {found}")]
    WrongStart { expected: usize, found: usize },
    #[error("sequence must end at {expected}, ends at {found}")]
    WrongEnd { expected: usize, found: usize },
    #[error("vertex {before} must be visited before vertex {after}")]
    Precedence { before: usize, after: usize },
}

/// An ordering of all vertices, from start to end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Self {
        Self(order)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl std::ops::Deref for Permutation {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Permutation {
    fn from(order: Vec<usize>) -> Self {
        Self(order)
    }
}

/// A validated, immutable SOP instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    n: usize,
    /// Row-major matrix; `PRECEDENCE_MARK` entries are forbidden arcs.
    matrix: Vec<Cost>,
    preds: Vec<VertexSet>,
    start: usize,
    end: usize,
}

impl Instance {
    /// Builds an instance from a row-major matrix using the `-1` precedence
    /// convention, with vertex 0 as start and `n - 1` as end.
    pub fn from_matrix(
        name: impl Into<String>,
        n: usize,
        matrix: Vec<Cost>,
    ) -> Result<Self, InstanceError> {
        if n < 2 {
            return Err(InstanceError::TooSmall(n));
        }
        if matrix.len() != n * n {
            return Err(InstanceError::NotSquare {
                n,
                expected: n * n,
                found: matrix.len(),
            });
        }
        let mut preds = vec![VertexSet::with_capacity(n); n];
        for row in 0..n {
            for col in 0..n {
                let value = matrix[row * n + col];
                if value == PRECEDENCE_MARK {
                    if row == col {
                        return Err(InstanceError::Cyclic(row));
                    }
                    preds[row].insert(col);
                } else if value < 0 || (row == col && value != 0) {
                    return Err(InstanceError::InvalidEntry { row, col, value });
                }
            }
        }
        let (start, end) = (0, n - 1);
        if !preds[start].is_empty() {
            return Err(InstanceError::StartHasPredecessors {
                start,
                preds: preds[start].iter().collect(),
            });
        }
        if let Some(vertex) = (0..n).find(|&v| v != end && preds[v].contains(end)) {
            return Err(InstanceError::EndNotLast { end, vertex });
        }
        check_acyclic(&preds)?;
        Ok(Self {
            name: name.into(),
            n,
            matrix,
            preds,
            start,
            end,
        })
    }

    /// Parses either the bare or the TSPLIB-style layout.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let first = text.split_whitespace().next();
        match first {
            None => Err(InstanceError::Malformed("empty input".into())),
            Some(tok) if tok.parse::<i64>().is_ok() => parse_bare(text),
            Some(_) => parse_tsplib(text),
        }
    }

    pub fn parse_bytes(bytes: &[u8]) -> Result<Self, InstanceError> {
        let text =
            std::str::from_utf8(bytes).map_err(|e| InstanceError::Malformed(e.to_string()))?;
        Self::parse(text)
    }

    /// Reads a file; the instance is named after its `NAME` header, or after
    /// the file name when there is none.
    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut inst = Self::parse(&text)?;
        if inst.name.is_empty() {
            inst.name = path
                .file_name()
                .map(|s| s.to_string_lossy().trim_end_matches(".sop").to_string())
                .unwrap_or_default();
        }
        Ok(inst)
    }

    /// Seeded random instance laid out like SOPLIB: uniform costs in
    /// `0..=max_cost`, precedences drawn with probability `density` between
    /// pairs of inner vertices of a random topological order, vertex 0 before
    /// every other vertex and every vertex before `n - 1`.
    pub fn generate_random(n: usize, max_cost: Cost, density: f64, seed: u64) -> Self {
        assert!(n >= 2, "an instance needs at least 2 vertices");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut matrix = vec![0; n * n];
        for row in 0..n {
            for col in 0..n {
                if row != col {
                    matrix[row * n + col] = rng.gen_range(0..=max_cost.max(0));
                }
            }
        }
        let mut order: Vec<usize> = (1..n - 1).collect();
        order.shuffle(&mut rng);
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if rng.gen_bool(density.clamp(0.0, 1.0)) {
                    matrix[order[j] * n + order[i]] = PRECEDENCE_MARK;
                }
            }
        }
        for row in 1..n {
            matrix[row * n] = PRECEDENCE_MARK;
        }
        for col in 0..n - 1 {
            matrix[(n - 1) * n + col] = PRECEDENCE_MARK;
        }
        let name = format!("rand.{n}.{max_cost}.{density}.{seed}");
        Self::from_matrix(name, n, matrix).expect("generated instances are valid by construction")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of vertices.
    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn start(&self) -> usize {
        self.start
    }

    #[inline]
    pub fn end(&self) -> usize {
        self.end
    }

    /// Cost of arc `from -> to`, `None` when the arc is forbidden.
    #[inline]
    pub fn arc(&self, from: usize, to: usize) -> Option<Cost> {
        let w = self.matrix[from * self.n + to];
        (w != PRECEDENCE_MARK).then_some(w)
    }

    /// Raw matrix entry, `-1` for forbidden arcs.
    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Cost {
        self.matrix[row * self.n + col]
    }

    /// Vertices that must be visited before `v`.
    #[inline]
    pub fn preds(&self, v: usize) -> &VertexSet {
        &self.preds[v]
    }

    /// Number of `(a, b)` precedence pairs stated in the matrix.
    pub fn precedence_count(&self) -> usize {
        self.preds.iter().map(VertexSet::len).sum()
    }

    /// Layout deviations that are reported but not repaired. An empty list
    /// means the end vertex is explicitly preceded by every other vertex.
    pub fn diagnostics(&self) -> Vec<String> {
        let missing: Vec<usize> = (0..self.n)
            .filter(|&v| v != self.end && !self.preds[self.end].contains(v))
            .collect();
        if missing.is_empty() {
            vec![]
        } else {
            vec![format!(
                "end vertex {} is not explicitly constrained after vertices {:?}",
                self.end, missing
            )]
        }
    }

    /// First reason `order` is not a feasible solution, if any.
    pub fn violation(&self, order: &[usize]) -> Option<Violation> {
        if order.len() != self.n {
            return Some(Violation::WrongLength {
                expected: self.n,
                found: order.len(),
            });
        }
        let mut seen = VertexSet::with_capacity(self.n);
        for &v in order {
            if v >= self.n {
                return Some(Violation::OutOfRange(v));
            }
            if !seen.insert(v) {
                return Some(Violation::Repeated(v));
            }
        }
        if order[0] != self.start {
            return Some(Violation::WrongStart {
                expected: self.start,
                found: order[0],
            });
        }
        if order[self.n - 1] != self.end {
            return Some(Violation::WrongEnd {
                expected: self.end,
                found: order[self.n - 1],
            });
        }
        let mut visited = VertexSet::with_capacity(self.n);
        for &v in order {
            if let Some(before) = self.preds[v].iter().find(|&p| !visited.contains(p)) {
                return Some(Violation::Precedence { before, after: v });
            }
            visited.insert(v);
        }
        None
    }

    /// `true` iff `order` is a permutation starting at the start vertex,
    /// ending at the end vertex and respecting every precedence.
    pub fn check_feasible(&self, order: &[usize]) -> bool {
        self.violation(order).is_none()
    }

    /// Sum of arc costs along a feasible permutation.
    pub fn evaluate_permutation(&self, order: &[usize]) -> Result<Cost, InstanceError> {
        if let Some(v) = self.violation(order) {
            return Err(InstanceError::Infeasible(v));
        }
        Ok(self.path_cost(order))
    }

    /// Sum of `entry(a, b)` over consecutive pairs, without any check.
    pub fn path_cost(&self, order: &[usize]) -> Cost {
        order.windows(2).map(|w| self.entry(w[0], w[1])).sum()
    }

    /// Bare layout: dimension line followed by one matrix row per line.
    pub fn to_bare_string(&self) -> String {
        let mut out = format!("{}\n", self.n);
        self.write_rows(&mut out);
        out
    }

    /// TSPLIB-style layout as used by the SOPLIB files.
    pub fn to_tsplib_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME: {}", self.name);
        let _ = writeln!(out, "TYPE: SOP");
        let _ = writeln!(out, "DIMENSION: {}", self.n);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE: EXPLICIT");
        let _ = writeln!(out, "EDGE_WEIGHT_FORMAT: FULL_MATRIX");
        let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
        let _ = writeln!(out, "{}", self.n);
        self.write_rows(&mut out);
        out.push_str("EOF\n");
        out
    }

    fn write_rows(&self, out: &mut String) {
        for row in self.matrix.chunks(self.n) {
            let line: Vec<String> = row.iter().map(Cost::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
}

fn parse_tokens<'a, I: Iterator<Item = &'a str>>(tokens: I) -> Result<Vec<Cost>, InstanceError> {
    tokens
        .map(|t| {
            t.parse::<Cost>()
                .map_err(|_| InstanceError::Malformed(format!("expected an integer, found {t:?}")))
        })
        .collect()
}

fn parse_dimension(tok: Cost) -> Result<usize, InstanceError> {
    usize::try_from(tok).map_err(|_| InstanceError::Malformed(format!("invalid dimension {tok}")))
}

fn parse_bare(text: &str) -> Result<Instance, InstanceError> {
    let values = parse_tokens(text.split_whitespace())?;
    let n = parse_dimension(values[0])?;
    Instance::from_matrix(String::new(), n, values[1..].to_vec())
}

fn parse_tsplib(text: &str) -> Result<Instance, InstanceError> {
    let mut name = String::new();
    let mut dimension = None;
    let mut lines = text.lines();
    let mut section = None;
    for line in lines.by_ref() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("EDGE_WEIGHT_SECTION") {
            section = Some(rest.trim_start_matches(':').to_string());
            break;
        }
        if let Some((key, value)) = trimmed.split_once(':') {
            match key.trim() {
                "NAME" => name = value.trim().to_string(),
                "DIMENSION" => {
                    let d = value.trim().parse::<usize>().map_err(|_| {
                        InstanceError::Malformed(format!("invalid DIMENSION {value:?}"))
                    })?;
                    dimension = Some(d);
                }
                _ => {}
            }
        }
    }
    let Some(first_line) = section else {
        return Err(InstanceError::Malformed(
            "missing EDGE_WEIGHT_SECTION".into(),
        ));
    };
    let body = std::iter::once(first_line.as_str())
        .chain(lines)
        .flat_map(str::split_whitespace)
        .take_while(|t| *t != "EOF");
    let values = parse_tokens(body)?;
    let n = match dimension {
        Some(d) => d,
        None => parse_dimension(
            *values
                .first()
                .ok_or_else(|| InstanceError::Malformed("empty matrix".into()))?,
        )?,
    };
    let matrix = if values.len() == n * n + 1 && values[0] == n as Cost {
        values[1..].to_vec()
    } else {
        values
    };
    Instance::from_matrix(name, n, matrix)
}

fn check_acyclic(preds: &[VertexSet]) -> Result<(), InstanceError> {
    let n = preds.len();
    let mut indegree: Vec<usize> = preds.iter().map(VertexSet::len).collect();
    let mut succs = vec![Vec::new(); n];
    for (v, p) in preds.iter().enumerate() {
        for u in p {
            succs[u].push(v);
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = queue.pop_front() {
        removed += 1;
        for &v in &succs[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    if removed == n {
        Ok(())
    } else {
        let culprit = (0..n).find(|&v| indegree[v] > 0).unwrap_or(0);
        Err(InstanceError::Cyclic(culprit))
    }
}
