//! JSON interchange formats.
//!
//! Graph file: `{"n": 5, "k": 3, "colors": [..], "edges": [[1, 2], ..]}`.
//! Enumeration output: one [`RecordLine`] per line, then one
//! [`SummaryLine`].

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::CanonicalRecord;
use crate::graph::{Color, ComputationalGraph, GraphError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub k: Color,
    pub colors: Vec<Color>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    /// Validates as given, or relabels topologically first when `normalize`.
    pub fn into_graph(self, normalize: bool) -> Result<ComputationalGraph, GraphError> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[i, j]| (i, j)).collect();
        if normalize {
            ComputationalGraph::normalize_dag(self.n, self.k, &edges, self.colors)
        } else {
            ComputationalGraph::new(self.n, self.k, &edges, self.colors)
        }
    }
}

impl From<&ComputationalGraph> for GraphJson {
    fn from(g: &ComputationalGraph) -> Self {
        GraphJson {
            n: g.vertex_count(),
            k: g.palette_size(),
            colors: g.colors().to_vec(),
            edges: g.edges().map(|(i, j)| [i, j]).collect(),
        }
    }
}

pub fn parse_graph(text: &str, normalize: bool) -> Result<ComputationalGraph, FormatError> {
    let raw: GraphJson = serde_json::from_str(text)?;
    Ok(raw.into_graph(normalize)?)
}

pub fn graph_to_json(g: &ComputationalGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serialization cannot fail")
}

/// One enumeration record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordLine {
    pub hash: String,
    pub n: usize,
    pub colors: Vec<Color>,
    pub edges: Vec<[usize; 2]>,
}

impl From<&CanonicalRecord> for RecordLine {
    fn from(record: &CanonicalRecord) -> Self {
        RecordLine {
            hash: record.invariant.to_hex(),
            n: record.graph.vertex_count(),
            colors: record.graph.colors().to_vec(),
            edges: record.graph.edges().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl RecordLine {
    /// Rebuilds the graph with the given declared palette size.
    pub fn to_graph(&self, k: Color) -> Result<ComputationalGraph, GraphError> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[i, j]| (i, j)).collect();
        ComputationalGraph::new(self.n, k, &edges, self.colors.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub per_n: BTreeMap<usize, usize>,
    pub total: usize,
}

/// Trailing line of an enumeration file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryLine {
    pub summary: Summary,
}

pub fn write_record<W: Write>(out: &mut W, record: &CanonicalRecord) -> io::Result<()> {
    serde_json::to_writer(&mut *out, &RecordLine::from(record))?;
    out.write_all(b"\n")
}

pub fn write_summary<W: Write>(out: &mut W, summary: Summary) -> io::Result<()> {
    serde_json::to_writer(&mut *out, &SummaryLine { summary })?;
    out.write_all(b"\n")
}

/// Reads an enumeration file back into its records and trailing summary.
pub fn read_records<R: BufRead>(input: R) -> Result<(Vec<RecordLine>, Option<Summary>), FormatError> {
    let mut records = Vec::new();
    let mut summary = None;
    for line in input.lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        if line.starts_with("{\"summary\"") {
            summary = Some(serde_json::from_str::<SummaryLine>(&line)?.summary);
        } else {
            records.push(serde_json::from_str(&line)?);
        }
    }
    Ok((records, summary))
}
