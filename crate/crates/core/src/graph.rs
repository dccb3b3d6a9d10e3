//! Undirected simple graphs loaded from SNAP-style edge lists, and the
//! degree sequences derived from them.

use std::collections::HashMap;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Immutable undirected graph in compressed adjacency form.
///
/// Node indices are contiguous, assigned in order of first appearance in the
/// input. Neighbor lists are sorted, free of duplicates and self-loops.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    original_ids: Vec<u64>,
    edge_count: usize,
}

/// Bookkeeping produced while parsing an edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParseStats {
    pub data_lines: usize,
    pub comment_lines: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl Graph {
    /// Builds a graph from `(from, to)` identifier pairs.
    pub fn from_edges<I>(edges: I) -> (Graph, ParseStats)
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut index_of: HashMap<u64, usize> = HashMap::new();
        let mut original_ids = Vec::new();
        let mut pairs = Vec::new();
        let mut stats = ParseStats::default();

        let mut intern = |id: u64, original_ids: &mut Vec<u64>| -> usize {
            *index_of.entry(id).or_insert_with(|| {
                original_ids.push(id);
                original_ids.len() - 1
            })
        };

        for (a, b) in edges {
            stats.data_lines += 1;
            let i = intern(a, &mut original_ids);
            let j = intern(b, &mut original_ids);
            if i == j {
                stats.self_loops_dropped += 1;
                continue;
            }
            pairs.push((i.min(j), i.max(j)));
        }

        let before = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        stats.duplicates_dropped = before - pairs.len();

        let node_count = original_ids.len();
        let mut degree = vec![0usize; node_count];
        for &(i, j) in &pairs {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut neighbors = vec![0usize; offsets[node_count]];
        for &(i, j) in &pairs {
            neighbors[fill[i]] = j;
            fill[i] += 1;
            neighbors[fill[j]] = i;
            fill[j] += 1;
        }
        for v in 0..node_count {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }

        let graph = Graph {
            offsets,
            neighbors,
            original_ids,
            edge_count: pairs.len(),
        };
        (graph, stats)
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, node: usize) -> Result<usize> {
        self.check(node)?;
        Ok(self.offsets[node + 1] - self.offsets[node])
    }

    pub fn neighbors(&self, node: usize) -> Result<&[usize]> {
        self.check(node)?;
        Ok(&self.neighbors[self.offsets[node]..self.offsets[node + 1]])
    }

    /// Identifier the node carried in the source file.
    pub fn original_id(&self, node: usize) -> Result<u64> {
        self.check(node)?;
        Ok(self.original_ids[node])
    }

    /// Index of the node carrying `original` in the source file.
    pub fn node_index(&self, original: u64) -> Option<usize> {
        self.original_ids.iter().position(|&id| id == original)
    }

    // Unchecked accessors for the walkers' inner loops.
    pub(crate) fn degree_unchecked(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub(crate) fn neighbors_unchecked(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    fn check(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                node_count: self.node_count(),
            })
        }
    }
}

/// Parses a SNAP edge list: `#` comment lines, blank lines ignored, and data
/// lines holding exactly two whitespace-separated integer identifiers.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(Graph, ParseStats)> {
    let mut edges = Vec::new();
    let mut comments = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            comments += 1;
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "expected 2 fields, found {}",
                        trimmed.split_whitespace().count()
                    ),
                })
            }
        };
        edges.push((parse_id(a, line_no)?, parse_id(b, line_no)?));
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput("edge list has no data lines"));
    }
    let (graph, mut stats) = Graph::from_edges(edges);
    stats.comment_lines = comments;
    Ok((graph, stats))
}

/// Parses a bare degree file: one non-negative integer per line, `#`
/// comments and blank lines ignored.
pub fn parse_degree_list<R: BufRead>(reader: R) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let token = fields.next().unwrap();
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "expected a single degree per line".into(),
            });
        }
        out.push(parse_id(token, idx + 1)?);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput("degree file has no data lines"));
    }
    Ok(out)
}

fn parse_id(token: &str, line: usize) -> Result<u64> {
    token.parse::<u64>().map_err(|_| Error::Parse {
        line,
        message: format!("not a non-negative integer: {token:?}"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    FirstAppearance,
    SortedAscending,
    WalkOrder,
}

impl std::str::FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-appearance" => Ok(Ordering::FirstAppearance),
            "sorted-ascending" => Ok(Ordering::SortedAscending),
            "walk-order" => Ok(Ordering::WalkOrder),
            other => Err(Error::InvalidParameter(format!("unknown ordering {other:?}"))),
        }
    }
}

/// Degrees in a declared order, together with an ascending copy used for
/// order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence {
    values: Vec<u64>,
    sorted: Vec<u64>,
    ordering: Ordering,
}

impl DegreeSequence {
    pub fn new(values: Vec<u64>, ordering: Ordering) -> Self {
        let mut sorted = values.clone();
        sorted.sort_unstable();
        let values = if ordering == Ordering::SortedAscending {
            sorted.clone()
        } else {
            values
        };
        DegreeSequence {
            values,
            sorted,
            ordering,
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// X_(1) <= ... <= X_(n).
    pub fn sorted_view(&self) -> &[u64] {
        &self.sorted
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.sorted.last().copied()
    }

    pub fn mean(&self) -> Option<f64> {
        if self.values.is_empty() {
            return None;
        }
        Some(self.values.iter().map(|&d| d as f64).sum::<f64>() / self.values.len() as f64)
    }

    pub fn to_scalars<F: Scalar>(&self) -> Vec<F> {
        self.values.iter().map(|&d| F::from_u64(d).unwrap()).collect()
    }

    pub fn sorted_scalars<F: Scalar>(&self) -> Vec<F> {
        self.sorted.iter().map(|&d| F::from_u64(d).unwrap()).collect()
    }
}

/// Degree of every node, arranged per `ordering`. A walk order has no
/// meaning for a whole graph; use [`DegreeSequence::new`] with walk output.
pub fn degree_sequence(graph: &Graph, ordering: Ordering) -> Result<DegreeSequence> {
    if ordering == Ordering::WalkOrder {
        return Err(Error::InvalidParameter(
            "walk-order sequences come from a walker, not a graph".into(),
        ));
    }
    let values = (0..graph.node_count())
        .map(|v| graph.degree_unchecked(v) as u64)
        .collect();
    Ok(DegreeSequence::new(values, ordering))
}
