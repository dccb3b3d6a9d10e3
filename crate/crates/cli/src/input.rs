use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use flate2::read::GzDecoder;
use netextremes::graph::{self, DegreeSequence, Graph, Ordering, ParseStats};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// Detect from the first data line: two fields = edge list, one = degrees.
    Auto,
    Snap,
    Degrees,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    FirstAppearance,
    SortedAscending,
}

impl From<OrderingArg> for Ordering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::FirstAppearance => Ordering::FirstAppearance,
            OrderingArg::SortedAscending => Ordering::SortedAscending,
        }
    }
}

/// A loaded input: always a degree sequence, plus the graph when the input
/// was an edge list.
pub struct Loaded {
    pub degrees: DegreeSequence,
    pub graph: Option<(Graph, ParseStats)>,
    pub format: InputFormat,
}

fn read_all(path: &Path) -> Result<String> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut text = String::new();
    if path.extension().is_some_and(|e| e == "gz") {
        GzDecoder::new(file).read_to_string(&mut text)?;
    } else {
        BufReader::new(file).read_to_string(&mut text)?;
    }
    Ok(text)
}

fn detect(text: &str) -> InputFormat {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first.map(|l| l.split_whitespace().count()) {
        Some(1) => InputFormat::Degrees,
        _ => InputFormat::Snap,
    }
}

pub fn load(path: &Path, format: InputFormat, ordering: Ordering) -> Result<Loaded> {
    let text = read_all(path)?;
    load_text(&text, format, ordering)
}

pub fn load_text(text: &str, format: InputFormat, ordering: Ordering) -> Result<Loaded> {
    let format = match format {
        InputFormat::Auto => detect(text),
        f => f,
    };
    let reader = text.as_bytes();
    Ok(match format {
        InputFormat::Degrees => Loaded {
            degrees: DegreeSequence::new(graph::parse_degree_list(reader)?, ordering),
            graph: None,
            format,
        },
        _ => {
            let (g, stats) = graph::parse_edge_list(reader)?;
            Loaded {
                degrees: graph::degree_sequence(&g, ordering)?,
                graph: Some((g, stats)),
                format,
            }
        }
    })
}

/// Comma-separated list of numbers, or `default`.
pub fn parse_grid(spec: &str) -> Result<Option<Vec<f64>>> {
    if spec == "default" {
        return Ok(None);
    }
    let mut grid = spec
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| netextremes::Error::InvalidParameter(format!("bad grid value {t:?}")))
        })
        .collect::<std::result::Result<Vec<f64>, _>>()?;
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Some(grid))
}
