use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{SequenceSource, WalkResult};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::rng::task_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphWalk {
    /// Simple random walk: move to a uniform neighbor.
    Srw,
    /// Metropolis–Hastings walk with uniform stationary law over nodes.
    MhrwUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    Node(usize),
    /// Uniform over nodes with at least one neighbor.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkConfig {
    pub start: Start,
    /// Number of observations, the start state included.
    pub max_steps: usize,
    pub seed: u64,
    pub threshold: Option<f64>,
}

impl WalkConfig {
    pub fn new(start: Start, max_steps: usize, seed: u64) -> Self {
        WalkConfig {
            start,
            max_steps,
            seed,
            threshold: None,
        }
    }
}

/// Walker over a borrowed graph; yields node degrees.
#[derive(Debug, Clone)]
pub struct GraphWalker<'g> {
    graph: &'g Graph,
    kind: GraphWalk,
    start: Start,
    current: Option<usize>,
    proposed: u64,
    accepted: u64,
}

impl<'g> GraphWalker<'g> {
    pub fn new(graph: &'g Graph, kind: GraphWalk, start: Start) -> Result<Self> {
        match start {
            Start::Node(v) => {
                if graph.degree(v)? == 0 {
                    return Err(invalid(format!("start node {v} has no neighbors")));
                }
            }
            Start::Uniform => {
                if (0..graph.node_count()).all(|v| graph.degree_unchecked(v) == 0) {
                    return Err(Error::Degenerate("graph has no edges to walk".into()));
                }
            }
        }
        Ok(GraphWalker {
            graph,
            kind,
            start,
            current: None,
            proposed: 0,
            accepted: 0,
        })
    }

    pub fn current(&self) -> Option<usize> {
        self.current
    }

    /// Advances one observation and returns the node now occupied.
    pub fn next_node(&mut self, rng: &mut ChaCha8Rng) -> usize {
        let next = match self.current {
            None => self.initial(rng),
            Some(x) => self.step(x, rng),
        };
        self.current = Some(next);
        next
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> usize {
        match self.start {
            Start::Node(v) => v,
            Start::Uniform => loop {
                let v = rng.gen_range(0..self.graph.node_count());
                if self.graph.degree_unchecked(v) > 0 {
                    break v;
                }
            },
        }
    }

    fn step(&mut self, x: usize, rng: &mut ChaCha8Rng) -> usize {
        let nbrs = self.graph.neighbors_unchecked(x);
        let y = nbrs[rng.gen_range(0..nbrs.len())];
        self.proposed += 1;
        match self.kind {
            GraphWalk::Srw => {
                self.accepted += 1;
                y
            }
            GraphWalk::MhrwUniform => {
                let (dx, dy) = (nbrs.len(), self.graph.degree_unchecked(y));
                // No uniform draw when acceptance is certain, so that on a
                // regular graph the random stream matches the simple walk.
                if dy <= dx || rng.gen::<f64>() < dx as f64 / dy as f64 {
                    self.accepted += 1;
                    y
                } else {
                    x
                }
            }
        }
    }
}

impl SequenceSource for GraphWalker<'_> {
    fn next_value(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        let v = self.next_node(rng);
        self.graph.degree_unchecked(v) as f64
    }

    fn acceptance(&self) -> Option<(u64, u64)> {
        Some((self.proposed, self.accepted))
    }
}

fn run(graph: &Graph, kind: GraphWalk, config: &WalkConfig) -> Result<WalkResult> {
    if config.max_steps < 1 {
        return Err(invalid("max_steps must be at least 1"));
    }
    let mut walker = GraphWalker::new(graph, kind, config.start)?;
    let mut rng = task_rng(config.seed, 0);
    let mut nodes = Vec::with_capacity(config.max_steps);
    let mut values = Vec::with_capacity(config.max_steps);
    for _ in 0..config.max_steps {
        let v = walker.next_node(&mut rng);
        nodes.push(v);
        values.push(graph.degree_unchecked(v) as f64);
    }
    Ok(WalkResult::finish(
        nodes,
        values,
        config.threshold,
        walker.proposed,
        walker.accepted,
    ))
}

pub fn srw_walk(graph: &Graph, config: &WalkConfig) -> Result<WalkResult> {
    run(graph, GraphWalk::Srw, config)
}

pub fn mhrw_walk(graph: &Graph, config: &WalkConfig) -> Result<WalkResult> {
    run(graph, GraphWalk::MhrwUniform, config)
}
