use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::SequenceSource;
use crate::error::{invalid, Result};

/// I.i.d. uniform(0, 1) draws; extremal index 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct IidUniform;

impl SequenceSource for IidUniform {
    fn next_value(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        rng.gen()
    }
}

/// I.i.d. draws, uniformly with replacement, from a fixed set of values
/// (e.g. uniform node sampling of a degree sequence).
#[derive(Debug, Clone)]
pub struct IidValues<'a> {
    values: &'a [f64],
}

impl<'a> IidValues<'a> {
    pub fn new(values: &'a [f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("cannot sample from an empty value set"));
        }
        Ok(IidValues { values })
    }
}

impl SequenceSource for IidValues<'_> {
    fn next_value(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        self.values[rng.gen_range(0..self.values.len())]
    }
}

/// I.i.d. Pareto draws with `P{X > x} = (x/x_min)^(-alpha)`.
#[derive(Debug, Clone, Copy)]
pub struct IidPareto {
    alpha: f64,
    x_min: f64,
}

impl IidPareto {
    pub fn new(alpha: f64, x_min: f64) -> Result<Self> {
        if !(alpha > 0.0 && x_min > 0.0) {
            return Err(invalid("Pareto needs alpha > 0 and x_min > 0"));
        }
        Ok(IidPareto { alpha, x_min })
    }
}

impl SequenceSource for IidPareto {
    fn next_value(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        let u = 1.0 - rng.gen::<f64>();
        self.x_min * u.powf(-1.0 / self.alpha)
    }
}

/// Moving maximum `Y_i = max(Z_i, ..., Z_{i+m-1})` of i.i.d. unit-Fréchet
/// `Z`; a stationary sequence with extremal index `1/m`.
#[derive(Debug, Clone)]
pub struct MovingMaximum {
    m: usize,
    window: VecDeque<f64>,
}

impl MovingMaximum {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(invalid("moving-maximum window must be at least 1"));
        }
        Ok(MovingMaximum {
            m,
            window: VecDeque::with_capacity(m),
        })
    }

    pub fn extremal_index(&self) -> f64 {
        1.0 / self.m as f64
    }

    fn frechet(rng: &mut ChaCha8Rng) -> f64 {
        let u = 1.0 - rng.gen::<f64>();
        -1.0 / u.ln()
    }
}

impl SequenceSource for MovingMaximum {
    fn next_value(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        if self.window.len() == self.m {
            self.window.pop_front();
        }
        while self.window.len() < self.m {
            self.window.push_back(Self::frechet(rng));
        }
        self.window.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Emits the same value forever.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub f64);

impl SequenceSource for Constant {
    fn next_value(&mut self, _rng: &mut ChaCha8Rng) -> f64 {
        self.0
    }
}
