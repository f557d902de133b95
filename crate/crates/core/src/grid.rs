use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform grid `start + i·step`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UniformGrid {
    start: f64,
    step: f64,
    len: usize,
}

impl UniformGrid {
    /// `len` nodes from `start` to `end` inclusive.
    pub fn new(start: f64, end: f64, len: usize) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::Grid("non-finite endpoint"));
        }
        if len < 2 || end <= start {
            return Err(Error::Grid("need at least two strictly increasing nodes"));
        }
        Ok(Self {
            start,
            step: (end - start) / (len - 1) as f64,
            len,
        })
    }

    /// Nodes from `start` with a fixed `step`, enough of them to reach `end`.
    pub fn with_step(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Grid("step must be positive"));
        }
        let len = libm::ceil((end - start) / step) as usize + 1;
        if !(start.is_finite() && end.is_finite()) || len < 2 {
            return Err(Error::Grid("need at least two strictly increasing nodes"));
        }
        Ok(Self { start, step, len })
    }

    /// Validates explicit nodes: strictly increasing and uniform to relative `1e-9`.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Grid("need at least two nodes"));
        }
        let step = (nodes[nodes.len() - 1] - nodes[0]) / (nodes.len() - 1) as f64;
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::Grid("nodes must be strictly increasing"));
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if w[1].is_nan() || w[1] <= w[0] {
                return Err(Error::Grid("nodes must be strictly increasing"));
            }
            let expected = nodes[0] + (i + 1) as f64 * step;
            if (w[1] - expected).abs() > 1e-9 * step.max(expected.abs()) {
                return Err(Error::Grid("nodes are not uniformly spaced"));
            }
        }
        Ok(Self {
            start: nodes[0],
            step,
            len: nodes.len(),
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.node(self.len - 1)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.node(i))
    }

    pub fn map<F: FnMut(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes().map(f).collect()
    }

    /// Composite trapezoid rule for values sampled on this grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len);
        match values {
            [] | [_] => 0.0,
            [first, inner @ .., last] => {
                self.step * (0.5 * (first + last) + inner.iter().sum::<f64>())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_exact_for_lines() {
        let g = UniformGrid::new(-1.0, 3.0, 9).unwrap();
        let v = g.map(|x| 2.0 * x + 1.0);
        assert!((g.trapezoid(&v) - 12.0).abs() < 1e-14);
        assert_eq!(g.end(), 3.0);
    }

    #[test]
    fn node_validation() {
        assert!(UniformGrid::from_nodes(&[0.0, 0.25, 0.5, 0.75, 1.0]).is_ok());
        assert!(UniformGrid::from_nodes(&[0.0, 0.3, 0.5]).is_err());
        assert!(UniformGrid::from_nodes(&[0.0, 0.0]).is_err());
        assert!(UniformGrid::from_nodes(&[1.0, 0.5, 0.0]).is_err());
        assert!(UniformGrid::new(1.0, 1.0, 5).is_err());
        assert!(UniformGrid::with_step(0.0, 1.0, 0.0).is_err());
    }
}
