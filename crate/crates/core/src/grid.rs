//! Uniform periodic grid on an interval of length `L` with `M = 2^m` nodes.

use crate::error::{Error, Result};

/// Maximum qubit count / log2 grid size accepted anywhere in the crate.
/// 2^26 complex amplitudes is 1 GiB; beyond that we refuse rather than thrash.
pub const MAX_QUBITS: u32 = 26;

/// Uniform periodic grid: nodes `x_j = x0 + j*dx`, `j = 0..M-1`, `dx = L/M`.
///
/// `L` and `m` are stored; `M = 2^m` and `dx` are derived so that `dx * M == L`
/// holds exactly in the bookkeeping sense.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    length: f64,
    m: u32,
    x0: f64,
}

impl Grid1D {
    /// Build a grid over `[x0, x0 + length)` with `2^m` points.
    pub fn new(length: f64, m: u32, x0: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::NonPositiveLength(length));
        }
        if m < 1 || m > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(m));
        }
        Ok(Self { length, m, x0 })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// log2 of the number of points (the qubit count of the emulated register).
    pub fn qubits(&self) -> u32 {
        self.m
    }

    /// Number of grid points `M = 2^m`.
    pub fn points(&self) -> usize {
        1usize << self.m
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points() as f64
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Physical coordinate of node `j`.
    pub fn node(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points()).map(|j| self.node(j)).collect()
    }

    /// True when `fine` refines `self` by a power-of-two factor over the same
    /// interval, so that every node of `self` is also a node of `fine`.
    pub fn is_refined_by(&self, fine: &Grid1D) -> bool {
        self.length == fine.length && self.x0 == fine.x0 && fine.m >= self.m
    }
}
