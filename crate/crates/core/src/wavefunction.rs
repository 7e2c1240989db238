//! Discrete wavefunction on a periodic grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Complex amplitudes `psi_j` sampled on a [`Grid1D`], tagged with the
/// semiclassical parameter `hbar`.
///
/// The discrete norm is the quadrature norm `sqrt(sum_j |psi_j|^2 dx)`.
/// Constructors do not normalize; call [`WaveFunction::normalized`] to enforce
/// unit norm. Intermediate results of operators are carried in the same type
/// without any norm guarantee.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Grid1D,
    hbar: f64,
    values: Vec<Complex64>,
}

impl WaveFunction {
    /// Wrap raw amplitudes; checks only the length and `hbar > 0`.
    pub fn from_values(grid: Grid1D, hbar: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        if values.len() != grid.points() {
            return Err(Error::LengthMismatch {
                expected: grid.points(),
                got: values.len(),
            });
        }
        Ok(Self { grid, hbar, values })
    }

    /// Sample a complex-valued function on the grid nodes.
    pub fn from_fn(grid: Grid1D, hbar: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..grid.points()).map(|j| f(grid.node(j))).collect();
        Self::from_values(grid, hbar, values)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Quadrature norm `sqrt(sum |psi_j|^2 dx)`.
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        (sum * self.grid.dx()).sqrt()
    }

    /// Rescale so the quadrature norm is exactly 1.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / n;
        for v in &mut self.values {
            *v *= inv;
        }
        Ok(self)
    }

    /// Quadrature distance `sqrt(sum |psi_j - phi_j|^2 dx)`.
    pub fn l2_distance(&self, other: &WaveFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "l2_distance requires identical grids".into(),
            ));
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sum * self.grid.dx()).sqrt())
    }

    /// Restrict to a coarser grid sharing the same interval by taking every
    /// `2^(dm)`-th sample. Used to compare runs against finer references.
    pub fn restrict_to(&self, coarse: &Grid1D) -> Result<WaveFunction> {
        if !coarse.is_refined_by(&self.grid) {
            return Err(Error::GridMismatch(
                "restriction target must be a coarsening of the source grid".into(),
            ));
        }
        let stride = 1usize << (self.grid.qubits() - coarse.qubits());
        let values = self.values.iter().copied().step_by(stride).collect();
        WaveFunction::from_values(*coarse, self.hbar, values)
    }
}
