//! Physical observables: density, current, operator expectations, the
//! Fourier-basis site operators, and the hbar-scaled Sobolev norm diagnostic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{frequency_table, spatial_derivative};
use crate::grid::Grid1D;
use crate::wavefunction::WaveFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Density,
    Current,
}

/// Real-valued samples of an observable field on the grid.
#[derive(Debug, Clone)]
pub struct ObservableField {
    grid: Grid1D,
    kind: FieldKind,
    values: Vec<f64>,
}

impl ObservableField {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Quadrature integral `sum values * dx`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    /// Largest absolute pointwise difference to another field.
    pub fn sup_distance(&self, other: &ObservableField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                "sup_distance requires identical grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Keep every `2^dm`-th sample to compare against a coarser run.
    pub fn restrict_to(&self, coarse: &Grid1D) -> Result<ObservableField> {
        if !coarse.is_refined_by(&self.grid) {
            return Err(Error::GridMismatch(
                "restriction target must be a coarsening of the source grid".into(),
            ));
        }
        let stride = 1usize << (self.grid.qubits() - coarse.qubits());
        Ok(ObservableField {
            grid: *coarse,
            kind: self.kind,
            values: self.values.iter().copied().step_by(stride).collect(),
        })
    }
}

/// `n(x_j) = |psi_j|^2`.
pub fn density(psi: &WaveFunction) -> ObservableField {
    ObservableField {
        grid: *psi.grid(),
        kind: FieldKind::Density,
        values: psi.values().iter().map(|v| v.norm_sqr()).collect(),
    }
}

/// `J(x_j) = hbar Im(conj(psi_j) (d psi)_j)` with the spectral derivative,
/// so the grid formula and the Fourier-basis operator agree to roundoff.
pub fn current(psi: &WaveFunction) -> Result<ObservableField> {
    let d = spatial_derivative(psi, 1)?;
    let hbar = psi.hbar();
    let values = psi
        .values()
        .iter()
        .zip(d.values())
        .map(|(p, dp)| hbar * (p.conj() * dp).im)
        .collect();
    Ok(ObservableField {
        grid: *psi.grid(),
        kind: FieldKind::Current,
        values,
    })
}

/// The norm `(sum_{alpha=0}^q hbar^alpha ||d^alpha psi||^2)^(1/2)` with
/// discrete quadrature norms. Uniformly bounded in hbar for WKB-type states;
/// tracked as a smoothness diagnostic along evolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbarSobolevNorm {
    pub q: u32,
    pub value: f64,
}

pub fn hbar_sobolev_norm(psi: &WaveFunction, q: u32) -> Result<HbarSobolevNorm> {
    if q > 4 {
        return Err(Error::DerivativeOrderOutOfRange(q, "0..=4"));
    }
    let hbar = psi.hbar();
    let mut total = psi.norm().powi(2);
    for alpha in 1..=q {
        let d = spatial_derivative(psi, alpha)?;
        total += hbar.powi(alpha as i32) * d.norm().powi(2);
    }
    Ok(HbarSobolevNorm {
        q,
        value: total.sqrt(),
    })
}

/// Site operators expressed in the Fourier basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteOperator {
    /// Density at site `j`: expectation in the Fourier-transformed state
    /// equals `|psi_j|^2`.
    Density,
    /// Current at site `j`: expectation equals the grid current at `x_j`.
    Current,
}

/// Matrix element `<row| Op_j |col>` of the site operator in the Fourier
/// basis. For the density, `(1/M) exp(i 2 pi j (col - row)/M)`; for the
/// current, `(hbar/2M) (mu_row + mu_col) exp(i 2 pi j (col - row)/M)`.
pub fn fourier_operator_element(
    kind: SiteOperator,
    site: usize,
    row: usize,
    col: usize,
    grid: &Grid1D,
    hbar: f64,
) -> Result<Complex64> {
    let m = grid.points();
    for index in [site, row, col] {
        if index >= m {
            return Err(Error::IndexOutOfRange { index, len: m });
        }
    }
    let phase = 2.0 * std::f64::consts::PI * site as f64 * (col as f64 - row as f64) / m as f64;
    let kernel = Complex64::from_polar(1.0 / m as f64, phase);
    match kind {
        SiteOperator::Density => Ok(kernel),
        SiteOperator::Current => {
            let table = frequency_table(grid);
            let mu = table.values();
            Ok(kernel * (hbar / 2.0) * (mu[row] + mu[col]))
        }
    }
}

/// A Hermitian observable given either as a real multiplication operator in
/// position space or as a symbol applied in the Fourier basis.
pub enum ExpectationOp<'a> {
    Multiplicative(&'a dyn Fn(f64) -> f64),
    FourierSymbol(&'a dyn Fn(f64) -> Complex64),
}

/// Quadrature expectation `<psi|A|psi>`. Returns the real part; errors if the
/// imaginary residue exceeds 1e-11 (non-Hermitian operator).
pub fn expectation(psi: &WaveFunction, op: &ExpectationOp<'_>) -> Result<f64> {
    let dx = psi.grid().dx();
    let applied: Vec<Complex64> = match op {
        ExpectationOp::Multiplicative(f) => psi
            .values()
            .iter()
            .enumerate()
            .map(|(j, v)| v * f(psi.grid().node(j)))
            .collect(),
        ExpectationOp::FourierSymbol(g) => {
            crate::fourier::apply_multiplier(psi, |mu| g(mu))?.into_values()
        }
    };
    let total: Complex64 = psi
        .values()
        .iter()
        .zip(&applied)
        .map(|(p, a)| p.conj() * a)
        .sum::<Complex64>()
        * dx;
    if total.im.abs() > 1e-11 {
        return Err(Error::NotHermitian(total.im.abs()));
    }
    Ok(total.re)
}
