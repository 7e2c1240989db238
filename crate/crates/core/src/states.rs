//! Initial-state constructors: WKB data, Gaussian packets, and the reference
//! test problem used throughout the experiment drivers.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::potential::PotentialSpec;
use crate::wavefunction::WaveFunction;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Amplitude/phase data for a state of the form `A0(x) exp(i S0(x)/hbar)`.
#[derive(Clone)]
pub struct WKBData {
    amplitude: RealFn,
    phase: RealFn,
    hbar: f64,
}

impl WKBData {
    pub fn new(
        amplitude: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phase: impl Fn(f64) -> f64 + Send + Sync + 'static,
        hbar: f64,
    ) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        Ok(Self {
            amplitude: Arc::new(amplitude),
            phase: Arc::new(phase),
            hbar,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn amplitude(&self, x: f64) -> f64 {
        (self.amplitude)(x)
    }

    pub fn phase(&self, x: f64) -> f64 {
        (self.phase)(x)
    }

    /// Check that `|A0|` on the outer 5% of the domain stays below 1e-8 of
    /// its maximum. Shipped presets enforce this so that periodic wrap-around
    /// stays below the tolerances of the downstream diagnostics; caller-built
    /// data may skip the check (e.g. a deliberately constant amplitude).
    pub fn boundary_decay_ok(&self, grid: &Grid1D) -> bool {
        let m = grid.points();
        let margin = (m as f64 * 0.025).ceil() as usize;
        let max = (0..m)
            .map(|j| self.amplitude(grid.node(j)).abs())
            .fold(0.0_f64, f64::max);
        if max == 0.0 {
            return false;
        }
        let edge = (0..margin)
            .flat_map(|j| [j, m - 1 - j])
            .map(|j| self.amplitude(grid.node(j)).abs())
            .fold(0.0_f64, f64::max);
        edge < 1e-8 * max
    }
}

/// Sample `A0(x) exp(i S0(x)/hbar)` on the grid and normalize.
pub fn wkb_state(data: &WKBData, grid: &Grid1D) -> Result<WaveFunction> {
    let hbar = data.hbar();
    let psi = WaveFunction::from_fn(*grid, hbar, |x| {
        let a = data.amplitude(x);
        let s = data.phase(x);
        Complex64::from_polar(a, s / hbar)
    })?;
    psi.normalized()
}

/// Initial data and potential of the harmonic test problem:
/// `A0 = exp(-25 (x - 1/2)^2)`, `S0 = -(1/5) ln(cosh(5 (x - 1/2))) - (1/5) ln 2`
/// (written below in its raw two-exponential form), `V = x^2/2`, on `[-2, 2]`.
pub fn paper_test_problem(hbar: f64, grid: &Grid1D) -> Result<(WaveFunction, PotentialSpec)> {
    let x1 = grid.x0() + grid.length();
    if grid.x0() != -2.0 || x1 != 2.0 {
        return Err(Error::WrongDomain { x0: grid.x0(), x1 });
    }
    let data = paper_wkb_data(hbar)?;
    debug_assert!(data.boundary_decay_ok(grid));
    Ok((wkb_state(&data, grid)?, PotentialSpec::harmonic()))
}

/// The WKB data of the test problem, exposed for hbar sweeps.
pub fn paper_wkb_data(hbar: f64) -> Result<WKBData> {
    WKBData::new(
        |x| (-25.0 * (x - 0.5) * (x - 0.5)).exp(),
        |x| {
            let u = 5.0 * (x - 0.5);
            -((u.exp() + (-u).exp()).ln()) / 5.0
        },
        hbar,
    )
}

/// Normalized Gaussian packet `exp(-(x - x0)^2/gamma - i k0 x/hbar)`.
pub fn gaussian_packet(
    center: f64,
    gamma: f64,
    momentum: f64,
    hbar: f64,
    grid: &Grid1D,
) -> Result<WaveFunction> {
    if !(gamma > 0.0) {
        return Err(Error::NonPositiveWidth(gamma));
    }
    let psi = WaveFunction::from_fn(*grid, hbar, |x| {
        let dx = x - center;
        let envelope = (-dx * dx / gamma).exp();
        envelope * Complex64::from_polar(1.0, -momentum * x / hbar)
    })?;
    psi.normalized()
}
