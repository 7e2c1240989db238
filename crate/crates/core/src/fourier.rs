//! Unitary discrete Fourier transform, signed frequency table, and
//! Fourier-multiplier application.
//!
//! Conventions, used consistently by the propagator and the circuit emulator:
//! forward kernel `(1/sqrt(M)) exp(-2*pi*i*j*k/M)` (position -> Fourier),
//! inverse kernel with the positive exponent (Fourier -> position). Both
//! directions carry the `1/sqrt(M)` factor, so each transform is unitary.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::wavefunction::WaveFunction;

// Plans are cached per (size, direction); rustfft plan objects are Sync, so
// the lock is held only for the lookup and the transforms stay reentrant.
static PLAN_CACHE: LazyLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = PLAN_CACHE.lock().expect("FFT plan cache poisoned");
    cache
        .entry((len, forward))
        .or_insert_with(|| {
            let direction = if forward {
                FftDirection::Forward
            } else {
                FftDirection::Inverse
            };
            FftPlanner::new().plan_fft(len, direction)
        })
        .clone()
}

fn transform(values: &[Complex64], forward: bool) -> Result<Vec<Complex64>> {
    let len = values.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let mut out = values.to_vec();
    plan(len, forward).process(&mut out);
    let scale = 1.0 / (len as f64).sqrt();
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// Unitary DFT, kernel `(1/sqrt(M)) exp(-2*pi*i*j*k/M)`.
pub fn forward_dft(values: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(values, true)
}

/// Unitary inverse DFT, kernel `(1/sqrt(M)) exp(+2*pi*i*j*k/M)`.
pub fn inverse_dft(values: &[Complex64]) -> Result<Vec<Complex64>> {
    transform(values, false)
}

/// Frequencies `mu_k` addressed by DFT index, in the signed layout:
/// `mu(k) = (2*pi/L) * k` for `k < M/2` and `(2*pi/L) * (k - M)` for
/// `k >= M/2`. As a set this equals `{2*pi*(k - M/2)/L : k = 0..M-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    mu: Vec<f64>,
}

impl FrequencyTable {
    pub fn values(&self) -> &[f64] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

/// Build the signed frequency table for a grid.
pub fn frequency_table(grid: &Grid1D) -> FrequencyTable {
    let m = grid.points();
    let base = 2.0 * std::f64::consts::PI / grid.length();
    let mu = (0..m)
        .map(|k| {
            let s = if k < m / 2 {
                k as f64
            } else {
                k as f64 - m as f64
            };
            base * s
        })
        .collect();
    FrequencyTable { mu }
}

/// Apply a Fourier multiplier: `inverse_dft(g(mu_k) * forward_dft(psi))`.
///
/// This is the single primitive behind kinetic phases and spectral
/// derivatives. Allocates a fresh output; the input is untouched.
pub fn apply_multiplier(
    psi: &WaveFunction,
    g: impl Fn(f64) -> Complex64,
) -> Result<WaveFunction> {
    let table = frequency_table(psi.grid());
    let mut hat = forward_dft(psi.values())?;
    for (v, &mu) in hat.iter_mut().zip(table.values()) {
        *v *= g(mu);
    }
    let out = inverse_dft(&hat)?;
    WaveFunction::from_values(*psi.grid(), psi.hbar(), out)
}

/// Spectral derivative of order `alpha` in `{1, 2, 3, 4}`: multiplier
/// `(i*mu)^alpha`.
pub fn spatial_derivative(psi: &WaveFunction, alpha: u32) -> Result<WaveFunction> {
    if !(1..=4).contains(&alpha) {
        return Err(Error::DerivativeOrderOutOfRange(alpha, "1..=4"));
    }
    apply_multiplier(psi, |mu| Complex64::new(0.0, mu).powu(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn l2(values: &[Complex64]) -> f64 {
        values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn delta_transforms_to_constant() {
        let mut delta = vec![Complex64::ZERO; 4];
        delta[0] = Complex64::ONE;
        let hat = forward_dft(&delta).unwrap();
        for v in &hat {
            assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
        // inverse pair: the constant vector maps back onto the delta
        let back = inverse_dft(&hat).unwrap();
        for (a, b) in back.iter().zip(&delta) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn unitarity_on_a_fixed_vector() {
        let v: Vec<Complex64> = (0..16)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 0.91).cos()))
            .collect();
        let hat = forward_dft(&v).unwrap();
        assert!((l2(&hat) - l2(&v)).abs() < 1e-13 * l2(&v));
    }

    #[test]
    fn rejects_non_power_of_two() {
        let v = vec![Complex64::ZERO; 6];
        assert!(matches!(forward_dft(&v), Err(Error::NotPowerOfTwo(6))));
    }

    #[test]
    fn frequency_layout_two_pi_domain() {
        let grid = Grid1D::new(2.0 * PI, 2, 0.0).unwrap();
        let table = frequency_table(&grid);
        assert_eq!(table.values(), &[0.0, 1.0, -2.0, -1.0]);
    }

    #[test]
    fn frequency_set_matches_shifted_enumeration() {
        let grid = Grid1D::new(4.0, 2, -2.0).unwrap();
        let mut got: Vec<f64> = frequency_table(&grid).values().to_vec();
        got.sort_by(f64::total_cmp);
        let mut expected: Vec<f64> = (0..4)
            .map(|k| 2.0 * PI / 4.0 * (k as f64 - 2.0))
            .collect();
        expected.sort_by(f64::total_cmp);
        assert_eq!(got, expected);
        assert_eq!(got, vec![-PI, -PI / 2.0, 0.0, PI / 2.0]);
    }

    #[test]
    fn frequency_sum_is_single_nyquist_term() {
        for (len, m) in [(4.0, 4u32), (2.0 * PI, 6)] {
            let grid = Grid1D::new(len, m, 0.0).unwrap();
            let sum: f64 = frequency_table(&grid).values().iter().sum();
            let expected = -PI * grid.points() as f64 / len;
            assert!((sum - expected).abs() < 1e-9 * expected.abs());
        }
    }

    #[test]
    fn identity_multiplier() {
        let grid = Grid1D::new(4.0, 6, -2.0).unwrap();
        let psi = WaveFunction::from_fn(grid, 0.5, |x| {
            Complex64::new((-x * x).exp(), (2.0 * x).sin())
        })
        .unwrap();
        let out = apply_multiplier(&psi, |_| Complex64::ONE).unwrap();
        let err = psi.l2_distance(&out).unwrap();
        assert!(err < 1e-13);
    }

    #[test]
    fn plane_wave_is_derivative_eigenfunction() {
        let grid = Grid1D::new(4.0, 5, -2.0).unwrap();
        let table = frequency_table(&grid);
        let mu_star = table.values()[3];
        let psi = WaveFunction::from_fn(grid, 0.5, |x| {
            Complex64::new(0.0, mu_star * x).exp() / grid.length().sqrt()
        })
        .unwrap();
        let d = apply_multiplier(&psi, |mu| Complex64::new(0.0, mu)).unwrap();
        for (dj, pj) in d.values().iter().zip(psi.values()) {
            let expected = Complex64::new(0.0, mu_star) * pj;
            assert!((dj - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn second_derivative_on_plane_wave() {
        let grid = Grid1D::new(4.0, 5, -2.0).unwrap();
        let mu_star = frequency_table(&grid).values()[2];
        let psi = WaveFunction::from_fn(grid, 0.5, |x| {
            Complex64::new(0.0, mu_star * x).exp() / grid.length().sqrt()
        })
        .unwrap();
        let d2 = spatial_derivative(&psi, 2).unwrap();
        for (dj, pj) in d2.values().iter().zip(psi.values()) {
            let expected = -mu_star * mu_star * pj;
            assert!((dj - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn first_derivative_of_constant_vanishes() {
        let grid = Grid1D::new(4.0, 6, -2.0).unwrap();
        let psi = WaveFunction::from_fn(grid, 1.0, |_| Complex64::new(0.5, 0.0)).unwrap();
        let d = spatial_derivative(&psi, 1).unwrap();
        for v in d.values() {
            assert!(v.norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_composition() {
        let grid = Grid1D::new(4.0, 7, -2.0).unwrap();
        let psi = WaveFunction::from_fn(grid, 1.0, |x| {
            Complex64::new((-2.0 * x * x).exp(), 0.0) * Complex64::new(0.0, 3.0 * x).exp()
        })
        .unwrap();
        let twice = spatial_derivative(&spatial_derivative(&psi, 1).unwrap(), 1).unwrap();
        let once = spatial_derivative(&psi, 2).unwrap();
        assert!(twice.l2_distance(&once).unwrap() < 1e-11);
    }

    #[test]
    fn derivative_order_guard() {
        let grid = Grid1D::new(4.0, 3, -2.0).unwrap();
        let psi = WaveFunction::from_fn(grid, 1.0, |_| Complex64::ONE).unwrap();
        assert!(spatial_derivative(&psi, 0).is_err());
        assert!(spatial_derivative(&psi, 5).is_err());
    }
}
