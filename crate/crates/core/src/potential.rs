//! Potential specifications carrying analytic derivatives up to order 4.
//!
//! Commutator closed forms need `d^k V/dx^k` exactly, so potentials are built
//! from analytic derivative functions rather than numerical differentiation.
//! A finite-difference probe is provided to cross-check user-supplied
//! derivatives.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A potential `V(x)` together with its first four derivatives.
#[derive(Clone)]
pub struct PotentialSpec {
    name: String,
    v: RealFn,
    derivs: [RealFn; 4],
    identically_zero: bool,
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("name", &self.name)
            .finish()
    }
}

impl PotentialSpec {
    pub fn new(
        name: impl Into<String>,
        v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d3v: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d4v: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            v: Arc::new(v),
            derivs: [Arc::new(dv), Arc::new(d2v), Arc::new(d3v), Arc::new(d4v)],
            identically_zero: false,
        }
    }

    /// The harmonic potential `V = x^2/2` with `dV = x`, `d2V = 1`,
    /// `d3V = d4V = 0`.
    pub fn harmonic() -> Self {
        Self::new(
            "harmonic",
            |x| 0.5 * x * x,
            |x| x,
            |_| 1.0,
            |_| 0.0,
            |_| 0.0,
        )
    }

    /// The zero potential. Propagation steps treat it as the identity and
    /// skip the corresponding diagonal factors entirely.
    pub fn zero() -> Self {
        let mut p = Self::new("zero", |_| 0.0, |_| 0.0, |_| 0.0, |_| 0.0, |_| 0.0);
        p.identically_zero = true;
        p
    }

    /// `V = sum_i coeffs[i] * x^i` with analytic derivatives.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        fn eval(coeffs: &[f64], x: f64) -> f64 {
            coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
        }
        fn derive(coeffs: &[f64]) -> Vec<f64> {
            coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect()
        }
        let c0 = coeffs;
        let c1 = derive(&c0);
        let c2 = derive(&c1);
        let c3 = derive(&c2);
        let c4 = derive(&c3);
        let zero = c0.iter().all(|&c| c == 0.0);
        let mut p = Self::new(
            "custom-polynomial",
            {
                let c = c0.clone();
                move |x| eval(&c, x)
            },
            move |x| eval(&c1, x),
            move |x| eval(&c2, x),
            move |x| eval(&c3, x),
            move |x| eval(&c4, x),
        );
        p.identically_zero = zero;
        p
    }

    /// Look up a built-in potential by its config name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "harmonic" => Some(Self::harmonic()),
            "zero" => Some(Self::zero()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True for the zero potential; lets the propagator and the circuit
    /// emulator drop diagonal factors that would be exact identities.
    pub fn is_zero(&self) -> bool {
        self.identically_zero
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.v)(x)
    }

    /// `d^order V / dx^order` for `order` in `1..=4`.
    pub fn derivative(&self, order: u32, x: f64) -> Result<f64> {
        if !(1..=4).contains(&order) {
            return Err(Error::DerivativeOrderOutOfRange(order, "1..=4"));
        }
        Ok(self.derivs[(order - 1) as usize](x))
    }

    /// Check `dV` against an 8th-order central difference of `V` (and `d2V`
    /// against `dV`, etc.) at the given points, to 1e-6 relative accuracy.
    pub fn probe_derivatives(&self, points: &[f64]) -> Result<()> {
        // 8th-order central difference stencil for the first derivative.
        const OFFSETS: [f64; 8] = [-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0];
        const WEIGHTS: [f64; 8] = [
            1.0 / 280.0,
            -4.0 / 105.0,
            1.0 / 5.0,
            -4.0 / 5.0,
            4.0 / 5.0,
            -1.0 / 5.0,
            4.0 / 105.0,
            -1.0 / 280.0,
        ];
        let h = 1e-2;
        let mut level: Vec<RealFn> = vec![self.v.clone()];
        level.extend(self.derivs.iter().cloned());
        for order in 1..=4usize {
            let f = &level[order - 1];
            let g = &level[order];
            for &x in points {
                let fd: f64 = OFFSETS
                    .iter()
                    .zip(&WEIGHTS)
                    .map(|(&o, &w)| w * f(x + o * h))
                    .sum::<f64>()
                    / h;
                let exact = g(x);
                let scale = exact.abs().max(1.0);
                if (fd - exact).abs() > 1e-6 * scale {
                    return Err(Error::DerivativeProbe(format!(
                        "'{}' derivative order {order} at x={x}: analytic {exact:.6e}, finite difference {fd:.6e}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn harmonic_values_and_derivatives() {
        let v = PotentialSpec::harmonic();
        assert_eq!(v.value(2.0), 2.0);
        assert_eq!(v.derivative(1, 2.0).unwrap(), 2.0);
        assert_eq!(v.derivative(2, -1.3).unwrap(), 1.0);
        assert_eq!(v.derivative(3, 0.7).unwrap(), 0.0);
        assert_eq!(v.derivative(4, 0.7).unwrap(), 0.0);
        assert!(v.derivative(5, 0.0).is_err());
    }

    #[test]
    fn polynomial_matches_horner() {
        let v = PotentialSpec::polynomial(vec![1.0, -2.0, 0.5, 0.25]);
        let x = 1.7;
        assert!((v.value(x) - (1.0 - 2.0 * x + 0.5 * x * x + 0.25 * x * x * x)).abs() < 1e-14);
        assert!((v.derivative(1, x).unwrap() - (-2.0 + x + 0.75 * x * x)).abs() < 1e-14);
        assert!((v.derivative(3, x).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn probe_accepts_consistent_derivatives_at_32_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let points: Vec<f64> = (0..32).map(|_| rng.gen_range(-1.5..1.5)).collect();
        PotentialSpec::harmonic().probe_derivatives(&points).unwrap();
        PotentialSpec::polynomial(vec![0.3, 1.0, -0.5, 0.2, 0.05])
            .probe_derivatives(&points)
            .unwrap();
    }

    #[test]
    fn probe_rejects_wrong_derivative() {
        let bad = PotentialSpec::new(
            "bad",
            |x| 0.5 * x * x,
            |x| 1.5 * x, // wrong slope
            |_| 1.0,
            |_| 0.0,
            |_| 0.0,
        );
        assert!(bad.probe_derivatives(&[0.9]).is_err());
    }

    #[test]
    fn zero_flag() {
        assert!(PotentialSpec::zero().is_zero());
        assert!(PotentialSpec::polynomial(vec![0.0, 0.0]).is_zero());
        assert!(!PotentialSpec::harmonic().is_zero());
        assert!(PotentialSpec::by_name("harmonic").is_some());
        assert!(PotentialSpec::by_name("morse").is_none());
    }
}
