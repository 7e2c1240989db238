//! Matrix-free nested commutators of the split Hamiltonian
//! `H = A + B`, `A = -(hbar/2) Lap`, `B = V/hbar`, with closed-form
//! verification for the low-order words and hbar-scaling probes.
//!
//! Commutators follow the standard convention `[X, Y] = X Y - Y X`; the
//! closed forms below are stated in that convention.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::spatial_derivative;
use crate::potential::PotentialSpec;
use crate::wavefunction::WaveFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
}

/// A nested commutator word: letters `w_1 .. w_r` denote
/// `[w_1, [w_2, ... [w_{r-1}, w_r] ... ]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorWord {
    letters: Vec<Letter>,
}

impl CommutatorWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::InvalidWord(
                "a commutator word needs at least two letters".into(),
            ));
        }
        let r = letters.len();
        if letters[r - 1] == letters[r - 2] {
            return Err(Error::InvalidWord(
                "the last two letters must differ (the innermost bracket vanishes otherwise)"
                    .into(),
            ));
        }
        Ok(Self { letters })
    }

    /// Parse strings like `"AAB"` (meaning `[A,[A,B]]`).
    pub fn parse(word: &str) -> Result<Self> {
        let letters = word
            .chars()
            .map(|ch| match ch {
                'A' | 'a' => Ok(Letter::A),
                'B' | 'b' => Ok(Letter::B),
                other => Err(Error::InvalidWord(format!("unexpected letter '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for CommutatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", if *l == Letter::A { 'A' } else { 'B' })?;
        }
        Ok(())
    }
}

/// `A psi = -(hbar/2) d^2 psi`.
pub fn apply_a(psi: &WaveFunction) -> Result<WaveFunction> {
    let mut out = spatial_derivative(psi, 2)?;
    let factor = -psi.hbar() / 2.0;
    for v in out.values_mut() {
        *v *= factor;
    }
    Ok(out)
}

/// `B psi = V(x)/hbar * psi`.
pub fn apply_b(psi: &WaveFunction, potential: &PotentialSpec) -> Result<WaveFunction> {
    let hbar = psi.hbar();
    let grid = *psi.grid();
    let values = psi
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| v * (potential.value(grid.node(j)) / hbar))
        .collect();
    WaveFunction::from_values(grid, hbar, values)
}

fn apply_letter(letter: Letter, psi: &WaveFunction, potential: &PotentialSpec) -> Result<WaveFunction> {
    match letter {
        Letter::A => apply_a(psi),
        Letter::B => apply_b(psi, potential),
    }
}

fn sub(a: &WaveFunction, b: &WaveFunction) -> Result<WaveFunction> {
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x - y)
        .collect();
    WaveFunction::from_values(*a.grid(), a.hbar(), values)
}

fn apply_nested(letters: &[Letter], psi: &WaveFunction, potential: &PotentialSpec) -> Result<WaveFunction> {
    if letters.len() == 1 {
        return apply_letter(letters[0], psi, potential);
    }
    let head = letters[0];
    let rest = &letters[1..];
    // [X, W] psi = X(W psi) - W(X psi)
    let xw = apply_letter(head, &apply_nested(rest, psi, potential)?, potential)?;
    let wx = apply_nested(rest, &apply_letter(head, psi, potential)?, potential)?;
    sub(&xw, &wx)
}

/// Apply the nested commutator word to `psi`, matrix-free.
pub fn apply_commutator(
    word: &CommutatorWord,
    psi: &WaveFunction,
    potential: &PotentialSpec,
) -> Result<WaveFunction> {
    apply_nested(word.letters(), psi, potential)
}

/// Closed forms for the three low-order words, on smooth potentials:
///
/// ```text
/// [A,B]       psi = -( psi V''/2 + V' psi' )
/// [B,[B,A]]   psi = -(V')^2 psi / hbar
/// [A,[A,B]]   psi = hbar ( psi V''''/4 + V''' psi' + V'' psi'' )
/// ```
pub fn closed_form(
    word: &CommutatorWord,
    psi: &WaveFunction,
    potential: &PotentialSpec,
) -> Result<WaveFunction> {
    let grid = *psi.grid();
    let hbar = psi.hbar();
    let values = match word.letters() {
        [Letter::A, Letter::B] => {
            let d1 = spatial_derivative(psi, 1)?;
            psi.values()
                .iter()
                .zip(d1.values())
                .enumerate()
                .map(|(j, (p, dp))| {
                    let x = grid.node(j);
                    let d2v = potential.derivative(2, x)?;
                    let dv = potential.derivative(1, x)?;
                    Ok(-(p * (0.5 * d2v) + dp * dv))
                })
                .collect::<Result<Vec<Complex64>>>()?
        }
        [Letter::B, Letter::B, Letter::A] => psi
            .values()
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let dv = potential.derivative(1, grid.node(j))?;
                Ok(-p * (dv * dv / hbar))
            })
            .collect::<Result<Vec<Complex64>>>()?,
        [Letter::A, Letter::A, Letter::B] => {
            let d1 = spatial_derivative(psi, 1)?;
            let d2 = spatial_derivative(psi, 2)?;
            psi.values()
                .iter()
                .zip(d1.values().iter().zip(d2.values()))
                .enumerate()
                .map(|(j, (p, (dp, d2p)))| {
                    let x = grid.node(j);
                    let d4v = potential.derivative(4, x)?;
                    let d3v = potential.derivative(3, x)?;
                    let d2v = potential.derivative(2, x)?;
                    Ok((p * (0.25 * d4v) + dp * d3v + d2p * d2v) * hbar)
                })
                .collect::<Result<Vec<Complex64>>>()?
        }
        _ => return Err(Error::UnsupportedWord(word.to_string())),
    };
    WaveFunction::from_values(grid, hbar, values)
}

/// Least-squares slope of `log ||word(psi_hbar)||` against `log hbar` over a
/// family of states (a WKB family over an hbar sweep, at least 4 values).
pub fn scaling_probe(
    word: &CommutatorWord,
    states: &[WaveFunction],
    potential: &PotentialSpec,
) -> Result<f64> {
    if states.len() < 4 {
        return Err(Error::DegenerateSweep {
            min: 4,
            got: states.len(),
        });
    }
    let mut points = Vec::with_capacity(states.len());
    for psi in states {
        let norm = apply_commutator(word, psi, potential)?.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateSweep {
                min: 4,
                got: states.len(),
            });
        }
        points.push((psi.hbar().ln(), norm.ln()));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(Error::DegenerateSweep {
            min: 4,
            got: states.len(),
        });
    }
    Ok((n * sxy - sx * sy) / denom)
}
