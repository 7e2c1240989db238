//! Split-step time evolution: diagonal potential phases in real space,
//! kinetic phases in Fourier space, composed per splitting scheme.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{forward_dft, frequency_table, inverse_dft};
use crate::grid::{Grid1D, MAX_QUBITS};
use crate::potential::PotentialSpec;
use crate::scheme::{SplittingScheme, StageKind};
use crate::wavefunction::WaveFunction;

/// One evolution run: scheme, step size, step count, potential.
#[derive(Debug, Clone)]
pub struct EvolutionSpec {
    pub scheme: SplittingScheme,
    pub dt: f64,
    pub steps: usize,
    pub potential: PotentialSpec,
}

impl EvolutionSpec {
    pub fn new(
        scheme: SplittingScheme,
        dt: f64,
        steps: usize,
        potential: PotentialSpec,
    ) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::NonPositiveDt(dt));
        }
        Ok(Self {
            scheme,
            dt,
            steps,
            potential,
        })
    }

    pub fn final_time(&self) -> f64 {
        self.dt * self.steps as f64
    }
}

/// `psi_j <- exp(-i tau V(x_j)/hbar) psi_j`, the diagonal factor `U_V(tau)`.
///
/// The phase argument `tau V(x)/hbar` is reduced in double precision before
/// the trigonometric evaluation.
pub fn apply_potential_phase(
    psi: &WaveFunction,
    potential: &PotentialSpec,
    tau: f64,
) -> WaveFunction {
    let grid = *psi.grid();
    let hbar = psi.hbar();
    let mut out = psi.clone();
    for (j, v) in out.values_mut().iter_mut().enumerate() {
        let theta = -tau * potential.value(grid.node(j)) / hbar;
        *v *= Complex64::from_polar(1.0, theta);
    }
    out
}

/// `U_K(tau) = exp(i tau hbar Lap/2)`: forward transform, multiply by
/// `exp(-i tau hbar mu_k^2 / 2)`, inverse transform.
pub fn apply_kinetic_phase(psi: &WaveFunction, tau: f64) -> Result<WaveFunction> {
    let table = frequency_table(psi.grid());
    let hbar = psi.hbar();
    let mut hat = forward_dft(psi.values())?;
    for (v, &mu) in hat.iter_mut().zip(table.values()) {
        let theta = -tau * hbar * mu * mu / 2.0;
        *v *= Complex64::from_polar(1.0, theta);
    }
    let values = inverse_dft(&hat)?;
    WaveFunction::from_values(*psi.grid(), hbar, values)
}

/// One splitting step of signed size `tau` (negative `tau` runs backwards,
/// used by the time-reversal diagnostics).
pub fn step_tau(
    psi: &WaveFunction,
    scheme: &SplittingScheme,
    potential: &PotentialSpec,
    tau: f64,
) -> Result<WaveFunction> {
    let mut state = psi.clone();
    for (kind, coeff) in scheme.applied_sequence() {
        match kind {
            StageKind::Kinetic => state = apply_kinetic_phase(&state, coeff * tau)?,
            StageKind::Potential => {
                if !potential.is_zero() {
                    state = apply_potential_phase(&state, potential, coeff * tau)
                }
            }
        }
    }
    Ok(state)
}

/// One step of `spec.dt`.
pub fn step(psi: &WaveFunction, spec: &EvolutionSpec) -> Result<WaveFunction> {
    step_tau(psi, &spec.scheme, &spec.potential, spec.dt)
}

/// The applied stage list for `steps` consecutive steps, coefficients in
/// units of `dt`. With `merge` set, adjacent stages of the same kind are
/// combined (`U(a) U(b) = U(a+b)`), which for symmetric schemes reduces `3n`
/// diagonal blocks to `2n+1`. Potential stages are dropped entirely when the
/// potential is identically zero.
pub fn run_sequence(
    scheme: &SplittingScheme,
    potential_is_zero: bool,
    steps: usize,
    merge: bool,
) -> Vec<(StageKind, f64)> {
    let per_step: Vec<(StageKind, f64)> = scheme
        .applied_sequence()
        .into_iter()
        .filter(|(kind, _)| !(potential_is_zero && *kind == StageKind::Potential))
        .collect();
    let mut seq: Vec<(StageKind, f64)> = Vec::with_capacity(per_step.len() * steps);
    for _ in 0..steps {
        for &(kind, coeff) in &per_step {
            if merge {
                if let Some(last) = seq.last_mut() {
                    if last.0 == kind {
                        last.1 += coeff;
                        if last.1 == 0.0 {
                            seq.pop();
                        }
                        continue;
                    }
                }
            }
            seq.push((kind, coeff));
        }
    }
    seq
}

// Applies a stage list, caching the diagonal phase arrays per distinct
// coefficient so long runs pay only for transforms and pointwise products.
struct SequenceRunner<'a> {
    grid: Grid1D,
    hbar: f64,
    dt: f64,
    potential: &'a PotentialSpec,
    kinetic_phases: HashMap<u64, Vec<Complex64>>,
    potential_phases: HashMap<u64, Vec<Complex64>>,
    mu: Vec<f64>,
    v_grid: Vec<f64>,
}

impl<'a> SequenceRunner<'a> {
    fn new(psi: &WaveFunction, potential: &'a PotentialSpec, dt: f64) -> Self {
        let grid = *psi.grid();
        let mu = frequency_table(&grid).values().to_vec();
        let v_grid = (0..grid.points()).map(|j| potential.value(grid.node(j))).collect();
        Self {
            grid,
            hbar: psi.hbar(),
            dt,
            potential,
            kinetic_phases: HashMap::new(),
            potential_phases: HashMap::new(),
            mu,
            v_grid,
        }
    }

    fn apply(&mut self, values: &mut Vec<Complex64>, kind: StageKind, coeff: f64) -> Result<()> {
        let tau = coeff * self.dt;
        match kind {
            StageKind::Kinetic => {
                let hbar = self.hbar;
                let mu = &self.mu;
                let phases = self
                    .kinetic_phases
                    .entry(tau.to_bits())
                    .or_insert_with(|| {
                        mu.iter()
                            .map(|&m| Complex64::from_polar(1.0, -tau * hbar * m * m / 2.0))
                            .collect()
                    });
                let mut hat = forward_dft(values)?;
                for (v, p) in hat.iter_mut().zip(phases.iter()) {
                    *v *= p;
                }
                *values = inverse_dft(&hat)?;
            }
            StageKind::Potential => {
                if self.potential.is_zero() {
                    return Ok(());
                }
                let hbar = self.hbar;
                let v_grid = &self.v_grid;
                let phases = self
                    .potential_phases
                    .entry(tau.to_bits())
                    .or_insert_with(|| {
                        v_grid
                            .iter()
                            .map(|&v| Complex64::from_polar(1.0, -tau * v / hbar))
                            .collect()
                    });
                for (v, p) in values.iter_mut().zip(phases.iter()) {
                    *v *= p;
                }
            }
        }
        Ok(())
    }

    fn finish(&self, values: Vec<Complex64>) -> Result<WaveFunction> {
        WaveFunction::from_values(self.grid, self.hbar, values)
    }
}

/// Evolve `steps` steps. With `merge` set, half-stages of symmetric schemes
/// are fused across step boundaries; the result agrees with the unmerged run
/// to roundoff since `U(a) U(b) = U(a+b)` exactly.
pub fn evolve(psi0: &WaveFunction, spec: &EvolutionSpec, merge: bool) -> Result<WaveFunction> {
    let mut runner = SequenceRunner::new(psi0, &spec.potential, spec.dt);
    let mut values = psi0.values().to_vec();
    for (kind, coeff) in run_sequence(&spec.scheme, spec.potential.is_zero(), spec.steps, merge) {
        runner.apply(&mut values, kind, coeff)?;
    }
    runner.finish(values)
}

/// Evolve with a callback invoked after every `every`-th step (the state
/// passed is the exact step-boundary state; merging is suspended across
/// observation points). An observer error aborts the run and is reported
/// with the step at which it happened.
pub fn evolve_observed(
    psi0: &WaveFunction,
    spec: &EvolutionSpec,
    merge: bool,
    every: usize,
    mut observer: impl FnMut(usize, &WaveFunction) -> std::result::Result<(), String>,
) -> Result<WaveFunction> {
    let every = every.max(1);
    let mut runner = SequenceRunner::new(psi0, &spec.potential, spec.dt);
    let mut state = psi0.clone();
    let mut done = 0;
    while done < spec.steps {
        let chunk = every.min(spec.steps - done);
        let mut values = state.into_values();
        for (kind, coeff) in
            run_sequence(&spec.scheme, spec.potential.is_zero(), chunk, merge)
        {
            runner.apply(&mut values, kind, coeff)?;
        }
        state = runner.finish(values)?;
        done += chunk;
        observer(done, &state).map_err(|reason| Error::ObserverAbort { step: done, reason })?;
    }
    Ok(state)
}

/// Resolution used for self-generated "exact" reference solutions:
/// `dx_ref = min(hbar/8, dx_target/4)` rounded to the next power-of-two grid,
/// `dt_ref = min(hbar/10, dt_target/100)`, integrated with `yoshida4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceResolution {
    pub m: u32,
    pub dt: f64,
}

pub fn reference_resolution(
    hbar: f64,
    target_dx: f64,
    target_dt: f64,
    length: f64,
) -> Result<ReferenceResolution> {
    if !(hbar > 0.0) {
        return Err(Error::NonPositiveHbar(hbar));
    }
    let dx_ref = (hbar / 8.0).min(target_dx / 4.0);
    let m = (length / dx_ref).log2().ceil() as u32;
    let m = m.max(1);
    if m > MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange(m));
    }
    let dt = (hbar / 10.0).min(target_dt / 100.0);
    Ok(ReferenceResolution { m, dt })
}
