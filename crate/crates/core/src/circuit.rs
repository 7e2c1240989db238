//! Gate-level statevector emulation of the split-step quantum algorithm:
//! QFT circuits, diagonal phase unitaries, gate/query ledgers, and shot-based
//! measurement.
//!
//! The QFT direction is fixed to the positive-exponent transform, i.e. the
//! gate circuit reproduces [`crate::fourier::inverse_dft`] exactly (Fourier
//! basis to position basis), so a kinetic factor is `inverse_qft`, diagonal,
//! `qft` — mirroring the spectral propagator. Qubit 0 is the most significant
//! bit of the basis index and the final reversal swaps are applied
//! explicitly, so the statevector is directly comparable to the spectral
//! amplitude array: basis index `j` is grid node `x_j`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimator::CostModel;
use crate::fourier::frequency_table;
use crate::grid::{Grid1D, MAX_QUBITS};
use crate::potential::PotentialSpec;
use crate::propagator::run_sequence;
use crate::scheme::{SplittingScheme, StageKind};
use crate::wavefunction::WaveFunction;

/// Statevector on `m` qubits: `2^m` complex amplitudes indexed by the
/// computational basis.
#[derive(Debug, Clone)]
pub struct QubitState {
    m: u32,
    amplitudes: Vec<Complex64>,
}

impl QubitState {
    /// The basis state `|j>`.
    pub fn basis(m: u32, j: usize) -> Result<Self> {
        if m < 1 || m > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(m));
        }
        let dim = 1usize << m;
        if j >= dim {
            return Err(Error::IndexOutOfRange { index: j, len: dim });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[j] = Complex64::ONE;
        Ok(Self { m, amplitudes })
    }

    /// Load a grid wavefunction: amplitude `j` is `psi_j sqrt(dx)`, so the
    /// statevector is l2-normalized exactly when `psi` has unit quadrature
    /// norm.
    pub fn from_wavefunction(psi: &WaveFunction) -> Result<Self> {
        let scale = psi.grid().dx().sqrt();
        let amplitudes = psi.values().iter().map(|v| v * scale).collect();
        Ok(Self {
            m: psi.grid().qubits(),
            amplitudes,
        })
    }

    pub fn from_amplitudes(m: u32, amplitudes: Vec<Complex64>) -> Result<Self> {
        if m < 1 || m > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange(m));
        }
        if amplitudes.len() != 1usize << m {
            return Err(Error::LengthMismatch {
                expected: 1usize << m,
                got: amplitudes.len(),
            });
        }
        Ok(Self { m, amplitudes })
    }

    pub fn qubits(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_distance(&self, other: &QubitState) -> Result<f64> {
        if self.m != other.m {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    // bit position of qubit q: qubit 0 is the most significant bit
    fn bit(&self, qubit: u32) -> u32 {
        self.m - 1 - qubit
    }

    fn hadamard(&mut self, qubit: u32) {
        let mask = 1usize << self.bit(qubit);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for j in 0..self.dim() {
            if j & mask == 0 {
                let a = self.amplitudes[j];
                let b = self.amplitudes[j | mask];
                self.amplitudes[j] = (a + b) * inv_sqrt2;
                self.amplitudes[j | mask] = (a - b) * inv_sqrt2;
            }
        }
    }

    fn controlled_phase(&mut self, control: u32, target: u32, theta: f64) {
        let mask = (1usize << self.bit(control)) | (1usize << self.bit(target));
        let phase = Complex64::from_polar(1.0, theta);
        for (j, amp) in self.amplitudes.iter_mut().enumerate() {
            if j & mask == mask {
                *amp *= phase;
            }
        }
    }

    fn swap(&mut self, q1: u32, q2: u32) {
        let m1 = 1usize << self.bit(q1);
        let m2 = 1usize << self.bit(q2);
        for j in 0..self.dim() {
            if j & m1 != 0 && j & m2 == 0 {
                self.amplitudes.swap(j, (j & !m1) | m2);
            }
        }
    }
}

/// Cumulative gate and query counters for a circuit run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateLedger {
    pub single_qubit_gates: u64,
    pub two_qubit_gates: u64,
    /// Gates charged by diagonal unitaries under the chosen cost model.
    pub diagonal_gates: u64,
    pub diagonal_invocations: u64,
    pub oracle_queries: u64,
    pub qft_invocations: u64,
}

impl GateLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total_gates(&self) -> u64 {
        self.single_qubit_gates + self.two_qubit_gates + self.diagonal_gates
    }

    /// Closed-form gate cost of one m-qubit QFT in this decomposition:
    /// `m` Hadamards, `m(m-1)/2` controlled phases, `floor(m/2)` swaps.
    pub fn qft_gate_cost(m: u32) -> u64 {
        let m = m as u64;
        m * (m + 1) / 2 + m / 2
    }
}

/// One diagonal-unitary application under a gate-cost model. `J(m)` gates per
/// invocation: full `2^(m+1) - 3`, linear `m`, poly(a) `m^a`; the oracle model
/// charges one query plus a single phase gate.
pub fn diagonal_unitary(
    state: &mut QubitState,
    phases: &[f64],
    cost_model: CostModel,
    ledger: &mut GateLedger,
) -> Result<()> {
    if phases.len() != state.dim() {
        return Err(Error::PhaseLengthMismatch {
            expected: state.dim(),
            got: phases.len(),
        });
    }
    for (amp, &theta) in state.amplitudes.iter_mut().zip(phases) {
        *amp *= Complex64::from_polar(1.0, theta);
    }
    ledger.diagonal_invocations += 1;
    match cost_model {
        CostModel::Oracle => {
            ledger.oracle_queries += 1;
            ledger.diagonal_gates += 1;
        }
        model => {
            ledger.diagonal_gates += model.j_of_m(state.m) as u64;
        }
    }
    Ok(())
}

/// Quantum Fourier transform (positive exponent): Hadamards, controlled
/// phase rotations, then the qubit-order reversal swaps.
pub fn qft(state: &mut QubitState, ledger: &mut GateLedger) {
    let m = state.m;
    for q in 0..m {
        state.hadamard(q);
        ledger.single_qubit_gates += 1;
        for t in (q + 1)..m {
            let theta = 2.0 * std::f64::consts::PI / (1u64 << (t - q + 1)) as f64;
            state.controlled_phase(t, q, theta);
            ledger.two_qubit_gates += 1;
        }
    }
    for q in 0..m / 2 {
        state.swap(q, m - 1 - q);
        ledger.two_qubit_gates += 1;
    }
    ledger.qft_invocations += 1;
}

/// Adjoint of [`qft`]: the same gates conjugated, in reverse order.
pub fn inverse_qft(state: &mut QubitState, ledger: &mut GateLedger) {
    let m = state.m;
    for q in 0..m / 2 {
        state.swap(q, m - 1 - q);
        ledger.two_qubit_gates += 1;
    }
    for q in (0..m).rev() {
        for t in ((q + 1)..m).rev() {
            let theta = -2.0 * std::f64::consts::PI / (1u64 << (t - q + 1)) as f64;
            state.controlled_phase(t, q, theta);
            ledger.two_qubit_gates += 1;
        }
        state.hadamard(q);
        ledger.single_qubit_gates += 1;
    }
    ledger.qft_invocations += 1;
}

/// The split-step propagator realized purely from `qft` / `diagonal_unitary`
/// / `inverse_qft` primitives, with the same stage sequencing as the spectral
/// path.
#[derive(Debug, Clone)]
pub struct TrotterCircuit {
    grid: Grid1D,
    hbar: f64,
    potential: PotentialSpec,
    scheme: SplittingScheme,
    dt: f64,
    cost_model: CostModel,
}

impl TrotterCircuit {
    pub fn new(
        grid: Grid1D,
        hbar: f64,
        potential: PotentialSpec,
        scheme: SplittingScheme,
        dt: f64,
        cost_model: CostModel,
    ) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        Ok(Self {
            grid,
            hbar,
            potential,
            scheme,
            dt,
            cost_model,
        })
    }

    fn apply_stage(
        &self,
        state: &mut QubitState,
        ledger: &mut GateLedger,
        kind: StageKind,
        coeff: f64,
    ) -> Result<()> {
        let tau = coeff * self.dt;
        match kind {
            StageKind::Potential => {
                let phases: Vec<f64> = (0..self.grid.points())
                    .map(|j| -tau * self.potential.value(self.grid.node(j)) / self.hbar)
                    .collect();
                diagonal_unitary(state, &phases, self.cost_model, ledger)
            }
            StageKind::Kinetic => {
                let table = frequency_table(&self.grid);
                let phases: Vec<f64> = table
                    .values()
                    .iter()
                    .map(|&mu| -tau * self.hbar * mu * mu / 2.0)
                    .collect();
                inverse_qft(state, ledger);
                diagonal_unitary(state, &phases, self.cost_model, ledger)?;
                qft(state, ledger);
                Ok(())
            }
        }
    }

    /// One unmerged step.
    pub fn step(&self, state: &mut QubitState, ledger: &mut GateLedger) -> Result<()> {
        self.run(state, 1, false, ledger)
    }

    /// `steps` consecutive steps; with `merge` set, adjacent same-kind stages
    /// are fused exactly as in the spectral propagator.
    pub fn run(
        &self,
        state: &mut QubitState,
        steps: usize,
        merge: bool,
        ledger: &mut GateLedger,
    ) -> Result<()> {
        if state.dim() != self.grid.points() {
            return Err(Error::LengthMismatch {
                expected: self.grid.points(),
                got: state.dim(),
            });
        }
        for (kind, coeff) in
            run_sequence(&self.scheme, self.potential.is_zero(), steps, merge)
        {
            self.apply_stage(state, ledger, kind, coeff)?;
        }
        Ok(())
    }
}

/// Measurement counts per basis index from repeated sampling of `|amp_j|^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotHistogram {
    pub shots: u64,
    pub counts: Vec<u64>,
    pub seed: u64,
}

impl ShotHistogram {
    /// Empirical frequencies `count_j / shots`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.shots as f64)
            .collect()
    }

    /// Largest deviation between the empirical frequencies and a probability
    /// vector.
    pub fn sup_distance(&self, probabilities: &[f64]) -> Result<f64> {
        if probabilities.len() != self.counts.len() {
            return Err(Error::LengthMismatch {
                expected: self.counts.len(),
                got: probabilities.len(),
            });
        }
        Ok(self
            .frequencies()
            .iter()
            .zip(probabilities)
            .map(|(f, p)| (f - p).abs())
            .fold(0.0, f64::max))
    }
}

/// Multinomial sampling of the measurement distribution with a deterministic
/// ChaCha8 generator: identical seeds give identical histograms on every
/// platform.
pub fn measure_shots(state: &QubitState, shots: u64, seed: u64) -> Result<ShotHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = state.probabilities();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c < u).min(probs.len() - 1);
        counts[idx] += 1;
    }
    Ok(ShotHistogram { shots, counts, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::inverse_dft;

    fn random_state(m: u32, seed: u64) -> QubitState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 1usize << m;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        QubitState::from_amplitudes(m, amps).unwrap()
    }

    #[test]
    fn single_qubit_qft_is_hadamard() {
        let mut state = QubitState::basis(1, 0).unwrap();
        let mut ledger = GateLedger::new();
        qft(&mut state, &mut ledger);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((state.amplitudes()[0] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((state.amplitudes()[1] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert_eq!(ledger.single_qubit_gates, 1);
        assert_eq!(ledger.two_qubit_gates, 0);
    }

    #[test]
    fn qft_on_basis_state_matches_dense_dft_matrix() {
        // |1> on 3 qubits: amplitudes (1/sqrt 8) exp(+2 pi i k/8)
        let mut state = QubitState::basis(3, 1).unwrap();
        let mut ledger = GateLedger::new();
        qft(&mut state, &mut ledger);
        let dim = 8;
        for (k, amp) in state.amplitudes().iter().enumerate() {
            let expected = Complex64::from_polar(
                1.0 / (dim as f64).sqrt(),
                2.0 * std::f64::consts::PI * k as f64 / dim as f64,
            );
            assert!((amp - expected).norm() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn qft_equals_inverse_dft_on_random_states() {
        for m in [2u32, 5, 8] {
            let state0 = random_state(m, 42 + m as u64);
            let mut state = state0.clone();
            let mut ledger = GateLedger::new();
            qft(&mut state, &mut ledger);
            let expected = inverse_dft(state0.amplitudes()).unwrap();
            let err: f64 = state
                .amplitudes()
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-13, "m={m}: {err}");
        }
    }

    #[test]
    fn qft_round_trip_and_gate_count() {
        let m = 6;
        let state0 = random_state(m, 7);
        let mut state = state0.clone();
        let mut ledger = GateLedger::new();
        qft(&mut state, &mut ledger);
        inverse_qft(&mut state, &mut ledger);
        assert!(state.l2_distance(&state0).unwrap() < 1e-12);
        assert_eq!(ledger.qft_invocations, 2);
        assert_eq!(
            ledger.single_qubit_gates + ledger.two_qubit_gates,
            2 * GateLedger::qft_gate_cost(m)
        );
        // m(m+1)/2 + floor(m/2) = 21 + 3
        assert_eq!(GateLedger::qft_gate_cost(6), 24);
    }

    #[test]
    fn diagonal_unitary_identity_and_ledger() {
        let mut state = random_state(4, 3);
        let before = state.clone();
        let mut ledger = GateLedger::new();
        diagonal_unitary(&mut state, &vec![0.0; 16], CostModel::Full, &mut ledger).unwrap();
        assert!(state.l2_distance(&before).unwrap() < 1e-15);
        assert_eq!(ledger.diagonal_invocations, 1);
        // full model at m = 4: 2^5 - 3 = 29 gates
        assert_eq!(ledger.diagonal_gates, 29);
    }

    #[test]
    fn uniform_phase_leaves_distribution_unchanged() {
        let mut state = random_state(4, 5);
        let probs_before = state.probabilities();
        let mut ledger = GateLedger::new();
        diagonal_unitary(&mut state, &vec![0.8; 16], CostModel::Linear, &mut ledger).unwrap();
        for (a, b) in state.probabilities().iter().zip(&probs_before) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(ledger.diagonal_gates, 4);
    }

    #[test]
    fn phase_length_mismatch_is_rejected() {
        let mut state = random_state(3, 1);
        let mut ledger = GateLedger::new();
        assert!(matches!(
            diagonal_unitary(&mut state, &vec![0.0; 4], CostModel::Linear, &mut ledger),
            Err(Error::PhaseLengthMismatch { .. })
        ));
    }

    #[test]
    fn oracle_model_charges_queries() {
        let mut state = random_state(3, 1);
        let mut ledger = GateLedger::new();
        diagonal_unitary(&mut state, &vec![0.1; 8], CostModel::Oracle, &mut ledger).unwrap();
        assert_eq!(ledger.oracle_queries, 1);
        assert_eq!(ledger.diagonal_gates, 1);
    }

    #[test]
    fn basis_state_measures_deterministically() {
        let state = QubitState::basis(4, 5).unwrap();
        let hist = measure_shots(&state, 1000, 99).unwrap();
        assert_eq!(hist.counts[5], 1000);
        assert_eq!(hist.counts.iter().sum::<u64>(), 1000);
    }

    #[test]
    fn uniform_state_counts_within_five_sigma() {
        let m = 4;
        let dim = 1usize << m;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let state = QubitState::from_amplitudes(m, vec![amp; dim]).unwrap();
        let shots = 40_000u64;
        let hist = measure_shots(&state, shots, 2024).unwrap();
        let expected = shots as f64 / dim as f64;
        let sigma = (expected * (dim as f64 - 1.0) / dim as f64).sqrt();
        for &c in &hist.counts {
            assert!(
                (c as f64 - expected).abs() < 5.0 * sigma,
                "count {c} vs {expected} +- {sigma}"
            );
        }
    }

    #[test]
    fn identical_seeds_give_identical_histograms() {
        let state = random_state(5, 11);
        let a = measure_shots(&state, 4000, 7).unwrap();
        let b = measure_shots(&state, 4000, 7).unwrap();
        assert_eq!(a, b);
        let c = measure_shots(&state, 4000, 8).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn zero_shots_rejected() {
        let state = QubitState::basis(2, 0).unwrap();
        assert!(matches!(
            measure_shots(&state, 0, 1),
            Err(Error::ZeroShots)
        ));
    }

    #[test]
    fn kinetic_only_strang_ledger() {
        // strang_vkv with V = 0 degenerates to one kinetic block:
        // 2 QFT invocations + 1 diagonal
        let grid = Grid1D::new(4.0, 5, -2.0).unwrap();
        let circuit = TrotterCircuit::new(
            grid,
            0.01,
            PotentialSpec::zero(),
            SplittingScheme::by_id("strang_vkv").unwrap(),
            0.05,
            CostModel::Full,
        )
        .unwrap();
        let mut state = QubitState::basis(5, 3).unwrap();
        let mut ledger = GateLedger::new();
        circuit.step(&mut state, &mut ledger).unwrap();
        assert_eq!(ledger.qft_invocations, 2);
        assert_eq!(ledger.diagonal_invocations, 1);
    }

    #[test]
    fn merged_symmetric_run_charges_2n_plus_1_diagonal_blocks() {
        let grid = Grid1D::new(4.0, 4, -2.0).unwrap();
        let circuit = TrotterCircuit::new(
            grid,
            0.01,
            PotentialSpec::harmonic(),
            SplittingScheme::by_id("strang_kvk").unwrap(),
            0.05,
            CostModel::Linear,
        )
        .unwrap();
        let n = 6;
        let mut state = QubitState::basis(4, 1).unwrap();
        let mut merged = GateLedger::new();
        circuit.run(&mut state, n, true, &mut merged).unwrap();
        assert_eq!(merged.diagonal_invocations, 2 * n as u64 + 1);
        let mut state2 = QubitState::basis(4, 1).unwrap();
        let mut unmerged = GateLedger::new();
        circuit.run(&mut state2, n, false, &mut unmerged).unwrap();
        assert_eq!(unmerged.diagonal_invocations, 3 * n as u64);
        // merged and unmerged states agree
        assert!(state.l2_distance(&state2).unwrap() < 1e-12);
    }
}
