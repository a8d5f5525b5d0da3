//! Observables extracted from simulated evolutions: magnetizations,
//! two-point dynamical correlations and operator spectra.
//!
//! Correlations are `C_VW(t) = ⟨ψ| U†(t) V† U(t) W |ψ⟩` with `U(t) = e^{-iHt}`.
//! Spin correlations `⟨s_α(t) s_β⟩` are `C/4`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::compiler::{Circuit, CompileOptions, GateSet};
use crate::dense::DenseUnitary;
use crate::error::{input, Result};
use crate::gates::GateOp;
use crate::pauli::{Pauli, PauliHamiltonian, PauliString};
use crate::statevector::StateVector;
use crate::trotter::{exact_propagator, trotterize_with, TrotterPlan};

/// `⟨s_z^(i)⟩ = ½ ⟨σ_z^(i)⟩`.
pub fn magnetization(psi: &StateVector, site: usize) -> Result<f64> {
    let z = PauliString::from_sparse(psi.n_qubits(), 1.0, &[(site, Pauli::Z)])?;
    Ok(0.5 * psi.pauli_expectation(&z)?)
}

/// `Σ_i ⟨s_z^(i)⟩`.
pub fn total_magnetization(psi: &StateVector) -> f64 {
    (1..=psi.n_qubits()).map(|q| magnetization(psi, q).expect("site in range")).sum()
}

/// How `U(t)` is realized.
#[derive(Clone, Debug, PartialEq)]
pub enum Evolution {
    /// Dense `exp(-iHt)`.
    Exact,
    /// Compiled Trotter circuit.
    Trotter { plan: TrotterPlan, set: GateSet, opts: CompileOptions },
}

impl Evolution {
    pub fn trotter(plan: TrotterPlan, set: GateSet) -> Self {
        Evolution::Trotter { plan, set, opts: CompileOptions::default() }
    }
}

/// `U(t)` in executable form.
enum Propagator {
    Dense(DenseUnitary),
    Gates(Circuit),
}

impl Propagator {
    fn new(h: &PauliHamiltonian, t: f64, evolution: &Evolution) -> Result<Self> {
        Ok(match evolution {
            Evolution::Exact => Propagator::Dense(exact_propagator(h, t)?),
            Evolution::Trotter { plan, set, opts } => {
                Propagator::Gates(trotterize_with(h, t, plan, *set, opts)?.circuit)
            }
        })
    }

    /// Applies `U` to qubits `1..=n`, optionally conditioned on `control`.
    fn apply(&self, psi: &mut StateVector, n: usize, control: Option<usize>) -> Result<()> {
        match (self, control) {
            (Propagator::Dense(u), c) => {
                let targets: Vec<usize> = (1..=n).collect();
                let controls: Vec<usize> = c.into_iter().collect();
                psi.apply_matrix_unchecked(&targets, &controls, u)
            }
            (Propagator::Gates(circuit), None) => psi.apply_circuit(circuit),
            (Propagator::Gates(circuit), Some(c)) => psi.apply_circuit(&circuit.controlled(c)?),
        }
    }
}

/// A single-qubit Pauli operator; `Pauli::I` stands for the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiteOp {
    pub pauli: Pauli,
    pub qubit: usize,
}

impl SiteOp {
    pub fn new(pauli: Pauli, qubit: usize) -> Self {
        Self { pauli, qubit }
    }

    pub fn identity() -> Self {
        Self { pauli: Pauli::I, qubit: 1 }
    }

    fn gate(&self, control: Option<usize>) -> Result<Option<GateOp>> {
        let Some(axis) = self.pauli.axis() else {
            return Ok(None);
        };
        let g = GateOp::pauli(axis, self.qubit);
        Ok(Some(match control {
            Some(c) => g.with_control(c)?,
            None => g,
        }))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationSpec {
    pub v: SiteOp,
    pub w: SiteOp,
    /// Product-state symbols (`0`, `1`, `+`, `-`), one per qubit.
    pub initial_state: String,
    pub hamiltonian: PauliHamiltonian,
    pub times: Vec<f64>,
    pub evolution: Evolution,
}

impl CorrelationSpec {
    fn validate(&self) -> Result<StateVector> {
        let n = self.hamiltonian.n_qubits();
        let psi = StateVector::product_state(&self.initial_state)?;
        if psi.n_qubits() != n {
            return input(format!("initial state {:?} does not match the {n}-qubit Hamiltonian", self.initial_state));
        }
        for (name, op) in [("V", self.v), ("W", self.w)] {
            if op.pauli != Pauli::I && (op.qubit == 0 || op.qubit > n) {
                return input(format!("{name} acts on qubit {} outside 1..={n}", op.qubit));
            }
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return input("times must be finite");
        }
        Ok(psi)
    }
}

/// `C_VW(t)` by direct statevector algebra: `⟨V U ψ | U W ψ⟩`.
pub fn correlation_direct(spec: &CorrelationSpec) -> Result<Vec<Complex64>> {
    let psi = spec.validate()?;
    let n = psi.n_qubits();
    spec.times
        .par_iter()
        .map(|&t| {
            let u = Propagator::new(&spec.hamiltonian, t, &spec.evolution)?;
            let mut bra = psi.clone();
            u.apply(&mut bra, n, None)?;
            if let Some(g) = spec.v.gate(None)? {
                bra.apply_gate(&g)?;
            }
            let mut ket = psi.clone();
            if let Some(g) = spec.w.gate(None)? {
                ket.apply_gate(&g)?;
            }
            u.apply(&mut ket, n, None)?;
            bra.inner_product(&ket)
        })
        .collect()
}

/// `⟨σx⟩ + i⟨σy⟩` of the last qubit.
fn ancilla_readout(psi: &StateVector) -> Result<Complex64> {
    let n = psi.n_qubits();
    let x = PauliString::from_sparse(n, 1.0, &[(n, Pauli::X)])?;
    let y = PauliString::from_sparse(n, 1.0, &[(n, Pauli::Y)])?;
    Ok(Complex64::new(psi.pauli_expectation(&x)?, psi.pauli_expectation(&y)?))
}

/// `ψ ⊗ |+⟩` with the ancilla as the last (least significant) qubit.
fn with_ancilla(psi: &StateVector) -> Result<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = psi.amplitudes().iter().flat_map(|a| [a * h, a * h]).collect();
    StateVector::from_amplitudes(amps)
}

/// `C_VW(t)` by the ancilla protocol: with an extra qubit in `|+⟩`, apply
/// controlled-W, the uncontrolled evolution, and V controlled on the ancilla
/// being `|0⟩`; then `C = ⟨σx⟩ + i⟨σy⟩` on the ancilla.
pub fn correlation_ancilla(spec: &CorrelationSpec) -> Result<Vec<Complex64>> {
    let psi = spec.validate()?;
    let n = psi.n_qubits();
    let anc = n + 1;
    let start = with_ancilla(&psi)?;
    spec.times
        .par_iter()
        .map(|&t| {
            let u = Propagator::new(&spec.hamiltonian, t, &spec.evolution)?;
            let mut s = start.clone();
            if let Some(g) = spec.w.gate(Some(anc))? {
                s.apply_gate(&g)?;
            }
            u.apply(&mut s, n, None)?;
            if let Some(g) = spec.v.gate(Some(anc))? {
                s.apply_gate(&GateOp::x(anc))?;
                s.apply_gate(&g)?;
                s.apply_gate(&GateOp::x(anc))?;
            }
            ancilla_readout(&s)
        })
        .collect()
}

/// Uniform grid `θ_k = k Δθ`, `k = 0..M`, for `⟨ψ|e^{-iQθ}|ψ⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSpec {
    pub q: PauliHamiltonian,
    pub initial_state: StateVector,
    pub m: usize,
    pub dtheta: f64,
    pub evolution: Evolution,
}

/// Grid size used when none is requested.
pub const DEFAULT_SPECTRUM_POINTS: usize = 1024;

impl SpectrumSpec {
    /// `M = 1024` and `Δθ` such that the Nyquist range `±π/Δθ` spans 1.5 times
    /// the Gershgorin bound of `Q`.
    pub fn with_default_grid(q: PauliHamiltonian, initial_state: StateVector, evolution: Evolution) -> Result<Self> {
        let bound = q.gershgorin_bound();
        if bound <= 0.0 {
            return input("spectrum of a zero operator");
        }
        Ok(Self { q, initial_state, m: DEFAULT_SPECTRUM_POINTS, dtheta: PI / (1.5 * bound), evolution })
    }

    fn validate(&self) -> Result<()> {
        if !self.m.is_power_of_two() || self.m < 2 {
            return input(format!("grid size {} is not a power of two", self.m));
        }
        if !(self.dtheta > 0.0) || !self.dtheta.is_finite() {
            return input(format!("grid spacing must be positive, got {}", self.dtheta));
        }
        if self.initial_state.n_qubits() != self.q.n_qubits() {
            return input("initial state and operator act on different registers");
        }
        Ok(())
    }
}

/// `⟨ψ|e^{-iQθ_k}|ψ⟩` on the grid, read out by the ancilla protocol with
/// `W = U_Q(θ)` and no time evolution. `U_Q(θ_k)` is realized as `k`
/// applications of the controlled step `U_Q(Δθ)`, so the whole series costs
/// `M` controlled steps.
pub fn unitary_expectation_series(spec: &SpectrumSpec) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let n = spec.q.n_qubits();
    let anc = n + 1;
    let step = Propagator::new(&spec.q, spec.dtheta, &spec.evolution)?;
    let step = match step {
        Propagator::Gates(c) => Propagator::Gates(c.controlled(anc)?),
        dense => dense,
    };
    let mut s = with_ancilla(&spec.initial_state)?;
    let mut series = Vec::with_capacity(spec.m);
    series.push(ancilla_readout(&s)?);
    for _ in 1..spec.m {
        match &step {
            Propagator::Gates(c) => s.apply_circuit(c)?,
            dense => dense.apply(&mut s, n, Some(anc))?,
        }
        series.push(ancilla_readout(&s)?);
    }
    Ok(series)
}

/// A recovered eigenvalue and its weight `|⟨q_l|ψ⟩|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPeak {
    pub q: f64,
    pub weight: f64,
}

/// Lines are extracted until the residual transform drops below this
/// fraction of the largest bin.
pub const PEAK_THRESHOLD: f64 = 0.01;

/// Upper bound on the number of extracted lines.
const MAX_LINES: usize = 256;

/// Lines within this many bins of each other are re-fitted together.
const NEIGHBOURHOOD: f64 = 8.0;

/// Local re-fits around every line once extraction is done.
const FINAL_SWEEPS: usize = 2;

/// Cap on joint refinement iterations.
const REFINE_ITERATIONS: usize = 100;

/// Refinement stops once no line moves by more than this many bins.
const REFINE_TOLERANCE: f64 = 1e-13;

/// Golden-section iterations when locating a line inside its bin.
const LOCATE_ITERATIONS: usize = 60;

#[derive(Clone, Copy)]
struct Line {
    /// Position in (fractional) bins.
    bin: f64,
    amp: Complex64,
}

impl Line {
    /// Adds `sign` times this line's series to `residual`.
    fn imprint(&self, residual: &mut [Complex64], sign: f64) {
        let step = -2.0 * PI * self.bin / residual.len() as f64;
        for (j, v) in residual.iter_mut().enumerate() {
            *v += self.amp * Complex64::from_polar(sign, step * j as f64);
        }
    }
}

/// Overlap of `residual` with a unit line at fractional bin `f`.
fn overlap(residual: &[Complex64], f: f64) -> Complex64 {
    let step = 2.0 * PI * f / residual.len() as f64;
    residual.iter().enumerate().map(|(j, v)| v * Complex64::from_polar(1.0, step * j as f64)).sum::<Complex64>()
        / residual.len() as f64
}

/// Least-squares single line within half a bin of `k`: the position
/// maximizing the overlap, the amplitude equal to it.
fn fit_line(residual: &[Complex64], k: f64) -> Line {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (k - 0.6, k + 0.6);
    let score = |f: f64| overlap(residual, f).norm();
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (score(c), score(d));
    for _ in 0..LOCATE_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = score(d);
        }
    }
    let bin = (a + b) / 2.0;
    Line { bin, amp: overlap(residual, bin) }
}

fn subtract_all(series: &[Complex64], lines: &[Line]) -> Vec<Complex64> {
    let mut residual = series.to_vec();
    for line in lines {
        line.imprint(&mut residual, -1.0);
    }
    residual
}

/// Squared distance between `series` and the sum of `lines`.
fn misfit(series: &[Complex64], lines: &[Line]) -> f64 {
    subtract_all(series, lines).iter().map(|z| z.norm_sqr()).sum()
}

/// Jointly re-fits line `centre` and every line within [`NEIGHBOURHOOD`]
/// bins of it, holding the rest fixed.
fn refine_near(series: &[Complex64], lines: &mut [Line], centre: usize) {
    let m = series.len() as f64;
    let at = lines[centre].bin;
    let near: Vec<usize> = (0..lines.len())
        .filter(|&i| {
            let d = (lines[i].bin - at).rem_euclid(m);
            d.min(m - d) <= NEIGHBOURHOOD
        })
        .collect();
    let mut target = series.to_vec();
    for (i, line) in lines.iter().enumerate() {
        if !near.contains(&i) {
            line.imprint(&mut target, -1.0);
        }
    }
    let fitted = refine(&target, near.iter().map(|&i| lines[i]).collect());
    for (&i, line) in near.iter().zip(fitted) {
        lines[i] = line;
    }
}

/// Joint damped Gauss-Newton fit of all positions and amplitudes, starting
/// from the greedy estimates.
fn refine(series: &[Complex64], mut lines: Vec<Line>) -> Vec<Line> {
    let m = series.len();
    let l = lines.len();
    if l == 0 {
        return lines;
    }
    let mut cost = misfit(series, &lines);
    let mut damping = 1e-3;
    for _ in 0..REFINE_ITERATIONS {
        // Real parameters per line: position, Re amp, Im amp.
        let mut jac = DMatrix::<f64>::zeros(2 * m, 3 * l);
        let residual = subtract_all(series, &lines);
        for (c, line) in lines.iter().enumerate() {
            let step = -2.0 * PI * line.bin / m as f64;
            for j in 0..m {
                let basis = Complex64::from_polar(1.0, step * j as f64);
                let d_bin = line.amp * basis * Complex64::new(0.0, -2.0 * PI * j as f64 / m as f64);
                let d_im = basis * Complex64::i();
                for (col, d) in [(3 * c, d_bin), (3 * c + 1, basis), (3 * c + 2, d_im)] {
                    jac[(2 * j, col)] = d.re;
                    jac[(2 * j + 1, col)] = d.im;
                }
            }
        }
        let r = DVector::from_iterator(2 * m, residual.iter().flat_map(|z| [z.re, z.im]));
        let normal = jac.tr_mul(&jac);
        let gradient = jac.tr_mul(&r);
        let mut accepted = false;
        let mut largest_move: f64 = 0.0;
        for _ in 0..20 {
            let mut a = normal.clone();
            for i in 0..3 * l {
                a[(i, i)] += damping * normal[(i, i)].max(1e-12);
            }
            let Some(delta) = a.lu().solve(&gradient) else {
                damping *= 10.0;
                continue;
            };
            let trial: Vec<Line> = lines
                .iter()
                .enumerate()
                .map(|(c, line)| Line {
                    bin: line.bin + delta[3 * c].clamp(-0.5, 0.5),
                    amp: line.amp + Complex64::new(delta[3 * c + 1], delta[3 * c + 2]),
                })
                .collect();
            let trial_cost = misfit(series, &trial);
            if trial_cost <= cost {
                largest_move = (0..l).map(|c| delta[3 * c].abs()).fold(0.0, f64::max);
                lines = trial;
                cost = trial_cost;
                damping = (damping / 3.0).max(1e-12);
                accepted = true;
                break;
            }
            damping *= 4.0;
        }
        if !accepted || largest_move < REFINE_TOLERANCE {
            break;
        }
    }
    lines
}

fn transform(residual: &[Complex64], planner: &mut FftPlanner<f64>) -> Vec<Complex64> {
    let mut x = residual.to_vec();
    planner.plan_fft_inverse(x.len()).process(&mut x);
    x
}

fn argmax(x: &[Complex64]) -> usize {
    (0..x.len()).max_by(|&a, &b| x[a].norm().total_cmp(&x[b].norm())).expect("non-empty")
}

/// Eigenvalues and weights from `s_k = Σ_l w_l e^{-i q_l k Δθ}`.
///
/// Bin `m` of `X_m = Σ_k s_k e^{+2πi km/M}` corresponds to
/// `q = 2π m / (M Δθ)`, with `m ≥ M/2` folded to negative frequencies.
/// Lines are removed from the series one at a time, strongest bin first,
/// each as the least-squares single line near that bin, so leakage from
/// strong lines neither hides nor imitates weak ones. Extraction stops once
/// no bin exceeds [`PEAK_THRESHOLD`] of the initial maximum; all lines are
/// then re-fitted jointly. Lines closer than one bin are
/// merged. Peaks are sorted by `q`.
pub fn spectrum_from_series(series: &[Complex64], dtheta: f64) -> Result<Vec<SpectralPeak>> {
    let m = series.len();
    if m < 2 || !m.is_power_of_two() {
        return input(format!("series length {m} is not a power of two"));
    }
    if !(dtheta > 0.0) {
        return input("grid spacing must be positive");
    }
    let mut planner = FftPlanner::new();
    let mut residual = series.to_vec();
    let max = transform(&residual, &mut planner).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(Vec::new());
    }

    let mut lines: Vec<Line> = Vec::new();
    while lines.len() < MAX_LINES {
        let x = transform(&residual, &mut planner);
        let k = argmax(&x);
        if x[k].norm() < PEAK_THRESHOLD * max {
            break;
        }
        lines.push(fit_line(&residual, k as f64));
        let newest = lines.len() - 1;
        refine_near(series, &mut lines, newest);
        residual = subtract_all(series, &lines);
    }
    for _ in 0..FINAL_SWEEPS {
        for i in 0..lines.len() {
            refine_near(series, &mut lines, i);
        }
    }

    let mf = m as f64;
    let mut folded: Vec<(f64, Complex64)> = lines
        .iter()
        .map(|line| {
            let mut bin = line.bin.rem_euclid(mf);
            if bin >= mf / 2.0 {
                bin -= mf;
            }
            (bin, line.amp)
        })
        .collect();
    folded.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, Complex64)> = Vec::new();
    for (bin, amp) in folded {
        match merged.last_mut() {
            Some((prev, prev_amp)) if bin - *prev < 1.0 => {
                let (wa, wb) = (prev_amp.norm(), amp.norm());
                if wa + wb > 0.0 {
                    *prev += (bin - *prev) * wb / (wa + wb);
                }
                *prev_amp += amp;
            }
            _ => merged.push((bin, amp)),
        }
    }

    let bin_width = 2.0 * PI / (mf * dtheta);
    Ok(merged.into_iter().map(|(bin, amp)| SpectralPeak { q: bin * bin_width, weight: amp.norm() }).collect())
}
