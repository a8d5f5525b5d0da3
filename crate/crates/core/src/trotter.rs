//! Suzuki-Trotter synthesis of time-evolution circuits and digital-error
//! diagnostics against the exact propagator.

use std::fmt;
use std::str::FromStr;

use crate::compiler::{
    bond_circuit, decompose_pauli_pair_with, pauli_term_circuit, single_qubit_rotation, Circuit, CompileOptions,
    GateSet,
};
use crate::dense::DenseUnitary;
use crate::error::{input, Result, SimError};
use crate::gates::Axis;
use crate::pauli::{check_dense_size, first_fit_layers, PauliHamiltonian, PauliString, PauliSum};
use crate::statevector::StateVector;

/// How the step count grows with the phase `δ` at fixed accuracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Growth {
    /// `n = ⌈δ / 2ε⌉`.
    Linear,
    /// `n = ⌈δ² / 2ε⌉`.
    Quadratic,
}

impl FromStr for Growth {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Growth::Linear),
            "quadratic" => Ok(Growth::Quadratic),
            other => input(format!("unknown growth {other:?}; expected linear or quadratic")),
        }
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Growth::Linear => "linear",
            Growth::Quadratic => "quadratic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Schedule {
    FixedN(usize),
    FixedEps { eps: f64, growth: Growth },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterPlan {
    order: u8,
    schedule: Schedule,
}

impl TrotterPlan {
    pub fn new(order: u8, schedule: Schedule) -> Result<Self> {
        if order != 1 && order != 2 {
            return input(format!("Trotter order must be 1 or 2, got {order}"));
        }
        match schedule {
            Schedule::FixedN(0) => return input("step count must be at least 1"),
            Schedule::FixedEps { eps, .. } if !(eps > 0.0 && eps < 1.0) => {
                return input(format!("ε must lie in (0, 1), got {eps}"))
            }
            _ => {}
        }
        Ok(Self { order, schedule })
    }

    pub fn fixed(order: u8, n: usize) -> Result<Self> {
        Self::new(order, Schedule::FixedN(n))
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    /// Step count for a phase `δ ≥ 0`.
    pub fn steps(&self, delta: f64) -> Result<usize> {
        match self.schedule {
            Schedule::FixedN(n) => Ok(n),
            Schedule::FixedEps { eps, growth } => steps_for_phase(delta, eps, growth),
        }
    }
}

/// A compiled evolution.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionResult {
    pub circuit: Circuit,
    pub n_steps_used: usize,
    /// Dimensionless phase `δ = (coupling scale) · |t|`.
    pub phase: f64,
}

/// `max(1, ⌈δ²/2ε⌉)` (quadratic) or `max(1, ⌈δ/2ε⌉)` (linear).
pub fn steps_for_phase(delta: f64, eps: f64, growth: Growth) -> Result<usize> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return input(format!("phase must be a finite non-negative number, got {delta}"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return input(format!("ε must lie in (0, 1), got {eps}"));
    }
    let raw = match growth {
        Growth::Linear => delta / (2.0 * eps),
        Growth::Quadratic => delta * delta / (2.0 * eps),
    };
    // Guard against 20.000000000000004 rounding up to 21.
    let n = (raw - 1e-9 * raw.max(1.0)).ceil();
    Ok((n as usize).max(1))
}

/// A unit of the splitting: its exponential is compiled exactly.
#[derive(Clone, Debug)]
enum Block {
    /// `exp(-iτ (hx X + hy Y + hz Z))` on one qubit.
    Field { qubit: usize, h: [f64; 3] },
    /// `exp(-iτ (a XX + b YY + c ZZ))` on a pair.
    Bond { pair: (usize, usize), abc: [f64; 3] },
    /// `exp(-iτ h P)`.
    Term(PauliString),
}

impl Block {
    fn support(&self) -> Vec<usize> {
        match self {
            Block::Field { qubit, .. } => vec![*qubit],
            Block::Bond { pair, .. } => vec![pair.0, pair.1],
            Block::Term(p) => p.support(),
        }
    }

    fn circuit(&self, tau: f64, n: usize, set: GateSet, opts: &CompileOptions) -> Result<Circuit> {
        let c = match self {
            Block::Field { qubit, h } => single_qubit_rotation([h[0] * tau, h[1] * tau, h[2] * tau], *qubit, set)?,
            Block::Bond { pair, abc } => {
                let active: Vec<usize> = (0..3).filter(|&k| abc[k] != 0.0).collect();
                match active.as_slice() {
                    // A lone coupling is cheaper as a plain pair exponential.
                    [k] => {
                        let axis = Axis::ALL[*k];
                        decompose_pauli_pair_with(axis, axis, abc[*k] * tau, *pair, set, opts)?
                    }
                    _ => bond_circuit((abc[0] * tau, abc[1] * tau, abc[2] * tau), *pair, set, opts)?,
                }
            }
            Block::Term(p) => pauli_term_circuit(p, p.coeff.re * tau, set, opts)?,
        };
        c.widened(n)
    }
}

/// Groups terms into blocks in order of first appearance: single-qubit terms
/// merge per qubit, and XX/YY/ZZ terms on the same pair merge into a bond.
fn blocks_of(terms: &[&PauliString]) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for t in terms {
        let support = t.support();
        let c = t.coeff.re;
        match support.as_slice() {
            [q] => {
                let k = t.letter(*q).axis().expect("support letter") as usize;
                let existing = blocks.iter_mut().find_map(|b| match b {
                    Block::Field { qubit, h } if qubit == q => Some(h),
                    _ => None,
                });
                match existing {
                    Some(h) => h[k] += c,
                    None => {
                        let mut h = [0.0; 3];
                        h[k] = c;
                        blocks.push(Block::Field { qubit: *q, h });
                    }
                }
            }
            [i, j] if t.letter(*i) == t.letter(*j) => {
                let k = t.letter(*i).axis().expect("support letter") as usize;
                let existing = blocks.iter_mut().find_map(|b| match b {
                    Block::Bond { pair, abc } if *pair == (*i, *j) => Some(abc),
                    _ => None,
                });
                match existing {
                    Some(abc) => abc[k] += c,
                    None => {
                        let mut abc = [0.0; 3];
                        abc[k] = c;
                        blocks.push(Block::Bond { pair: (*i, *j), abc });
                    }
                }
            }
            _ => blocks.push(Block::Term((*t).clone())),
        }
    }
    blocks
}

fn sum_of(n: usize, terms: &[&PauliString]) -> PauliSum {
    let mut s = PauliSum::new(n);
    for t in terms {
        s.add_term((*t).clone());
    }
    s
}

fn pairwise_commuting(terms: &[&PauliString]) -> bool {
    terms.iter().enumerate().all(|(i, a)| terms[i + 1..].iter().all(|b| a.commutes(b).unwrap_or(false)))
}

/// Compiles `exp(-iHt)` into `set` with the default compile options.
pub fn trotterize(h: &PauliHamiltonian, t: f64, plan: &TrotterPlan, set: GateSet) -> Result<EvolutionResult> {
    trotterize_with(h, t, plan, set, &CompileOptions::default())
}

/// Compiles `exp(-iHt)`.
///
/// - The identity term becomes a global phase.
/// - Single-qubit terms that commute with everything else are applied once,
///   up front, with the full angle.
/// - If the remaining terms commute pairwise the splitting is exact and a
///   single step is used.
/// - Otherwise blocks are arranged in disjoint-support layers and repeated
///   `n` times (order 1), or swept forward and back with half angles on all
///   but the last block (order 2).
///
/// For negative `t` the first-order sweep runs in reverse, so evolving by
/// `t` and then by `-t` with the same plan is the identity.
pub fn trotterize_with(
    h: &PauliHamiltonian,
    t: f64,
    plan: &TrotterPlan,
    set: GateSet,
    opts: &CompileOptions,
) -> Result<EvolutionResult> {
    if h.is_empty() {
        return input("cannot evolve under an empty Hamiltonian");
    }
    if !t.is_finite() {
        return input("time must be finite");
    }
    let n = h.n_qubits();
    let mut circuit = Circuit::new(n)?;
    circuit.add_phase(-h.identity_offset() * t);

    let terms: Vec<&PauliString> = h.terms().iter().filter(|p| !p.is_identity()).collect();
    let (fields, rest): (Vec<&PauliString>, Vec<&PauliString>) = terms.iter().partition(|p| p.weight() == 1);
    let hoist =
        !fields.is_empty() && !rest.is_empty() && sum_of(n, &fields).commutator(&sum_of(n, &rest)).is_zero(1e-12);
    let split: Vec<&PauliString> = if hoist { rest.clone() } else { terms.clone() };
    if hoist {
        for b in blocks_of(&fields) {
            circuit.append(&b.circuit(t, n, set, opts)?)?;
        }
    }

    let phase = h.coupling_scale() * t.abs();
    let exact = pairwise_commuting(&split);
    let n_steps = if exact { 1 } else { plan.steps(phase)? };

    let blocks = blocks_of(&split);
    let supports: Vec<Vec<usize>> = blocks.iter().map(Block::support).collect();
    let mut ordered: Vec<&Block> = first_fit_layers(&supports).into_iter().flatten().map(|k| &blocks[k]).collect();
    // The second-order palindrome is its own reverse.
    if t < 0.0 && plan.order() == 1 {
        ordered.reverse();
    }

    let tau = t / n_steps as f64;
    let mut step = Circuit::new(n)?;
    if plan.order() == 1 || exact || ordered.len() == 1 {
        for b in &ordered {
            step.append(&b.circuit(tau, n, set, opts)?)?;
        }
    } else {
        let (last, head) = ordered.split_last().expect("non-empty");
        let halves = head.iter().map(|b| b.circuit(tau / 2.0, n, set, opts)).collect::<Result<Vec<_>>>()?;
        for c in &halves {
            step.append(c)?;
        }
        step.append(&last.circuit(tau, n, set, opts)?)?;
        for c in halves.iter().rev() {
            step.append(c)?;
        }
    }
    circuit.append(&step.repeated(n_steps))?;
    Ok(EvolutionResult { circuit, n_steps_used: n_steps, phase })
}

/// `exp(-iHt)` by Hermitian eigendecomposition.
pub fn exact_propagator(h: &PauliHamiltonian, t: f64) -> Result<DenseUnitary> {
    check_dense_size(h.n_qubits())?;
    Ok(h.to_dense::<f64>()?.hermitian_expm(t))
}

/// `|⟨ψ_exact(t)|ψ_digital(t)⟩|`.
pub fn digital_fidelity(
    psi0: &StateVector,
    h: &PauliHamiltonian,
    t: f64,
    plan: &TrotterPlan,
    set: GateSet,
) -> Result<f64> {
    if psi0.n_qubits() != h.n_qubits() {
        return input(format!("{}-qubit state does not match the {}-qubit Hamiltonian", psi0.n_qubits(), h.n_qubits()));
    }
    let u = exact_propagator(h, t)?;
    let exact = StateVector::from_amplitudes(u.matvec(psi0.amplitudes()))?;
    let mut digital = psi0.clone();
    digital.apply_circuit(&trotterize(h, t, plan, set)?.circuit)?;
    Ok(exact.inner_product(&digital)?.norm().min(1.0))
}

/// Register size up to which the commutator bound is evaluated densely.
const BOUND_MAX_QUBITS: usize = 8;

/// First-order remainder estimate `(δ²/2n) ‖[O1, O2]‖` in the spectral norm.
pub fn commutator_error_bound(o1: &PauliHamiltonian, o2: &PauliHamiltonian, delta: f64, n: usize) -> Result<f64> {
    if o1.n_qubits() != o2.n_qubits() {
        return input("operators act on different registers");
    }
    if n == 0 {
        return input("step count must be at least 1");
    }
    if o1.n_qubits() > BOUND_MAX_QUBITS {
        return Err(SimError::Resource(format!("commutator bound is limited to {BOUND_MAX_QUBITS} qubits")));
    }
    let a = o1.to_dense::<f64>()?;
    let b = o2.to_dense::<f64>()?;
    let comm = a.matmul(&b).sub(&b.matmul(&a));
    Ok(delta * delta / (2.0 * n as f64) * comm.spectral_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{circuit_unitary, equal_up_to_global_phase, heisenberg2_circuit, HeisenbergVariant};
    use crate::pauli::{heisenberg_chain, tim_chain};

    #[test]
    fn step_schedule_examples() {
        assert_eq!(steps_for_phase(2.0, 0.1, Growth::Quadratic).unwrap(), 20);
        assert_eq!(steps_for_phase(0.0, 0.1, Growth::Quadratic).unwrap(), 1);
        assert_eq!(steps_for_phase(0.0, 0.1, Growth::Linear).unwrap(), 1);
        assert_eq!(steps_for_phase(45.0, 0.1, Growth::Quadratic).unwrap(), 10125);
        assert_eq!(steps_for_phase(45.0, 0.1, Growth::Linear).unwrap(), 225);
        assert!(steps_for_phase(-1.0, 0.1, Growth::Linear).is_err());
        assert!(steps_for_phase(1.0, 1.0, Growth::Linear).is_err());
    }

    #[test]
    fn plan_validation() {
        assert!(TrotterPlan::fixed(3, 1).is_err());
        assert!(TrotterPlan::fixed(1, 0).is_err());
        assert!(TrotterPlan::new(1, Schedule::FixedEps { eps: 0.0, growth: Growth::Linear }).is_err());
    }

    #[test]
    fn commuting_heisenberg_pair_is_one_step() {
        let h = heisenberg_chain(2, &[1.0], 0.0).unwrap();
        let plan = TrotterPlan::fixed(1, 7).unwrap();
        let r = trotterize(&h, 0.8, &plan, GateSet::S1).unwrap();
        assert_eq!(r.n_steps_used, 1);
        let expected = heisenberg2_circuit(0.8, (1, 2), HeisenbergVariant::ThreeCnot).unwrap();
        assert_eq!(r.circuit, expected);
    }

    #[test]
    fn tim_step_structure() {
        let h = tim_chain(2, &[1.0, 1.0], 1.0).unwrap();
        let plan = TrotterPlan::fixed(1, 3).unwrap();
        let r = trotterize(&h, 0.9, &plan, GateSet::S1).unwrap();
        assert_eq!(r.n_steps_used, 3);
        let text: Vec<String> = r.circuit.ops()[..5].iter().map(|o| o.to_string()).collect();
        assert_eq!(text, ["RX(0.6) 1", "RX(0.6) 2", "CNOT 1 2", "RZ(0.6) 2", "CNOT 1 2"]);
        assert_eq!(r.circuit.len(), 15);
    }

    #[test]
    fn fields_are_hoisted() {
        let h = heisenberg_chain(3, &[1.0, 1.0], 20.0).unwrap();
        let plan = TrotterPlan::fixed(1, 4).unwrap();
        let r = trotterize(&h, 0.3, &plan, GateSet::S1).unwrap();
        let head: Vec<String> = r.circuit.ops()[..3].iter().map(|o| o.to_string()).collect();
        assert_eq!(head, ["RZ(6) 1", "RZ(6) 2", "RZ(6) 3"]);
        assert_eq!(r.circuit.count_kind(crate::gates::GateKind::Rz) - 3, 4 * 2 * 3);
    }

    #[test]
    fn identity_offset_is_a_phase() {
        let h = PauliHamiltonian::from_labels(1, &[(0.5, "I"), (1.0, "Z")]).unwrap();
        let plan = TrotterPlan::fixed(1, 1).unwrap();
        let r = trotterize(&h, 0.7, &plan, GateSet::S1).unwrap();
        let u = circuit_unitary(&r.circuit).unwrap();
        assert!(u.max_abs_diff(&exact_propagator(&h, 0.7).unwrap()) < 1e-14);
        assert!(equal_up_to_global_phase(&u, &exact_propagator(&h, 0.7).unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn empty_hamiltonian_is_rejected() {
        let h = heisenberg_chain(2, &[0.0], 0.0).unwrap();
        let plan = TrotterPlan::fixed(1, 1).unwrap();
        assert!(trotterize(&h, 1.0, &plan, GateSet::S1).is_err());
    }

    #[test]
    fn exact_propagator_examples() {
        let z = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
        let u = exact_propagator(&z, 0.4).unwrap();
        assert!((u.get(0, 0) - num_complex::Complex64::from_polar(1.0, -0.4)).norm() < 1e-14);
        assert!((u.get(1, 1) - num_complex::Complex64::from_polar(1.0, 0.4)).norm() < 1e-14);
        let id = exact_propagator(&heisenberg_chain(3, &[1.0, 0.5], 1.0).unwrap(), 0.0).unwrap();
        assert!(id.max_abs_diff(&crate::dense::DenseMatrix::identity(8)) < 1e-14);
    }

    #[test]
    fn commutator_bound_examples() {
        let x = PauliHamiltonian::from_labels(1, &[(1.0, "X")]).unwrap();
        let z = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
        let b = commutator_error_bound(&x, &z, 2.0, 4).unwrap();
        assert!((b - 1.0).abs() < 1e-12);
        assert!((commutator_error_bound(&x, &z, 2.0, 8).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(commutator_error_bound(&z, &z, 2.0, 4).unwrap(), 0.0);
        let big = PauliHamiltonian::from_labels(9, &[(1.0, "ZZZZZZZZZ")]).unwrap();
        assert!(matches!(commutator_error_bound(&big, &big, 1.0, 1), Err(SimError::Resource(_))));
    }
}
