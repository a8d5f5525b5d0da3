//! Machine check of the gate and compiler identities against dense oracles.

use std::f64::consts::PI;

use digiq::compiler::{
    circuit_unitary_with, decompose_multi_pauli, decompose_pauli_pair, heisenberg2_circuit, phase_aligned_distance,
    HeisenbergVariant,
};
use digiq::gates::{pauli_matrix, pauli_pair_exponential, Arity};
use digiq::pauli::{heisenberg_chain, PauliString};
use digiq::{Axis, Circuit, DenseMatrix, DenseUnitary, GateKind, GateOp, GateSet, StateVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Agreement required of every exact identity.
pub const TOLERANCE: f64 = 1e-10;

const SAMPLES: usize = 25;
const SEED: u64 = 2024;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, max_error: f64) -> Self {
        Self { name: name.into(), max_error, passed: max_error <= TOLERANCE }
    }
}

/// Source of local gate matrices; the default is [`GateOp::matrix`].
pub type GateMatrices<'a> = &'a dyn Fn(&GateOp) -> DenseMatrix<f64>;

fn unitary(c: &Circuit, matrices: GateMatrices) -> DenseUnitary {
    circuit_unitary_with(c, matrices).expect("small circuit")
}

fn distance(c: &Circuit, target: &DenseUnitary, matrices: GateMatrices) -> f64 {
    let c = c.widened(target.dim().trailing_zeros() as usize).expect("fits register");
    phase_aligned_distance(&unitary(&c, matrices), target).expect("same size")
}

fn deltas(rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..SAMPLES).map(|_| rng.gen_range(-PI..PI)).collect()
}

fn kron_all(ms: &[DenseMatrix<f64>]) -> DenseMatrix<f64> {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kron(m))
}

/// `exp(-iδ P)` for a Pauli product `P` with `P² = I`.
fn pauli_exponential(p: &DenseMatrix<f64>, delta: f64) -> DenseUnitary {
    let id = DenseMatrix::identity(p.dim());
    id.scale(Complex64::new(delta.cos(), 0.0)).add(&p.scale(Complex64::new(0.0, -delta.sin())))
}

fn pair_checks(matrices: GateMatrices, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut checks = Vec::new();
    for set in GateSet::ALL {
        let mut all_pairs: f64 = 0.0;
        let mut zz: f64 = 0.0;
        for alpha in Axis::ALL {
            for beta in Axis::ALL {
                for delta in deltas(rng) {
                    let c = decompose_pauli_pair(alpha, beta, delta, (1, 2), set).expect("valid pair");
                    let err = distance(&c, &pauli_pair_exponential(alpha, beta, delta), matrices);
                    all_pairs = all_pairs.max(err);
                    if alpha == Axis::Z && beta == Axis::Z {
                        zz = zz.max(err);
                    }
                }
            }
        }
        checks.push(Check::new(format!("ZZ decomposition ({set})"), zz));
        checks.push(Check::new(format!("pair decompositions, 9 axis pairs ({set})"), all_pairs));
    }
    checks
}

fn heisenberg_checks(matrices: GateMatrices, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let h = heisenberg_chain(2, &[1.0], 0.0).expect("two-spin chain");
    let dense = h.to_dense::<f64>().expect("small");
    let mut checks = Vec::new();
    let ds = deltas(rng);
    for variant in HeisenbergVariant::ALL {
        let mut err: f64 = 0.0;
        for &delta in &ds {
            let c = heisenberg2_circuit(delta, (1, 2), variant).expect("valid bond");
            err = err.max(distance(&c, &dense.hermitian_expm(delta), matrices));
        }
        checks.push(Check::new(format!("Heisenberg bond, {variant} variant"), err));
    }
    let count = |variant, kind| heisenberg2_circuit(0.3, (1, 2), variant).expect("valid bond").count_kind(kind);
    let expected = [
        ("6-CNOT count", HeisenbergVariant::SixCnot, GateKind::Cnot, 6),
        ("3-CNOT count", HeisenbergVariant::ThreeCnot, GateKind::Cnot, 3),
        ("3-Uxy count", HeisenbergVariant::ThreeUxy, GateKind::Uxy, 3),
        ("S4 collective T4 count", HeisenbergVariant::S4, GateKind::MsT4, 3),
    ];
    for (name, variant, kind, n) in expected {
        let got = count(variant, kind);
        checks.push(Check::new(format!("{name} (got {got})"), got.abs_diff(n) as f64));
    }
    checks
}

fn multi_pauli_checks(matrices: GateMatrices, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut checks = Vec::new();
    for set in GateSet::ALL {
        let mut err: f64 = 0.0;
        for a in Axis::ALL {
            for b in Axis::ALL {
                for c in Axis::ALL {
                    let delta = rng.gen_range(-PI..PI);
                    let circuit = decompose_multi_pauli(&[a, b, c], delta, &[1, 2, 3], set).expect("valid term");
                    let p = kron_all(&[pauli_matrix(a), pauli_matrix(b), pauli_matrix(c)]);
                    err = err.max(distance(&circuit, &pauli_exponential(&p, delta), matrices));
                }
            }
        }
        checks.push(Check::new(format!("three-qubit Pauli exponentials ({set})"), err));
    }
    checks
}

fn random_gate(kind: GateKind, rng: &mut ChaCha8Rng) -> GateOp {
    let params: Vec<f64> = (0..kind.param_count()).map(|_| rng.gen_range(-PI..PI)).collect();
    let width = match kind.arity() {
        Arity::Exactly(k) => k,
        Arity::AtLeast(k) => k.max(3),
    };
    GateOp::new(kind, params, (1..=width).collect()).expect("valid gate")
}

fn gate_checks(matrices: GateMatrices, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut unitarity: f64 = 0.0;
    let mut inverse: f64 = 0.0;
    for kind in GateKind::ALL {
        for _ in 0..SAMPLES {
            let g = random_gate(kind, rng);
            let m = matrices(&g);
            unitarity = unitarity.max(m.unitarity_error());
            let product = matrices(&g.inverse()).matmul(&m);
            inverse = inverse.max(product.max_abs_diff(&DenseMatrix::identity(m.dim())));
        }
    }
    vec![Check::new("gate matrices are unitary", unitarity), Check::new("gate inverses", inverse)]
}

fn kernel_check(matrices: GateMatrices, rng: &mut ChaCha8Rng) -> Check {
    let n = 5;
    let mut c = Circuit::new(n).expect("register");
    for _ in 0..60 {
        let kind = GateKind::ALL[rng.gen_range(0..GateKind::ALL.len())];
        let mut g = random_gate(kind, rng);
        let mut qubits: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, rng.gen_range(0..=i));
        }
        g.targets = qubits[..g.targets.len()].to_vec();
        c.push(g).expect("fits register");
    }
    let mut psi = StateVector::<f64>::zero_state(n).expect("register");
    psi.apply_circuit(&c).expect("valid circuit");
    let dense = unitary(&c, matrices).matvec(StateVector::<f64>::zero_state(n).expect("register").amplitudes());
    let err = psi.amplitudes().iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Check::new("statevector kernel vs dense product (5 qubits)", err)
}

fn text_round_trip(rng: &mut ChaCha8Rng) -> Check {
    let h = heisenberg_chain(3, &[1.0, 0.5], 2.0).expect("chain");
    let p = PauliString::parse("XYZ").expect("label");
    let mut c = Circuit::new(3).expect("register");
    for term in h.terms().iter().chain([&p]) {
        let delta = rng.gen_range(-PI..PI);
        let piece =
            digiq::compiler::pauli_term_circuit(term, delta, GateSet::S1, &Default::default()).expect("valid term");
        c.append(&piece).expect("same register");
    }
    let ok = Circuit::parse(&c.to_text()).map(|back| back == c).unwrap_or(false);
    Check::new("circuit text round trip", if ok { 0.0 } else { 1.0 })
}

/// Runs every check with the given gate matrices.
pub fn verify_suite_with(matrices: GateMatrices) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = gate_checks(matrices, &mut rng);
    checks.extend(pair_checks(matrices, &mut rng));
    checks.extend(heisenberg_checks(matrices, &mut rng));
    checks.extend(multi_pauli_checks(matrices, &mut rng));
    checks.push(kernel_check(matrices, &mut rng));
    checks.push(text_round_trip(&mut rng));
    checks
}

pub fn verify_suite() -> Vec<Check> {
    verify_suite_with(&|g: &GateOp| g.matrix())
}

/// One line per check, `PASS`/`FAIL`, name and max error.
pub fn report(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:<52} max error {:.3e}\n", c.name, c.max_error));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    out
}
