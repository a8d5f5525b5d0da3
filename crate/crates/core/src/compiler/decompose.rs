//! Lowering of Pauli exponentials `exp(-i δ P)` into native gate sets.
//!
//! Every construction is exact, global phase included: whatever scalar phase
//! a construction leaves behind is recorded in `Circuit::global_phase`.
//!
//! Axis changes use `R_c(π/2) σ_a R_c(-π/2) = σ_{c×a}`. To realize a term on
//! axis `a` from a core on axis `t`, the circuit applies `W†`, the core, then
//! `W`, where `W σ_t W† = σ_a`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use super::{Circuit, GateSet};
use crate::error::{input, Result, SimError};
use crate::gates::{Axis, GateOp};
use crate::pauli::{Pauli, PauliString};

/// Circuit templates for a two-qubit Heisenberg-type bond.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeisenbergVariant {
    /// XX, YY and ZZ blocks of two CNOTs each.
    SixCnot,
    /// Canonical three-CNOT circuit.
    ThreeCnot,
    /// Three `U_xy` gates in rotated frames.
    ThreeUxy,
    /// XX, YY and ZZ blocks built from controlled phases.
    ThreeCphase,
    /// Mølmer-Sørensen sequence `T4(c,0)` in a rotated frame, `T4(b,π/2)`,
    /// `T4(a,0)`.
    S4,
}

impl HeisenbergVariant {
    pub const ALL: [HeisenbergVariant; 5] = [
        HeisenbergVariant::SixCnot,
        HeisenbergVariant::ThreeCnot,
        HeisenbergVariant::ThreeUxy,
        HeisenbergVariant::ThreeCphase,
        HeisenbergVariant::S4,
    ];

    pub fn gate_set(self) -> GateSet {
        match self {
            HeisenbergVariant::SixCnot | HeisenbergVariant::ThreeCnot => GateSet::S1,
            HeisenbergVariant::ThreeUxy => GateSet::S2,
            HeisenbergVariant::ThreeCphase => GateSet::S3,
            HeisenbergVariant::S4 => GateSet::S4,
        }
    }

    /// Default variant for a gate set.
    pub fn for_set(set: GateSet) -> Self {
        match set {
            GateSet::S1 => HeisenbergVariant::ThreeCnot,
            GateSet::S2 => HeisenbergVariant::ThreeUxy,
            GateSet::S3 => HeisenbergVariant::ThreeCphase,
            GateSet::S4 => HeisenbergVariant::S4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HeisenbergVariant::SixCnot => "6cnot",
            HeisenbergVariant::ThreeCnot => "3cnot",
            HeisenbergVariant::ThreeUxy => "3uxy",
            HeisenbergVariant::ThreeCphase => "3cphase",
            HeisenbergVariant::S4 => "s4",
        }
    }
}

impl FromStr for HeisenbergVariant {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        HeisenbergVariant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            SimError::Input(format!("unknown Heisenberg variant {s:?}; expected 6cnot, 3cnot, 3uxy, 3cphase or s4"))
        })
    }
}

impl fmt::Display for HeisenbergVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs for the lowering passes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompileOptions {
    /// Smallest controlled-phase angle the hardware accepts. Below it (or for
    /// negative phases) ZZ uses the two-CΦ form.
    pub cphase_floor: f64,
    /// Bond template; `None` picks the default of the gate set.
    pub heisenberg_variant: Option<HeisenbergVariant>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { cphase_floor: 0.0, heisenberg_variant: None }
    }
}

impl CompileOptions {
    fn variant_for(&self, set: GateSet) -> Result<HeisenbergVariant> {
        match self.heisenberg_variant {
            None => Ok(HeisenbergVariant::for_set(set)),
            Some(v) if v.gate_set() == set => Ok(v),
            Some(v) => input(format!("variant {v} does not compile to gate set {set}")),
        }
    }
}

/// Single-qubit rotation `R_axis(θ)` in the native form of `set`.
fn rot(set: GateSet, axis: Axis, theta: f64, q: usize) -> GateOp {
    match (set, axis) {
        (GateSet::S4, Axis::Z) => GateOp::ms_t1(theta / 2.0, q),
        (GateSet::S4, Axis::X) => GateOp::ms_t3(theta / 2.0, 0.0, vec![q]),
        (GateSet::S4, Axis::Y) => GateOp::ms_t3(theta / 2.0, FRAC_PI_2, vec![q]),
        _ => GateOp::rotation(axis, theta, q),
    }
}

/// `W = R_c(±π/2)` with `W σ_from W† = σ_to`, as `(c, angle)`.
fn frame(from: Axis, to: Axis) -> Option<(Axis, f64)> {
    if from == to {
        return None;
    }
    let c = from.third(to);
    let (sign, _) = c.cross(from).expect("orthogonal axes");
    Some((c, sign * FRAC_PI_2))
}

/// Appends `W†` (when `forward`) or `W` for each qubit's frame.
fn push_frames(c: &mut Circuit, set: GateSet, core: &[(Axis, Axis, usize)], forward: bool) {
    for &(from, to, q) in core {
        if let Some((axis, angle)) = frame(from, to) {
            let angle = if forward { -angle } else { angle };
            c.push_op(rot(set, axis, angle, q));
        }
    }
}

fn check_pair(i: usize, j: usize, delta: f64) -> Result<()> {
    if i == 0 || j == 0 {
        return input("qubit labels are 1-based");
    }
    if i == j {
        return input(format!("pair term needs two distinct qubits, got ({i}, {j})"));
    }
    if !delta.is_finite() {
        return input("phase must be finite");
    }
    Ok(())
}

/// `exp(-i δ σ_α^(i) σ_β^(j))` over `set`.
pub fn decompose_pauli_pair(
    alpha: Axis,
    beta: Axis,
    delta: f64,
    qubits: (usize, usize),
    set: GateSet,
) -> Result<Circuit> {
    decompose_pauli_pair_with(alpha, beta, delta, qubits, set, &CompileOptions::default())
}

pub fn decompose_pauli_pair_with(
    alpha: Axis,
    beta: Axis,
    delta: f64,
    (i, j): (usize, usize),
    set: GateSet,
    opts: &CompileOptions,
) -> Result<Circuit> {
    check_pair(i, j, delta)?;
    let mut c = Circuit::new(i.max(j))?;
    let core_axis = match set {
        GateSet::S1 | GateSet::S3 => Axis::Z,
        GateSet::S2 | GateSet::S4 => Axis::X,
    };
    let frames = [(core_axis, alpha, i), (core_axis, beta, j)];
    push_frames(&mut c, set, &frames, true);
    match set {
        GateSet::S1 => zz_cnot(&mut c, delta, i, j),
        GateSet::S2 => xx_uxy(&mut c, delta, i, j),
        GateSet::S3 => zz_cphase(&mut c, delta, i, j, opts.cphase_floor),
        GateSet::S4 => c.push_op(GateOp::ms_t4(delta, 0.0, vec![i, j])),
    }
    push_frames(&mut c, set, &frames, false);
    Ok(c)
}

/// `ZZ(δ) = CNOT · R_z^(j)(2δ) · CNOT`.
fn zz_cnot(c: &mut Circuit, delta: f64, i: usize, j: usize) {
    c.push_op(GateOp::cnot(i, j));
    c.push_op(GateOp::rz(2.0 * delta, j));
    c.push_op(GateOp::cnot(i, j));
}

/// `XX(δ) = X_i U_xy(δ/2) X_i · U_xy(δ/2)`: conjugating by `X_i` flips the
/// sign of the YY half, so the two halves combine into pure XX.
fn xx_uxy(c: &mut Circuit, delta: f64, i: usize, j: usize) {
    c.push_op(GateOp::uxy(delta / 2.0, i, j));
    c.push_op(GateOp::rx(PI, i));
    c.push_op(GateOp::uxy(delta / 2.0, i, j));
    c.push_op(GateOp::rx(-PI, i));
}

/// `ZZ(δ) = e^{-is} R_z^(i)(2δ) R_z^(j)(-2s) CΦ(φ1) X_i CΦ(φ2) X_i` with
/// `φ2 - φ1 = 4δ` and `s = (φ1 + φ2)/4`. The single-CΦ form takes `φ1 = 0`;
/// otherwise both angles are lifted to at least `floor`.
fn zz_cphase(c: &mut Circuit, delta: f64, i: usize, j: usize, floor: f64) {
    let single = delta >= 0.0 && 4.0 * delta >= floor;
    let phi1 = if single { 0.0 } else { floor.max(0.0) + (-4.0 * delta).max(0.0) };
    let phi2 = phi1 + 4.0 * delta;
    let s = (phi1 + phi2) / 4.0;
    c.push_op(GateOp::rx(PI, i));
    c.push_op(GateOp::cphase(phi2, i, j));
    c.push_op(GateOp::rx(-PI, i));
    if !single {
        c.push_op(GateOp::cphase(phi1, i, j));
    }
    c.push_op(GateOp::rz(2.0 * delta, i));
    c.push_op(GateOp::rz(-2.0 * s, j));
    c.add_phase(-s);
}

/// `exp(-i δ ⊗_k σ_{α_k})` on three or more qubits.
pub fn decompose_multi_pauli(axes: &[Axis], delta: f64, qubits: &[usize], set: GateSet) -> Result<Circuit> {
    decompose_multi_pauli_with(axes, delta, qubits, set, &CompileOptions::default())
}

pub fn decompose_multi_pauli_with(
    axes: &[Axis],
    delta: f64,
    qubits: &[usize],
    set: GateSet,
    opts: &CompileOptions,
) -> Result<Circuit> {
    if qubits.len() < 3 {
        return input("multi-qubit terms need at least three qubits; use the pair decomposition");
    }
    if axes.len() != qubits.len() {
        return input(format!("{} axes given for {} qubits", axes.len(), qubits.len()));
    }
    if !delta.is_finite() {
        return input("phase must be finite");
    }
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    if sorted[0] == 0 || sorted.windows(2).any(|w| w[0] == w[1]) {
        return input("qubits must be distinct 1-based labels");
    }
    let mut c = Circuit::new(sorted[sorted.len() - 1])?;
    match set {
        GateSet::S1 => {
            let frames: Vec<_> = axes.iter().zip(qubits).map(|(&a, &q)| (Axis::Z, a, q)).collect();
            push_frames(&mut c, set, &frames, true);
            for w in qubits.windows(2) {
                c.push_op(GateOp::cnot(w[0], w[1]));
            }
            c.push_op(GateOp::rz(2.0 * delta, qubits[qubits.len() - 1]));
            for w in qubits.windows(2).rev() {
                c.push_op(GateOp::cnot(w[0], w[1]));
            }
            push_frames(&mut c, set, &frames, false);
        }
        _ => star(&mut c, axes, delta, qubits, set, opts)?,
    }
    Ok(c)
}

/// Star construction around the first qubit. With
/// `V = Π_j exp(-iπ/4 X_1 X_j)`, `V† Z_1 V = s · L_1 X_2 ⋯ X_m` for a sign
/// `s` and `L_1 ∈ {Y, Z}`, so a frame change `F` onto the requested axes gives
/// `exp(-iδ P) = F V† exp(-i (δ/s) Z_1) V F†`.
fn star(
    c: &mut Circuit,
    axes: &[Axis],
    delta: f64,
    qubits: &[usize],
    set: GateSet,
    opts: &CompileOptions,
) -> Result<()> {
    let m = qubits.len();
    let n = c.n_qubits();
    let q1 = qubits[0];

    // Conjugate Z_1 through each generator symbolically.
    let mut p = PauliString::from_sparse(m, 1.0, &[(1, Pauli::Z)])?;
    for k in 2..=m {
        let g = PauliString::from_sparse(m, 1.0, &[(1, Pauli::X), (k, Pauli::X)])?;
        if !p.commutes(&g)? {
            let minus_i_g = g.with_coeff(num_complex::Complex64::new(0.0, -1.0));
            p = p.mul(&minus_i_g);
        }
    }
    debug_assert!(p.coeff.im.abs() < 1e-12);
    let sign = p.coeff.re.signum();

    let mut v = Circuit::new(n)?;
    if set == GateSet::S4 {
        v.push_op(GateOp::ms_t4(FRAC_PI_4, 0.0, qubits.to_vec()));
    } else {
        for &qj in &qubits[1..] {
            let xx = decompose_pauli_pair_with(Axis::X, Axis::X, FRAC_PI_4, (q1, qj), set, opts)?;
            v.append(&xx)?;
        }
    }

    let frames: Vec<_> = p
        .letters()
        .iter()
        .zip(axes)
        .zip(qubits)
        .map(|((l, &a), &q)| (l.axis().expect("non-identity letter"), a, q))
        .collect();
    push_frames(c, set, &frames, true);
    c.append(&v)?;
    c.push_op(rot(set, Axis::Z, 2.0 * delta / sign, q1));
    c.append(&v.inverse())?;
    push_frames(c, set, &frames, false);
    Ok(())
}

/// `exp(-i (a XX + b YY + c ZZ))` on `(i, j)`.
pub fn bond_circuit(
    (a, b, cz): (f64, f64, f64),
    (i, j): (usize, usize),
    set: GateSet,
    opts: &CompileOptions,
) -> Result<Circuit> {
    check_pair(i, j, a + b + cz)?;
    let variant = opts.variant_for(set)?;
    bond_variant((a, b, cz), (i, j), variant, opts)
}

fn bond_variant(
    (a, b, cz): (f64, f64, f64),
    (i, j): (usize, usize),
    variant: HeisenbergVariant,
    opts: &CompileOptions,
) -> Result<Circuit> {
    let mut c = Circuit::new(i.max(j))?;
    match variant {
        HeisenbergVariant::SixCnot | HeisenbergVariant::ThreeCphase => {
            let set = variant.gate_set();
            for (axis, d) in [(Axis::X, a), (Axis::Y, b), (Axis::Z, cz)] {
                c.append(&decompose_pauli_pair_with(axis, axis, d, (i, j), set, opts)?)?;
            }
        }
        HeisenbergVariant::ThreeCnot => {
            c.push_op(GateOp::rz(FRAC_PI_2, j));
            c.push_op(GateOp::cnot(j, i));
            c.push_op(GateOp::rz(2.0 * cz + FRAC_PI_2, i));
            c.push_op(GateOp::ry(2.0 * a + FRAC_PI_2, j));
            c.push_op(GateOp::cnot(i, j));
            c.push_op(GateOp::ry(-2.0 * b - FRAC_PI_2, j));
            c.push_op(GateOp::cnot(j, i));
            c.push_op(GateOp::rz(-FRAC_PI_2, i));
            c.add_phase(FRAC_PI_4);
        }
        HeisenbergVariant::ThreeUxy => {
            // aXX + bYY + cZZ = p(XX+YY) + q(XX+ZZ) + r(YY+ZZ).
            let p = (a + b - cz) / 2.0;
            let q = (a - b + cz) / 2.0;
            let r = (-a + b + cz) / 2.0;
            c.push_op(GateOp::uxy(p, i, j));
            // Rx(π/2) takes YY to ZZ.
            c.push_op(GateOp::rx(-FRAC_PI_2, i));
            c.push_op(GateOp::rx(-FRAC_PI_2, j));
            c.push_op(GateOp::uxy(q, i, j));
            c.push_op(GateOp::rx(FRAC_PI_2, i));
            c.push_op(GateOp::rx(FRAC_PI_2, j));
            // Ry(-π/2) takes XX to ZZ.
            c.push_op(GateOp::ry(FRAC_PI_2, i));
            c.push_op(GateOp::ry(FRAC_PI_2, j));
            c.push_op(GateOp::uxy(r, i, j));
            c.push_op(GateOp::ry(-FRAC_PI_2, i));
            c.push_op(GateOp::ry(-FRAC_PI_2, j));
        }
        HeisenbergVariant::S4 => {
            // C = T3(π/4, π/2) = Ry(π/2)⊗Ry(π/2) maps XX to ZZ.
            c.push_op(GateOp::ms_t3(-FRAC_PI_4, FRAC_PI_2, vec![i, j]));
            c.push_op(GateOp::ms_t4(cz, 0.0, vec![i, j]));
            c.push_op(GateOp::ms_t3(FRAC_PI_4, FRAC_PI_2, vec![i, j]));
            c.push_op(GateOp::ms_t4(b, FRAC_PI_2, vec![i, j]));
            c.push_op(GateOp::ms_t4(a, 0.0, vec![i, j]));
        }
    }
    Ok(c)
}

/// `exp(-i δ (XX + YY + ZZ))` on `(i, j)` with the given template.
pub fn heisenberg2_circuit(delta: f64, (i, j): (usize, usize), variant: HeisenbergVariant) -> Result<Circuit> {
    check_pair(i, j, delta)?;
    bond_variant((delta, delta, delta), (i, j), variant, &CompileOptions::default())
}

/// `exp(-i (hx X + hy Y + hz Z))` on qubit `q`.
pub fn single_qubit_rotation(field: [f64; 3], q: usize, set: GateSet) -> Result<Circuit> {
    if q == 0 {
        return input("qubit labels are 1-based");
    }
    let mut c = Circuit::new(q)?;
    let nonzero: Vec<usize> = (0..3).filter(|&k| field[k] != 0.0).collect();
    match nonzero.as_slice() {
        [] => {}
        [k] => c.push_op(rot(set, Axis::ALL[*k], 2.0 * field[*k], q)),
        _ => {
            let [hx, hy, hz] = field;
            let norm = (hx * hx + hy * hy + hz * hz).sqrt();
            let beta = (hz / norm).clamp(-1.0, 1.0).acos();
            let phi = hy.atan2(hx);
            // n·σ = R σ_z R† with R = Rz(φ) Ry(β).
            c.push_op(rot(set, Axis::Z, -phi, q));
            c.push_op(rot(set, Axis::Y, -beta, q));
            c.push_op(rot(set, Axis::Z, 2.0 * norm, q));
            c.push_op(rot(set, Axis::Y, beta, q));
            c.push_op(rot(set, Axis::Z, phi, q));
        }
    }
    Ok(c)
}

/// `exp(-i δ P)` for an arbitrary Pauli string (its coefficient is ignored),
/// on a register of `n_qubits`.
pub fn pauli_term_circuit(p: &PauliString, delta: f64, set: GateSet, opts: &CompileOptions) -> Result<Circuit> {
    let n = p.n_qubits();
    let support = p.support();
    let axes: Vec<Axis> = support.iter().map(|&q| p.letter(q).axis().expect("support letter")).collect();
    let body = match support.len() {
        0 => {
            let mut c = Circuit::new(n)?;
            c.add_phase(-delta);
            c
        }
        1 => {
            let mut field = [0.0; 3];
            field[axes[0] as usize] = delta;
            single_qubit_rotation(field, support[0], set)?
        }
        2 => decompose_pauli_pair_with(axes[0], axes[1], delta, (support[0], support[1]), set, opts)?,
        _ => decompose_multi_pauli_with(&axes, delta, &support, set, opts)?,
    };
    body.widened(n)
}
