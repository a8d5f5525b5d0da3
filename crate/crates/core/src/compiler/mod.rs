//! Circuits, hardware gate sets and the lowering of Pauli exponentials into
//! gate sequences.
//!
//! A circuit lists gates in temporal order: the first op acts first, so the
//! circuit unitary is `e^{i φ} · U_last ⋯ U_first`.

mod decompose;

pub use decompose::{
    bond_circuit, decompose_multi_pauli, decompose_multi_pauli_with, decompose_pauli_pair, decompose_pauli_pair_with,
    heisenberg2_circuit, pauli_term_circuit, single_qubit_rotation, CompileOptions, HeisenbergVariant,
};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::dense::{DenseMatrix, DenseUnitary, MAX_DENSE_QUBITS};
use crate::error::{input, Result, SimError};
use crate::gates::{GateKind, GateOp};

/// Universal gate sets targeted by the compiler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateSet {
    /// Rotations and CNOT.
    S1,
    /// Rotations and the XY exchange gate `U_xy`.
    S2,
    /// Rotations and the controlled phase.
    S3,
    /// Trapped-ion family T1–T4.
    S4,
}

impl GateSet {
    pub const ALL: [GateSet; 4] = [GateSet::S1, GateSet::S2, GateSet::S3, GateSet::S4];

    pub fn contains(self, kind: GateKind) -> bool {
        use GateKind::*;
        match self {
            GateSet::S1 => matches!(kind, Rx | Ry | Rz | Cnot),
            GateSet::S2 => matches!(kind, Rx | Ry | Rz | Uxy),
            GateSet::S3 => matches!(kind, Rx | Ry | Rz | CPhase),
            GateSet::S4 => matches!(kind, MsT1 | MsT2 | MsT3 | MsT4),
        }
    }

    /// The gate kind that carries the entanglement in this set.
    pub fn entangler(self) -> GateKind {
        match self {
            GateSet::S1 => GateKind::Cnot,
            GateSet::S2 => GateKind::Uxy,
            GateSet::S3 => GateKind::CPhase,
            GateSet::S4 => GateKind::MsT4,
        }
    }
}

impl FromStr for GateSet {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S1" => Ok(GateSet::S1),
            "S2" => Ok(GateSet::S2),
            "S3" => Ok(GateSet::S3),
            "S4" => Ok(GateSet::S4),
            other => input(format!("unknown gate set {other:?}; expected S1, S2, S3 or S4")),
        }
    }
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateSet::S1 => "S1",
            GateSet::S2 => "S2",
            GateSet::S3 => "S3",
            GateSet::S4 => "S4",
        };
        f.write_str(s)
    }
}

/// An ordered gate list on a fixed register plus an accumulated global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return input("a circuit needs at least one qubit");
        }
        Ok(Self { n_qubits, ops: Vec::new(), global_phase: 0.0 })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_phase(&mut self, phi: f64) {
        self.global_phase += phi;
    }

    /// Appends a gate after checking that it fits the register.
    pub fn push(&mut self, op: GateOp) -> Result<()> {
        let op = GateOp::controlled(op.kind, op.params, op.targets, op.controls)?;
        if let Some(q) = op.qubits().find(|&q| q > self.n_qubits) {
            return input(format!("{} addresses qubit {q} outside 1..={}", op.kind, self.n_qubits));
        }
        self.ops.push(op);
        Ok(())
    }

    /// Appends gates produced internally, which are valid by construction.
    pub(crate) fn push_op(&mut self, op: GateOp) {
        debug_assert!(op.qubits().all(|q| q >= 1 && q <= self.n_qubits));
        self.ops.push(op);
    }

    /// Appends all gates of `other` (which may act on a smaller register).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return input(format!("cannot append a {}-qubit circuit to a {}-qubit one", other.n_qubits, self.n_qubits));
        }
        self.ops.extend_from_slice(&other.ops);
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// The same gates on a register of `n_qubits` (at least the current size).
    pub fn widened(&self, n_qubits: usize) -> Result<Circuit> {
        if n_qubits < self.n_qubits {
            return input("cannot shrink a circuit register");
        }
        Ok(Circuit { n_qubits, ..self.clone() })
    }

    /// The circuit repeated `times` times.
    pub fn repeated(&self, times: usize) -> Circuit {
        let mut out = Circuit {
            n_qubits: self.n_qubits,
            ops: Vec::with_capacity(self.ops.len() * times),
            global_phase: self.global_phase * times as f64,
        };
        for _ in 0..times {
            out.ops.extend_from_slice(&self.ops);
        }
        out
    }

    /// The exact inverse: reversed order, each gate inverted, phase negated.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
            global_phase: -self.global_phase,
        }
    }

    /// Every gate conditioned on `control`; the global phase becomes a phase
    /// gate on the control qubit. `control` must be outside the gates' support.
    pub fn controlled(&self, control: usize) -> Result<Circuit> {
        let n_qubits = self.n_qubits.max(control);
        let mut out = Circuit::new(n_qubits)?;
        for op in &self.ops {
            out.ops.push(op.with_control(control)?);
        }
        if self.global_phase != 0.0 {
            out.ops.push(GateOp::phase(self.global_phase, control));
        }
        Ok(out)
    }

    /// Number of gates touching two or more qubits.
    pub fn two_qubit_count(&self) -> usize {
        self.ops.iter().filter(|op| op.width() >= 2).count()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|op| op.kind == kind).count()
    }

    /// Whether every gate belongs to `set` and carries no extra controls.
    pub fn uses_only(&self, set: GateSet) -> bool {
        self.ops.iter().all(|op| op.controls.is_empty() && set.contains(op.kind))
    }

    /// Serializes to the line format parsed by [`Circuit::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the line format:
    ///
    /// ```text
    /// qubits 3
    /// RZ(0.5) 2
    /// CNOT 1 2
    /// RX(0.1) 3 ctrl 1
    /// phase -0.25
    /// ```
    ///
    /// Blank lines and `#` comments are ignored. The `qubits` line is
    /// required; `phase` lines add to the global phase.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: SimError| match e {
                SimError::Input(m) => SimError::Input(format!("line {}: {m}", lineno + 1)),
                other => other,
            };
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            match head {
                "qubits" => {
                    if circuit.is_some() {
                        return Err(at(SimError::Input("repeated `qubits` line".into())));
                    }
                    let n = parse_number::<usize>(words.next(), "qubit count").map_err(at)?;
                    circuit = Some(Circuit::new(n).map_err(at)?);
                }
                "phase" => {
                    let c =
                        circuit.as_mut().ok_or_else(|| at(SimError::Input("`qubits` line must come first".into())))?;
                    c.global_phase += parse_number::<f64>(words.next(), "phase").map_err(at)?;
                }
                _ => {
                    let c =
                        circuit.as_mut().ok_or_else(|| at(SimError::Input("`qubits` line must come first".into())))?;
                    let op = parse_op(line).map_err(at)?;
                    c.push(op).map_err(at)?;
                }
            }
        }
        circuit.ok_or_else(|| SimError::Input("circuit text has no `qubits` line".into()))
    }
}

fn parse_number<N: FromStr>(word: Option<&str>, what: &str) -> Result<N> {
    let w = word.ok_or_else(|| SimError::Input(format!("missing {what}")))?;
    w.parse().map_err(|_| SimError::Input(format!("invalid {what} {w:?}")))
}

fn parse_op(line: &str) -> Result<GateOp> {
    let (head, rest) = match line.find(')') {
        Some(close) if line[..close].contains('(') => (&line[..=close], &line[close + 1..]),
        _ => line.split_at(line.find(char::is_whitespace).unwrap_or(line.len())),
    };
    let (name, params) = match head.find('(') {
        Some(open) => {
            let inner = head[open + 1..head.len() - 1].trim();
            let params = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|p| parse_number::<f64>(Some(p.trim()), "parameter"))
                    .collect::<Result<Vec<_>>>()?
            };
            (&head[..open], params)
        }
        None => (head, Vec::new()),
    };
    let kind: GateKind = name.trim().parse()?;
    let mut targets = Vec::new();
    let mut controls = Vec::new();
    let mut in_controls = false;
    for w in rest.split_whitespace() {
        if w == "ctrl" {
            in_controls = true;
            continue;
        }
        let q = parse_number::<usize>(Some(w), "qubit")?;
        if in_controls {
            controls.push(q);
        } else {
            targets.push(q);
        }
    }
    GateOp::controlled(kind, params, targets, controls)
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        writeln!(f, "phase {}", self.global_phase)
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", ps.join(","))?;
        }
        for q in &self.targets {
            write!(f, " {q}")?;
        }
        if !self.controls.is_empty() {
            write!(f, " ctrl")?;
            for q in &self.controls {
                write!(f, " {q}")?;
            }
        }
        Ok(())
    }
}

/// Dense unitary of a circuit, built by multiplying explicit embeddings of
/// every gate. Independent of the statevector kernel.
pub fn circuit_unitary(c: &Circuit) -> Result<DenseUnitary> {
    circuit_unitary_with(c, |op| op.matrix())
}

/// As [`circuit_unitary`], taking each gate's local matrix from `matrix_of`.
pub fn circuit_unitary_with(c: &Circuit, matrix_of: impl Fn(&GateOp) -> DenseMatrix<f64>) -> Result<DenseUnitary> {
    if c.n_qubits > MAX_DENSE_QUBITS {
        return Err(SimError::Resource(format!(
            "circuit unitary of {} qubits exceeds the {MAX_DENSE_QUBITS}-qubit limit",
            c.n_qubits
        )));
    }
    let mut u = DenseMatrix::identity(1 << c.n_qubits);
    for op in &c.ops {
        let g = matrix_of(op).embed(&op.targets, &op.controls, c.n_qubits)?;
        u = g.matmul(&u);
    }
    Ok(u.scale(Complex64::from_polar(1.0, c.global_phase)))
}

fn check_same_dim(u: &DenseUnitary, v: &DenseUnitary) -> Result<()> {
    if u.dim() != v.dim() {
        return input(format!("cannot compare {}- and {}-dimensional matrices", u.dim(), v.dim()));
    }
    Ok(())
}

/// True iff `|tr(U†V)| ≥ dim · (1 - tol)`.
pub fn equal_up_to_global_phase(u: &DenseUnitary, v: &DenseUnitary, tol: f64) -> Result<bool> {
    check_same_dim(u, v)?;
    Ok(u.adjoint().matmul(v).trace().norm() >= u.dim() as f64 * (1.0 - tol))
}

/// Largest elementwise deviation between `u` and `v` after removing the best
/// global phase `arg tr(V†U)`.
pub fn phase_aligned_distance(u: &DenseUnitary, v: &DenseUnitary) -> Result<f64> {
    check_same_dim(u, v)?;
    let tr = v.adjoint().matmul(u).trace();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { Complex64::new(1.0, 0.0) };
    Ok(u.max_abs_diff(&v.scale(phase)))
}
