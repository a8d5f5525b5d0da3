//! Named gates and their exact matrices.
//!
//! Rotations follow `R_α(θ) = exp(-i θ σ_α / 2)`; the two-qubit exchange
//! gates take a dimensionless phase `δ` with `AB(δ) = exp(-i δ σ_a ⊗ σ_b)`.
//! The trapped-ion family uses `T1(θ) = exp(-i θ σ_z)`,
//! `T2(θ) = exp(-i θ Σ σ_z)`, `T3(θ, φ) = exp(-i θ Σ σ_φ)` and
//! `T4(θ, φ) = exp(-i θ Σ_{i<j} σ_φ σ_φ)` with `σ_φ = cos φ σ_x + sin φ σ_y`.
//! Matrices keep the exact global phase of these definitions.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::dense::DenseMatrix;
use crate::error::{input, Result, SimError};
use crate::scalar::{c, cis, Real};

/// A coordinate axis of the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Right-handed cross product of unit axes: returns `(sign, axis)` with
    /// `self × other = sign · axis`. `None` for parallel axes.
    pub fn cross(self, other: Axis) -> Option<(f64, Axis)> {
        use Axis::*;
        match (self, other) {
            (X, Y) => Some((1.0, Z)),
            (Y, Z) => Some((1.0, X)),
            (Z, X) => Some((1.0, Y)),
            (Y, X) => Some((-1.0, Z)),
            (Z, Y) => Some((-1.0, X)),
            (X, Z) => Some((-1.0, Y)),
            _ => None,
        }
    }

    /// The axis orthogonal to both `self` and `other` (which must differ).
    pub fn third(self, other: Axis) -> Axis {
        Axis::ALL.into_iter().find(|&a| a != self && a != other).expect("axes must differ")
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

impl FromStr for Axis {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => input(format!("invalid axis {other:?}; expected x, y or z")),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    U3,
    H,
    Phase,
    Rx,
    Ry,
    Rz,
    X,
    Y,
    Z,
    Cnot,
    CPhase,
    Zz,
    Xx,
    Yy,
    Uxy,
    MsT1,
    MsT2,
    MsT3,
    MsT4,
}

/// How many target qubits a gate kind accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl GateKind {
    pub const ALL: [GateKind; 19] = [
        GateKind::U3,
        GateKind::H,
        GateKind::Phase,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::Cnot,
        GateKind::CPhase,
        GateKind::Zz,
        GateKind::Xx,
        GateKind::Yy,
        GateKind::Uxy,
        GateKind::MsT1,
        GateKind::MsT2,
        GateKind::MsT3,
        GateKind::MsT4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::U3 => "U3",
            GateKind::H => "H",
            GateKind::Phase => "PHASE",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::CPhase => "CPHASE",
            GateKind::Zz => "ZZ",
            GateKind::Xx => "XX",
            GateKind::Yy => "YY",
            GateKind::Uxy => "UXY",
            GateKind::MsT1 => "MS_T1",
            GateKind::MsT2 => "MS_T2",
            GateKind::MsT3 => "MS_T3",
            GateKind::MsT4 => "MS_T4",
        }
    }

    pub fn arity(self) -> Arity {
        match self {
            GateKind::Cnot | GateKind::CPhase | GateKind::Zz | GateKind::Xx | GateKind::Yy | GateKind::Uxy => {
                Arity::Exactly(2)
            }
            GateKind::MsT2 | GateKind::MsT3 => Arity::AtLeast(1),
            GateKind::MsT4 => Arity::AtLeast(2),
            _ => Arity::Exactly(1),
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::U3 => 3,
            GateKind::H | GateKind::X | GateKind::Y | GateKind::Z | GateKind::Cnot => 0,
            GateKind::MsT3 | GateKind::MsT4 => 2,
            _ => 1,
        }
    }

    /// Gates that couple two or more qubits.
    pub fn is_entangling(self) -> bool {
        matches!(
            self,
            GateKind::Cnot
                | GateKind::CPhase
                | GateKind::Zz
                | GateKind::Xx
                | GateKind::Yy
                | GateKind::Uxy
                | GateKind::MsT4
        )
    }
}

impl FromStr for GateKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == upper)
            .ok_or_else(|| SimError::Input(format!("unknown gate {s:?}")))
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate bound to an ordered list of 1-based target qubits, optionally
/// conditioned on control qubits being `|1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

impl GateOp {
    /// Validates arity, parameter count and qubit labels.
    pub fn new(kind: GateKind, params: Vec<f64>, targets: Vec<usize>) -> Result<Self> {
        Self::controlled(kind, params, targets, Vec::new())
    }

    pub fn controlled(kind: GateKind, params: Vec<f64>, targets: Vec<usize>, controls: Vec<usize>) -> Result<Self> {
        if !kind.arity().accepts(targets.len()) {
            return input(format!("{kind} cannot act on {} qubit(s)", targets.len()));
        }
        if params.len() != kind.param_count() {
            return input(format!("{kind} takes {} parameter(s), got {}", kind.param_count(), params.len()));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return input(format!("{kind} parameters must be finite"));
        }
        let mut all: Vec<usize> = targets.iter().chain(&controls).copied().collect();
        if all.contains(&0) {
            return input("qubit labels are 1-based");
        }
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return input(format!("{kind} addresses a qubit more than once"));
        }
        Ok(Self { kind, params, targets, controls })
    }

    fn raw(kind: GateKind, params: Vec<f64>, targets: Vec<usize>) -> Self {
        Self { kind, params, targets, controls: Vec::new() }
    }

    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::H, vec![], vec![q])
    }
    pub fn x(q: usize) -> Self {
        Self::raw(GateKind::X, vec![], vec![q])
    }
    pub fn y(q: usize) -> Self {
        Self::raw(GateKind::Y, vec![], vec![q])
    }
    pub fn z(q: usize) -> Self {
        Self::raw(GateKind::Z, vec![], vec![q])
    }
    pub fn phase(delta: f64, q: usize) -> Self {
        Self::raw(GateKind::Phase, vec![delta], vec![q])
    }
    pub fn rx(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::Rx, vec![theta], vec![q])
    }
    pub fn ry(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::Ry, vec![theta], vec![q])
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::Rz, vec![theta], vec![q])
    }
    pub fn rotation(axis: Axis, theta: f64, q: usize) -> Self {
        match axis {
            Axis::X => Self::rx(theta, q),
            Axis::Y => Self::ry(theta, q),
            Axis::Z => Self::rz(theta, q),
        }
    }
    pub fn pauli(axis: Axis, q: usize) -> Self {
        match axis {
            Axis::X => Self::x(q),
            Axis::Y => Self::y(q),
            Axis::Z => Self::z(q),
        }
    }
    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::raw(GateKind::U3, vec![theta, phi, lambda], vec![q])
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::raw(GateKind::Cnot, vec![], vec![control, target])
    }
    pub fn cphase(delta: f64, a: usize, b: usize) -> Self {
        Self::raw(GateKind::CPhase, vec![delta], vec![a, b])
    }
    pub fn uxy(delta: f64, a: usize, b: usize) -> Self {
        Self::raw(GateKind::Uxy, vec![delta], vec![a, b])
    }
    pub fn pauli_pair(axis: Axis, delta: f64, a: usize, b: usize) -> Self {
        let kind = match axis {
            Axis::X => GateKind::Xx,
            Axis::Y => GateKind::Yy,
            Axis::Z => GateKind::Zz,
        };
        Self::raw(kind, vec![delta], vec![a, b])
    }
    pub fn ms_t1(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::MsT1, vec![theta], vec![q])
    }
    pub fn ms_t2(theta: f64, targets: Vec<usize>) -> Self {
        Self::raw(GateKind::MsT2, vec![theta], targets)
    }
    pub fn ms_t3(theta: f64, phi: f64, targets: Vec<usize>) -> Self {
        Self::raw(GateKind::MsT3, vec![theta, phi], targets)
    }
    pub fn ms_t4(theta: f64, phi: f64, targets: Vec<usize>) -> Self {
        Self::raw(GateKind::MsT4, vec![theta, phi], targets)
    }

    /// Returns the same gate additionally conditioned on `control`.
    pub fn with_control(&self, control: usize) -> Result<Self> {
        let mut controls = self.controls.clone();
        controls.push(control);
        Self::controlled(self.kind, self.params.clone(), self.targets.clone(), controls)
    }

    /// All qubits the gate touches, controls included.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(&self.controls).copied()
    }

    /// Number of qubits the gate couples (targets plus controls).
    pub fn width(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    /// The exact inverse gate.
    pub fn inverse(&self) -> Self {
        let p = &self.params;
        let params = match self.kind {
            GateKind::U3 => vec![-p[0], -p[2], -p[1]],
            GateKind::MsT3 | GateKind::MsT4 => vec![-p[0], p[1]],
            _ => p.iter().map(|x| -x).collect(),
        };
        Self { params, ..self.clone() }
    }

    /// Matrix on the target qubits (first target = most significant local
    /// bit). Controls are not included.
    pub fn matrix<T: Real>(&self) -> DenseMatrix<T> {
        let p = &self.params;
        match self.kind {
            GateKind::U3 => u3(p[0], p[1], p[2]),
            GateKind::H => hadamard(),
            GateKind::Phase => phase(p[0]),
            GateKind::Rx => rotation(Axis::X, p[0]),
            GateKind::Ry => rotation(Axis::Y, p[0]),
            GateKind::Rz => rotation(Axis::Z, p[0]),
            GateKind::X => pauli_matrix(Axis::X),
            GateKind::Y => pauli_matrix(Axis::Y),
            GateKind::Z => pauli_matrix(Axis::Z),
            GateKind::Cnot => cnot(),
            GateKind::CPhase => cphase(p[0]),
            GateKind::Zz => pauli_pair_exponential(Axis::Z, Axis::Z, p[0]),
            GateKind::Xx => pauli_pair_exponential(Axis::X, Axis::X, p[0]),
            GateKind::Yy => pauli_pair_exponential(Axis::Y, Axis::Y, p[0]),
            GateKind::Uxy => uxy(p[0]),
            GateKind::MsT1 => ms_local(MsKind::T1, p[0], 0.0, 1),
            GateKind::MsT2 => ms_local(MsKind::T2, p[0], 0.0, self.targets.len()),
            GateKind::MsT3 => ms_local(MsKind::T3, p[0], p[1], self.targets.len()),
            GateKind::MsT4 => ms_local(MsKind::T4, p[0], p[1], self.targets.len()),
        }
    }
}

pub fn pauli_matrix<T: Real>(axis: Axis) -> DenseMatrix<T> {
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let entries = match axis {
        Axis::X => vec![z, o, o, z],
        Axis::Y => vec![z, -i, i, z],
        Axis::Z => vec![o, z, z, -o],
    };
    DenseMatrix::from_row_major(entries).expect("2x2")
}

/// The general single-qubit gate
/// `[[cos(θ/2), -e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(λ+φ)} cos(θ/2)]]`.
pub fn u3<T: Real>(theta: f64, phi: f64, lambda: f64) -> DenseMatrix<T> {
    let (s, co) = (theta / 2.0).sin_cos();
    let entries =
        vec![c(co, 0.0), -cis::<T>(lambda) * T::of(s), cis::<T>(phi) * T::of(s), cis::<T>(lambda + phi) * T::of(co)];
    DenseMatrix::from_row_major(entries).expect("2x2")
}

pub fn hadamard<T: Real>() -> DenseMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DenseMatrix::from_row_major(vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]).expect("2x2")
}

/// `Φ(δ) = diag(1, e^{iδ})`.
pub fn phase<T: Real>(delta: f64) -> DenseMatrix<T> {
    DenseMatrix::diagonal(&[c(1.0, 0.0), cis(delta)])
}

/// `R_α(θ) = exp(-i θ σ_α / 2) = cos(θ/2) I - i sin(θ/2) σ_α`.
pub fn rotation<T: Real>(axis: Axis, theta: f64) -> DenseMatrix<T> {
    pauli_exponential(&pauli_matrix(axis), theta / 2.0)
}

/// `exp(-i a P)` for an involutory `P` (`P² = I`).
fn pauli_exponential<T: Real>(p: &DenseMatrix<T>, a: f64) -> DenseMatrix<T> {
    let (s, co) = a.sin_cos();
    DenseMatrix::identity(p.dim()).scale(c(co, 0.0)).add(&p.scale(c(0.0, -s)))
}

/// `exp(-i δ σ_α ⊗ σ_β)`.
pub fn pauli_pair_exponential<T: Real>(alpha: Axis, beta: Axis, delta: f64) -> DenseMatrix<T> {
    let p = pauli_matrix::<T>(alpha).kron(&pauli_matrix(beta));
    pauli_exponential(&p, delta)
}

/// `U_xy(δ) = exp(-i δ (σ_x ⊗ σ_x + σ_y ⊗ σ_y))`.
pub fn uxy<T: Real>(delta: f64) -> DenseMatrix<T> {
    // XX and YY commute, so the exponential factorizes.
    pauli_pair_exponential::<T>(Axis::X, Axis::X, delta).matmul(&pauli_pair_exponential(Axis::Y, Axis::Y, delta))
}

/// `CΦ(δ) = diag(1, 1, 1, e^{iδ})`.
pub fn cphase<T: Real>(delta: f64) -> DenseMatrix<T> {
    DenseMatrix::diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), cis(delta)])
}

pub fn cnot<T: Real>() -> DenseMatrix<T> {
    let mut m = DenseMatrix::zeros(4);
    for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m.set(r, col, c(1.0, 0.0));
    }
    m
}

/// Trapped-ion gate families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsKind {
    T1,
    T2,
    T3,
    T4,
}

/// A trapped-ion gate on `targets` embedded in an `n_qubits` register.
pub fn ms_gate<T: Real>(
    kind: MsKind,
    theta: f64,
    phi: f64,
    targets: &[usize],
    n_qubits: usize,
) -> Result<DenseMatrix<T>> {
    match kind {
        MsKind::T1 if targets.len() != 1 => return input("T1 addresses exactly one qubit"),
        MsKind::T4 if targets.len() < 2 => return input("T4 needs at least two targets"),
        _ if targets.is_empty() => return input("collective gate without targets"),
        _ => {}
    }
    ms_local::<T>(kind, theta, phi, targets.len()).embed(targets, &[], n_qubits)
}

/// Trapped-ion gate on `m` addressed qubits.
///
/// With `R = ⊗ Rz(φ) Ry(π/2)` mapping `σ_z` onto `σ_φ`, the collective
/// generators are diagonalized exactly: `Σ σ_φ = R (Σ σ_z) R†` and
/// `Σ_{i<j} σ_φ σ_φ = R ((Σ σ_z)² - m) R† / 2`.
fn ms_local<T: Real>(kind: MsKind, theta: f64, phi: f64, m: usize) -> DenseMatrix<T> {
    let dim = 1usize << m;
    let total_z = |k: usize| m as f64 - 2.0 * k.count_ones() as f64;
    let diag: Vec<Complex<T>> = (0..dim)
        .map(|k| {
            let s = total_z(k);
            match kind {
                MsKind::T1 | MsKind::T2 | MsKind::T3 => cis(-theta * s),
                MsKind::T4 => cis(-theta * (s * s - m as f64) / 2.0),
            }
        })
        .collect();
    let d = DenseMatrix::diagonal(&diag);
    match kind {
        MsKind::T1 | MsKind::T2 => d,
        MsKind::T3 | MsKind::T4 => {
            let r1 = rotation::<T>(Axis::Z, phi).matmul(&rotation(Axis::Y, FRAC_PI_2));
            let r = (1..m).fold(r1.clone(), |acc, _| acc.kron(&r1));
            r.matmul(&d).matmul(&r.adjoint())
        }
    }
}
