//! Dense statevector of an N-qubit register with in-place gate kernels.
//!
//! Qubit 1 is the most significant bit of the amplitude index, so qubit `q`
//! lives at bit `N - q`. `|0⟩` is spin up: `σz|0⟩ = +|0⟩`.

use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

use crate::compiler::Circuit;
use crate::dense::DenseMatrix;
use crate::error::{input, Result, SimError};
use crate::gates::{rotation, Axis, GateKind, GateOp};
use crate::pauli::{Pauli, PauliString};
use crate::scalar::{cis, Real};

/// Largest register a statevector may be allocated for.
pub const MAX_STATE_QUBITS: usize = 30;

/// Collective gates wider than this are applied without a dense matrix.
const COLLECTIVE_DENSE_MAX: usize = 4;

/// Registers at least this large split gate application across threads.
const PARALLEL_MIN_QUBITS: usize = 14;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real = f64> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
    parallel: bool,
}

/// Parses a bitstring of `0`/`1` characters into an amplitude index.
pub fn parse_bits(n_qubits: usize, bits: &str) -> Result<usize> {
    if bits.chars().count() != n_qubits {
        return input(format!(
            "bitstring {bits:?} has length {}, register has {n_qubits} qubits",
            bits.chars().count()
        ));
    }
    bits.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => input(format!("invalid bit {other:?} in {bits:?}")),
    })
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return input("register needs at least one qubit");
    }
    if n_qubits > MAX_STATE_QUBITS {
        return Err(SimError::Resource(format!(
            "{n_qubits} qubits exceed the {MAX_STATE_QUBITS}-qubit statevector limit"
        )));
    }
    Ok(())
}

impl<T: Real> StateVector<T> {
    /// The computational basis state `|b_1 … b_N⟩`.
    pub fn basis_state(n_qubits: usize, bits: &str) -> Result<Self> {
        check_register(n_qubits)?;
        let index = parse_bits(n_qubits, bits)?;
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n_qubits];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amps, parallel: true })
    }

    /// The all-zero state on `n_qubits`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, &"0".repeat(n_qubits))
    }

    /// Product state from one symbol per qubit: `0`, `1`, `+` or `-`.
    pub fn product_state(symbols: &str) -> Result<Self> {
        let n = symbols.chars().count();
        check_register(n)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let factors = symbols
            .chars()
            .map(|ch| match ch {
                '0' => Ok([1.0, 0.0]),
                '1' => Ok([0.0, 1.0]),
                '+' => Ok([h, h]),
                '-' => Ok([h, -h]),
                other => input(format!("invalid state symbol {other:?} in {symbols:?}")),
            })
            .collect::<Result<Vec<_>>>()?;
        let amps = (0..1usize << n)
            .map(|k| {
                let a: f64 = factors.iter().enumerate().map(|(q, f)| f[(k >> (n - 1 - q)) & 1]).product();
                Complex::new(T::of(a), T::zero())
            })
            .collect();
        Ok(Self { n_qubits: n, amps, parallel: true })
    }

    /// Wraps an amplitude vector, which must be normalized.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return input(format!("amplitude count {len} is not a power of two ≥ 2"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let s = Self { n_qubits, amps, parallel: true };
        let drift = (s.norm() - 1.0).abs();
        if drift > T::NORM_TOL.max(1e-10) {
            return input(format!("amplitudes are not normalized (|norm - 1| = {drift:e})"));
        }
        Ok(s)
    }

    /// Enables or disables multi-threaded gate application.
    pub fn with_parallelism(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr().to_f64_lossy()).sum::<f64>().sqrt()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.n_qubits {
            return input(format!("qubit {q} outside register 1..={}", self.n_qubits));
        }
        Ok(())
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n_qubits - q)
    }

    /// Applies a gate in place.
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        if gate.targets.len() > COLLECTIVE_DENSE_MAX
            && matches!(gate.kind, GateKind::MsT2 | GateKind::MsT3 | GateKind::MsT4)
        {
            return self.apply_collective(gate);
        }
        let m = gate.matrix::<T>();
        self.apply_matrix_unchecked(&gate.targets, &gate.controls, &m)
    }

    /// Wide trapped-ion gates without a dense matrix: rotate every target so
    /// that `σ_φ` becomes `σ_z`, apply the diagonal phase, rotate back.
    fn apply_collective(&mut self, gate: &GateOp) -> Result<()> {
        for &q in gate.targets.iter().chain(&gate.controls) {
            self.check_qubit(q)?;
        }
        let theta = gate.params[0];
        let rotated = gate.kind != GateKind::MsT2;
        let r = if rotated {
            rotation::<T>(Axis::Z, gate.params[1]).matmul(&rotation(Axis::Y, FRAC_PI_2))
        } else {
            DenseMatrix::identity(2)
        };
        if rotated {
            let r_dag = r.adjoint();
            for &q in &gate.targets {
                self.apply_matrix_unchecked(&[q], &[], &r_dag)?;
            }
        }
        let tmask: usize = gate.targets.iter().map(|&q| self.bit(q)).sum();
        let cmask: usize = gate.controls.iter().map(|&q| self.bit(q)).sum();
        let m = gate.targets.len() as f64;
        let pairwise = gate.kind == GateKind::MsT4;
        let phase_of = move |idx: usize, a: &mut Complex<T>| {
            if idx & cmask != cmask {
                return;
            }
            let s = m - 2.0 * (idx & tmask).count_ones() as f64;
            let angle = if pairwise { -theta * (s * s - m) / 2.0 } else { -theta * s };
            *a = *a * cis::<T>(angle);
        };
        if self.parallel && self.n_qubits >= PARALLEL_MIN_QUBITS {
            self.amps.par_iter_mut().enumerate().for_each(|(i, a)| phase_of(i, a));
        } else {
            self.amps.iter_mut().enumerate().for_each(|(i, a)| phase_of(i, a));
        }
        if rotated {
            for &q in &gate.targets {
                self.apply_matrix_unchecked(&[q], &[], &r)?;
            }
        }
        Ok(())
    }

    /// Applies every gate of `circuit` in order, then its global phase.
    /// The circuit may address a prefix of a larger register.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() > self.n_qubits {
            return input(format!(
                "circuit on {} qubits does not fit a {}-qubit state",
                circuit.n_qubits(),
                self.n_qubits
            ));
        }
        for op in circuit.ops() {
            self.apply_gate(op)?;
        }
        self.apply_global_phase(circuit.global_phase());
        Ok(())
    }

    pub fn apply_global_phase(&mut self, phi: f64) {
        if phi != 0.0 {
            let z = cis::<T>(phi);
            self.amps.iter_mut().for_each(|a| *a = *a * z);
        }
    }

    /// Applies a unitary matrix on `targets` (first target = most
    /// significant local bit), conditioned on all `controls` being `|1⟩`.
    pub fn apply_matrix(&mut self, targets: &[usize], controls: &[usize], m: &DenseMatrix<T>) -> Result<()> {
        let err = m.unitarity_error();
        if err > T::NORM_TOL.max(1e-10) {
            return input(format!("matrix is not unitary (max deviation {err:e})"));
        }
        self.apply_matrix_unchecked(targets, controls, m)
    }

    /// As [`apply_matrix`](Self::apply_matrix) without the unitarity check,
    /// for matrices known to be unitary by construction.
    pub fn apply_matrix_unchecked(&mut self, targets: &[usize], controls: &[usize], m: &DenseMatrix<T>) -> Result<()> {
        let k = targets.len();
        if k == 0 {
            return input("gate without targets");
        }
        if m.dim() != 1 << k {
            return input(format!("{}×{} matrix cannot act on {k} qubit(s)", m.dim(), m.dim()));
        }
        let mut seen = 0usize;
        for &q in targets.iter().chain(controls) {
            self.check_qubit(q)?;
            if seen & self.bit(q) != 0 {
                return input(format!("qubit {q} addressed more than once"));
            }
            seen |= self.bit(q);
        }
        let kernel = Kernel::new(self, targets, controls, m);
        if self.parallel && self.n_qubits >= PARALLEL_MIN_QUBITS && kernel.block < self.dim() {
            self.amps
                .par_chunks_mut(kernel.block)
                .enumerate()
                .for_each(|(b, chunk)| kernel.run(chunk, b * kernel.block));
        } else {
            kernel.run(&mut self.amps, 0);
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        if self.n_qubits != other.n_qubits {
            return input(format!("cannot overlap {}- and {}-qubit states", self.n_qubits, other.n_qubits));
        }
        Ok(self.amps.iter().zip(&other.amps).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|⟨bits|self⟩|²`.
    pub fn probability(&self, bits: &str) -> Result<f64> {
        let k = parse_bits(self.n_qubits, bits)?;
        Ok(self.amps[k].norm_sqr().to_f64_lossy())
    }

    /// Probabilities of all basis states in index order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr().to_f64_lossy()).collect()
    }

    /// `⟨self|P|self⟩` for a Pauli string with real coefficient, evaluated
    /// without building the operator: `P|k⟩ = i^{n_Y} (-1)^{|k ∧ (z|y)|} |k ⊕ (x|y)⟩`.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<f64> {
        if p.n_qubits() != self.n_qubits {
            return input(format!(
                "Pauli string on {} qubits applied to a {}-qubit state",
                p.n_qubits(),
                self.n_qubits
            ));
        }
        if p.coeff.im != 0.0 {
            return input(format!("Pauli string {} has non-real coefficient {}", p.label(), p.coeff));
        }
        let (mut flip, mut sign_mask, mut n_y) = (0usize, 0usize, 0u32);
        for (k, letter) in p.letters().iter().enumerate() {
            let bit = self.bit(k + 1);
            match letter {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign_mask |= bit;
                    n_y += 1;
                }
                Pauli::Z => sign_mask |= bit,
            }
        }
        let acc: Complex64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let b = self.amps[k ^ flip];
                let v = a.conj() * b;
                // ⟨k|P|k⊕flip⟩ carries the sign of the source index k⊕flip.
                let s = if ((k ^ flip) & sign_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                Complex64::new(v.re.to_f64_lossy() * s, v.im.to_f64_lossy() * s)
            })
            .sum();
        let phase = match n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Ok((acc * phase * p.coeff).re)
    }

    /// Converts to another precision.
    pub fn cast<U: Real>(&self) -> StateVector<U> {
        StateVector {
            n_qubits: self.n_qubits,
            amps: self
                .amps
                .iter()
                .map(|a| Complex::new(U::of(a.re.to_f64_lossy()), U::of(a.im.to_f64_lossy())))
                .collect(),
            parallel: self.parallel,
        }
    }
}

/// Precomputed index arithmetic for one gate application.
struct Kernel<'a, T: Real> {
    m: &'a DenseMatrix<T>,
    /// Target bit positions, ascending, for inserting zero bits.
    sorted: Vec<u32>,
    /// Index offset of each local basis state of the gate.
    offsets: Vec<usize>,
    control_mask: usize,
    /// Contiguous block size containing whole amplitude groups.
    block: usize,
}

impl<'a, T: Real> Kernel<'a, T> {
    fn new(s: &StateVector<T>, targets: &[usize], controls: &[usize], m: &'a DenseMatrix<T>) -> Self {
        let k = targets.len();
        let masks: Vec<usize> = targets.iter().map(|&q| s.bit(q)).collect();
        let offsets = (0..1usize << k)
            .map(|l| (0..k).filter(|j| l >> (k - 1 - j) & 1 == 1).fold(0, |acc, j| acc | masks[j]))
            .collect();
        let mut sorted: Vec<u32> = masks.iter().map(|b| b.trailing_zeros()).collect();
        sorted.sort_unstable();
        let control_mask = controls.iter().fold(0, |acc, &q| acc | s.bit(q));
        let block = 1usize << (sorted[k - 1] + 1);
        Self { m, sorted, offsets, control_mask, block }
    }

    #[inline]
    fn base(&self, mut i: usize) -> usize {
        for &p in &self.sorted {
            i = ((i >> p) << (p + 1)) | (i & ((1 << p) - 1));
        }
        i
    }

    /// Processes one block whose first element has global index `origin`.
    fn run(&self, amps: &mut [Complex<T>], origin: usize) {
        let groups = amps.len() >> self.sorted.len();
        let cm = self.control_mask;
        let m = self.m.as_slice();
        match self.offsets.len() {
            2 => {
                let o1 = self.offsets[1];
                let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
                for g in 0..groups {
                    let i0 = self.base(g);
                    if (origin + i0) & cm != cm {
                        continue;
                    }
                    let (a0, a1) = (amps[i0], amps[i0 | o1]);
                    amps[i0] = m00 * a0 + m01 * a1;
                    amps[i0 | o1] = m10 * a0 + m11 * a1;
                }
            }
            4 => {
                let o = [self.offsets[0], self.offsets[1], self.offsets[2], self.offsets[3]];
                for g in 0..groups {
                    let i0 = self.base(g);
                    if (origin + i0) & cm != cm {
                        continue;
                    }
                    let a = [amps[i0], amps[i0 | o[1]], amps[i0 | o[2]], amps[i0 | o[3]]];
                    for r in 0..4 {
                        let row = &m[4 * r..4 * r + 4];
                        amps[i0 | o[r]] = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
                    }
                }
            }
            d => {
                let mut buf = vec![Complex::new(T::zero(), T::zero()); d];
                for g in 0..groups {
                    let i0 = self.base(g);
                    if (origin + i0) & cm != cm {
                        continue;
                    }
                    for (b, &o) in buf.iter_mut().zip(&self.offsets) {
                        *b = amps[i0 | o];
                    }
                    for (r, &o) in self.offsets.iter().enumerate() {
                        let row = &m[d * r..d * (r + 1)];
                        amps[i0 | o] =
                            row.iter().zip(&buf).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + *x * *y);
                    }
                }
            }
        }
    }
}
