//! Fermionic Hamiltonians and the Jordan-Wigner encoding onto qubits.
//!
//! The mode on qubit `q` maps as `c†_q = σ+^(q) Π_{q' > q} σz^(q')` with
//! `σ+ = (σx + iσy)/2 = |0⟩⟨1|`, so an occupied mode is `|0⟩` and
//! `n = c†c = (I + σz)/2`.

use num_complex::Complex64;

use super::{Pauli, PauliHamiltonian, PauliString, PauliSum};
use crate::error::{input, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderOp {
    Create(usize),
    Annihilate(usize),
}

impl LadderOp {
    pub fn mode(self) -> usize {
        match self {
            LadderOp::Create(m) | LadderOp::Annihilate(m) => m,
        }
    }

    pub fn adjoint(self) -> Self {
        match self {
            LadderOp::Create(m) => LadderOp::Annihilate(m),
            LadderOp::Annihilate(m) => LadderOp::Create(m),
        }
    }
}

/// A real coefficient times an ordered product of ladder operators.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionTerm {
    pub coeff: f64,
    pub ops: Vec<LadderOp>,
}

impl FermionTerm {
    pub fn new(coeff: f64, ops: Vec<LadderOp>) -> Self {
        Self { coeff, ops }
    }

    /// `coeff · c†_a c_b`.
    pub fn hop(coeff: f64, a: usize, b: usize) -> Self {
        Self::new(coeff, vec![LadderOp::Create(a), LadderOp::Annihilate(b)])
    }

    /// `coeff · n_a n_b`.
    pub fn density_density(coeff: f64, a: usize, b: usize) -> Self {
        Self::new(
            coeff,
            vec![LadderOp::Create(a), LadderOp::Annihilate(a), LadderOp::Create(b), LadderOp::Annihilate(b)],
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FermionHamiltonian {
    n_modes: usize,
    terms: Vec<FermionTerm>,
}

impl FermionHamiltonian {
    pub fn new(n_modes: usize, terms: Vec<FermionTerm>) -> Result<Self> {
        if n_modes == 0 {
            return input("a fermionic Hamiltonian needs at least one mode");
        }
        for t in &terms {
            if let Some(op) = t.ops.iter().find(|op| op.mode() == 0 || op.mode() > n_modes) {
                return input(format!("mode {} outside 1..={n_modes}", op.mode()));
            }
            if !t.coeff.is_finite() {
                return input("fermionic coefficients must be finite");
            }
        }
        Ok(Self { n_modes, terms })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }
}

/// Modes of the two-site Hubbard model, numbered `2↑, 1↑, 2↓, 1↓`.
const UP2: usize = 1;
const UP1: usize = 2;
const DOWN2: usize = 3;
const DOWN1: usize = 4;

/// Qubit layout with mode `k` on qubit `k`: the explicit tensor strings
/// `c†_{1↓} = σ+^(4)`, `c†_{2↓} = σ+^(3) σz^(4)`, and so on.
pub const HUBBARD_STRING_ORDER: [usize; 4] = [1, 2, 3, 4];

/// Qubit layout with `1↓` and `2↓` swapped, under which the on-site
/// interactions become `σz^(1)σz^(4)` and `σz^(2)σz^(3)`.
pub const HUBBARD_PRINTED_ORDER: [usize; 4] = [1, 2, 4, 3];

/// `-V Σ_s (c†_{1s} c_{2s} + h.c.) + U (n_{1↓} n_{1↑} + n_{2↓} n_{2↑})`.
/// Terms with zero coefficient are omitted.
pub fn hubbard_2site(v: f64, u: f64) -> FermionHamiltonian {
    let mut terms = Vec::new();
    if v != 0.0 {
        terms.push(FermionTerm::hop(-v, DOWN1, DOWN2));
        terms.push(FermionTerm::hop(-v, UP1, UP2));
        terms.push(FermionTerm::hop(-v, DOWN2, DOWN1));
        terms.push(FermionTerm::hop(-v, UP2, UP1));
    }
    if u != 0.0 {
        terms.push(FermionTerm::density_density(u, DOWN1, UP1));
        terms.push(FermionTerm::density_density(u, DOWN2, UP2));
    }
    FermionHamiltonian { n_modes: 4, terms }
}

/// Inverts `mode_order` (qubit `q` holds mode `mode_order[q - 1]`).
fn qubit_of_mode(n_modes: usize, mode_order: &[usize]) -> Result<Vec<usize>> {
    if mode_order.len() != n_modes {
        return input(format!("mode order lists {} modes, Hamiltonian has {n_modes}", mode_order.len()));
    }
    let mut qubit = vec![0; n_modes + 1];
    for (k, &m) in mode_order.iter().enumerate() {
        if m == 0 || m > n_modes || qubit[m] != 0 {
            return input(format!("mode order {mode_order:?} is not a permutation of 1..={n_modes}"));
        }
        qubit[m] = k + 1;
    }
    Ok(qubit)
}

/// Pauli expansion of one ladder operator.
pub fn jw_ladder(op: LadderOp, n_modes: usize, mode_order: &[usize]) -> Result<PauliSum> {
    let qubit = qubit_of_mode(n_modes, mode_order)?;
    let m = op.mode();
    if m == 0 || m > n_modes {
        return input(format!("mode {m} outside 1..={n_modes}"));
    }
    Ok(ladder_sum(op, qubit[m], n_modes))
}

fn ladder_sum(op: LadderOp, q: usize, n: usize) -> PauliSum {
    let y_sign = match op {
        LadderOp::Create(_) => 1.0,
        LadderOp::Annihilate(_) => -1.0,
    };
    let mut sum = PauliSum::new(n);
    for (p, c) in [(Pauli::X, Complex64::new(0.5, 0.0)), (Pauli::Y, Complex64::new(0.0, 0.5 * y_sign))] {
        let mut letters = vec![Pauli::I; n];
        letters[q - 1] = p;
        for l in letters.iter_mut().skip(q) {
            *l = Pauli::Z;
        }
        sum.add_term(PauliString::new(c, letters));
    }
    sum
}

/// Maps a fermionic Hamiltonian onto qubits. The identity offset produced
/// by number operators is kept as an explicit all-`I` term.
pub fn jordan_wigner(fh: &FermionHamiltonian, mode_order: &[usize]) -> Result<PauliHamiltonian> {
    let n = fh.n_modes;
    let qubit = qubit_of_mode(n, mode_order)?;
    let mut total = PauliSum::new(n);
    for term in &fh.terms {
        let mut product = PauliSum::new(n);
        product.add_term(PauliString::identity(n).with_coeff(Complex64::new(term.coeff, 0.0)));
        for &op in &term.ops {
            product = product.mul(&ladder_sum(op, qubit[op.mode()], n));
        }
        total.add_sum(&product);
    }
    PauliHamiltonian::from_sum(&total)
        .map_err(|e| crate::error::SimError::Input(format!("fermionic Hamiltonian is not Hermitian: {e}")))
}
