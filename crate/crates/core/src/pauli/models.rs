//! Builders for nearest-neighbour spin chains with open ends.

use super::{Pauli, PauliHamiltonian, PauliString};
use crate::error::{input, Result};

fn check_chain(n: usize) -> Result<()> {
    if n < 2 {
        return input(format!("a chain needs at least two spins, got {n}"));
    }
    Ok(())
}

fn bond(n: usize, i: usize, p: Pauli, coeff: f64) -> Result<PauliString> {
    PauliString::from_sparse(n, coeff, &[(i, p), (i + 1, p)])
}

/// `(Bg/2) Σ_i σz^(i) + Σ_i J_i (XX + YY + ZZ)` over bonds `(i, i+1)`.
/// Field terms come first, then the three exchange terms of each bond.
pub fn heisenberg_chain(n: usize, j: &[f64], bg: f64) -> Result<PauliHamiltonian> {
    check_chain(n)?;
    if j.len() != n - 1 {
        return input(format!("{n} spins need {} bond couplings, got {}", n - 1, j.len()));
    }
    let mut terms = Vec::with_capacity(4 * n);
    for i in 1..=n {
        terms.push(PauliString::from_sparse(n, bg / 2.0, &[(i, Pauli::Z)])?);
    }
    for (k, &jk) in j.iter().enumerate() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push(bond(n, k + 1, p, jk)?);
        }
    }
    PauliHamiltonian::new(n, terms)
}

/// `Σ_bonds (Jxx XX + Jyy YY + Jzz ZZ)`.
pub fn xyz_chain(n: usize, jxx: f64, jyy: f64, jzz: f64) -> Result<PauliHamiltonian> {
    check_chain(n)?;
    let mut terms = Vec::with_capacity(3 * n);
    for i in 1..n {
        for (p, c) in [(Pauli::X, jxx), (Pauli::Y, jyy), (Pauli::Z, jzz)] {
            terms.push(bond(n, i, p, c)?);
        }
    }
    PauliHamiltonian::new(n, terms)
}

/// The XYZ chain with `Jzz = 0`.
pub fn xy_chain(n: usize, jxx: f64, jyy: f64) -> Result<PauliHamiltonian> {
    xyz_chain(n, jxx, jyy, 0.0)
}

/// Transverse-field Ising chain `Σ_i h_i σx^(i) + Σ_bonds Jzz ZZ`.
pub fn tim_chain(n: usize, h: &[f64], jzz: f64) -> Result<PauliHamiltonian> {
    check_chain(n)?;
    if h.len() != n {
        return input(format!("{n} spins need {n} field values, got {}", h.len()));
    }
    let mut terms = Vec::with_capacity(2 * n);
    for (i, &hi) in h.iter().enumerate() {
        terms.push(PauliString::from_sparse(n, hi, &[(i + 1, Pauli::X)])?);
    }
    for i in 1..n {
        terms.push(bond(n, i, Pauli::Z, jzz)?);
    }
    PauliHamiltonian::new(n, terms)
}
