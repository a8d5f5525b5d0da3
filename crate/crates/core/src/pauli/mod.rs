//! Pauli-string algebra and spin Hamiltonians.

mod fermion;
mod models;

pub use fermion::{
    hubbard_2site, jordan_wigner, jw_ladder, FermionHamiltonian, FermionTerm, LadderOp, HUBBARD_PRINTED_ORDER,
    HUBBARD_STRING_ORDER,
};
pub use models::{heisenberg_chain, tim_chain, xy_chain, xyz_chain};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::{Complex, Complex64};

use crate::dense::{DenseMatrix, MAX_DENSE_QUBITS};
use crate::error::{input, Result, SimError};
use crate::gates::{pauli_matrix, Axis};
use crate::scalar::Real;

/// Coefficients whose modulus falls below this after merging are dropped.
const ZERO_COEFF: f64 = 1e-14;
/// Allowed imaginary residue on Hamiltonian coefficients.
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_axis(axis: Axis) -> Self {
        match axis {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }

    pub fn axis(self) -> Option<Axis> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Axis::X),
            Pauli::Y => Some(Axis::Y),
            Pauli::Z => Some(Axis::Z),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Result<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => input(format!("invalid Pauli letter {other:?}")),
        }
    }

    /// `self · other = i^k · letter`, returned as `(k, letter)`.
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix<T: Real>(self) -> DenseMatrix<T> {
        match self.axis() {
            Some(a) => pauli_matrix(a),
            None => DenseMatrix::identity(2),
        }
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A weighted tensor product of single-qubit Paulis over a fixed register.
/// Letter `k` acts on qubit `k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliString {
    pub coeff: Complex64,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(coeff: Complex64, letters: Vec<Pauli>) -> Self {
        Self { coeff, letters }
    }

    pub fn real(coeff: f64, letters: Vec<Pauli>) -> Self {
        Self::new(Complex64::new(coeff, 0.0), letters)
    }

    /// Parses a letter pattern such as `"XZI"` with unit coefficient.
    pub fn parse(letters: &str) -> Result<Self> {
        let letters = letters.chars().map(Pauli::from_char).collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return input("empty Pauli string");
        }
        Ok(Self::real(1.0, letters))
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::real(1.0, vec![Pauli::I; n_qubits])
    }

    /// Builds a string from `(qubit, letter)` pairs; unnamed qubits are `I`.
    pub fn from_sparse(n_qubits: usize, coeff: f64, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n_qubits];
        for &(q, p) in ops {
            if q == 0 || q > n_qubits {
                return input(format!("qubit {q} outside register of {n_qubits}"));
            }
            letters[q - 1] = p;
        }
        Ok(Self::real(coeff, letters))
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters[qubit - 1]
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.as_char()).collect()
    }

    /// 1-based qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        self.letters.iter().enumerate().filter(|(_, p)| **p != Pauli::I).map(|(k, _)| k + 1).collect()
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| **p != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    pub fn with_coeff(&self, coeff: Complex64) -> Self {
        Self { coeff, letters: self.letters.clone() }
    }

    /// Whether the two strings commute: true iff they anticommute on an even
    /// number of sites.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        if self.n_qubits() != other.n_qubits() {
            return input(format!(
                "Pauli strings of length {} and {} cannot be compared",
                self.n_qubits(),
                other.n_qubits()
            ));
        }
        Ok(self.anticommuting_sites(other).is_multiple_of(2))
    }

    fn anticommuting_sites(&self, other: &PauliString) -> usize {
        self.letters.iter().zip(&other.letters).filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b).count()
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n_qubits(), other.n_qubits(), "register size mismatch");
        let mut power = 0u8;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (k, p) = a.mul(b);
                power = (power + k) % 4;
                p
            })
            .collect();
        PauliString::new(self.coeff * other.coeff * i_pow(power), letters)
    }

    pub fn to_dense<T: Real>(&self) -> Result<DenseMatrix<T>> {
        check_dense_size(self.n_qubits())?;
        let m = self.letters.iter().fold(DenseMatrix::<T>::identity(1), |acc, p| acc.kron(&p.matrix()));
        Ok(m.scale(Complex::new(T::of(self.coeff.re), T::of(self.coeff.im))))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.im == 0.0 {
            write!(f, "{} {}", self.coeff.re, self.label())
        } else {
            write!(f, "({}) {}", self.coeff, self.label())
        }
    }
}

pub(crate) fn check_dense_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(SimError::Resource(format!(
            "dense matrix for {n} qubits exceeds the {MAX_DENSE_QUBITS}-qubit limit"
        )));
    }
    Ok(())
}

/// Sum of Pauli strings with complex coefficients; like terms are merged and
/// first-occurrence order is kept.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliString>,
    index: HashMap<Vec<Pauli>, usize>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ..Default::default() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn add_term(&mut self, term: PauliString) {
        assert_eq!(term.n_qubits(), self.n_qubits, "register size mismatch");
        match self.index.get(&term.letters) {
            Some(&k) => self.terms[k].coeff += term.coeff,
            None => {
                self.index.insert(term.letters.clone(), self.terms.len());
                self.terms.push(term);
            }
        }
    }

    pub fn add_sum(&mut self, other: &PauliSum) {
        for t in &other.terms {
            self.add_term(t.clone());
        }
    }

    pub fn scale(&self, s: Complex64) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        for t in &self.terms {
            out.add_term(t.with_coeff(t.coeff * s));
        }
        out
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        for a in &self.terms {
            for b in &other.terms {
                out.add_term(a.mul(b));
            }
        }
        out
    }

    /// `[self, other]`, using `[a, b] = 2ab` for anticommuting strings.
    pub fn commutator(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        for a in &self.terms {
            for b in &other.terms {
                if a.anticommuting_sites(b) % 2 == 1 {
                    let ab = a.mul(b);
                    out.add_term(ab.with_coeff(ab.coeff * 2.0));
                }
            }
        }
        out
    }

    /// Terms with non-negligible coefficients.
    pub fn terms(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.iter().filter(|t| t.coeff.norm() > ZERO_COEFF)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.norm() <= tol)
    }
}

/// A Hermitian operator `Σ_k h_k P_k` with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliString>,
}

impl PauliHamiltonian {
    /// Merges duplicate letter patterns (keeping first-occurrence order),
    /// drops vanishing terms and rejects non-real coefficients.
    pub fn new(n_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        if n_qubits == 0 {
            return input("a Hamiltonian needs at least one qubit");
        }
        let mut sum = PauliSum::new(n_qubits);
        for t in terms {
            if t.n_qubits() != n_qubits {
                return input(format!("term {} does not match the {n_qubits}-qubit register", t.label()));
            }
            sum.add_term(t);
        }
        Self::from_sum(&sum)
    }

    pub fn from_sum(sum: &PauliSum) -> Result<Self> {
        let mut terms = Vec::new();
        for t in sum.terms() {
            if t.coeff.im.abs() > HERMITIAN_TOL * t.coeff.re.abs().max(1.0) {
                return input(format!(
                    "term {} has non-real coefficient {}; the operator is not Hermitian",
                    t.label(),
                    t.coeff
                ));
            }
            if t.coeff.re.abs() > ZERO_COEFF {
                terms.push(t.with_coeff(Complex64::new(t.coeff.re, 0.0)));
            }
        }
        Ok(Self { n_qubits: sum.n_qubits(), terms })
    }

    /// Convenience constructor from `(coefficient, letters)` pairs.
    pub fn from_labels(n_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|&(c, l)| PauliString::parse(l).map(|p| p.with_coeff(Complex64::new(c, 0.0))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_qubits, terms)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_sum(&self) -> PauliSum {
        let mut s = PauliSum::new(self.n_qubits);
        for t in &self.terms {
            s.add_term(t.clone());
        }
        s
    }

    /// Coefficient of the all-identity term.
    pub fn identity_offset(&self) -> f64 {
        self.terms.iter().filter(|t| t.is_identity()).map(|t| t.coeff.re).sum()
    }

    /// Largest coupling magnitude among non-identity terms; the energy scale
    /// that turns a time into a dimensionless phase.
    pub fn coupling_scale(&self) -> f64 {
        self.terms.iter().filter(|t| !t.is_identity()).map(|t| t.coeff.re.abs()).fold(0.0, f64::max)
    }

    /// Bound on the spectral radius: `Σ |h_k|`.
    pub fn gershgorin_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.re.abs()).sum()
    }

    pub fn to_dense<T: Real>(&self) -> Result<DenseMatrix<T>> {
        check_dense_size(self.n_qubits)?;
        let dim = 1 << self.n_qubits;
        self.terms.iter().try_fold(DenseMatrix::zeros(dim), |acc, t| Ok(acc.add(&t.to_dense()?)))
    }

    /// Whether every pair of terms commutes.
    pub fn all_terms_commute(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(i, a)| self.terms[i + 1..].iter().all(|b| a.anticommuting_sites(b) % 2 == 0))
    }

    /// Parses the one-term-per-line text format `coef LETTERS`. Blank lines
    /// and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(coef), Some(letters), None) = (parts.next(), parts.next(), parts.next()) else {
                return input(format!("line {}: expected `coef LETTERS`", lineno + 1));
            };
            let coef: f64 =
                coef.parse().map_err(|_| SimError::Input(format!("line {}: bad coefficient {coef:?}", lineno + 1)))?;
            let term = PauliString::parse(letters).map_err(|e| SimError::Input(format!("line {}: {e}", lineno + 1)))?;
            terms.push(term.with_coeff(Complex64::new(coef, 0.0)));
        }
        let Some(n) = terms.first().map(PauliString::n_qubits) else {
            return input("Hamiltonian text has no terms");
        };
        Self::new(n, terms)
    }

    pub fn to_text(&self) -> String {
        self.terms.iter().map(|t| format!("{t}\n")).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { n_qubits: self.n_qubits, terms: self.terms.iter().map(|t| t.with_coeff(t.coeff * s)).collect() }
    }
}

impl FromStr for PauliHamiltonian {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

/// Whether two Pauli strings commute.
pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.commutes(b)
}

/// Greedy first-fit grouping of items by qubit support: each item joins the
/// first group whose supports it does not touch. Returns indices per group.
pub fn first_fit_layers(supports: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut layers: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (k, support) in supports.iter().enumerate() {
        match layers.iter_mut().find(|(used, _)| support.iter().all(|q| !used.contains(q))) {
            Some((used, members)) => {
                used.extend(support);
                members.push(k);
            }
            None => layers.push((support.clone(), vec![k])),
        }
    }
    layers.into_iter().map(|(_, members)| members).collect()
}

/// Partitions the terms into groups acting on pairwise-disjoint qubits.
pub fn disjoint_layers(h: &PauliHamiltonian) -> Vec<Vec<PauliString>> {
    let supports: Vec<Vec<usize>> = h.terms.iter().map(PauliString::support).collect();
    first_fit_layers(&supports)
        .into_iter()
        .map(|layer| layer.into_iter().map(|k| h.terms[k].clone()).collect())
        .collect()
}
