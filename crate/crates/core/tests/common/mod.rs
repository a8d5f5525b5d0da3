//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use digiq::dense::DenseMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type M = DenseMatrix<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `exp(A)` by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &M) -> M {
    let norm: f64 = (0..a.dim()).map(|r| (0..a.dim()).map(|c| a.get(r, c).norm()).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let scaled = a.scale(cr(1.0 / 2f64.powi(s)));
    let mut term = M::identity(a.dim());
    let mut sum = M::identity(a.dim());
    for k in 1..=24 {
        term = term.matmul(&scaled).scale(cr(1.0 / k as f64));
        sum = sum.add(&term);
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

/// `exp(-i t H)` via the Taylor oracle.
pub fn expm_herm(h: &M, t: f64) -> M {
    expm(&h.scale(Complex64::new(0.0, -t)))
}

pub fn x() -> M {
    M::from_row_major(vec![cr(0.0), cr(1.0), cr(1.0), cr(0.0)]).unwrap()
}
pub fn y() -> M {
    let i = Complex64::new(0.0, 1.0);
    M::from_row_major(vec![cr(0.0), -i, i, cr(0.0)]).unwrap()
}
pub fn z() -> M {
    M::from_row_major(vec![cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]).unwrap()
}
pub fn id(d: usize) -> M {
    M::identity(d)
}

/// Single-site operator `op` on qubit `q` (1-based, qubit 1 leftmost) of `n`.
pub fn site(op: &M, q: usize, n: usize) -> M {
    let mut acc = id(1);
    for k in 1..=n {
        acc = if k == q { acc.kron(op) } else { acc.kron(&id(2)) };
    }
    acc
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> =
        (0..1 << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

/// Annihilation operator of mode `j` (1-based) on `m` modes in the
/// occupation basis, with mode 1 as the most significant bit and the
/// fermionic sign `(-1)^{Σ_{k<j} n_k}`.
pub fn fermion_annihilator(j: usize, m: usize) -> M {
    let dim = 1 << m;
    let mut out = M::zeros(dim);
    for col in 0..dim {
        let occ = |k: usize| (col >> (m - k)) & 1;
        if occ(j) == 1 {
            let parity: usize = (1..j).map(occ).sum();
            let row = col & !(1 << (m - j));
            out.set(row, col, cr(if parity.is_multiple_of(2) { 1.0 } else { -1.0 }));
        }
    }
    out
}

pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

fn local_pauli(idx: usize) -> M {
    match idx {
        0 => id(2),
        1 => x(),
        2 => y(),
        _ => z(),
    }
}

/// Embeds `u` (acting on `targets`, first target most significant) into `n`
/// qubits with `controls`, by expanding `u` in the Pauli basis and building
/// each tensor product with Kronecker products.
pub fn oracle_embed(u: &M, targets: &[usize], controls: &[usize], n: usize) -> M {
    let k = targets.len();
    let dim = 1 << n;
    let mut full = M::zeros(dim);
    for code in 0..(1usize << (2 * k)) {
        let letters: Vec<usize> = (0..k).map(|p| (code >> (2 * (k - 1 - p))) & 3).collect();
        let local = letters.iter().fold(id(1), |acc, &l| acc.kron(&local_pauli(l)));
        let c = local.adjoint().matmul(u).trace() / (1 << k) as f64;
        if c.norm() < 1e-15 {
            continue;
        }
        let mut g = id(1);
        for q in 1..=n {
            let op = match targets.iter().position(|&t| t == q) {
                Some(p) => local_pauli(letters[p]),
                None => id(2),
            };
            g = g.kron(&op);
        }
        full = full.add(&g.scale(c));
    }
    if controls.is_empty() {
        return full;
    }
    let p1 = id(2).sub(&z()).scale(cr(0.5));
    let proj = controls.iter().fold(id(dim), |acc, &c| acc.matmul(&site(&p1, c, n)));
    id(dim).sub(&proj).add(&proj.matmul(&full))
}

/// Haar-ish random unitary of dimension `d` from the exponential of a
/// random Hermitian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> M {
    let mut h = M::zeros(d);
    for r in 0..d {
        for c in r..d {
            let v = if r == c {
                cr(rng.gen_range(-2.0..2.0))
            } else {
                Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            };
            h.set(r, c, v);
            h.set(c, r, v.conj());
        }
    }
    expm_herm(&h, 1.0)
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
