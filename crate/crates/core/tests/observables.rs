mod common;

use common::*;
use digiq::observables::{
    correlation_ancilla, correlation_direct, magnetization, spectrum_from_series, total_magnetization,
    unitary_expectation_series, CorrelationSpec, Evolution, SiteOp, SpectrumSpec,
};
use digiq::pauli::{heisenberg_chain, Pauli};
use digiq::trotter::trotterize;
use digiq::{GateSet, PauliHamiltonian, StateVector, TrotterPlan};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::{FRAC_PI_4, PI};

const SITE_PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn chain_in_strong_field() -> PauliHamiltonian {
    heisenberg_chain(3, &[1.0, 1.0], 20.0).unwrap()
}

fn pauli_dense(p: Pauli) -> M {
    match p {
        Pauli::I => id(2),
        Pauli::X => x(),
        Pauli::Y => y(),
        Pauli::Z => z(),
    }
}

fn spec(v: SiteOp, w: SiteOp, times: Vec<f64>, evolution: Evolution) -> CorrelationSpec {
    CorrelationSpec { v, w, initial_state: "111".into(), hamiltonian: chain_in_strong_field(), times, evolution }
}

/// `⟨ψ|U† V U W|ψ⟩` from dense Taylor-series propagators.
fn dense_correlation(h: &PauliHamiltonian, psi: &[Complex64], v: SiteOp, w: SiteOp, t: f64) -> Complex64 {
    let n = h.n_qubits();
    let u = expm_herm(&h.to_dense::<f64>().unwrap(), t);
    let vm = site(&pauli_dense(v.pauli), v.qubit, n);
    let wm = site(&pauli_dense(w.pauli), w.qubit, n);
    let op = u.adjoint().matmul(&vm.adjoint()).matmul(&u).matmul(&wm);
    let out = op.matvec(psi);
    psi.iter().zip(&out).map(|(a, b)| a.conj() * b).sum()
}

#[test]
fn magnetization_examples() {
    let up = StateVector::<f64>::basis_state(1, "0").unwrap();
    assert_eq!(magnetization(&up, 1).unwrap(), 0.5);
    let psi0 = StateVector::<f64>::product_state("0+").unwrap();
    assert!((magnetization(&psi0, 1).unwrap() - 0.5).abs() < 1e-15);
    assert!(magnetization(&psi0, 2).unwrap().abs() < 1e-15);

    // Two-spin Heisenberg at Jt = π/4 against the dense oracle.
    let h = heisenberg_chain(2, &[1.0], 0.0).unwrap();
    let t = FRAC_PI_4;
    let evolved = expm_herm(&h.to_dense::<f64>().unwrap(), t).matvec(psi0.amplitudes());
    for set in GateSet::ALL {
        let mut psi = psi0.clone();
        psi.apply_circuit(&trotterize(&h, t, &TrotterPlan::fixed(1, 1).unwrap(), set).unwrap().circuit).unwrap();
        for q in 1..=2 {
            let zq = site(&z(), q, 2).matvec(&evolved);
            let expected: f64 = 0.5 * evolved.iter().zip(&zq).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
            assert!((magnetization(&psi, q).unwrap() - expected).abs() < 1e-10, "{set} site {q}");
        }
    }
}

#[test]
fn correlation_examples() {
    let times = vec![0.0, 0.2, 0.7];
    let s = spec(SiteOp::identity(), SiteOp::identity(), times, Evolution::Exact);
    for c in correlation_direct(&s).unwrap().into_iter().chain(correlation_ancilla(&s).unwrap()) {
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
    let xx = SiteOp::new(Pauli::X, 1);
    let s = spec(xx, xx, vec![0.0], Evolution::trotter(TrotterPlan::fixed(1, 5).unwrap(), GateSet::S1));
    for c in correlation_direct(&s).unwrap().into_iter().chain(correlation_ancilla(&s).unwrap()) {
        // ⟨s_x s_x⟩ = C/4 = 0.25.
        assert!((c / 4.0 - Complex64::new(0.25, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn routes_agree_on_every_operator_pair() {
    let times: Vec<f64> = (0..8).map(|k| 0.07 * k as f64).collect();
    for evolution in [
        Evolution::trotter(TrotterPlan::fixed(1, 5).unwrap(), GateSet::S1),
        Evolution::trotter(TrotterPlan::fixed(2, 3).unwrap(), GateSet::S4),
        Evolution::Exact,
    ] {
        for &pv in &SITE_PAULIS {
            for &pw in &SITE_PAULIS {
                for i in 1..=3 {
                    for j in 1..=3 {
                        let s = spec(SiteOp::new(pv, i), SiteOp::new(pw, j), times.clone(), evolution.clone());
                        let direct = correlation_direct(&s).unwrap();
                        let ancilla = correlation_ancilla(&s).unwrap();
                        assert!(max_diff(&direct, &ancilla) < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn exact_correlations_match_dense_oracle() {
    let h = chain_in_strong_field();
    let psi = StateVector::<f64>::basis_state(3, "111").unwrap();
    let times = vec![-0.4, 0.0, 0.13, 0.5];
    for (v, w) in [
        (SiteOp::new(Pauli::X, 3), SiteOp::new(Pauli::X, 1)),
        (SiteOp::new(Pauli::Y, 2), SiteOp::new(Pauli::X, 1)),
        (SiteOp::new(Pauli::Z, 1), SiteOp::new(Pauli::Y, 3)),
    ] {
        let got = correlation_direct(&spec(v, w, times.clone(), Evolution::Exact)).unwrap();
        for (c, &t) in got.iter().zip(&times) {
            let expected = dense_correlation(&h, psi.amplitudes(), v, w, t);
            assert!((c - expected).norm() < 1e-10);
        }
    }
}

#[test]
fn autocorrelation_is_hermitian_in_time() {
    let times = [0.1, 0.45, 1.3];
    for &p in &SITE_PAULIS {
        for q in 1..=3 {
            let v = SiteOp::new(p, q);
            let mut both: Vec<f64> = times.to_vec();
            both.extend(times.iter().map(|t| -t));
            let c = correlation_direct(&spec(v, v, both, Evolution::Exact)).unwrap();
            for k in 0..times.len() {
                assert!((c[k + times.len()] - c[k].conj()).norm() < 1e-10);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn correlations_are_bounded(seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = SiteOp::new(SITE_PAULIS[r.gen_range(0..3)], r.gen_range(1..=3));
        let w = SiteOp::new(SITE_PAULIS[r.gen_range(0..3)], r.gen_range(1..=3));
        let bits: String = (0..3).map(|_| ['0', '1', '+', '-'][r.gen_range(0..4)]).collect();
        let times: Vec<f64> = (0..4).map(|_| r.gen_range(-2.0..2.0)).collect();
        let s = CorrelationSpec {
            initial_state: bits,
            ..spec(v, w, times, Evolution::trotter(TrotterPlan::fixed(1, 4).unwrap(), GateSet::S2))
        };
        for c in correlation_ancilla(&s).unwrap() {
            prop_assert!(c.norm() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn heisenberg_conserves_total_magnetization() {
    let h = heisenberg_chain(2, &[0.9], 0.0).unwrap();
    let psi0 = StateVector::<f64>::product_state("0+").unwrap();
    let m0 = total_magnetization(&psi0);
    for set in GateSet::ALL {
        for k in 0..10 {
            let t = 0.37 * k as f64;
            let mut psi = psi0.clone();
            psi.apply_circuit(&trotterize(&h, t, &TrotterPlan::fixed(1, 1).unwrap(), set).unwrap().circuit).unwrap();
            assert!((total_magnetization(&psi) - m0).abs() < 1e-10);
        }
    }
}

#[test]
fn expectation_series_examples() {
    let q = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
    let plus = StateVector::<f64>::product_state("+").unwrap();
    let dtheta = 0.05;
    for evolution in [Evolution::Exact, Evolution::trotter(TrotterPlan::fixed(1, 1).unwrap(), GateSet::S3)] {
        let s = SpectrumSpec { q: q.clone(), initial_state: plus.clone(), m: 64, dtheta, evolution };
        let series = unitary_expectation_series(&s).unwrap();
        assert!((series[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for (k, c) in series.iter().enumerate() {
            let th = k as f64 * dtheta;
            assert!((c - Complex64::new(th.cos(), 0.0)).norm() < 1e-10);
        }
    }
    // An eigenstate picks up a pure phase.
    let up = StateVector::<f64>::basis_state(1, "1").unwrap();
    let s = SpectrumSpec { q, initial_state: up, m: 32, dtheta, evolution: Evolution::Exact };
    for (k, c) in unitary_expectation_series(&s).unwrap().iter().enumerate() {
        let expected = Complex64::from_polar(1.0, k as f64 * dtheta);
        assert!((c - expected).norm() < 1e-10);
    }
}

#[test]
fn spectrum_of_analytic_series() {
    let m = 256;
    let dtheta = 2.0 * PI / 256.0;
    let cos: Vec<Complex64> = (0..m).map(|k| Complex64::new((k as f64 * dtheta).cos(), 0.0)).collect();
    let peaks = spectrum_from_series(&cos, dtheta).unwrap();
    assert_eq!(peaks.len(), 2);
    let bin = 2.0 * PI / (m as f64 * dtheta);
    assert!((peaks[0].q + 1.0).abs() <= bin && (peaks[1].q - 1.0).abs() <= bin);
    for p in &peaks {
        assert!((p.weight - 0.5).abs() < 0.02);
    }
    let total: f64 = peaks.iter().map(|p| p.weight).sum();
    assert!(total <= 1.0 + 1e-9);

    let qv = 2.3;
    let dtheta = 0.1;
    let line: Vec<Complex64> = (0..m).map(|k| Complex64::from_polar(1.0, -qv * k as f64 * dtheta)).collect();
    let peaks = spectrum_from_series(&line, dtheta).unwrap();
    assert_eq!(peaks.len(), 1);
    assert!((peaks[0].q - qv).abs() <= 2.0 * PI / (m as f64 * dtheta));
    assert!((peaks[0].weight - 1.0).abs() < 0.02);
    assert!(spectrum_from_series(&line[..100], dtheta).is_err());
}

fn check_completeness(q: &PauliHamiltonian, psi: &StateVector, evolution: Evolution) {
    let n = q.n_qubits();
    let dense = q.to_dense::<f64>().unwrap();
    let nm = DMatrix::from_fn(1 << n, 1 << n, |r, c| dense.get(r, c));
    let eig = nm.symmetric_eigen();
    let amps = nalgebra::DVector::from_column_slice(psi.amplitudes());
    // Group degenerate eigenvalues.
    let mut levels: Vec<(f64, f64)> = Vec::new();
    for k in 0..(1 << n) {
        let e = eig.eigenvalues[k];
        let w = eig.eigenvectors.column(k).dotc(&amps).norm_sqr();
        match levels.iter_mut().find(|(l, _)| (l - e).abs() < 1e-8) {
            Some(level) => level.1 += w,
            None => levels.push((e, w)),
        }
    }
    let spec = SpectrumSpec::with_default_grid(q.clone(), psi.clone(), evolution).unwrap();
    let bin = 2.0 * PI / (spec.m as f64 * spec.dtheta);
    let peaks = spectrum_from_series(&unitary_expectation_series(&spec).unwrap(), spec.dtheta).unwrap();
    for &(e, w) in levels.iter().filter(|(_, w)| *w >= 0.05) {
        let p = peaks.iter().min_by(|a, b| (a.q - e).abs().total_cmp(&(b.q - e).abs())).expect("a peak");
        assert!((p.q - e).abs() <= bin, "eigenvalue {e}: nearest peak {} (bin {bin}) {peaks:?} {levels:?}", p.q);
        assert!((p.weight - w).abs() <= 0.02, "eigenvalue {e}: weight {} vs {w}", p.weight);
    }
}

#[test]
fn heisenberg_pair_spectrum() {
    let q = heisenberg_chain(2, &[1.0], 0.0).unwrap();
    let psi = StateVector::<f64>::basis_state(2, "01").unwrap();
    let spec = SpectrumSpec::with_default_grid(
        q.clone(),
        psi.clone(),
        Evolution::trotter(TrotterPlan::fixed(1, 1).unwrap(), GateSet::S1),
    )
    .unwrap();
    let peaks = spectrum_from_series(&unitary_expectation_series(&spec).unwrap(), spec.dtheta).unwrap();
    let bin = 2.0 * PI / (spec.m as f64 * spec.dtheta);
    assert_eq!(peaks.len(), 2);
    assert!((peaks[0].q + 3.0).abs() <= bin && (peaks[1].q - 1.0).abs() <= bin, "{peaks:?}");
    assert!(peaks.iter().all(|p| (p.weight - 0.5).abs() < 0.02), "{peaks:?}");
    check_completeness(&q, &psi, Evolution::Exact);
}

#[test]
fn spectra_are_complete() {
    let mut r = rng(50);
    let diag = PauliHamiltonian::from_labels(3, &[(0.7, "ZII"), (1.9, "IZI"), (-3.1, "IIZ"), (0.4, "ZZI")]).unwrap();
    let chain = heisenberg_chain(3, &[1.0, 0.6], 1.5).unwrap();
    let mixed = PauliHamiltonian::from_labels(3, &[(1.0, "XXI"), (0.8, "IZZ"), (0.5, "YIY"), (0.3, "ZII")]).unwrap();
    for q in [diag, chain, mixed] {
        for _ in 0..3 {
            let psi = StateVector::from_amplitudes(random_state(&mut r, 3)).unwrap();
            check_completeness(&q, &psi, Evolution::Exact);
        }
    }
}

#[test]
fn invalid_specs_are_rejected() {
    let bad_site = spec(SiteOp::new(Pauli::X, 4), SiteOp::identity(), vec![0.0], Evolution::Exact);
    assert!(correlation_direct(&bad_site).is_err());
    assert!(correlation_ancilla(&bad_site).is_err());
    let bad_state = CorrelationSpec {
        initial_state: "11".into(),
        ..spec(SiteOp::identity(), SiteOp::identity(), vec![0.0], Evolution::Exact)
    };
    assert!(correlation_direct(&bad_state).is_err());
    let q = PauliHamiltonian::from_labels(1, &[(1.0, "Z")]).unwrap();
    let s = SpectrumSpec {
        q,
        initial_state: StateVector::zero_state(1).unwrap(),
        m: 100,
        dtheta: 0.1,
        evolution: Evolution::Exact,
    };
    assert!(unitary_expectation_series(&s).is_err());
}
