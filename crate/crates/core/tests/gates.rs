mod common;

use common::*;
use digiq::compiler::{circuit_unitary, equal_up_to_global_phase};
use digiq::gates::{
    cnot, cphase, hadamard, ms_gate, pauli_matrix, pauli_pair_exponential, phase, rotation, u3, uxy, GateKind, GateOp,
    MsKind,
};
use digiq::{Axis, Circuit, StateVector};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn pauli(a: Axis) -> M {
    match a {
        Axis::X => x(),
        Axis::Y => y(),
        Axis::Z => z(),
    }
}

fn random_angles(seed: u64, count: usize) -> Vec<(f64, f64, f64)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| (r.gen_range(-2.0 * PI..2.0 * PI), r.gen_range(-2.0 * PI..2.0 * PI), r.gen_range(-2.0 * PI..2.0 * PI)))
        .collect()
}

#[test]
fn rotations_are_half_angle_exponentials() {
    for a in Axis::ALL {
        for theta in [0.0, 0.3, -1.7, PI, 2.0 * PI, 9.1] {
            let oracle = expm_herm(&pauli(a), theta / 2.0);
            assert!(rotation::<f64>(a, theta).max_abs_diff(&oracle) < 1e-12);
        }
    }
}

#[test]
fn pair_exponentials_match_taylor_oracle() {
    for a in Axis::ALL {
        for b in Axis::ALL {
            for delta in [0.0, 0.2, -0.9, 2.5] {
                let oracle = expm_herm(&pauli(a).kron(&pauli(b)), delta);
                assert!(pauli_pair_exponential::<f64>(a, b, delta).max_abs_diff(&oracle) < 1e-12);
            }
        }
    }
}

#[test]
fn xx_is_zz_in_the_hadamard_frame() {
    let hh = hadamard::<f64>().kron(&hadamard());
    for delta in [0.1, 0.7, -2.2] {
        let lhs = pauli_pair_exponential::<f64>(Axis::X, Axis::X, delta);
        let rhs = hh.matmul(&pauli_pair_exponential(Axis::Z, Axis::Z, delta)).matmul(&hh);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}

#[test]
fn uxy_matches_oracle_and_swaps_excitations() {
    let gen = x().kron(&x()).add(&y().kron(&y()));
    for delta in [0.0, 0.35, -1.2, FRAC_PI_4] {
        assert!(uxy::<f64>(delta).max_abs_diff(&expm_herm(&gen, delta)) < 1e-12);
        let out = uxy::<f64>(delta).matvec(&[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]);
        assert!(max_diff(&out, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)]) < 1e-15);
    }
    let out = uxy::<f64>(FRAC_PI_4).matvec(&[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
    let minus_i = Complex64::new(0.0, -1.0);
    assert!(max_diff(&out, &[cr(0.0), cr(0.0), minus_i, cr(0.0)]) < 1e-12);
}

#[test]
fn cphase_and_cnot_matrices() {
    let cz = M::diagonal(&[cr(1.0), cr(1.0), cr(1.0), cr(-1.0)]);
    assert!(cphase::<f64>(PI).max_abs_diff(&cz) < 1e-15);
    assert!(cphase::<f64>(0.8).matmul(&cphase(-0.8)).max_abs_diff(&id(4)) < 1e-15);
    let p1 = id(2).sub(&z()).scale(cr(0.5));
    let p0 = id(2).add(&z()).scale(cr(0.5));
    let oracle = p0.kron(&id(2)).add(&p1.kron(&x()));
    assert!(cnot::<f64>().max_abs_diff(&oracle) < 1e-15);
}

#[test]
fn u3_elementwise_hadamard_phase_identity() {
    let h = hadamard::<f64>();
    for (theta, phi, lambda) in random_angles(1, 100) {
        let rhs = phase::<f64>(FRAC_PI_2 + phi)
            .matmul(&h)
            .matmul(&phase(theta))
            .matmul(&h)
            .matmul(&phase(-FRAC_PI_2 + lambda))
            .scale(Complex64::from_polar(1.0, -theta / 2.0));
        assert!(u3::<f64>(theta, phi, lambda).max_abs_diff(&rhs) < 1e-12);
    }
}

#[test]
fn u3_from_axis_rotations_up_to_phase() {
    // With the matrix convention of u3, Rz(φ)·Rx(θ)·Rz(λ) equals
    // u3(θ, φ - π/2, λ + π/2); the z-y-z form needs no shift.
    for (theta, phi, lambda) in random_angles(2, 100) {
        let zxz = rotation::<f64>(Axis::Z, phi).matmul(&rotation(Axis::X, theta)).matmul(&rotation(Axis::Z, lambda));
        assert!(equal_up_to_global_phase(&u3(theta, phi - FRAC_PI_2, lambda + FRAC_PI_2), &zxz, 1e-12).unwrap());
        let shifted = rotation::<f64>(Axis::Z, phi + FRAC_PI_2)
            .matmul(&rotation(Axis::X, theta))
            .matmul(&rotation(Axis::Z, lambda - FRAC_PI_2));
        assert!(equal_up_to_global_phase(&u3(theta, phi, lambda), &shifted, 1e-12).unwrap());
        let zyz = rotation::<f64>(Axis::Z, phi).matmul(&rotation(Axis::Y, theta)).matmul(&rotation(Axis::Z, lambda));
        assert!(equal_up_to_global_phase(&u3(theta, phi, lambda), &zyz, 1e-12).unwrap());
    }
    assert!(equal_up_to_global_phase(&u3(0.7, 0.0, 0.0), &rotation(Axis::Y, 0.7), 1e-12).unwrap());
}

#[test]
fn u3_special_cases() {
    assert!(u3::<f64>(0.0, 0.0, 0.0).max_abs_diff(&id(2)) < 1e-15);
    assert!(equal_up_to_global_phase(&u3(PI, -FRAC_PI_2, FRAC_PI_2), &rotation(Axis::X, PI), 1e-12).unwrap());
    assert!(equal_up_to_global_phase(&u3(FRAC_PI_2, 0.0, PI), &hadamard(), 1e-12).unwrap());
    for lambda in [0.4, -2.0] {
        let rz = rotation::<f64>(Axis::Z, lambda);
        let rhs = phase::<f64>(lambda).scale(Complex64::from_polar(1.0, -lambda / 2.0));
        assert!(rz.max_abs_diff(&rhs) < 1e-15);
    }
    assert!(rotation::<f64>(Axis::X, 2.0 * PI).max_abs_diff(&id(2).scale(cr(-1.0))) < 1e-14);
}

#[test]
fn frame_changes() {
    let ry = rotation::<f64>(Axis::Y, FRAC_PI_2);
    let lhs = ry.matmul(&z()).matmul(&rotation(Axis::Y, -FRAC_PI_2));
    assert!(lhs.max_abs_diff(&x()) < 1e-12);
    let rx = rotation::<f64>(Axis::X, FRAC_PI_2);
    let lhs = rx.matmul(&z()).matmul(&rotation(Axis::X, -FRAC_PI_2));
    assert!(lhs.max_abs_diff(&y().scale(cr(-1.0))) < 1e-12);
}

#[test]
fn same_axis_pair_terms_commute() {
    for a in Axis::ALL {
        for b in Axis::ALL {
            let pa = pauli(a).kron(&pauli(a));
            let pb = pauli(b).kron(&pauli(b));
            let comm = pa.matmul(&pb).sub(&pb.matmul(&pa));
            assert!(comm.max_abs_diff(&M::zeros(4)) < 1e-15);
        }
    }
}

#[test]
fn trapped_ion_gates() {
    let sigma_phi = |phi: f64| x().scale(cr(phi.cos())).add(&y().scale(cr(phi.sin())));
    for delta in [0.0, 0.3, -1.4] {
        let t4 = ms_gate::<f64>(MsKind::T4, delta, 0.0, &[1, 2], 2).unwrap();
        assert!(t4.max_abs_diff(&pauli_pair_exponential(Axis::X, Axis::X, delta)) < 1e-12);
        let t2 = ms_gate::<f64>(MsKind::T2, delta, 0.0, &[1], 1).unwrap();
        let t1 = ms_gate::<f64>(MsKind::T1, delta, 0.0, &[1], 1).unwrap();
        assert!(t2.max_abs_diff(&t1) < 1e-14);
        assert!(t1.max_abs_diff(&expm_herm(&z(), delta)) < 1e-12);
    }
    let sum_y = site(&y(), 1, 3).add(&site(&y(), 2, 3)).add(&site(&y(), 3, 3));
    let t3 = ms_gate::<f64>(MsKind::T3, FRAC_PI_4, FRAC_PI_2, &[1, 2, 3], 3).unwrap();
    assert!(t3.max_abs_diff(&expm_herm(&sum_y, FRAC_PI_4)) < 1e-12);

    // Collective gates on an arbitrary subset of a larger register.
    let n = 4;
    let subset = [4, 1, 3];
    for phi in [0.0, 0.9, -2.3] {
        let sp = sigma_phi(phi);
        let mut gen3 = M::zeros(16);
        let mut gen4 = M::zeros(16);
        for (k, &a) in subset.iter().enumerate() {
            gen3 = gen3.add(&site(&sp, a, n));
            for &b in &subset[k + 1..] {
                gen4 = gen4.add(&site(&sp, a, n).matmul(&site(&sp, b, n)));
            }
        }
        let t3 = ms_gate::<f64>(MsKind::T3, 0.45, phi, &subset, n).unwrap();
        let t4 = ms_gate::<f64>(MsKind::T4, 0.45, phi, &subset, n).unwrap();
        assert!(t3.max_abs_diff(&expm_herm(&gen3, 0.45)) < 1e-12);
        assert!(t4.max_abs_diff(&expm_herm(&gen4, 0.45)) < 1e-12);
    }
    assert!(ms_gate::<f64>(MsKind::T4, 0.1, 0.0, &[1], 2).is_err());
    assert!(GateOp::new(GateKind::MsT4, vec![0.1, 0.0], vec![1]).is_err());
}

#[test]
fn every_gate_kind_is_unitary() {
    let mut r = rng(3);
    for kind in GateKind::ALL {
        let width = match kind.arity() {
            digiq::gates::Arity::Exactly(k) => k,
            digiq::gates::Arity::AtLeast(k) => k + 1,
        };
        for _ in 0..10 {
            let params = (0..kind.param_count()).map(|_| r.gen_range(-7.0..7.0)).collect();
            let g = GateOp::new(kind, params, (1..=width).collect()).unwrap();
            assert!(g.matrix::<f64>().unitarity_error() < 1e-10, "{kind:?}");
            let inv = g.inverse().matrix::<f64>();
            assert!(g.matrix::<f64>().matmul(&inv).max_abs_diff(&id(1 << width)) < 1e-12, "{kind:?}");
        }
    }
}

#[test]
fn parameter_counts_are_enforced() {
    assert!(GateOp::new(GateKind::U3, vec![0.1, 0.2], vec![1]).is_err());
    assert!(GateOp::new(GateKind::Cnot, vec![0.1], vec![1, 2]).is_err());
    assert!(GateOp::new(GateKind::MsT4, vec![0.1], vec![1, 2]).is_err());
    assert!(GateOp::new(GateKind::Rx, vec![f64::NAN], vec![1]).is_err());
    assert!(GateOp::new(GateKind::Cnot, vec![], vec![2, 2]).is_err());
}

#[test]
fn statevector_kernel_matches_circuit_unitary() {
    let mut r = rng(4);
    for n in 1..=6 {
        let mut c = Circuit::new(n).unwrap();
        for _ in 0..20 {
            let kind = GateKind::ALL[r.gen_range(0..GateKind::ALL.len())];
            let width = match kind.arity() {
                digiq::gates::Arity::Exactly(k) => k,
                digiq::gates::Arity::AtLeast(k) => r.gen_range(k..=n.max(k)),
            };
            if width > n {
                continue;
            }
            let mut qs: Vec<usize> = (1..=n).collect();
            for i in (1..qs.len()).rev() {
                qs.swap(i, r.gen_range(0..=i));
            }
            let params = (0..kind.param_count()).map(|_| r.gen_range(-4.0..4.0)).collect();
            let controls = if width < n && r.gen_bool(0.3) { vec![qs[width]] } else { vec![] };
            c.push(GateOp::controlled(kind, params, qs[..width].to_vec(), controls).unwrap()).unwrap();
        }
        c.add_phase(0.3);
        let u = circuit_unitary(&c).unwrap();
        let psi0 = random_state(&mut r, n);
        let mut psi = StateVector::<f64>::from_amplitudes(psi0.clone()).unwrap();
        psi.apply_circuit(&c).unwrap();
        assert!(max_diff(psi.amplitudes(), &u.matvec(&psi0)) < 1e-12);
    }
}

#[test]
fn pauli_matrices() {
    for a in Axis::ALL {
        assert!(pauli_matrix::<f64>(a).max_abs_diff(&pauli(a)) < 1e-15);
    }
}
