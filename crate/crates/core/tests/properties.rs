//! Randomized invariants of the pointwise nonlinearity, the fraction-to-boundary
//! rule, sparse matrices and assembly.

use critfem::fem::Assembler;
use critfem::linalg::{cg_solve, CgOptions, CgStatus, CsrMatrix, LinearOperator};
use critfem::mesh::{generate_annulus_mesh_with, BoundaryKind};
use critfem::problem::{builtin_example, ProblemSpec};
use critfem::solvers::{classify_sign, step_to_boundary, Sign};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn positive_pair(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..max_len).prop_flat_map(|n| (prop::collection::vec(1e-6f64..1e3, n), prop::collection::vec(-1e3f64..1e3, n)))
}

proptest! {
    #[test]
    fn fraction_to_boundary_keeps_iterates_positive((u, w) in positive_pair(30)) {
        let a = step_to_boundary(&u, &w).unwrap();
        prop_assert!(a > 0.0 && a <= 1.0);
        for (ui, wi) in u.iter().zip(&w) {
            prop_assert!(ui + a * wi > 0.0);
        }
    }

    #[test]
    fn fraction_to_boundary_allows_full_feasible_steps((u, w) in positive_pair(30)) {
        let w: Vec<f64> = u.iter().zip(&w).map(|(ui, wi)| wi.max(-0.98 * ui)).collect();
        prop_assert_eq!(step_to_boundary(&u, &w).unwrap(), 1.0);
    }

    #[test]
    fn k_is_derivative_of_energy_density(u in 0.2f64..5.0, ex in 1u32..=4) {
        let spec = builtin_example(ex).unwrap();
        let x = [1.5, -0.5, 2.0];
        let h = 1e-5 * u;
        let fd = (spec.energy_density(&x, u + h).unwrap() - spec.energy_density(&x, u - h).unwrap()) / (2.0 * h);
        let k = spec.k_eval(&x, u).unwrap();
        prop_assert!((fd - k).abs() <= 1e-6 * (1.0 + k.abs()), "fd {} k {}", fd, k);
        let fd2 = (spec.k_eval(&x, u + h).unwrap() - spec.k_eval(&x, u - h).unwrap()) / (2.0 * h);
        let kp = spec.k_prime_eval(&x, u).unwrap();
        prop_assert!((fd2 - kp).abs() <= 1e-5 * (1.0 + kp.abs()), "fd {} k' {}", fd2, kp);
    }

    #[test]
    fn hamiltonian_nonlinearity_is_odd_in_u(u in 0.1f64..10.0) {
        let spec = builtin_example(1).unwrap();
        let x = [0.0; 3];
        let a = spec.k_eval(&x, u).unwrap();
        let b = spec.k_eval(&x, -u).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn sign_classification_matches_definition(v in prop::collection::vec(-5i32..5, 1..20)) {
        let u: Vec<f64> = v.iter().map(|&x| x as f64).collect();
        let expect = if v.iter().all(|&x| x > 0) {
            Sign::Positive
        } else if v.iter().all(|&x| x < 0) {
            Sign::Negative
        } else {
            Sign::Mixed
        };
        prop_assert_eq!(classify_sign(&u), expect);
    }

    #[test]
    fn csr_matvec_matches_dense(entries in prop::collection::vec(-3.0f64..3.0, 36), x in prop::collection::vec(-1.0f64..1.0, 6)) {
        let mut d = DMatrix::from_row_slice(6, 6, &entries);
        d = &d + d.transpose();
        for i in 0..6 { for j in 0..6 { if (i + 2 * j) % 5 == 1 && i != j { d[(i, j)] = 0.0; d[(j, i)] = 0.0; } } }
        let a = CsrMatrix::from_dense(&d);
        let y = a.matvec(&x);
        let expect = &d * nalgebra::DVector::from_column_slice(&x);
        for i in 0..6 {
            prop_assert!((y[i] - expect[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cg_solves_spd_systems(entries in prop::collection::vec(-1.0f64..1.0, 25), b in prop::collection::vec(-1.0f64..1.0, 5)) {
        let g = DMatrix::from_row_slice(5, 5, &entries);
        let spd = &g * g.transpose() + DMatrix::identity(5, 5);
        let a = CsrMatrix::from_dense(&spd);
        let out = cg_solve(&a, &b, &CgOptions { rel_tol: 1e-12, ..Default::default() }).unwrap();
        prop_assert_eq!(out.status, CgStatus::Converged);
        let mut r = vec![0.0; 5];
        a.apply(&out.x, &mut r);
        for i in 0..5 {
            prop_assert!((r[i] - b[i]).abs() < 1e-9);
        }
    }
}

#[test]
fn jacobian_is_symmetric_and_worker_count_is_invisible() {
    let spec = builtin_example(2).unwrap();
    let mesh = generate_annulus_mesh_with(1.0, 3.0, 6, 40, BoundaryKind::Robin, BoundaryKind::Dirichlet).unwrap();
    let u: Vec<f64> = mesh.vertices.iter().map(|x| 1.0 + 0.1 * x[0].sin()).collect();
    let one = Assembler::new(&spec, &mesh).unwrap();
    let many = Assembler::new(&spec, &mesh).unwrap().with_workers(7);
    let a = one.jacobian_parts(&u, true).unwrap();
    let b = many.jacobian_parts(&u, true).unwrap();
    assert_eq!(a.a.asymmetry(), 0.0);
    for (x, y) in a.a.values().iter().zip(b.a.values()) {
        assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
    }
    assert_eq!(many.workers(), 7);
}

#[test]
fn barrier_energy_is_log_shifted() {
    let spec = ProblemSpec::new(1.0).with_term(1, 2.0).unwrap();
    let mesh = generate_annulus_mesh_with(1.0, 2.0, 2, 12, BoundaryKind::Robin, BoundaryKind::Robin).unwrap();
    let asm = Assembler::new(&spec, &mesh).unwrap();
    let u = vec![3.0; mesh.num_vertices()];
    let area = mesh.total_measure();
    let shift = asm.energy(&u, 0.0).unwrap() - asm.energy(&u, 0.5).unwrap();
    assert!((shift - 0.5 * 3f64.ln() * area).abs() < 1e-12 * area);
}
