//! Jacobi-preconditioned CG on a stiffness matrix, and what happens on an
//! indefinite Jacobian with and without truncation.
//!
//! cargo run --example conjugate_gradient

use critfem::fem::Assembler;
use critfem::linalg::{norm2, CgOptions};
use critfem::mesh::{generate_interval_mesh_with, BoundaryKind};
use critfem::problem::ProblemSpec;
use critfem::{cg_solve, generate_annulus_mesh, LinearOperator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ProblemSpec::new(1.0).with_term(1, 1.0)?;
    let mesh = generate_annulus_mesh(1.0, 2.0, 16, 96)?;
    let a = Assembler::new(&spec, &mesh)?.jacobian_parts(&vec![1.0; mesh.num_vertices()], false)?.a;
    let b: Vec<f64> = (0..a.dim()).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
    let out = cg_solve(&a, &b, &CgOptions::default())?;
    let mut r = vec![0.0; b.len()];
    a.apply(&out.x, &mut r);
    let res: Vec<f64> = r.iter().zip(&b).map(|(x, y)| x - y).collect();
    println!(
        "SPD: n = {}, nnz = {}, {:?} after {} iterations, relative residual {:.1e}",
        a.dim(),
        a.nnz(),
        out.status,
        out.iterations,
        norm2(&res) / norm2(&b)
    );

    // weak diffusion and a strongly negative reaction make A indefinite
    let spec = ProblemSpec::new(1e-3).with_term(1, -50.0)?;
    let mesh = generate_interval_mesh_with(0.0, 1.0, 50, BoundaryKind::Robin, BoundaryKind::Robin)?;
    let a = Assembler::new(&spec, &mesh)?.jacobian_parts(&vec![1.0; 51], false)?.a;
    let b = vec![1.0; 51];
    let truncated = cg_solve(&a, &b, &CgOptions { preconditioner: critfem::Preconditioner::None, ..Default::default() })?;
    let through = cg_solve(&a, &b, &CgOptions { allow_indefinite: true, ..Default::default() })?;
    println!("indefinite, truncated: {:?} after {} iterations", truncated.status, truncated.iterations);
    println!(
        "indefinite, stepping through: {:?} after {} iterations, negative curvature seen: {}",
        through.status, through.iterations, through.negative_curvature
    );
    Ok(())
}
