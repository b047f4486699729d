//! Convergence study for -Δu + u = f with a planted smooth solution on an
//! annulus; the L2 error should fall by about four per refinement.
//!
//! cargo run --release --example manufactured_solution

use critfem::fem::Assembler;
use critfem::mesh::{generate_annulus_mesh_with, BoundaryKind};
use critfem::{newton_standard, FeFunction, Field, ProblemSpec, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exact = |x: &[f64; 3]| 2.0 + x[0].cos() * x[1].sin();
    let spec = ProblemSpec::new(1.0)
        .with_term(1, 1.0)?
        .with_term(0, Field::from_fn(|x| -(2.0 + 3.0 * x[0].cos() * x[1].sin())))?
        .with_dirichlet(Field::from_fn(exact));
    let cfg = SolverConfig { eps: 1e-11, ..Default::default() };
    let mut prev: Option<f64> = None;
    println!("{:>8} {:>12} {:>6}", "vertices", "L2 error", "order");
    for k in [1, 2, 4, 8] {
        let d = BoundaryKind::Dirichlet;
        let mesh = generate_annulus_mesh_with(1.0, 2.0, 4 * k, 24 * k, d, d)?;
        let r = newton_standard(&spec, &mesh, &FeFunction::constant(mesh.num_vertices(), 2.0), &cfg)?;
        let err = Assembler::new(&spec, &mesh)?.l2_error(&r.solution, exact);
        let order = prev.map(|p| format!("{:.3}", (p / err).log2())).unwrap_or_default();
        println!("{:>8} {err:>12.4e} {order:>6}", mesh.num_vertices());
        prev = Some(err);
    }
    Ok(())
}
