//! A nonconvex Yamabe-type problem where Newton finds a sign-changing
//! solution and safeguarded Newton stalls at the boundary, while the
//! barrier method with a large initial μ reaches a positive solution.
//!
//! cargo run --release --example yamabe_barrier -- [mu0]

use critfem::cli::{SUITE_RADII, SUITE_SHELL_LAYERS, SUITE_SHELL_LEVEL};
use critfem::mesh::generate_shell_mesh_with;
use critfem::{barrier_solve, builtin_example, newton_safeguarded, newton_standard, BoundaryKind, FeFunction, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mu0: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(10.0);
    let spec = builtin_example(4)?;
    let cfg = SolverConfig { mu0, ..Default::default() };
    for (ri, ro) in SUITE_RADII {
        let d = BoundaryKind::Dirichlet;
        let mesh = generate_shell_mesh_with(ri, ro, SUITE_SHELL_LEVEL, SUITE_SHELL_LAYERS, d, d)?;
        let ones = FeFunction::constant(mesh.num_vertices(), 1.0);
        println!("shell ({ri},{ro}), {} vertices", mesh.num_vertices());
        let runs = [
            newton_standard(&spec, &mesh, &ones, &cfg)?,
            newton_safeguarded(&spec, &mesh, &ones, &cfg, 0.0)?,
            barrier_solve(&spec, &mesh, &ones, &cfg)?,
        ];
        for r in &runs {
            let min = r.solution.iter().cloned().fold(f64::INFINITY, f64::min);
            println!(
                "  {:<12} {:>3} itns  resid {:>9.2e}  sign {:>3}  min u {:>9.2e}  {}",
                r.method,
                r.iterations,
                r.residual,
                r.sign,
                min,
                r.failure.as_deref().unwrap_or("converged")
            );
        }
        let b = &runs[2];
        for s in &b.stages {
            println!("    stage mu {:>7.1e}: tol {:.2e}, {} itns", s.mu, s.tolerance, s.iterations);
        }
    }
    Ok(())
}
