//! Drives an experiment from configuration text, the same path the `solve`
//! subcommand takes, and prints the CSV rows.
//!
//! cargo run --release --example config_driven

use critfem::cli::{parse_config, run_experiment};

const CONFIG: &str = "
# explicit Hamiltonian coefficients on an annulus
problem.diffusion = 1
problem.scalar_curvature = 2
problem.tau = 0.3
problem.sigma = 0.5
problem.rho = 0.05
problem.robin_c = 1
problem.robin_g = 0.5
mesh.kind = annulus
mesh.r_in = 1, 0.5
mesh.r_out = 4
mesh.n_radial = 12
mesh.n_angular = 64
methods = newton, safeguarded, barrier:0.5
solver.gamma = 0.05
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config(CONFIG, std::path::Path::new("."))?;
    println!("method,mesh,iterations,residual,sign,converged,mu_steps");
    for row in run_experiment(&config)? {
        let r = &row.report;
        println!(
            "{},{},{},{:.3e},{},{},{}",
            row.method,
            row.mesh,
            r.iterations,
            r.residual,
            r.sign,
            r.converged,
            r.mu_trajectory.len()
        );
    }
    Ok(())
}
