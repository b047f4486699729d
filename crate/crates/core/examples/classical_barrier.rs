//! The finite-dimensional log-barrier loop on two small problems: an interior
//! minimizer, where the iterates converge and the multiplier estimates μ/x
//! vanish, and f(x) = x, whose barrier minimizer is exactly x(μ) = μ.
//!
//! cargo run --example classical_barrier

use critfem::solvers::{classical_barrier_minimize, FnObjective};
use critfem::SolverConfig;
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = [2.0, 0.5, 3.0];
    let quad = FnObjective {
        value: |x: &[f64]| 0.5 * x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>(),
        gradient: |x: &[f64]| x.iter().zip(&c).map(|(a, b)| a - b).collect(),
        hessian: |_: &[f64]| DMatrix::identity(3, 3),
    };
    let r = classical_barrier_minimize(&quad, &[5.0, 5.0, 5.0], &SolverConfig::default())?;
    println!("interior minimizer c = {c:?}");
    println!("  x = {:?} after {} Newton steps over {} values of mu", r.x, r.iterations, r.mu_trajectory.len());
    println!("  multipliers mu/x = {:?}", r.multiplier_estimates);

    let linear = FnObjective {
        value: |x: &[f64]| x[0],
        gradient: |_: &[f64]| vec![1.0],
        hessian: |_: &[f64]| DMatrix::zeros(1, 1),
    };
    let cfg = SolverConfig { eps: 1e-6, ..Default::default() };
    let r = classical_barrier_minimize(&linear, &[3.0], &cfg)?;
    println!("boundary minimizer of f(x) = x");
    for s in &r.stages {
        println!("  mu {:>8.1e}: {} steps, |grad B| {:.1e}", s.mu, s.iterations, s.final_residual);
    }
    println!("  final x = {:.3e} at mu = {:.1e}", r.x[0], r.mu_trajectory.last().unwrap());
    Ok(())
}
