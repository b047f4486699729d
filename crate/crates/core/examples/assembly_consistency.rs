//! Checks that the assembled residual is the gradient of the barrier energy
//! and that A + μM is its Hessian, by central finite differences on a
//! spherical shell.
//!
//! cargo run --release --example assembly_consistency

use critfem::fem::Assembler;
use critfem::linalg::{add_scaled, dot, norm2, LinearOperator};
use critfem::problem::builtin_example;
use critfem::generate_shell_mesh;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = builtin_example(1)?;
    let mesh = generate_shell_mesh(1.0, 2.0, 2)?;
    let asm = Assembler::new(&spec, &mesh)?.with_workers(4);
    let n = mesh.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let h = 1e-4;
    let shift = |s: f64| -> Vec<f64> { u.iter().zip(&v).map(|(a, b)| a + s * b).collect() };

    println!("{n} vertices, {} tetrahedra", mesh.num_cells());
    println!("{:>5} {:>14} {:>14}", "mu", "grad rel err", "hess rel err");
    for mu in [0.0, 0.1, 1.0] {
        let g = asm.residual(&u, mu)?;
        let fd = (asm.energy(&shift(h), mu)? - asm.energy(&shift(-h), mu)?) / (2.0 * h);
        let eg = (fd - dot(&g, &v)).abs() / dot(&g, &v).abs();

        let jac = asm.jacobian_parts(&u, mu != 0.0)?;
        let mut kv = vec![0.0; n];
        match &jac.m {
            Some(m) => add_scaled(&jac.a, mu, m).apply(&v, &mut kv),
            None => jac.a.apply(&v, &mut kv),
        }
        let (gp, gm) = (asm.residual(&shift(h), mu)?, asm.residual(&shift(-h), mu)?);
        let diff: Vec<f64> = gp.iter().zip(&gm).zip(&kv).map(|((p, m), k)| (p - m) / (2.0 * h) - k).collect();
        println!("{mu:>5} {eg:>14.2e} {:>14.2e}", norm2(&diff) / norm2(&kv));
    }
    Ok(())
}
