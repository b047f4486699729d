//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the verdict lines always
//! reach the terminal; the process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use critfem::cli::{plot_integrand, SUITE_RADII, SUITE_SHELL_LAYERS, SUITE_SHELL_LEVEL};
use critfem::fem::Assembler;
use critfem::linalg::{add_scaled, LinearOperator};
use critfem::mesh::{
    generate_annulus_mesh_with, generate_interval_mesh_with, generate_shell_mesh_with, BoundaryKind, SimplicialMesh,
};
use critfem::problem::{builtin_example, Field, HamiltonianParams, ProblemSpec};
use critfem::solvers::{
    barrier_solve, classical_barrier_minimize, newton_safeguarded, newton_standard, step_to_boundary, FnObjective,
    Sign, SolveReport, SolverConfig,
};
use critfem::FeFunction;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn shell(ri: f64, ro: f64, kind: BoundaryKind) -> SimplicialMesh {
    generate_shell_mesh_with(ri, ro, SUITE_SHELL_LEVEL, SUITE_SHELL_LAYERS, kind, kind).unwrap()
}

fn recorded() -> SolverConfig {
    SolverConfig { record_iterates: true, ..SolverConfig::default() }
}

// 1 ------------------------------------------------------------------------

fn fd_consistency() -> Verdict {
    let ex1 = builtin_example(1).unwrap();
    let ex4 = builtin_example(4).unwrap();
    let cases: Vec<(&str, &ProblemSpec, SimplicialMesh)> = vec![
        (
            "interval",
            &ex1,
            generate_interval_mesh_with(0.0, 1.0, 99, BoundaryKind::Dirichlet, BoundaryKind::Robin).unwrap(),
        ),
        ("annulus", &ex1, generate_annulus_mesh_with(1.0, 2.0, 9, 50, BoundaryKind::Robin, BoundaryKind::Robin).unwrap()),
        ("shell", &ex1, generate_shell_mesh_with(1.0, 2.0, 2, 8, BoundaryKind::Robin, BoundaryKind::Robin).unwrap()),
        ("shell/dirichlet", &ex4, generate_shell_mesh_with(1.0, 2.0, 2, 8, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_g, mut worst_h) = (0.0f64, 0.0f64);
    let mut sizes = Vec::new();
    for (name, spec, mesh) in &cases {
        let asm = Assembler::new(spec, mesh).unwrap();
        let mask = mesh.dirichlet_mask();
        let n = mesh.num_vertices();
        sizes.push(format!("{name} {n}"));
        for mu in [0.0, 0.1, 1.0] {
            for _ in 0..20 {
                let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
                let u = asm.apply_dirichlet(&FeFunction::new(u)).coefficients;
                let v: Vec<f64> = (0..n).map(|i| if mask[i] { 0.0 } else { rng.gen_range(-1.0..1.0) }).collect();
                let h = 1e-4;
                let plus: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + h * b).collect();
                let minus: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a - h * b).collect();

                let g = asm.residual(&u, mu).unwrap();
                let gv = dot(&g, &v);
                let fd = (asm.energy(&plus, mu).unwrap() - asm.energy(&minus, mu).unwrap()) / (2.0 * h);
                let err_g = (fd - gv).abs() / gv.abs().max(1e-300);
                worst_g = worst_g.max(err_g);
                ensure(err_g <= 1e-6, || format!("{name} mu={mu}: gradient rel err {err_g:e}"))?;

                let jac = asm.jacobian_parts(&u, mu != 0.0).unwrap();
                let mut kv = vec![0.0; n];
                match &jac.m {
                    Some(m) => add_scaled(&jac.a, mu, m).apply(&v, &mut kv),
                    None => jac.a.apply(&v, &mut kv),
                }
                let gp = asm.residual(&plus, mu).unwrap();
                let gm = asm.residual(&minus, mu).unwrap();
                let fdh: Vec<f64> = gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
                let diff: Vec<f64> = fdh.iter().zip(&kv).map(|(a, b)| a - b).collect();
                let err_h = norm(&diff) / norm(&kv);
                worst_h = worst_h.max(err_h);
                ensure(err_h <= 1e-5, || format!("{name} mu={mu}: Hessian rel err {err_h:e}"))?;
            }
        }
    }
    Ok(format!("meshes [{}], worst gradient {worst_g:.1e}, worst Hessian {worst_h:.1e}", sizes.join(", ")))
}

// 2 ------------------------------------------------------------------------

fn mms_orders() -> Verdict {
    let cfg = SolverConfig { eps: 1e-11, ..SolverConfig::default() };
    let mut orders = Vec::new();

    // -u'' + u = f with u = 1 + sin(πx) on [0, 1]
    let pi = std::f64::consts::PI;
    let exact_1d = move |x: &[f64; 3]| 1.0 + (pi * x[0]).sin();
    let spec_1d = ProblemSpec::new(1.0)
        .with_term(1, 1.0)
        .unwrap()
        .with_term(0, Field::from_fn(move |x| -(1.0 + (pi * pi + 1.0) * (pi * x[0]).sin())))
        .unwrap()
        .with_dirichlet(Field::from_fn(exact_1d));
    let mut errs = Vec::new();
    for cells in [16, 32, 64] {
        let mesh = generate_interval_mesh_with(0.0, 1.0, cells, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet).unwrap();
        let r = newton_standard(&spec_1d, &mesh, &FeFunction::constant(cells + 1, 1.0), &cfg).unwrap();
        ensure(r.converged, || format!("interval solve failed: {:?}", r.failure))?;
        errs.push(Assembler::new(&spec_1d, &mesh).unwrap().l2_error(&r.solution, exact_1d));
    }
    orders.push(("interval", errs.clone()));

    // -Δu + u = f with u = 2 + cos x sin y on 1 < r < 2
    let exact_2d = |x: &[f64; 3]| 2.0 + x[0].cos() * x[1].sin();
    let spec_2d = ProblemSpec::new(1.0)
        .with_term(1, 1.0)
        .unwrap()
        .with_term(0, Field::from_fn(|x| -(2.0 + 3.0 * x[0].cos() * x[1].sin())))
        .unwrap()
        .with_dirichlet(Field::from_fn(exact_2d));
    let mut errs = Vec::new();
    for k in [1, 2, 4] {
        let mesh = generate_annulus_mesh_with(1.0, 2.0, 4 * k, 24 * k, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet)
            .unwrap();
        let u0 = FeFunction::constant(mesh.num_vertices(), 2.0);
        let r = newton_standard(&spec_2d, &mesh, &u0, &cfg).unwrap();
        ensure(r.converged, || format!("annulus solve failed: {:?}", r.failure))?;
        errs.push(Assembler::new(&spec_2d, &mesh).unwrap().l2_error(&r.solution, exact_2d));
    }
    orders.push(("annulus", errs));

    let mut out = Vec::new();
    for (name, e) in orders {
        let p: Vec<f64> = e.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        for &q in &p {
            ensure((q - 2.0).abs() <= 0.2, || format!("{name}: observed orders {p:?} from errors {e:?}"))?;
        }
        out.push(format!("{name} {:.3}/{:.3}", p[0], p[1]));
    }
    Ok(format!("L2 orders {}", out.join(", ")))
}

// 3, 4, 6 ------------------------------------------------------------------

struct Solves {
    /// (label, spec, mesh, report, safeguarded)
    runs: Vec<(String, ProblemSpec, SimplicialMesh, SolveReport, bool)>,
}

fn example_one(solves: &mut Solves) -> Verdict {
    let spec = builtin_example(1).unwrap();
    let mut counts = Vec::new();
    for (ri, ro) in SUITE_RADII {
        let mesh = shell(ri, ro, BoundaryKind::Robin);
        let u0 = FeFunction::constant(mesh.num_vertices(), 1.0);
        let cfg = recorded();
        let a = newton_standard(&spec, &mesh, &u0, &cfg).unwrap();
        let b = newton_safeguarded(&spec, &mesh, &u0, &cfg, 0.0).unwrap();
        let c = barrier_solve(&spec, &mesh, &u0, &cfg).unwrap();
        for r in [&a, &b, &c] {
            ensure(r.converged && r.residual <= 1e-7, || format!("{} on ({ri},{ro}): {:?} resid {:e}", r.method, r.failure, r.residual))?;
            ensure(r.sign == Sign::Positive, || format!("{} on ({ri},{ro}): sign {}", r.method, r.sign))?;
        }
        ensure(a.iterations <= 15, || format!("newton took {} iterations on ({ri},{ro})", a.iterations))?;
        ensure(a.iterates == b.iterates, || format!("safeguarded iterates differ from newton on ({ri},{ro})"))?;
        counts.push(format!("({ri},{ro}): {}/{}/{}", a.iterations, b.iterations, c.iterations));
        solves.runs.push((format!("ex1 safeguarded ({ri},{ro})"), spec.clone(), mesh.clone(), b, true));
        solves.runs.push((format!("ex1 barrier ({ri},{ro})"), spec.clone(), mesh.clone(), c, true));
        solves.runs.push((format!("ex1 newton ({ri},{ro})"), spec.clone(), mesh, a, false));
    }
    Ok(format!("iterations newton/safeguarded/barrier {}", counts.join(", ")))
}

fn negative_branch(solves: &mut Solves) -> Verdict {
    let spec = builtin_example(1).unwrap();
    let mut out = Vec::new();
    for (ri, ro) in SUITE_RADII {
        let mesh = shell(ri, ro, BoundaryKind::Robin);
        let u0 = FeFunction::constant(mesh.num_vertices(), -1.0);
        let r = newton_standard(&spec, &mesh, &u0, &recorded()).unwrap();
        ensure(r.converged, || format!("({ri},{ro}): {:?}", r.failure))?;
        ensure(r.sign == Sign::Negative, || format!("({ri},{ro}): sign {}", r.sign))?;
        out.push(format!("({ri},{ro}) {} itns", r.iterations));
        solves.runs.push((format!("ex1 newton -1 ({ri},{ro})"), spec.clone(), mesh, r, false));
    }
    Ok(format!("sign - on {}", out.join(", ")))
}

fn example_four(solves: &mut Solves) -> Verdict {
    let spec = builtin_example(4).unwrap();
    let mut out = Vec::new();
    for (ri, ro) in SUITE_RADII {
        let mesh = shell(ri, ro, BoundaryKind::Dirichlet);
        let u0 = FeFunction::constant(mesh.num_vertices(), 1.0);
        let cfg = SolverConfig { mu0: 10.0, ..recorded() };
        let newton = newton_standard(&spec, &mesh, &u0, &cfg).unwrap();
        let r = barrier_solve(&spec, &mesh, &u0, &cfg).unwrap();
        ensure(r.converged && r.residual <= 1e-7, || format!("({ri},{ro}): {:?}", r.failure))?;
        ensure(r.sign == Sign::Positive, || format!("({ri},{ro}): sign {}", r.sign))?;
        out.push(format!(
            "({ri},{ro}) barrier {} itns +, newton {}{}",
            r.iterations,
            newton.sign,
            if newton.converged { "" } else { " (not converged)" }
        ));
        solves.runs.push((format!("ex4 barrier ({ri},{ro})"), spec.clone(), mesh, r, true));
    }
    Ok(out.join("; "))
}

// 5 ------------------------------------------------------------------------

fn nonconvexity() -> Verdict {
    // R/8 + 5·τ²/12 + 7·σ²/8 + 3·2πρ at u = 1, in integer arithmetic:
    // -1000/8 + 5·72/12 + 7·48/8 + 3·2 = -125 + 30 + 42 + 6
    let exact: i64 = -1000 / 8 + 5 * 72 / 12 + 7 * 48 / 8 + 3 * 2;
    ensure(exact == -47, || format!("integer oracle gave {exact}"))?;
    let spec = builtin_example(2).unwrap();
    let d2 = spec.integrand_second_derivative(&[1.0, 0.0, 0.0], 1.0).unwrap();
    ensure((d2 - exact as f64).abs() <= 1e-12, || format!("second derivative {d2}"))?;

    let second_differences = |r: f64| -> Vec<f64> {
        let pts = plot_integrand(r, 0.4, 3.0, 100).unwrap();
        pts.windows(3).map(|w| w[0].1 - 2.0 * w[1].1 + w[2].1).collect()
    };
    let nonconvex = second_differences(-1000.0);
    ensure(nonconvex.iter().any(|&d| d > 0.0) && nonconvex.iter().any(|&d| d < 0.0), || {
        "R = -1000 profile has no sign change in second differences".into()
    })?;
    ensure(second_differences(0.0).iter().all(|&d| d > 0.0), || "R = 0 profile is not convex".into())?;
    let pts = plot_integrand(-1000.0, 0.4, 3.0, 100).unwrap();
    ensure(pts.iter().all(|&(u, i)| critfem::problem::example2_integrand(-1000.0, -u) == i), || "I(-u) != I(u)".into())?;
    Ok(format!("I''(1) = {d2}, R=-1000 non-convex, R=0 convex, I even"))
}

// 7 ------------------------------------------------------------------------

fn certificates(solves: &Solves) -> Verdict {
    let cfg = SolverConfig::default();
    let mut checked_steps = 0;
    let mut stages = 0;
    for (label, spec, mesh, report, safeguarded) in &solves.runs {
        if !safeguarded {
            continue;
        }
        let asm = Assembler::new(spec, mesh).unwrap();
        let free: Vec<bool> = mesh.dirichlet_mask().iter().map(|d| !d).collect();
        ensure(report.iterates.len() == report.steps.len() + 1, || format!("{label}: iterate log incomplete"))?;
        for u in &report.iterates {
            ensure(u.iter().zip(&free).all(|(&v, &f)| !f || v > 0.0), || format!("{label}: nonpositive iterate"))?;
        }
        for (k, step) in report.steps.iter().enumerate() {
            let (u, next) = (&report.iterates[k], &report.iterates[k + 1]);
            let mu = step.mu;
            let f = asm.residual(u, mu).unwrap();
            let w: Vec<f64> = next.iter().zip(u).map(|(a, b)| (a - b) / step.alpha).collect();
            let jac = asm.jacobian_parts(u, mu != 0.0).unwrap();
            let mut kw = vec![0.0; w.len()];
            match &jac.m {
                Some(m) => add_scaled(&jac.a, mu, m).apply(&w, &mut kw),
                None => jac.a.apply(&w, &mut kw),
            }
            let slope = dot(&f, &kw);
            let descent = dot(&w, &f);
            ensure(descent < 0.0 || step.fallback, || format!("{label} step {k}: w·f = {descent:e} without fallback"))?;
            ensure(slope < 0.0, || format!("{label} step {k}: merit slope {slope:e}"))?;
            let before = 0.5 * norm(&f).powi(2);
            let after = 0.5 * norm(&asm.residual(next, mu).unwrap()).powi(2);
            let bound = before + cfg.eta * step.alpha * slope;
            ensure(after <= bound + 1e-10 * before, || format!("{label} step {k}: Armijo {after:e} > {bound:e}"))?;
            ensure(step.alpha <= step.alpha_bar && step.alpha_bar <= 1.0, || format!("{label} step {k}: alpha above cap"))?;
            checked_steps += 1;
        }

        let mu = &report.mu_trajectory;
        for pair in mu.windows(2) {
            let ratio = pair[1] / pair[0];
            ensure(pair[1] < pair[0] && (ratio - cfg.gamma).abs() <= 1e-12, || format!("{label}: mu ratio {ratio}"))?;
        }
        let mut start = 0;
        for stage in &report.stages {
            let u = &report.iterates[start];
            let f0 = norm(&asm.residual(u, stage.mu).unwrap());
            ensure((f0 - stage.initial_residual).abs() <= 1e-12 * f0.max(1.0), || format!("{label}: stage f0 mismatch"))?;
            let eps_mu = f64::max(f64::min(0.1, stage.mu), cfg.eps);
            let tol = f64::max(eps_mu * stage.initial_residual, eps_mu);
            ensure(stage.eps_mu == eps_mu && stage.tolerance == tol, || format!("{label}: stage tolerance {} vs {tol}", stage.tolerance))?;
            ensure(stage.final_residual <= stage.tolerance, || format!("{label}: stage at mu={} not solved", stage.mu))?;
            start += stage.iterations;
            stages += 1;
        }
    }
    Ok(format!("{checked_steps} steps replayed (feasibility, descent, Armijo), {stages} barrier stages checked"))
}

// 8 ------------------------------------------------------------------------

fn barrier_matrix() -> Verdict {
    let ex1 = builtin_example(1).unwrap();
    let ex4 = builtin_example(4).unwrap();
    let indefinite = ProblemSpec::hamiltonian(HamiltonianParams {
        diffusion: 0.01,
        scalar_curvature: -100.0,
        tau: 1.0,
        sigma: 1.0,
        rho: 0.1,
        robin_c: 1.0,
        robin_g: 0.0,
        dirichlet_g: 1.0,
    })
    .unwrap();
    let cases: Vec<(&ProblemSpec, SimplicialMesh)> = vec![
        (&ex1, generate_interval_mesh_with(0.0, 1.0, 59, BoundaryKind::Robin, BoundaryKind::Robin).unwrap()),
        (&indefinite, generate_interval_mesh_with(0.0, 1.0, 40, BoundaryKind::Robin, BoundaryKind::Dirichlet).unwrap()),
        (&ex1, generate_annulus_mesh_with(1.0, 2.0, 3, 16, BoundaryKind::Robin, BoundaryKind::Robin).unwrap()),
        (&indefinite, generate_shell_mesh_with(1.0, 2.0, 0, 2, BoundaryKind::Robin, BoundaryKind::Robin).unwrap()),
        (&ex4, generate_shell_mesh_with(1.0, 2.0, 1, 1, BoundaryKind::Dirichlet, BoundaryKind::Robin).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut min_m = f64::INFINITY;
    let mut saw_indefinite = false;
    for (spec, mesh) in &cases {
        let n = mesh.num_vertices();
        ensure(n <= 100, || format!("instance with {n} vertices"))?;
        let asm = Assembler::new(spec, mesh).unwrap();
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..2.0)).collect();
        let u = asm.apply_dirichlet(&FeFunction::new(u)).coefficients;
        let jac = asm.jacobian_parts(&u, true).unwrap();
        let a = jac.a.to_dense();
        let m = jac.m.unwrap().to_dense();
        ensure((&m - m.transpose()).amax() == 0.0, || "M not symmetric".into())?;
        let lm = SymmetricEigen::new(m.clone()).eigenvalues.min();
        min_m = min_m.min(lm);
        ensure(lm > 0.0, || format!("M has eigenvalue {lm:e}"))?;
        let mut prev = f64::NEG_INFINITY;
        for mu in [0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0] {
            let k: DMatrix<f64> = &a + &m * mu;
            let lk = SymmetricEigen::new(k).eigenvalues.min();
            if mu == 0.0 && lk < 0.0 {
                saw_indefinite = true;
            }
            ensure(lk >= prev - 1e-12 * prev.abs(), || format!("lambda_min dropped from {prev:e} to {lk:e} at mu={mu}"))?;
            prev = lk;
        }
    }
    Ok(format!(
        "{} instances, smallest eigenvalue of M {min_m:.2e}, indefinite A covered: {saw_indefinite}",
        cases.len()
    ))
}

// 9 ------------------------------------------------------------------------

fn classical_barrier() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_x = 0.0f64;
    let mut worst_l = 0.0f64;
    for trial in 0..10 {
        let dim = 1 + trial % 6;
        let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.2..5.0)).collect();
        let x0: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.1..10.0)).collect();
        let (c1, c2) = (c.clone(), c.clone());
        let f = FnObjective {
            value: move |x: &[f64]| 0.5 * x.iter().zip(&c1).map(|(a, b)| (a - b).powi(2)).sum::<f64>(),
            gradient: move |x: &[f64]| x.iter().zip(&c2).map(|(a, b)| a - b).collect(),
            hessian: move |_: &[f64]| DMatrix::identity(dim, dim),
        };
        let r = classical_barrier_minimize(&f, &x0, &SolverConfig::default()).unwrap();
        ensure(r.converged, || format!("trial {trial}: {:?}", r.failure))?;
        let dx = r.x.iter().zip(&c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let lam = r.multiplier_estimates.iter().cloned().fold(0.0, f64::max);
        worst_x = worst_x.max(dx);
        worst_l = worst_l.max(lam);
        ensure(dx <= 1e-6, || format!("trial {trial}: |x - c| = {dx:e}"))?;
        ensure(lam <= 1e-5, || format!("trial {trial}: multiplier {lam:e}"))?;
        ensure(r.steps.iter().all(|s| s.min_free_value > 0.0), || format!("trial {trial}: infeasible iterate"))?;
    }
    Ok(format!("10 quadratics, max |x - c| {worst_x:.1e}, max mu/x {worst_l:.1e}"))
}

// 10 -----------------------------------------------------------------------

fn fraction_to_boundary() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut full = 0;
    for case in 0..1000 {
        let n = rng.gen_range(1..20);
        let u: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-6.0..3.0))).collect();
        let scale = if case % 2 == 0 { 0.5 } else { 50.0 };
        let w: Vec<f64> = u.iter().map(|ui| ui * rng.gen_range(-scale..scale)).collect();
        let ab = step_to_boundary(&u, &w).map_err(|e| e.to_string())?;

        // brute-force oracle over components
        let mut amax = f64::INFINITY;
        for i in 0..n {
            if w[i] < 0.0 {
                amax = amax.min(-u[i] / w[i]);
            }
        }
        let expect = (0.99 * amax).min(1.0);
        ensure(ab == expect, || format!("case {case}: {ab} vs oracle {expect}"))?;
        ensure(ab > 0.0 && u.iter().zip(&w).all(|(a, b)| a + ab * b > 0.0), || format!("case {case}: infeasible"))?;
        if u.iter().zip(&w).all(|(a, b)| a + b / 0.99 > 0.0) {
            ensure(ab == 1.0, || format!("case {case}: full step feasible with margin but alpha = {ab}"))?;
            full += 1;
        }
    }
    Ok(format!("1000 cases, {full} with the full step feasible with margin"))
}

fn main() -> ExitCode {
    let clock = Instant::now();
    let mut solves = Solves { runs: Vec::new() };
    let mut failures = 0;
    let mut report = |id: usize, name: &str, f: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    };
    report(1, "gradient/Hessian consistency", &mut fd_consistency);
    report(2, "manufactured solution convergence", &mut mms_orders);
    report(3, "example 1 pattern", &mut || example_one(&mut solves));
    report(4, "negative branch", &mut || negative_branch(&mut solves));
    report(5, "example 2 nonconvexity", &mut nonconvexity);
    report(6, "example 4 barrier positivity", &mut || example_four(&mut solves));
    report(7, "feasibility and certificates", &mut || certificates(&solves));
    report(8, "barrier matrix properties", &mut barrier_matrix);
    report(9, "classical barrier optimizer", &mut classical_barrier);
    report(10, "99% rule", &mut fraction_to_boundary);
    println!("acceptance: {} of 10 criteria passed in {:.1}s", 10 - failures, clock.elapsed().as_secs_f64());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
