//! Nonlinear solvers: plain Newton, Newton with the 99% fraction-to-boundary
//! rule and Armijo backtracking, the primal log-barrier energy method with
//! μ-continuation, and a dense classical barrier loop for small smooth
//! objectives on the positive orthant.
//!
//! The safeguarded inner loop uses the merit `φ_μ(u) = ½‖G(u) - μH(u)‖²`,
//! whose gradient along `w` is `fᵀ(A + μM)w` with `f = G - μH`. A Newton
//! direction is accepted only when both `wᵀf < 0` and `fᵀ(A + μM)w < 0`;
//! otherwise the steepest-descent direction `-(A + μM)f` of `φ_μ` is used.

use std::fmt;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::fem::{Assembler, AssemblyError, FeFunction};
use crate::linalg::{add_scaled, cg_solve, norm2, CgOptions, LinalgError, LinearOperator};
use crate::mesh::SimplicialMesh;
use crate::problem::ProblemSpec;

/// Fraction of the distance to the boundary a step may cover.
pub const FRACTION_TO_BOUNDARY: f64 = 0.99;
/// Relative step size below which an iteration counts as stagnant.
pub const STAGNATION_STEP: f64 = 1e-14;
/// Consecutive stagnant iterations that end a solve.
pub const STAGNATION_COUNT: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("nonpositive state: u = {value:e}")]
    NonpositiveState { value: f64 },
    #[error("line search failed after {halvings} contractions")]
    LineSearchFailure { halvings: usize },
    #[error("not a descent direction: slope {slope:e}")]
    NotDescent { slope: f64 },
    #[error("stagnation: {count} consecutive steps with relative size below {STAGNATION_STEP:e}")]
    Stagnation { count: usize },
    #[error("linear algebra: {0}")]
    Linalg(#[from] LinalgError),
    #[error("assembly: {0}")]
    Assembly(AssemblyError),
}

impl From<AssemblyError> for SolverError {
    fn from(e: AssemblyError) -> Self {
        match e {
            AssemblyError::NonpositiveState { value } => SolverError::NonpositiveState { value },
            other => SolverError::Assembly(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub eps: f64,
    pub mu0: f64,
    pub gamma: f64,
    pub eta: f64,
    pub backtrack: f64,
    /// Barrier stages.
    pub max_outer: usize,
    /// Newton iterations per stage (and for the standalone Newton solvers).
    pub max_inner: usize,
    pub max_halvings: usize,
    pub final_polish_mu_zero: bool,
    pub cg: CgOptions,
    /// Assembly workers.
    pub workers: usize,
    /// Keep every iterate in the report.
    pub record_iterates: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            eps: 1e-7,
            mu0: 1.0,
            gamma: 0.1,
            eta: 1e-4,
            backtrack: 0.5,
            max_outer: 40,
            max_inner: 50,
            max_halvings: 40,
            final_polish_mu_zero: true,
            cg: CgOptions::default(),
            workers: 1,
            record_iterates: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: &str| Err(SolverError::InvalidConfig(m.to_string()));
        if !(self.eps > 0.0) {
            return bad("eps must be positive");
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad("gamma must lie in (0, 1)");
        }
        if !(self.eta > 0.0 && self.eta < 0.5) {
            return bad("eta must lie in (0, 1/2)");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtrack must lie in (0, 1)");
        }
        if !(self.mu0 >= 0.0 && self.mu0.is_finite()) {
            return bad("mu0 must be finite and nonnegative");
        }
        if self.max_inner == 0 {
            return bad("max_inner must be at least 1");
        }
        if !(self.cg.rel_tol > 0.0) {
            return bad("cg tolerance must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Mixed,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Mixed => "+/-",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_sign(u: &[f64]) -> Sign {
    if !u.is_empty() && u.iter().all(|&v| v > 0.0) {
        Sign::Positive
    } else if !u.is_empty() && u.iter().all(|&v| v < 0.0) {
        Sign::Negative
    } else {
        Sign::Mixed
    }
}

/// One Newton iteration as seen by the line search.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub mu: f64,
    pub merit_before: f64,
    pub merit_after: f64,
    /// Accepted step length.
    pub alpha: f64,
    /// Step cap from the 99% rule (1 for unsafeguarded steps).
    pub alpha_bar: f64,
    /// `∇φ_μᵀw` for the direction actually used.
    pub slope: f64,
    /// `wᵀ(G - μH)` for the direction actually used.
    pub descent: f64,
    /// The Newton direction failed the descent test and `-(A + μM)f` was used.
    pub fallback: bool,
    /// Smallest value on unconstrained vertices after the step.
    pub min_free_value: f64,
    pub cg_iterations: usize,
}

/// One barrier subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub mu: f64,
    pub eps_mu: f64,
    pub tolerance: f64,
    /// `‖G - μH‖` at the warm start.
    pub initial_residual: f64,
    pub final_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: String,
    pub converged: bool,
    pub outer_iterations: usize,
    /// Newton iterations in total, one linear solve each.
    pub iterations: usize,
    /// Final unbarriered `‖G(u)‖₂`.
    pub residual: f64,
    /// Active residual `‖G - μH‖₂` before every iteration and at the end of
    /// every loop.
    pub residual_history: Vec<f64>,
    pub mu_trajectory: Vec<f64>,
    pub sign: Sign,
    /// `μ/uᵢ` at the last positive μ; empty after a μ = 0 polish.
    pub multiplier_estimates: Vec<f64>,
    pub solution: FeFunction,
    pub steps: Vec<StepRecord>,
    pub stages: Vec<StageRecord>,
    /// Every iterate including the start, if requested.
    pub iterates: Vec<Vec<f64>>,
    pub failure: Option<String>,
    pub wall_ms: f64,
}

impl SolveReport {
    fn start(method: &str, u: &[f64], record: bool) -> Self {
        SolveReport {
            method: method.to_string(),
            converged: false,
            outer_iterations: 0,
            iterations: 0,
            residual: f64::NAN,
            residual_history: Vec::new(),
            mu_trajectory: Vec::new(),
            sign: classify_sign(u),
            multiplier_estimates: Vec::new(),
            solution: FeFunction::new(u.to_vec()),
            steps: Vec::new(),
            stages: Vec::new(),
            iterates: if record { vec![u.to_vec()] } else { Vec::new() },
            failure: None,
            wall_ms: 0.0,
        }
    }

    fn finish(&mut self, asm: &Assembler, u: Vec<f64>, clock: Instant) {
        self.residual = asm.residual(&u, 0.0).map(|g| norm2(&g)).unwrap_or(f64::NAN);
        self.sign = classify_sign(&u);
        self.solution = FeFunction::new(u);
        self.wall_ms = clock.elapsed().as_secs_f64() * 1e3;
    }
}

/// Largest step `ᾱ = min{0.99·α_max, 1}` keeping `u + ᾱw > 0`, where
/// `α_max = min{-uᵢ/wᵢ : wᵢ < 0}`.
pub fn step_to_boundary(u: &[f64], w: &[f64]) -> Result<f64, SolverError> {
    step_to_boundary_masked(u, w, None)
}

/// As [`step_to_boundary`], restricted to indices with `free[i]`.
pub fn step_to_boundary_masked(u: &[f64], w: &[f64], free: Option<&[bool]>) -> Result<f64, SolverError> {
    let mut alpha_max = f64::INFINITY;
    for (i, (&ui, &wi)) in u.iter().zip(w).enumerate() {
        if free.is_some_and(|f| !f[i]) {
            continue;
        }
        if !(ui > 0.0) {
            return Err(SolverError::NonpositiveState { value: ui });
        }
        if wi < 0.0 {
            alpha_max = alpha_max.min(-ui / wi);
        }
    }
    Ok((FRACTION_TO_BOUNDARY * alpha_max).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArmijoStep {
    pub alpha: f64,
    pub merit: f64,
    pub point: Vec<f64>,
    pub contractions: usize,
}

/// Backtracks `α = ᾱ·βᵏ` until `φ(u + αw) ≤ φ(u) + ηα·slope`. The merit may
/// return `None` for points outside its domain, which counts as a rejection.
#[allow(clippy::too_many_arguments)]
pub fn armijo_backtrack(
    mut merit: impl FnMut(&[f64]) -> Option<f64>,
    merit_at_u: f64,
    slope: f64,
    u: &[f64],
    w: &[f64],
    alpha_bar: f64,
    eta: f64,
    backtrack: f64,
    max_halvings: usize,
) -> Result<ArmijoStep, SolverError> {
    if !(slope < 0.0) {
        return Err(SolverError::NotDescent { slope });
    }
    if !(alpha_bar > 0.0) {
        return Err(SolverError::LineSearchFailure { halvings: 0 });
    }
    let mut alpha = alpha_bar;
    for k in 0..=max_halvings {
        let point: Vec<f64> = u.iter().zip(w).map(|(ui, wi)| ui + alpha * wi).collect();
        if let Some(m) = merit(&point) {
            if m.is_finite() && m <= merit_at_u + eta * alpha * slope {
                return Ok(ArmijoStep { alpha, merit: m, point, contractions: k });
            }
        }
        alpha *= backtrack;
    }
    Err(SolverError::LineSearchFailure { halvings: max_halvings })
}

/// Subproblem tolerance `max{ε_μ‖f⁰‖, ε_μ}` with `ε_μ = max{min{0.1, μ}, ε}`.
pub fn subproblem_tolerance(mu: f64, eps: f64, initial_residual: f64) -> (f64, f64) {
    let eps_mu = mu.min(0.1).max(eps);
    (eps_mu, (eps_mu * initial_residual).max(eps_mu))
}

enum Outcome {
    Converged,
    Exhausted,
    Failed(SolverError),
}

struct Newton<'a, 'b> {
    asm: &'b Assembler<'a>,
    cfg: &'b SolverConfig,
    free: Vec<bool>,
}

impl Newton<'_, '_> {
    fn min_free(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.free).filter(|(_, &f)| f).map(|(v, _)| *v).fold(f64::INFINITY, f64::min)
    }

    /// Newton iterations at fixed μ until `‖G - μH‖ ≤ tol`.
    fn run(&self, u: &mut Vec<f64>, mu: f64, tol: f64, safeguard: bool, report: &mut SolveReport) -> (Outcome, usize, f64) {
        let mut stagnant = 0;
        let mut iters = 0;
        let mut f = match self.asm.residual(u, mu) {
            Ok(f) => f,
            Err(e) => return (Outcome::Failed(e.into()), 0, f64::NAN),
        };
        loop {
            let rn = norm2(&f);
            report.residual_history.push(rn);
            if !rn.is_finite() {
                return (Outcome::Failed(SolverError::NonpositiveState { value: f64::NAN }), iters, rn);
            }
            if rn <= tol {
                return (Outcome::Converged, iters, rn);
            }
            if iters == self.cfg.max_inner {
                return (Outcome::Exhausted, iters, rn);
            }
            iters += 1;
            report.iterations += 1;
            match self.step(u, &f, mu, safeguard, report) {
                Ok((next, next_f, rel)) => {
                    *u = next;
                    f = next_f;
                    if self.cfg.record_iterates {
                        report.iterates.push(u.clone());
                    }
                    stagnant = if rel < STAGNATION_STEP { stagnant + 1 } else { 0 };
                    if stagnant >= STAGNATION_COUNT {
                        report.residual_history.push(norm2(&f));
                        return (Outcome::Failed(SolverError::Stagnation { count: stagnant }), iters, norm2(&f));
                    }
                }
                Err(e) => return (Outcome::Failed(e), iters, rn),
            }
        }
    }

    /// One Newton step; returns the new iterate, its residual and the
    /// relative step size.
    fn step(
        &self,
        u: &[f64],
        f: &[f64],
        mu: f64,
        safeguard: bool,
        report: &mut SolveReport,
    ) -> Result<(Vec<f64>, Vec<f64>, f64), SolverError> {
        let jac = self.asm.jacobian_parts(u, mu != 0.0)?;
        let k: Box<dyn LinearOperator + '_> = match &jac.m {
            Some(m) => Box::new(add_scaled(&jac.a, mu, m)),
            None => Box::new(jac.a.clone()),
        };
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let mut cg = self.cfg.cg;
        cg.allow_indefinite = !safeguard;
        let sol = cg_solve(k.as_ref(), &rhs, &cg)?;
        let mut w = sol.x;
        let merit0 = 0.5 * norm2(f).powi(2);
        let u_norm = norm2(u).max(f64::MIN_POSITIVE);

        if !safeguard {
            let next: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a + b).collect();
            let next_f = self.asm.residual(&next, mu)?;
            let kw = apply(k.as_ref(), &w);
            report.steps.push(StepRecord {
                mu,
                merit_before: merit0,
                merit_after: 0.5 * norm2(&next_f).powi(2),
                alpha: 1.0,
                alpha_bar: 1.0,
                slope: dotp(f, &kw),
                descent: dotp(&w, f),
                fallback: false,
                min_free_value: self.min_free(&next),
                cg_iterations: sol.iterations,
            });
            return Ok((next, next_f, norm2(&w) / u_norm));
        }

        let mut descent = dotp(&w, f);
        let mut slope = dotp(f, &apply(k.as_ref(), &w));
        let mut fallback = false;
        if !(descent < 0.0 && slope < 0.0) {
            let kf = apply(k.as_ref(), f);
            w = kf.iter().map(|v| -v).collect();
            descent = dotp(&w, f);
            slope = -dotp(&kf, &kf);
            fallback = true;
        }
        let alpha_bar = step_to_boundary_masked(u, &w, Some(&self.free))?;
        let mut last_f = Vec::new();
        let accepted = armijo_backtrack(
            |v| {
                let r = self.asm.residual(v, mu).ok()?;
                let m = 0.5 * norm2(&r).powi(2);
                last_f = r;
                Some(m)
            },
            merit0,
            slope,
            u,
            &w,
            alpha_bar,
            self.cfg.eta,
            self.cfg.backtrack,
            self.cfg.max_halvings,
        )?;
        report.steps.push(StepRecord {
            mu,
            merit_before: merit0,
            merit_after: accepted.merit,
            alpha: accepted.alpha,
            alpha_bar,
            slope,
            descent,
            fallback,
            min_free_value: self.min_free(&accepted.point),
            cg_iterations: sol.iterations,
        });
        let rel = accepted.alpha * norm2(&w) / u_norm;
        Ok((accepted.point, last_f, rel))
    }
}

fn apply(op: &dyn LinearOperator, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    op.apply(x, &mut y);
    y
}

fn dotp(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn setup<'a>(
    spec: &'a ProblemSpec,
    mesh: &'a SimplicialMesh,
    u0: &FeFunction,
    config: &SolverConfig,
) -> Result<(Assembler<'a>, Vec<f64>), SolverError> {
    config.validate()?;
    let asm = Assembler::new(spec, mesh)?.with_workers(config.workers);
    if u0.len() != asm.num_dofs() {
        return Err(SolverError::Assembly(AssemblyError::DimensionMismatch { expected: asm.num_dofs(), found: u0.len() }));
    }
    let u = asm.apply_dirichlet(u0).coefficients;
    Ok((asm, u))
}

fn fail(report: &mut SolveReport, e: &SolverError, mu: Option<f64>) {
    report.converged = false;
    report.failure = Some(match mu {
        Some(mu) if mu > 0.0 => format!("{e} (at mu = {mu:e})"),
        _ => e.to_string(),
    });
}

/// Full Newton steps `A(u)w = -G(u)` until `‖G‖₂ ≤ ε`.
///
/// Configuration and assembly-setup problems are returned as errors; any
/// failure during the iteration is recorded in the report.
pub fn newton_standard(
    spec: &ProblemSpec,
    mesh: &SimplicialMesh,
    u0: &FeFunction,
    config: &SolverConfig,
) -> Result<SolveReport, SolverError> {
    let clock = Instant::now();
    let (asm, mut u) = setup(spec, mesh, u0, config)?;
    let mut report = SolveReport::start("newton", &u, config.record_iterates);
    let newton = Newton { asm: &asm, cfg: config, free: asm.dirichlet_mask().iter().map(|d| !d).collect() };
    let (outcome, _, _) = newton.run(&mut u, 0.0, config.eps, false, &mut report);
    report.outer_iterations = 1;
    match outcome {
        Outcome::Converged => report.converged = true,
        Outcome::Exhausted => report.failure = Some(format!("no convergence in {} iterations", config.max_inner)),
        Outcome::Failed(e) => fail(&mut report, &e, None),
    }
    report.finish(&asm, u, clock);
    Ok(report)
}

/// Safeguarded Newton on `G - μH = 0` at fixed `μ ≥ 0`: 99% rule, Armijo
/// backtracking on `φ_μ`, descent fallback and stagnation detection.
/// Requires a strictly positive start.
pub fn newton_safeguarded(
    spec: &ProblemSpec,
    mesh: &SimplicialMesh,
    u0: &FeFunction,
    config: &SolverConfig,
    mu: f64,
) -> Result<SolveReport, SolverError> {
    let clock = Instant::now();
    let (asm, mut u) = setup(spec, mesh, u0, config)?;
    if let Some(&v) = u.iter().find(|&&v| !(v > 0.0)) {
        return Err(SolverError::NonpositiveState { value: v });
    }
    if !(mu >= 0.0) {
        return Err(SolverError::InvalidConfig("mu must be nonnegative".into()));
    }
    let mut report = SolveReport::start("safeguarded", &u, config.record_iterates);
    let newton = Newton { asm: &asm, cfg: config, free: asm.dirichlet_mask().iter().map(|d| !d).collect() };
    let (outcome, _, _) = newton.run(&mut u, mu, config.eps, true, &mut report);
    report.outer_iterations = 1;
    if mu > 0.0 {
        report.mu_trajectory.push(mu);
    }
    match outcome {
        Outcome::Converged => {
            report.converged = true;
            if mu > 0.0 {
                report.multiplier_estimates = u.iter().map(|v| mu / v).collect();
            }
        }
        Outcome::Exhausted => report.failure = Some(format!("no convergence in {} iterations", config.max_inner)),
        Outcome::Failed(e) => fail(&mut report, &e, Some(mu)),
    }
    report.finish(&asm, u, clock);
    Ok(report)
}

/// Primal barrier energy method: safeguarded Newton on `G - μH = 0` for
/// `μ = μ₀, γμ₀, γ²μ₀, …` while `μ ≥ ε`, each stage warm-started from the
/// last and solved to `max{ε_μ‖f⁰‖, ε_μ}`, followed by a μ = 0 polish to
/// `‖G‖ ≤ ε`. With `μ₀ = 0` only the polish runs.
pub fn barrier_solve(
    spec: &ProblemSpec,
    mesh: &SimplicialMesh,
    u0: &FeFunction,
    config: &SolverConfig,
) -> Result<SolveReport, SolverError> {
    let clock = Instant::now();
    let (asm, mut u) = setup(spec, mesh, u0, config)?;
    if let Some(&v) = u.iter().find(|&&v| !(v > 0.0)) {
        return Err(SolverError::NonpositiveState { value: v });
    }
    let mut report = SolveReport::start("barrier", &u, config.record_iterates);
    let newton = Newton { asm: &asm, cfg: config, free: asm.dirichlet_mask().iter().map(|d| !d).collect() };

    let mut mu = config.mu0;
    let mut last_mu = 0.0;
    while mu > 0.0 && mu >= config.eps && report.stages.len() < config.max_outer {
        let f0 = match asm.residual(&u, mu) {
            Ok(f) => norm2(&f),
            Err(e) => {
                fail(&mut report, &e.into(), Some(mu));
                report.finish(&asm, u, clock);
                return Ok(report);
            }
        };
        let (eps_mu, tol) = subproblem_tolerance(mu, config.eps, f0);
        report.mu_trajectory.push(mu);
        let (outcome, iterations, final_residual) = newton.run(&mut u, mu, tol, true, &mut report);
        report.stages.push(StageRecord {
            mu,
            eps_mu,
            tolerance: tol,
            initial_residual: f0,
            final_residual,
            iterations,
            converged: matches!(outcome, Outcome::Converged),
        });
        report.outer_iterations += 1;
        match outcome {
            Outcome::Converged => {}
            Outcome::Exhausted => {
                report.failure = Some(format!("stage at mu = {mu:e} not solved in {} iterations", config.max_inner));
                report.finish(&asm, u, clock);
                return Ok(report);
            }
            Outcome::Failed(e) => {
                fail(&mut report, &e, Some(mu));
                report.finish(&asm, u, clock);
                return Ok(report);
            }
        }
        last_mu = mu;
        mu *= config.gamma;
    }

    if config.final_polish_mu_zero || config.mu0 == 0.0 {
        let (outcome, _, _) = newton.run(&mut u, 0.0, config.eps, true, &mut report);
        report.outer_iterations += 1;
        match outcome {
            Outcome::Converged => report.converged = true,
            Outcome::Exhausted => {
                report.failure = Some(format!("mu = 0 polish not converged in {} iterations", config.max_inner))
            }
            Outcome::Failed(e) => fail(&mut report, &e, None),
        }
    } else {
        let g = asm.residual(&u, 0.0).map(|g| norm2(&g)).unwrap_or(f64::NAN);
        report.converged = g <= config.eps;
        if !report.converged {
            report.failure = Some(format!("unbarriered residual {g:e} above tolerance without polish"));
        }
        if last_mu > 0.0 {
            report.multiplier_estimates = u.iter().map(|v| last_mu / v).collect();
        }
    }
    report.finish(&asm, u, clock);
    Ok(report)
}

/// Smooth objective on the open positive orthant.
pub trait BarrierObjective {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    fn hessian(&self, x: &[f64]) -> DMatrix<f64>;
}

/// Objective assembled from three closures.
pub struct FnObjective<F, G, H> {
    pub value: F,
    pub gradient: G,
    pub hessian: H,
}

impl<F, G, H> BarrierObjective for FnObjective<F, G, H>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
    H: Fn(&[f64]) -> DMatrix<f64>,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        (self.hessian)(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalReport {
    pub x: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub mu_trajectory: Vec<f64>,
    pub stages: Vec<StageRecord>,
    pub steps: Vec<StepRecord>,
    /// `μ/xᵢ` at the final μ.
    pub multiplier_estimates: Vec<f64>,
    /// `‖∇f(x) - μ/x‖` at the final μ.
    pub final_residual: f64,
    pub failure: Option<String>,
}

/// Classical log-barrier loop: minimizes `B_μ(x) = f(x) - μ Σ ln xᵢ` by
/// Newton steps `(∇²f + μX⁻²)p = -(∇f - μX⁻¹)` with the 99% rule and Armijo
/// backtracking on `B_μ`, for `μ = μ₀γᵏ ≥ ε`.
pub fn classical_barrier_minimize(
    f: &dyn BarrierObjective,
    x0: &[f64],
    config: &SolverConfig,
) -> Result<ClassicalReport, SolverError> {
    config.validate()?;
    if !(config.mu0 > 0.0) {
        return Err(SolverError::InvalidConfig("classical barrier needs mu0 > 0".into()));
    }
    if let Some(&v) = x0.iter().find(|&&v| !(v > 0.0)) {
        return Err(SolverError::NonpositiveState { value: v });
    }
    let barrier = |x: &[f64], mu: f64| -> Option<f64> {
        if x.iter().any(|&v| !(v > 0.0)) {
            return None;
        }
        Some(f.value(x) - mu * x.iter().map(|v| v.ln()).sum::<f64>())
    };
    let barrier_gradient =
        |x: &[f64], mu: f64| -> Vec<f64> { f.gradient(x).iter().zip(x).map(|(g, v)| g - mu / v).collect() };

    let mut report = ClassicalReport {
        x: x0.to_vec(),
        converged: false,
        iterations: 0,
        mu_trajectory: Vec::new(),
        stages: Vec::new(),
        steps: Vec::new(),
        multiplier_estimates: Vec::new(),
        final_residual: f64::NAN,
        failure: None,
    };
    let mut x = x0.to_vec();
    let mut mu = config.mu0;
    let mut stall = 0;
    'stages: while mu >= config.eps && report.stages.len() < config.max_outer {
        let mut g = barrier_gradient(&x, mu);
        let f0 = norm2(&g);
        let (eps_mu, tol) = subproblem_tolerance(mu, config.eps, f0);
        report.mu_trajectory.push(mu);
        let mut iterations = 0;
        let mut converged = false;
        loop {
            let gn = norm2(&g);
            if gn <= tol {
                converged = true;
                break;
            }
            if iterations == config.max_inner {
                break;
            }
            iterations += 1;
            report.iterations += 1;
            let mut h = f.hessian(&x);
            for (i, v) in x.iter().enumerate() {
                h[(i, i)] += mu / (v * v);
            }
            let rhs = -DVector::from_column_slice(&g);
            let p = h
                .clone()
                .cholesky()
                .map(|c| c.solve(&rhs))
                .or_else(|| h.clone().lu().solve(&rhs))
                .map(|p| p.as_slice().to_vec());
            let mut fallback = false;
            let mut p = match p {
                Some(p) if dotp(&p, &g) < 0.0 => p,
                _ => {
                    fallback = true;
                    g.iter().map(|v| -v).collect()
                }
            };
            let mut slope = dotp(&p, &g);
            if !(slope < 0.0) {
                fallback = true;
                p = g.iter().map(|v| -v).collect();
                slope = dotp(&p, &g);
            }
            let b0 = barrier(&x, mu).expect("iterate stays positive");
            let alpha_bar = step_to_boundary(&x, &p)?;
            let step = match armijo_backtrack(
                |v| barrier(v, mu),
                b0,
                slope,
                &x,
                &p,
                alpha_bar,
                config.eta,
                config.backtrack,
                config.max_halvings,
            ) {
                Ok(s) => s,
                Err(e) => {
                    report.failure = Some(format!("{e} (at mu = {mu:e})"));
                    report.stages.push(StageRecord {
                        mu,
                        eps_mu,
                        tolerance: tol,
                        initial_residual: f0,
                        final_residual: gn,
                        iterations,
                        converged: false,
                    });
                    break 'stages;
                }
            };
            let rel = step.alpha * norm2(&p) / norm2(&x);
            stall = if rel < STAGNATION_STEP { stall + 1 } else { 0 };
            report.steps.push(StepRecord {
                mu,
                merit_before: b0,
                merit_after: step.merit,
                alpha: step.alpha,
                alpha_bar,
                slope,
                descent: slope,
                fallback,
                min_free_value: step.point.iter().cloned().fold(f64::INFINITY, f64::min),
                cg_iterations: 0,
            });
            x = step.point;
            g = barrier_gradient(&x, mu);
            if stall >= STAGNATION_COUNT {
                report.failure = Some(format!("{} (at mu = {mu:e})", SolverError::Stagnation { count: stall }));
                break 'stages;
            }
        }
        let final_residual = norm2(&g);
        report.stages.push(StageRecord {
            mu,
            eps_mu,
            tolerance: tol,
            initial_residual: f0,
            final_residual,
            iterations,
            converged,
        });
        report.final_residual = final_residual;
        report.multiplier_estimates = x.iter().map(|v| mu / v).collect();
        if !converged {
            report.failure = Some(format!("stage at mu = {mu:e} not solved in {} iterations", config.max_inner));
            break;
        }
        mu *= config.gamma;
    }
    report.converged = report.failure.is_none() && report.stages.last().is_some_and(|s| s.converged);
    report.x = x;
    Ok(report)
}
