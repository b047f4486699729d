//! P1 Galerkin assembly.
//!
//! For a nodal vector `u` the assembler produces
//!
//! * `G_i = ∫ a ∇u·∇φ_i + k(u) φ_i + ∫_Robin (c u - g_N) φ_i`
//! * `H_i = ∫ u⁻¹ φ_i`
//! * `A_ij = ∫ a ∇φ_j·∇φ_i + k'(u) φ_j φ_i + ∫_Robin c φ_j φ_i`
//! * `M_ij = ∫ u⁻² φ_j φ_i`
//! * `J_μ(u) = ∫ ½ a |∇u|² + E(u) - μ ln u + ∫_Robin ½ c u² - g_N u`
//!
//! so that `G - μH` is the gradient of `J_μ` and `A + μM` its Hessian.
//! Dirichlet vertices are eliminated by zeroing their residual entries and
//! replacing their matrix rows and columns with identity rows.

use std::ops::{Deref, DerefMut};

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::CsrMatrix;
use crate::mesh::{barycentric_gradients, quadrature_for, BoundaryKind, MeshError, QuadratureRule, SimplicialMesh};
use crate::problem::{PowerLaw, ProblemError, ProblemSpec};

/// Quadrature degree used for every volume and surface integral.
pub const QUADRATURE_DEGREE: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssemblyError {
    #[error("nonpositive state: u = {value:e}")]
    NonpositiveState { value: f64 },
    #[error("coefficient violation: {0}")]
    CoefficientViolation(String),
    #[error("vector length {found} does not match {expected} vertices")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("quadrature unavailable: {0}")]
    Quadrature(String),
}

impl From<ProblemError> for AssemblyError {
    fn from(e: ProblemError) -> Self {
        match e {
            ProblemError::NonpositiveState { value } => AssemblyError::NonpositiveState { value },
            other => AssemblyError::CoefficientViolation(other.to_string()),
        }
    }
}

impl From<MeshError> for AssemblyError {
    fn from(e: MeshError) -> Self {
        AssemblyError::Quadrature(e.to_string())
    }
}

/// Nodal coefficients of a P1 function.
#[derive(Debug, Clone, PartialEq)]
pub struct FeFunction {
    pub coefficients: Vec<f64>,
}

impl FeFunction {
    pub fn new(coefficients: Vec<f64>) -> Self {
        FeFunction { coefficients }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        FeFunction { coefficients: vec![value; n] }
    }

    pub fn interpolate(mesh: &SimplicialMesh, f: impl Fn(&[f64; 3]) -> f64) -> Self {
        FeFunction { coefficients: mesh.vertices.iter().map(f).collect() }
    }
}

impl Deref for FeFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.coefficients
    }
}

impl DerefMut for FeFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.coefficients
    }
}

impl From<Vec<f64>> for FeFunction {
    fn from(v: Vec<f64>) -> Self {
        FeFunction::new(v)
    }
}

/// Overwrites Dirichlet vertices with `g_D`.
pub fn apply_dirichlet(u: &FeFunction, mesh: &SimplicialMesh, spec: &ProblemSpec) -> FeFunction {
    let mut out = u.clone();
    for (i, constrained) in mesh.dirichlet_mask().into_iter().enumerate() {
        if constrained {
            out[i] = spec.dirichlet_g.eval(&mesh.vertices[i]);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualParts {
    pub g: Vec<f64>,
    /// Present when the barrier vector was requested.
    pub h: Option<Vec<f64>>,
}

impl ResidualParts {
    /// `G - μH`.
    pub fn combined(&self, mu: f64) -> Vec<f64> {
        match (&self.h, mu != 0.0) {
            (Some(h), true) => self.g.iter().zip(h).map(|(g, h)| g - mu * h).collect(),
            _ => self.g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianParts {
    pub a: CsrMatrix,
    /// Present when the barrier matrix was requested.
    pub m: Option<CsrMatrix>,
}

/// Everything needed for one barrier Newton system `[A + μM] w = -[G - μH]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledSystem {
    pub a: CsrMatrix,
    pub m: CsrMatrix,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub dirichlet_mask: Vec<bool>,
}

#[derive(Debug, Clone)]
struct Element {
    verts: [usize; 4],
    nloc: usize,
    /// `|det J|`: physical measure over reference measure.
    scale: f64,
    grads: [[f64; 3]; 4],
    slots: Vec<usize>,
}

#[derive(Debug, Clone)]
struct FacetElement {
    verts: [usize; 3],
    nloc: usize,
    scale: f64,
    slots: Vec<usize>,
}

/// Reusable assembler bound to one mesh and problem. Coefficient fields are
/// sampled once at every quadrature point on construction.
pub struct Assembler<'a> {
    mesh: &'a SimplicialMesh,
    spec: &'a ProblemSpec,
    law: PowerLaw,
    cell_rule: QuadratureRule,
    facet_rule: QuadratureRule,
    cells: Vec<Element>,
    facets: Vec<FacetElement>,
    diffusion_q: Vec<f64>,
    coeffs_q: Vec<f64>,
    robin_c_q: Vec<f64>,
    robin_g_q: Vec<f64>,
    pattern: CsrMatrix,
    dirichlet: Vec<bool>,
    workers: usize,
}

impl<'a> Assembler<'a> {
    pub fn new(spec: &'a ProblemSpec, mesh: &'a SimplicialMesh) -> Result<Self, AssemblyError> {
        let dim = mesh.dim;
        let nloc = dim + 1;
        let cell_rule = quadrature_for(dim, QUADRATURE_DEGREE)?;
        let facet_rule = quadrature_for(dim - 1, QUADRATURE_DEGREE)?;
        let n = mesh.num_vertices();

        let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
        for cell in &mesh.cells {
            for &i in cell {
                neighbours[i].extend_from_slice(cell);
            }
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        for row in neighbours.iter_mut() {
            row.sort_unstable();
            row.dedup();
            col_idx.extend_from_slice(row);
            row_ptr.push(col_idx.len());
        }
        let pattern = CsrMatrix::from_pattern(n, row_ptr, col_idx)
            .map_err(|e| AssemblyError::CoefficientViolation(e.to_string()))?;

        let slots_for = |verts: &[usize]| -> Vec<usize> {
            let mut s = Vec::with_capacity(verts.len() * verts.len());
            for &i in verts {
                for &j in verts {
                    s.push(pattern.slot(i, j).expect("element pair in pattern"));
                }
            }
            s
        };

        let nterms = spec.terms().len();
        let nq = cell_rule.len();
        let mut cells = Vec::with_capacity(mesh.num_cells());
        let mut diffusion_q = Vec::with_capacity(mesh.num_cells() * nq);
        let mut coeffs_q = Vec::with_capacity(mesh.num_cells() * nq * nterms);
        for c in 0..mesh.num_cells() {
            let pts = mesh.cell_points(c);
            let g = barycentric_gradients(dim, &pts);
            let mut verts = [0; 4];
            let mut grads = [[0.0; 3]; 4];
            for k in 0..nloc {
                verts[k] = mesh.cells[c][k];
                grads[k] = g[k];
            }
            let scale = mesh.cell_measure(c) / cell_rule.reference_measure();
            for lam in &cell_rule.points {
                let x = physical_point(&pts, lam);
                spec.check_coefficients(&x)?;
                diffusion_q.push(spec.diffusion.eval(&x));
                coeffs_q.extend(spec.coefficients_at(&x));
            }
            cells.push(Element { verts, nloc, scale, grads, slots: slots_for(&mesh.cells[c]) });
        }

        let mut facets = Vec::new();
        let mut robin_c_q = Vec::new();
        let mut robin_g_q = Vec::new();
        for (f, facet) in mesh.boundary_facets.iter().enumerate() {
            if facet.marker != BoundaryKind::Robin {
                continue;
            }
            let pts: Vec<[f64; 3]> = facet.vertices.iter().map(|&v| mesh.vertices[v]).collect();
            let mut verts = [0; 3];
            verts[..dim].copy_from_slice(&facet.vertices);
            let scale = mesh.facet_measure(f) / facet_rule.reference_measure();
            for lam in &facet_rule.points {
                let x = physical_point(&pts, lam);
                robin_c_q.push(spec.robin_c.eval(&x));
                robin_g_q.push(spec.robin_g.eval(&x));
            }
            facets.push(FacetElement { verts, nloc: dim, scale, slots: slots_for(&facet.vertices) });
        }

        Ok(Assembler {
            mesh,
            spec,
            law: spec.power_law(),
            cell_rule,
            facet_rule,
            cells,
            facets,
            diffusion_q,
            coeffs_q,
            robin_c_q,
            robin_g_q,
            pattern,
            dirichlet: mesh.dirichlet_mask(),
            workers: 1,
        })
    }

    /// Number of cell chunks assembled concurrently. Results for a fixed
    /// worker count are deterministic.
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn mesh(&self) -> &SimplicialMesh {
        self.mesh
    }

    pub fn spec(&self) -> &ProblemSpec {
        self.spec
    }

    pub fn num_dofs(&self) -> usize {
        self.mesh.num_vertices()
    }

    pub fn dirichlet_mask(&self) -> &[bool] {
        &self.dirichlet
    }

    pub fn apply_dirichlet(&self, u: &FeFunction) -> FeFunction {
        apply_dirichlet(u, self.mesh, self.spec)
    }

    fn check_len(&self, u: &[f64]) -> Result<(), AssemblyError> {
        if u.len() != self.num_dofs() {
            return Err(AssemblyError::DimensionMismatch { expected: self.num_dofs(), found: u.len() });
        }
        Ok(())
    }

    fn check_vertices(&self, u: &[f64], barrier: bool) -> Result<(), AssemblyError> {
        if barrier || self.law.positivity_required {
            if let Some(&v) = u.iter().find(|&&v| !(v > 0.0)) {
                return Err(AssemblyError::NonpositiveState { value: v });
            }
        }
        Ok(())
    }

    fn reduce_cells<T, B, M>(&self, make: impl Fn() -> T + Sync, body: B, merge: M) -> Result<T, AssemblyError>
    where
        T: Send,
        B: Fn(&mut T, usize) -> Result<(), AssemblyError> + Sync,
        M: Fn(&mut T, T),
    {
        let n = self.cells.len();
        let workers = self.workers.min(n.max(1));
        if workers <= 1 {
            let mut acc = make();
            for c in 0..n {
                body(&mut acc, c)?;
            }
            return Ok(acc);
        }
        let chunk = n.div_ceil(workers);
        let parts: Vec<Result<T, AssemblyError>> = (0..workers)
            .into_par_iter()
            .map(|w| {
                let mut acc = make();
                for c in (w * chunk)..((w + 1) * chunk).min(n) {
                    body(&mut acc, c)?;
                }
                Ok(acc)
            })
            .collect();
        let mut parts = parts.into_iter();
        let mut acc = parts.next().expect("at least one worker")?;
        for p in parts {
            merge(&mut acc, p?);
        }
        Ok(acc)
    }

    #[inline]
    fn cell_state(&self, el: &Element, u: &[f64]) -> ([f64; 4], [f64; 3]) {
        let mut ul = [0.0; 4];
        let mut grad = [0.0; 3];
        for k in 0..el.nloc {
            ul[k] = u[el.verts[k]];
            for r in 0..3 {
                grad[r] += ul[k] * el.grads[k][r];
            }
        }
        (ul, grad)
    }

    #[inline]
    fn nterms(&self) -> usize {
        self.law.exponents.len()
    }

    #[inline]
    fn qp_coeffs(&self, cell: usize, q: usize) -> &[f64] {
        let nt = self.nterms();
        let base = (cell * self.cell_rule.len() + q) * nt;
        &self.coeffs_q[base..base + nt]
    }

    /// Unbarriered residual `G` and, if `barrier`, the barrier vector `H`.
    pub fn residual_parts(&self, u: &[f64], barrier: bool) -> Result<ResidualParts, AssemblyError> {
        self.check_len(u)?;
        self.check_vertices(u, barrier)?;
        let n = self.num_dofs();
        let nq = self.cell_rule.len();
        let (mut g, h) = self.reduce_cells(
            || (vec![0.0; n], if barrier { vec![0.0; n] } else { Vec::new() }),
            |(g, h), c| {
                let el = &self.cells[c];
                let (ul, grad) = self.cell_state(el, u);
                for q in 0..nq {
                    let lam = &self.cell_rule.points[q];
                    let w = self.cell_rule.weights[q] * el.scale;
                    let uq: f64 = (0..el.nloc).map(|k| lam[k] * ul[k]).sum();
                    let a = self.diffusion_q[c * nq + q];
                    let k = self.law.k(self.qp_coeffs(c, q), uq)?;
                    if barrier && !(uq > 0.0) {
                        return Err(AssemblyError::NonpositiveState { value: uq });
                    }
                    for i in 0..el.nloc {
                        let gi = &el.grads[i];
                        let stiff = grad[0] * gi[0] + grad[1] * gi[1] + grad[2] * gi[2];
                        g[el.verts[i]] += w * (a * stiff + k * lam[i]);
                        if barrier {
                            h[el.verts[i]] += w * lam[i] / uq;
                        }
                    }
                }
                Ok(())
            },
            |(g, h), (g2, h2)| {
                add_into(g, &g2);
                add_into(h, &h2);
            },
        )?;

        let nfq = self.facet_rule.len();
        for (f, el) in self.facets.iter().enumerate() {
            for q in 0..nfq {
                let lam = &self.facet_rule.points[q];
                let w = self.facet_rule.weights[q] * el.scale;
                let uq: f64 = (0..el.nloc).map(|k| lam[k] * u[el.verts[k]]).sum();
                let flux = self.robin_c_q[f * nfq + q] * uq - self.robin_g_q[f * nfq + q];
                for i in 0..el.nloc {
                    g[el.verts[i]] += w * flux * lam[i];
                }
            }
        }

        let mut h = if barrier { Some(h) } else { None };
        for (i, &fixed) in self.dirichlet.iter().enumerate() {
            if fixed {
                g[i] = 0.0;
                if let Some(h) = h.as_mut() {
                    h[i] = 0.0;
                }
            }
        }
        Ok(ResidualParts { g, h })
    }

    /// `G - μH` with Dirichlet entries zeroed.
    pub fn residual(&self, u: &[f64], mu: f64) -> Result<Vec<f64>, AssemblyError> {
        Ok(self.residual_parts(u, mu != 0.0)?.combined(mu))
    }

    /// Jacobian `A` of `G` and, if `barrier`, the barrier matrix `M`.
    pub fn jacobian_parts(&self, u: &[f64], barrier: bool) -> Result<JacobianParts, AssemblyError> {
        self.check_len(u)?;
        self.check_vertices(u, barrier)?;
        let nnz = self.pattern.nnz();
        let nq = self.cell_rule.len();
        let (mut av, mv) = self.reduce_cells(
            || (vec![0.0; nnz], if barrier { vec![0.0; nnz] } else { Vec::new() }),
            |(av, mv), c| {
                let el = &self.cells[c];
                let nl = el.nloc;
                let (ul, _) = self.cell_state(el, u);
                let mut a_mean = 0.0;
                let mut react = [[0.0; 4]; 4];
                let mut bar = [[0.0; 4]; 4];
                for q in 0..nq {
                    let lam = &self.cell_rule.points[q];
                    let w = self.cell_rule.weights[q] * el.scale;
                    let uq: f64 = (0..nl).map(|k| lam[k] * ul[k]).sum();
                    a_mean += w * self.diffusion_q[c * nq + q];
                    let kp = self.law.k_prime(self.qp_coeffs(c, q), uq)?;
                    if barrier && !(uq > 0.0) {
                        return Err(AssemblyError::NonpositiveState { value: uq });
                    }
                    let inv2 = if barrier { 1.0 / (uq * uq) } else { 0.0 };
                    for i in 0..nl {
                        for j in i..nl {
                            let ll = w * lam[i] * lam[j];
                            react[i][j] += kp * ll;
                            bar[i][j] += inv2 * ll;
                        }
                    }
                }
                for i in 0..nl {
                    for j in 0..nl {
                        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                        let gi = &el.grads[i];
                        let gj = &el.grads[j];
                        let stiff = gi[0] * gj[0] + gi[1] * gj[1] + gi[2] * gj[2];
                        let slot = el.slots[i * nl + j];
                        av[slot] += a_mean * stiff + react[lo][hi];
                        if barrier {
                            mv[slot] += bar[lo][hi];
                        }
                    }
                }
                Ok(())
            },
            |(a, m), (a2, m2)| {
                add_into(a, &a2);
                add_into(m, &m2);
            },
        )?;

        let nfq = self.facet_rule.len();
        for (f, el) in self.facets.iter().enumerate() {
            let nl = el.nloc;
            for q in 0..nfq {
                let lam = &self.facet_rule.points[q];
                let w = self.facet_rule.weights[q] * el.scale * self.robin_c_q[f * nfq + q];
                for i in 0..nl {
                    for j in 0..nl {
                        av[el.slots[i * nl + j]] += w * (lam[i] * lam[j]);
                    }
                }
            }
        }

        let mut a = self.pattern.clone();
        a.values_mut().copy_from_slice(&av);
        a.constrain(&self.dirichlet);
        let m = if barrier {
            let mut m = self.pattern.clone();
            m.values_mut().copy_from_slice(&mv);
            m.constrain(&self.dirichlet);
            Some(m)
        } else {
            None
        };
        Ok(JacobianParts { a, m })
    }

    /// `A`, `M`, `G`, `H` at `u` (all vertex values must be positive).
    pub fn assemble_system(&self, u: &[f64]) -> Result<AssembledSystem, AssemblyError> {
        let r = self.residual_parts(u, true)?;
        let j = self.jacobian_parts(u, true)?;
        Ok(AssembledSystem {
            a: j.a,
            m: j.m.expect("barrier matrix requested"),
            g: r.g,
            h: r.h.expect("barrier vector requested"),
            dirichlet_mask: self.dirichlet.clone(),
        })
    }

    /// Barrier energy `J_μ(u)`; `μ = 0` gives the plain energy `J(u)`.
    pub fn energy(&self, u: &[f64], mu: f64) -> Result<f64, AssemblyError> {
        self.check_len(u)?;
        let barrier = mu != 0.0;
        self.check_vertices(u, barrier)?;
        let nq = self.cell_rule.len();
        let volume = self.reduce_cells(
            || 0.0f64,
            |acc, c| {
                let el = &self.cells[c];
                let (ul, grad) = self.cell_state(el, u);
                let grad2 = grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2];
                for q in 0..nq {
                    let lam = &self.cell_rule.points[q];
                    let w = self.cell_rule.weights[q] * el.scale;
                    let uq: f64 = (0..el.nloc).map(|k| lam[k] * ul[k]).sum();
                    let a = self.diffusion_q[c * nq + q];
                    let mut e = 0.5 * a * grad2 + self.law.energy(self.qp_coeffs(c, q), uq)?;
                    if barrier {
                        if !(uq > 0.0) {
                            return Err(AssemblyError::NonpositiveState { value: uq });
                        }
                        e -= mu * uq.ln();
                    }
                    *acc += w * e;
                }
                Ok(())
            },
            |a, b| *a += b,
        )?;
        let nfq = self.facet_rule.len();
        let mut surface = 0.0;
        for (f, el) in self.facets.iter().enumerate() {
            for q in 0..nfq {
                let lam = &self.facet_rule.points[q];
                let w = self.facet_rule.weights[q] * el.scale;
                let uq: f64 = (0..el.nloc).map(|k| lam[k] * u[el.verts[k]]).sum();
                surface += w * (0.5 * self.robin_c_q[f * nfq + q] * uq * uq - self.robin_g_q[f * nfq + q] * uq);
            }
        }
        Ok(volume + surface)
    }

    /// `‖u_h - exact‖_{L²}` by the assembler's volume quadrature.
    pub fn l2_error(&self, u: &[f64], exact: impl Fn(&[f64; 3]) -> f64) -> f64 {
        let mut err = 0.0;
        for (c, el) in self.cells.iter().enumerate() {
            let pts = self.mesh.cell_points(c);
            for (lam, &wq) in self.cell_rule.points.iter().zip(&self.cell_rule.weights) {
                let x = physical_point(&pts, lam);
                let uq: f64 = (0..el.nloc).map(|k| lam[k] * u[el.verts[k]]).sum();
                let d = uq - exact(&x);
                err += wq * el.scale * d * d;
            }
        }
        err.sqrt()
    }
}

fn add_into(acc: &mut [f64], other: &[f64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

fn physical_point(pts: &[[f64; 3]], lam: &[f64]) -> [f64; 3] {
    let mut x = [0.0; 3];
    for (p, l) in pts.iter().zip(lam) {
        for r in 0..3 {
            x[r] += l * p[r];
        }
    }
    x
}

/// Convenience wrapper: residual `G - μH` for a one-off evaluation.
pub fn assemble_residual(
    spec: &ProblemSpec,
    mesh: &SimplicialMesh,
    u: &FeFunction,
    mu: f64,
) -> Result<Vec<f64>, AssemblyError> {
    Assembler::new(spec, mesh)?.residual(u, mu)
}

/// Convenience wrapper: `A` and `M` at `u` (M only when `μ > 0`).
pub fn assemble_jacobian(
    spec: &ProblemSpec,
    mesh: &SimplicialMesh,
    u: &FeFunction,
    mu: f64,
) -> Result<JacobianParts, AssemblyError> {
    Assembler::new(spec, mesh)?.jacobian_parts(u, mu != 0.0)
}

/// Convenience wrapper: `J_μ(u)`.
pub fn compute_energy(spec: &ProblemSpec, mesh: &SimplicialMesh, u: &FeFunction, mu: f64) -> Result<f64, AssemblyError> {
    Assembler::new(spec, mesh)?.energy(u, mu)
}
