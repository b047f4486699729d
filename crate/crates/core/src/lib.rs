//! Positive solutions of critical-exponent semilinear elliptic equations with
//! P1 finite elements.
//!
//! The crate covers the Hamiltonian constraint (Lichnerowicz equation) and
//! flat-metric Yamabe-type problems written as
//!
//! ```text
//! -div(a grad u) + k(u) = 0          in Ω
//!  (a grad u)·n + c u   = g_N        on the Robin boundary
//!                     u = g_D        on the Dirichlet boundary
//! ```
//!
//! with a power-law nonlinearity `k(u) = Σ_p c_p(x) u^p`. Three nonlinear
//! strategies are provided: plain Newton, Newton safeguarded by the 99%
//! fraction-to-boundary rule with an Armijo line search, and a primal
//! log-barrier energy method with μ-continuation.
//!
//! Module map:
//!
//! * [`mesh`]: simplicial meshes, generators, file format, quadrature.
//! * [`problem`]: coefficient data and pointwise nonlinearity.
//! * [`fem`]: Galerkin assembly of residuals, Jacobians and energies.
//! * [`linalg`]: CSR matrices and preconditioned conjugate gradients.
//! * [`solvers`]: Newton variants and barrier methods.
//! * [`cli`]: experiment configuration, batch driver and report files.

// `!(x > 0.0)` guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod fem;
pub mod linalg;
pub mod mesh;
pub mod problem;
pub mod solvers;

pub use fem::{apply_dirichlet, Assembler, AssemblyError, FeFunction, JacobianParts};
pub use linalg::{cg_solve, CgOptions, CgStatus, CsrMatrix, LinearOperator, Preconditioner};
pub use mesh::{
    generate_annulus_mesh, generate_interval_mesh, generate_shell_mesh, load_mesh,
    quadrature_for, save_mesh, BoundaryKind, MeshError, QuadratureRule, SimplicialMesh,
};
pub use problem::{builtin_example, Field, ProblemError, ProblemSpec};
pub use solvers::{
    barrier_solve, classical_barrier_minimize, classify_sign, newton_safeguarded,
    newton_standard, Sign, SolveReport, SolverConfig,
};
