//! PDE coefficient data and the pointwise power-law nonlinearity.
//!
//! Every supported equation is written as
//! `-div(a grad u) + k(u) = 0` with `k(u) = Σ_p c_p(x) u^p`.
//! The Hamiltonian constraint maps onto this form through
//!
//! | exponent | coefficient |
//! |---------:|-------------|
//! | 1        | `R / 8`     |
//! | 5        | `τ² / 12`   |
//! | -7       | `-σ² / 8`   |
//! | -3       | `-2πρ`      |
//!
//! and the energy density is the antiderivative `Σ_p c_p u^{p+1} / (p+1)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("nonpositive state u = {value:e}")]
    NonpositiveState { value: f64 },
    #[error("coefficient violation: {0}")]
    CoefficientViolation(String),
    #[error("exponent {0} appears twice")]
    DuplicateExponent(i32),
    #[error("exponent -1 has a logarithmic antiderivative and is not supported")]
    UnsupportedExponent,
    #[error("unknown builtin example {0} (expected 1..=4)")]
    UnknownExample(u32),
}

/// Scalar field over the domain, evaluated at physical points.
#[derive(Clone)]
pub enum Field {
    Constant(f64),
    Function(Arc<dyn Fn(&[f64; 3]) -> f64 + Send + Sync>),
}

impl Field {
    pub fn constant(value: f64) -> Self {
        Field::Constant(value)
    }

    pub fn from_fn(f: impl Fn(&[f64; 3]) -> f64 + Send + Sync + 'static) -> Self {
        Field::Function(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, x: &[f64; 3]) -> f64 {
        match self {
            Field::Constant(c) => *c,
            Field::Function(f) => f(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Field::Constant(c) if *c == 0.0)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Constant(c) => write!(f, "Constant({c})"),
            Field::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl From<f64> for Field {
    fn from(c: f64) -> Self {
        Field::Constant(c)
    }
}

#[derive(Debug, Clone)]
pub struct PowerTerm {
    pub exponent: i32,
    pub coefficient: Field,
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub diffusion: Field,
    terms: Vec<PowerTerm>,
    pub robin_c: Field,
    pub robin_g: Field,
    pub dirichlet_g: Field,
    /// When set, every evaluation rejects `u <= 0`.
    pub positivity_required: bool,
}

/// Parameters of the Hamiltonian constraint with constant coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianParams {
    pub diffusion: f64,
    pub scalar_curvature: f64,
    pub tau: f64,
    pub sigma: f64,
    pub rho: f64,
    pub robin_c: f64,
    pub robin_g: f64,
    pub dirichlet_g: f64,
}

impl ProblemSpec {
    pub fn new(diffusion: impl Into<Field>) -> Self {
        ProblemSpec {
            diffusion: diffusion.into(),
            terms: Vec::new(),
            robin_c: Field::Constant(0.0),
            robin_g: Field::Constant(0.0),
            dirichlet_g: Field::Constant(0.0),
            positivity_required: false,
        }
    }

    pub fn with_term(mut self, exponent: i32, coefficient: impl Into<Field>) -> Result<Self, ProblemError> {
        if exponent == -1 {
            return Err(ProblemError::UnsupportedExponent);
        }
        if self.terms.iter().any(|t| t.exponent == exponent) {
            return Err(ProblemError::DuplicateExponent(exponent));
        }
        self.terms.push(PowerTerm { exponent, coefficient: coefficient.into() });
        Ok(self)
    }

    pub fn with_robin(mut self, c: impl Into<Field>, g: impl Into<Field>) -> Self {
        self.robin_c = c.into();
        self.robin_g = g.into();
        self
    }

    pub fn with_dirichlet(mut self, g: impl Into<Field>) -> Self {
        self.dirichlet_g = g.into();
        self
    }

    pub fn require_positivity(mut self, on: bool) -> Self {
        self.positivity_required = on;
        self
    }

    /// Hamiltonian constraint `-div(a grad u) + R/8 u + τ²/12 u⁵ - σ²/8 u⁻⁷ - 2πρ u⁻³ = 0`.
    /// Zero coefficients are dropped.
    pub fn hamiltonian(p: HamiltonianParams) -> Result<Self, ProblemError> {
        if p.rho < 0.0 {
            return Err(ProblemError::CoefficientViolation(format!("rho = {} < 0", p.rho)));
        }
        let mut spec = ProblemSpec::new(p.diffusion)
            .with_robin(p.robin_c, p.robin_g)
            .with_dirichlet(p.dirichlet_g);
        for (e, c) in [
            (1, p.scalar_curvature / 8.0),
            (5, p.tau * p.tau / 12.0),
            (-7, -p.sigma * p.sigma / 8.0),
            (-3, -2.0 * PI * p.rho),
        ] {
            if c != 0.0 {
                spec = spec.with_term(e, c)?;
            }
        }
        Ok(spec)
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn exponents(&self) -> Vec<i32> {
        self.terms.iter().map(|t| t.exponent).collect()
    }

    pub fn has_negative_powers(&self) -> bool {
        self.terms.iter().any(|t| t.exponent < 0)
    }

    /// Coefficients `c_p(x)` in term order.
    pub fn coefficients_at(&self, x: &[f64; 3]) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient.eval(x)).collect()
    }

    /// Checks the pointwise coefficient invariants at `x`: `a(x) > 0`, and the
    /// negative-power coefficients are `<= 0` (i.e. σ², ρ >= 0).
    pub fn check_coefficients(&self, x: &[f64; 3]) -> Result<(), ProblemError> {
        let a = self.diffusion.eval(x);
        if !(a > 0.0) {
            return Err(ProblemError::CoefficientViolation(format!(
                "diffusion {a} is not positive at {x:?}"
            )));
        }
        for t in &self.terms {
            let c = t.coefficient.eval(x);
            if !c.is_finite() || (t.exponent < 0 && c > 0.0) {
                return Err(ProblemError::CoefficientViolation(format!(
                    "coefficient {c} of u^{} at {x:?}",
                    t.exponent
                )));
            }
        }
        Ok(())
    }

    pub fn power_law(&self) -> PowerLaw {
        PowerLaw { exponents: self.exponents(), positivity_required: self.positivity_required }
    }

    pub fn k_eval(&self, x: &[f64; 3], u: f64) -> Result<f64, ProblemError> {
        self.power_law().k(&self.coefficients_at(x), u)
    }

    pub fn k_prime_eval(&self, x: &[f64; 3], u: f64) -> Result<f64, ProblemError> {
        self.power_law().k_prime(&self.coefficients_at(x), u)
    }

    pub fn energy_density(&self, x: &[f64; 3], u: f64) -> Result<f64, ProblemError> {
        self.power_law().energy(&self.coefficients_at(x), u)
    }

    /// Second `u`-derivative of [`energy_density`](Self::energy_density), i.e. `k'(u)`
    /// written in the integrand's convexity form.
    pub fn integrand_second_derivative(&self, x: &[f64; 3], u: f64) -> Result<f64, ProblemError> {
        self.k_prime_eval(x, u)
    }
}

/// The exponent list of a [`ProblemSpec`], evaluated against coefficient
/// values that were sampled once per quadrature point.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLaw {
    pub exponents: Vec<i32>,
    pub positivity_required: bool,
}

impl PowerLaw {
    #[inline]
    fn check(&self, coeffs: &[f64], u: f64) -> Result<(), ProblemError> {
        if self.positivity_required && !(u > 0.0) {
            return Err(ProblemError::NonpositiveState { value: u });
        }
        if u == 0.0 || !u.is_finite() {
            let singular = self.exponents.iter().zip(coeffs).any(|(&p, &c)| p < 0 && c != 0.0);
            if singular || !u.is_finite() {
                return Err(ProblemError::NonpositiveState { value: u });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn k(&self, coeffs: &[f64], u: f64) -> Result<f64, ProblemError> {
        self.check(coeffs, u)?;
        Ok(self.exponents.iter().zip(coeffs).map(|(&p, &c)| c * u.powi(p)).sum())
    }

    #[inline]
    pub fn k_prime(&self, coeffs: &[f64], u: f64) -> Result<f64, ProblemError> {
        self.check(coeffs, u)?;
        Ok(self
            .exponents
            .iter()
            .zip(coeffs)
            .filter(|(&p, _)| p != 0)
            .map(|(&p, &c)| p as f64 * c * u.powi(p - 1))
            .sum())
    }

    #[inline]
    pub fn energy(&self, coeffs: &[f64], u: f64) -> Result<f64, ProblemError> {
        self.check(coeffs, u)?;
        Ok(self
            .exponents
            .iter()
            .zip(coeffs)
            .map(|(&p, &c)| c * u.powi(p + 1) / (p + 1) as f64)
            .sum())
    }

    /// `(k(u), k'(u))` in one pass.
    #[inline]
    pub fn k_and_prime(&self, coeffs: &[f64], u: f64) -> Result<(f64, f64), ProblemError> {
        self.check(coeffs, u)?;
        let mut k = 0.0;
        let mut kp = 0.0;
        for (&p, &c) in self.exponents.iter().zip(coeffs) {
            let up = u.powi(p);
            k += c * up;
            if p != 0 {
                kp += p as f64 * c * up / u;
            }
        }
        Ok((k, kp))
    }
}

/// Euclidean distance from the origin.
pub fn radius(x: &[f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// The four reference problems.
///
/// 1. Hamiltonian constraint, `a=1, R=1, τ=0.1, σ=0.2, ρ=0.1`, Robin `c=1, g_N=-1`.
/// 2. Hamiltonian constraint, `a=2, R=-1000, τ=√72, σ=√48, ρ=1/π`, Robin `c=2, g_N=10`.
/// 3. Yamabe-type `-8Δu + ρ(r) u⁵ = 0`, `ρ = 1/r³`, Dirichlet `u = 1`.
/// 4. Yamabe-type `-8Δu - u/8 + ρ(r) u⁵ = 0`, `ρ = 1/r³`, Dirichlet `u = 1`.
pub fn builtin_example(id: u32) -> Result<ProblemSpec, ProblemError> {
    let inv_r3 = || Field::from_fn(|x| radius(x).powi(-3));
    match id {
        1 => ProblemSpec::hamiltonian(HamiltonianParams {
            diffusion: 1.0,
            scalar_curvature: 1.0,
            tau: 0.1,
            sigma: 0.2,
            rho: 0.1,
            robin_c: 1.0,
            robin_g: -1.0,
            dirichlet_g: 1.0,
        }),
        2 => ProblemSpec::hamiltonian(HamiltonianParams {
            diffusion: 2.0,
            scalar_curvature: -1000.0,
            tau: 72f64.sqrt(),
            sigma: 48f64.sqrt(),
            rho: 1.0 / PI,
            robin_c: 2.0,
            robin_g: 10.0,
            dirichlet_g: 1.0,
        }),
        3 => Ok(ProblemSpec::new(8.0).with_term(5, inv_r3())?.with_dirichlet(1.0)),
        4 => Ok(ProblemSpec::new(8.0)
            .with_term(1, -1.0 / 8.0)?
            .with_term(5, inv_r3())?
            .with_dirichlet(1.0)),
        other => Err(ProblemError::UnknownExample(other)),
    }
}

/// Pointwise integrand of the one-dimensional energy with the gradient term
/// dropped: `R/16 u² + u⁶ + u⁻⁶ + u⁻²` (example 2 coefficients).
pub fn example2_integrand(scalar_curvature: f64, u: f64) -> f64 {
    scalar_curvature / 16.0 * u * u + u.powi(6) + u.powi(-6) + u.powi(-2)
}
