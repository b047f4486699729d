//! Quadrature on reference simplices, expressed in barycentric coordinates.
//!
//! Weights sum to the reference measure: 1 (interval), 1/2 (triangle),
//! 1/6 (tetrahedron). Dimension 0 is the trivial point rule used for the
//! end-point facets of 1D meshes.

use super::MeshError;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub dim: usize,
    /// Polynomial degree integrated exactly.
    pub degree: usize,
    /// Barycentric coordinates, `dim + 1` entries per point.
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reference_measure(&self) -> f64 {
        match self.dim {
            0 | 1 => 1.0,
            2 => 0.5,
            _ => 1.0 / 6.0,
        }
    }
}

pub const MAX_DEGREE_1D: usize = 9;
pub const MAX_DEGREE_SIMPLEX: usize = 5;

/// Smallest tabulated rule on the `dim`-simplex exact to `degree`.
pub fn quadrature_for(dim: usize, degree: usize) -> Result<QuadratureRule, MeshError> {
    match dim {
        0 => Ok(QuadratureRule { dim, degree, points: vec![vec![1.0]], weights: vec![1.0] }),
        1 if degree <= MAX_DEGREE_1D => Ok(gauss_legendre(degree / 2 + 1)),
        2 if degree <= 1 => Ok(centroid_rule(2)),
        2 if degree <= MAX_DEGREE_SIMPLEX => Ok(triangle_degree5()),
        3 if degree <= 1 => Ok(centroid_rule(3)),
        3 if degree <= MAX_DEGREE_SIMPLEX => Ok(tetrahedron_degree5()),
        _ => Err(MeshError::Unsupported { dim, degree }),
    }
}

fn centroid_rule(dim: usize) -> QuadratureRule {
    let c = 1.0 / (dim + 1) as f64;
    let w = if dim == 2 { 0.5 } else { 1.0 / 6.0 };
    QuadratureRule { dim, degree: 1, points: vec![vec![c; dim + 1]], weights: vec![w] }
}

/// `n`-point Gauss-Legendre rule mapped to `[0, 1]`, exact to degree `2n - 1`.
fn gauss_legendre(n: usize) -> QuadratureRule {
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Newton on P_n from the Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        let t = 0.5 * (1.0 - x);
        points.push(vec![1.0 - t, t]);
        weights.push(0.5 * w);
    }
    QuadratureRule { dim: 1, degree: 2 * n - 1, points, weights }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = if n == 0 { 0.0 } else { n as f64 * (x * p1 - p0) / (x * x - 1.0) };
    (p, dp)
}

/// Radon's 7-point rule.
fn triangle_degree5() -> QuadratureRule {
    let s15 = 15f64.sqrt();
    let a1 = (6.0 - s15) / 21.0;
    let a2 = (6.0 + s15) / 21.0;
    let w1 = (155.0 - s15) / 1200.0;
    let w2 = (155.0 + s15) / 1200.0;
    let mut points = vec![vec![1.0 / 3.0; 3]];
    let mut weights = vec![9.0 / 40.0];
    for (a, w) in [(a1, w1), (a2, w2)] {
        for k in 0..3 {
            let mut p = vec![a; 3];
            p[k] = 1.0 - 2.0 * a;
            points.push(p);
            weights.push(w);
        }
    }
    for w in weights.iter_mut() {
        *w *= 0.5;
    }
    QuadratureRule { dim: 2, degree: 5, points, weights }
}

/// Keast's 15-point rule with positive weights.
fn tetrahedron_degree5() -> QuadratureRule {
    let s15 = 15f64.sqrt();
    let a1 = (7.0 - s15) / 34.0;
    let a2 = (7.0 + s15) / 34.0;
    let w1 = (2665.0 + 14.0 * s15) / 37800.0;
    let w2 = (2665.0 - 14.0 * s15) / 37800.0;
    let b = (5.0 - s15) / 20.0;
    let w3 = 10.0 / 189.0;
    let mut points = vec![vec![0.25; 4]];
    let mut weights = vec![16.0 / 135.0];
    for (a, w) in [(a1, w1), (a2, w2)] {
        for k in 0..4 {
            let mut p = vec![a; 4];
            p[k] = 1.0 - 3.0 * a;
            points.push(p);
            weights.push(w);
        }
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut p = vec![b; 4];
            p[i] = 0.5 - b;
            p[j] = 0.5 - b;
            points.push(p);
            weights.push(w3);
        }
    }
    for w in weights.iter_mut() {
        *w /= 6.0;
    }
    QuadratureRule { dim: 3, degree: 5, points, weights }
}
