//! Samples the pointwise energy integrand I(u) = R/16 u² + u⁶ + u⁻⁶ + u⁻²
//! for a large negative scalar curvature and for R = 0, and reports where
//! the R < 0 profile loses convexity.
//!
//! cargo run --example integrand_profile -- [out.csv]

use critfem::cli::{plot_integrand, write_integrand_csv};
use critfem::problem::builtin_example;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pts = plot_integrand(-1000.0, 0.4, 3.0, 200)?;
    let (umin, imin) = pts.iter().cloned().fold((0.0, f64::INFINITY), |a, p| if p.1 < a.1 { p } else { a });
    println!("R = -1000: minimum I({umin:.3}) = {imin:.2}");
    let concave: Vec<f64> = pts.windows(3).filter(|w| w[0].1 - 2.0 * w[1].1 + w[2].1 < 0.0).map(|w| w[1].0).collect();
    if let (Some(a), Some(b)) = (concave.first(), concave.last()) {
        println!("concave on roughly [{a:.3}, {b:.3}]");
    }
    let convex = plot_integrand(0.0, 0.4, 3.0, 200)?.windows(3).all(|w| w[0].1 - 2.0 * w[1].1 + w[2].1 > 0.0);
    println!("R = 0 convex on the grid: {convex}");

    let spec = builtin_example(2)?;
    let d2 = spec.integrand_second_derivative(&[1.0, 0.0, 0.0], 1.0)?;
    println!("second derivative of the example-2 integrand at u = 1: {d2}");

    if let Some(path) = std::env::args().nth(1) {
        write_integrand_csv(path.as_ref(), -1000.0, &pts)?;
        println!("wrote {path}");
    }
    Ok(())
}
