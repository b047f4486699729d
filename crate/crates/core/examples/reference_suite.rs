//! Runs examples 1-4 on the three reference shells and writes the tables,
//! the integrand plot data and a pattern summary.
//!
//! cargo run --release --example reference_suite -- [out_dir]

use critfem::cli::{emit_paper_suite, SuiteOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "suite-out".into());
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let s = emit_paper_suite(out.as_ref(), &SuiteOptions { workers, ..Default::default() })?;
    print!("{}", std::fs::read_to_string(std::path::Path::new(&out).join("summary.txt"))?);
    for f in &s.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
