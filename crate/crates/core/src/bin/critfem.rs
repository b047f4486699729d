use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use critfem::cli::{emit_paper_suite, plot_integrand, run, write_integrand_csv, SuiteOptions};
use critfem::mesh::{generate_annulus_mesh_with, generate_interval_mesh_with, generate_shell_mesh_with, save_mesh};
use critfem::BoundaryKind;

#[derive(Parser)]
#[command(name = "critfem", version, about = "Positive solutions of critical-exponent elliptic problems")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Interval,
    Annulus,
    Shell,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Robin,
    Dirichlet,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file; exits nonzero unless every solve converged.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sample the pointwise energy integrand to CSV.
    PlotIntegrand {
        #[arg(long = "R", allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value_t = 0.4)]
        min: f64,
        #[arg(long, default_value_t = 3.0)]
        max: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Examples 1-4 on the three reference shells plus the integrand plot.
    PaperSuite {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        timing: bool,
    },
    /// Write a generated mesh file.
    MeshGen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Interval end points, or inner and outer radius.
        #[arg(long, default_value_t = 1.0)]
        inner: f64,
        #[arg(long, default_value_t = 2.0)]
        outer: f64,
        /// Interval cells, annulus radial cells, or shell layers.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Annulus angular cells or icosphere level.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value = "robin")]
        boundary: Boundary,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match execute(Args::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<bool, Box<dyn std::error::Error>> {
    match command {
        Command::Solve { config, out } => {
            let summary = run(&config, &out)?;
            for row in &summary.rows {
                let r = &row.report;
                println!(
                    "{:<18} {:<16} itns {:>3}  resid {:.2e}  sign {:>3}  {}",
                    row.method,
                    row.mesh,
                    r.iterations,
                    r.residual,
                    r.sign,
                    if r.converged { "converged".to_string() } else { format!("FAILED {}", r.failure.as_deref().unwrap_or("")) }
                );
            }
            println!("wrote {}", summary.csv_path.display());
            Ok(summary.all_converged)
        }
        Command::PlotIntegrand { r, min, max, samples, out } => {
            write_integrand_csv(&out, r, &plot_integrand(r, min, max, samples)?)?;
            Ok(true)
        }
        Command::PaperSuite { out, workers, timing } => {
            let s = emit_paper_suite(&out, &SuiteOptions { workers, timing, ..Default::default() })?;
            print!("{}", std::fs::read_to_string(out.join("summary.txt"))?);
            Ok(s.tables.iter().all(|(_, rows)| !rows.is_empty()))
        }
        Command::MeshGen { kind, inner, outer, n, m, boundary, out } => {
            let b = match boundary {
                Boundary::Robin => BoundaryKind::Robin,
                Boundary::Dirichlet => BoundaryKind::Dirichlet,
            };
            let mesh = match kind {
                Kind::Interval => generate_interval_mesh_with(inner, outer, n, b, b)?,
                Kind::Annulus => generate_annulus_mesh_with(inner, outer, n, m, b, b)?,
                Kind::Shell => generate_shell_mesh_with(inner, outer, m, n, b, b)?,
            };
            save_mesh(&mesh, &out)?;
            println!("{} vertices, {} cells -> {}", mesh.num_vertices(), mesh.num_cells(), out.display());
            Ok(true)
        }
    }
}
