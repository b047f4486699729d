//! Builds the three mesh families, round-trips one through the text format
//! and prints basic statistics.
//!
//! cargo run --example mesh_generation

use critfem::mesh::{generate_shell_mesh_with, parse_mesh, write_mesh, BoundaryKind};
use critfem::{generate_annulus_mesh, generate_interval_mesh, generate_shell_mesh, SimplicialMesh};

fn describe(name: &str, mesh: &SimplicialMesh) {
    let robin = mesh.boundary_facets.iter().filter(|f| f.marker == BoundaryKind::Robin).count();
    println!(
        "{name:<28} dim {}  vertices {:>5}  cells {:>6}  boundary facets {:>5} ({robin} robin)  measure {:.6}",
        mesh.dim,
        mesh.num_vertices(),
        mesh.num_cells(),
        mesh.boundary_facets.len(),
        mesh.total_measure()
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    describe("interval [0,1], 100 cells", &generate_interval_mesh(0.0, 1.0, 100)?);
    describe("annulus 1<r<2", &generate_annulus_mesh(1.0, 2.0, 9, 50)?);
    for refinement in 0..=3 {
        describe(&format!("shell 1<r<2, refinement {refinement}"), &generate_shell_mesh(1.0, 2.0, refinement)?);
    }
    let exact = 4.0 / 3.0 * std::f64::consts::PI * 7.0;
    let fine = generate_shell_mesh_with(1.0, 2.0, 4, 1, BoundaryKind::Robin, BoundaryKind::Robin)?;
    println!("shell volume {:.4} vs exact {exact:.4}", fine.total_measure());

    let text = write_mesh(&generate_annulus_mesh(1.0, 2.0, 1, 4)?);
    let back = parse_mesh(&text)?;
    println!("\nround trip of a small annulus ({} bytes), first lines:", text.len());
    for line in text.lines().take(4) {
        println!("  {line}");
    }
    describe("parsed back", &back);
    Ok(())
}
