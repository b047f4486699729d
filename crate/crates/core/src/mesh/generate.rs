//! Deterministic desk-scale mesh generators.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::{BoundaryFacet, BoundaryKind, MeshError, SimplicialMesh};

/// Uniform mesh of `[a, b]` with both end points marked Dirichlet.
pub fn generate_interval_mesh(a: f64, b: f64, n_cells: usize) -> Result<SimplicialMesh, MeshError> {
    generate_interval_mesh_with(a, b, n_cells, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet)
}

pub fn generate_interval_mesh_with(
    a: f64,
    b: f64,
    n_cells: usize,
    left: BoundaryKind,
    right: BoundaryKind,
) -> Result<SimplicialMesh, MeshError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(MeshError::InvalidGeometry(format!("interval requires a < b, got [{a}, {b}]")));
    }
    if n_cells == 0 {
        return Err(MeshError::InvalidGeometry("interval needs at least one cell".into()));
    }
    let h = (b - a) / n_cells as f64;
    let vertices = (0..=n_cells)
        .map(|i| {
            let x = if i == n_cells { b } else { a + h * i as f64 };
            [x, 0.0, 0.0]
        })
        .collect();
    let cells = (0..n_cells).map(|i| vec![i, i + 1]).collect();
    let facets = vec![
        BoundaryFacet { marker: left, vertices: vec![0] },
        BoundaryFacet { marker: right, vertices: vec![n_cells] },
    ];
    SimplicialMesh::new(1, vertices, cells, facets)
}

/// Triangulated annulus with both rings marked Robin.
pub fn generate_annulus_mesh(
    r_in: f64,
    r_out: f64,
    n_radial: usize,
    n_angular: usize,
) -> Result<SimplicialMesh, MeshError> {
    generate_annulus_mesh_with(r_in, r_out, n_radial, n_angular, BoundaryKind::Robin, BoundaryKind::Robin)
}

pub fn generate_annulus_mesh_with(
    r_in: f64,
    r_out: f64,
    n_radial: usize,
    n_angular: usize,
    inner: BoundaryKind,
    outer: BoundaryKind,
) -> Result<SimplicialMesh, MeshError> {
    check_radii(r_in, r_out)?;
    if n_radial < 1 || n_angular < 3 {
        return Err(MeshError::InvalidGeometry(format!(
            "annulus needs n_radial >= 1 and n_angular >= 3, got {n_radial} and {n_angular}"
        )));
    }
    let idx = |ring: usize, j: usize| ring * n_angular + (j % n_angular);
    let mut vertices = Vec::with_capacity((n_radial + 1) * n_angular);
    for ring in 0..=n_radial {
        let r = r_in + (r_out - r_in) * ring as f64 / n_radial as f64;
        for j in 0..n_angular {
            let t = 2.0 * PI * j as f64 / n_angular as f64;
            vertices.push([r * t.cos(), r * t.sin(), 0.0]);
        }
    }
    let mut cells = Vec::with_capacity(2 * n_radial * n_angular);
    for ring in 0..n_radial {
        for j in 0..n_angular {
            let (a, b) = (idx(ring, j), idx(ring, j + 1));
            let (c, d) = (idx(ring + 1, j), idx(ring + 1, j + 1));
            cells.push(vec![a, b, d]);
            cells.push(vec![a, d, c]);
        }
    }
    let mut facets = Vec::with_capacity(2 * n_angular);
    for j in 0..n_angular {
        facets.push(BoundaryFacet { marker: inner, vertices: vec![idx(0, j), idx(0, j + 1)] });
    }
    for j in 0..n_angular {
        facets.push(BoundaryFacet {
            marker: outer,
            vertices: vec![idx(n_radial, j), idx(n_radial, j + 1)],
        });
    }
    SimplicialMesh::new(2, vertices, cells, facets)
}

/// Spherical shell from an icosphere of subdivision level `refinement`,
/// extruded in `refinement + 1` geometrically graded layers. Both surfaces
/// are marked Robin.
pub fn generate_shell_mesh(r_in: f64, r_out: f64, refinement: usize) -> Result<SimplicialMesh, MeshError> {
    generate_shell_mesh_with(
        r_in,
        r_out,
        refinement,
        refinement + 1,
        BoundaryKind::Robin,
        BoundaryKind::Robin,
    )
}

/// Shell mesh with explicit icosphere level, layer count and surface markers.
///
/// Each spherical triangle `(a, b, c)` with `a < b < c` sweeps a prism per
/// layer, split into the tetrahedra `(a,b,c,c')`, `(a,b,b',c')`, `(a,a',b',c')`.
/// Quad faces are always cut from the lower-indexed bottom vertex to the
/// higher-indexed top vertex, so neighbouring prisms agree.
pub fn generate_shell_mesh_with(
    r_in: f64,
    r_out: f64,
    level: usize,
    layers: usize,
    inner: BoundaryKind,
    outer: BoundaryKind,
) -> Result<SimplicialMesh, MeshError> {
    check_radii(r_in, r_out)?;
    if layers == 0 {
        return Err(MeshError::InvalidGeometry("shell needs at least one layer".into()));
    }
    if level > 6 {
        return Err(MeshError::InvalidGeometry(format!("icosphere level {level} is too large")));
    }
    let (dirs, tris) = icosphere(level);
    let ns = dirs.len();
    let ratio = r_out / r_in;
    let mut vertices = Vec::with_capacity(ns * (layers + 1));
    for l in 0..=layers {
        let r = if l == layers {
            r_out
        } else {
            r_in * ratio.powf(l as f64 / layers as f64)
        };
        for d in &dirs {
            vertices.push([r * d[0], r * d[1], r * d[2]]);
        }
    }
    let mut cells = Vec::with_capacity(3 * tris.len() * layers);
    for l in 0..layers {
        let bot = l * ns;
        let top = (l + 1) * ns;
        for t in &tris {
            let mut s = *t;
            s.sort_unstable();
            let [a, b, c] = s;
            cells.push(vec![bot + a, bot + b, bot + c, top + c]);
            cells.push(vec![bot + a, bot + b, top + b, top + c]);
            cells.push(vec![bot + a, top + a, top + b, top + c]);
        }
    }
    let mut facets = Vec::with_capacity(2 * tris.len());
    for t in &tris {
        facets.push(BoundaryFacet { marker: inner, vertices: t.to_vec() });
    }
    for t in &tris {
        facets.push(BoundaryFacet {
            marker: outer,
            vertices: t.iter().map(|&v| layers * ns + v).collect(),
        });
    }
    SimplicialMesh::new(3, vertices, cells, facets)
}

fn check_radii(r_in: f64, r_out: f64) -> Result<(), MeshError> {
    if !(r_in > 0.0 && r_in < r_out && r_out.is_finite()) {
        return Err(MeshError::InvalidGeometry(format!(
            "radii must satisfy 0 < r_in < r_out, got r_in={r_in}, r_out={r_out}"
        )));
    }
    Ok(())
}

/// Unit icosphere: `10·4^level + 2` vertices and `20·4^level` triangles.
pub fn icosphere(level: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = vec![
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    for v in verts.iter_mut() {
        *v = normalize(*v);
    }
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| -> usize {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for &[a, b, c] in &tris {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    (verts, tris)
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{dot3, sub3};

    #[test]
    fn interval_examples() {
        let m = generate_interval_mesh(0.1, 10.0, 99).unwrap();
        assert_eq!(m.num_vertices(), 100);
        assert_eq!(m.vertices[0][0], 0.1);
        assert_eq!(m.vertices[99][0], 10.0);

        let m = generate_interval_mesh(0.0, 1.0, 1).unwrap();
        assert_eq!((m.num_vertices(), m.num_cells()), (2, 1));
        assert_eq!(m.cell_measure(0), 1.0);

        let m = generate_interval_mesh(0.0, 1.0, 4).unwrap();
        assert!((m.total_measure() - 1.0).abs() < 1e-15);

        assert!(matches!(
            generate_interval_mesh(1.0, 1.0, 3),
            Err(MeshError::InvalidGeometry(_))
        ));
    }

    // shoelace over each emitted triangle, independent of signed_measure
    fn shoelace_total(m: &SimplicialMesh) -> f64 {
        m.cells
            .iter()
            .map(|c| {
                let p: Vec<_> = c.iter().map(|&v| m.vertices[v]).collect();
                let mut s = 0.0;
                for k in 0..3 {
                    let (a, b) = (p[k], p[(k + 1) % 3]);
                    s += a[0] * b[1] - b[0] * a[1];
                }
                0.5 * s.abs()
            })
            .sum()
    }

    #[test]
    fn annulus_small_matches_shoelace() {
        let m = generate_annulus_mesh(1.0, 2.0, 1, 4).unwrap();
        assert_eq!((m.num_vertices(), m.num_cells()), (8, 8));
        // inscribed squares of radius 2 and 1: 2r^2 each
        let polygon = 2.0 * 4.0 - 2.0 * 1.0;
        assert!((shoelace_total(&m) - polygon).abs() < 1e-12);
        assert!((m.total_measure() - polygon).abs() < 1e-12);
    }

    #[test]
    fn annulus_area_converges() {
        let m = generate_annulus_mesh(1.0, 2.0, 2, 64).unwrap();
        let exact = PI * 3.0;
        assert!((m.total_measure() - exact).abs() / exact < 0.01);
        assert!(m.validate().is_empty());
    }

    #[test]
    fn annulus_rejects_bad_radii() {
        assert!(matches!(
            generate_annulus_mesh(2.0, 1.0, 1, 4),
            Err(MeshError::InvalidGeometry(_))
        ));
        assert!(generate_annulus_mesh(1.0, 2.0, 1, 2).is_err());
    }

    #[test]
    fn icosphere_counts() {
        for level in 0..4 {
            let (v, t) = icosphere(level);
            assert_eq!(v.len(), 10 * 4usize.pow(level as u32) + 2);
            assert_eq!(t.len(), 20 * 4usize.pow(level as u32));
        }
    }

    #[test]
    fn shell_meshes_are_valid() {
        for (r_in, r_out, refinement) in [(1.0, 100.0, 2), (50.0, 100.0, 1), (10.0, 100.0, 0)] {
            let m = generate_shell_mesh(r_in, r_out, refinement).unwrap();
            assert!(m.validate().is_empty());
            assert!(m.cells.iter().enumerate().all(|(c, _)| m.signed_cell_measure(c) > 0.0));
            let exterior = m.exterior_faces().len();
            assert_eq!(exterior, m.boundary_facets.len());
        }
    }

    #[test]
    fn shell_volume_approaches_sphere_difference() {
        let m = generate_shell_mesh_with(1.0, 2.0, 4, 1, BoundaryKind::Robin, BoundaryKind::Robin).unwrap();
        let exact = 4.0 / 3.0 * PI * (8.0 - 1.0);
        assert!((m.total_measure() - exact).abs() / exact < 0.01);
    }

    #[test]
    fn normals_point_away_from_parent_centroid() {
        let meshes = [
            generate_interval_mesh(0.0, 1.0, 3).unwrap(),
            generate_annulus_mesh(1.0, 2.0, 2, 12).unwrap(),
            generate_shell_mesh(1.0, 3.0, 1).unwrap(),
        ];
        for m in &meshes {
            let parents = m.face_parents();
            let normals = m.facet_normals();
            for (f, facet) in m.boundary_facets.iter().enumerate() {
                let (cell, _) = parents[&crate::mesh::sorted(&facet.vertices)][0];
                let fc = crate::mesh::centroid(
                    &facet.vertices.iter().map(|&v| m.vertices[v]).collect::<Vec<_>>(),
                );
                let d = sub3(&fc, &m.cell_centroid(cell));
                assert!(dot3(&normals[f], &d) > 0.0);
            }
        }
    }
}
