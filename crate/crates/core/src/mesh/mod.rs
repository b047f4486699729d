//! Simplicial meshes in one, two and three dimensions.
//!
//! Vertices are stored as `[f64; 3]` with unused trailing coordinates set to
//! zero, so geometry and coefficient closures always see a 3-vector. Cells
//! are `dim + 1` vertex indices, positively oriented after construction.

mod generate;
mod io;
mod quadrature;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use generate::{
    generate_annulus_mesh, generate_annulus_mesh_with, generate_interval_mesh,
    generate_interval_mesh_with, generate_shell_mesh, generate_shell_mesh_with, icosphere,
};
pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use quadrature::{quadrature_for, QuadratureRule};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh failed validation: {}", summarize(.0))]
    Validation(Vec<Violation>),
    #[error("unsupported quadrature: dim {dim}, degree {degree}")]
    Unsupported { dim: usize, degree: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn summarize(v: &[Violation]) -> String {
    let shown: Vec<String> = v.iter().take(3).map(|x| x.to_string()).collect();
    if v.len() > 3 {
        format!("{} (+{} more)", shown.join("; "), v.len() - 3)
    } else {
        shown.join("; ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    Dirichlet,
    Robin,
}

impl BoundaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Robin => "robin",
        }
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dirichlet" => Ok(BoundaryKind::Dirichlet),
            "robin" => Ok(BoundaryKind::Robin),
            other => Err(format!("unknown boundary marker `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFacet {
    pub marker: BoundaryKind,
    pub vertices: Vec<usize>,
}

/// A single invariant violation found by [`SimplicialMesh::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    BadDimension(usize),
    CellArity { cell: usize, found: usize },
    FacetArity { facet: usize, found: usize },
    CellIndexOutOfRange { cell: usize, index: usize },
    FacetIndexOutOfRange { facet: usize, index: usize },
    NonpositiveCell { cell: usize, signed_measure: f64 },
    FacetNotOnBoundary { facet: usize, parents: usize },
    DuplicateFacet { first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadDimension(d) => write!(f, "dimension {d} not in 1..=3"),
            Violation::CellArity { cell, found } => {
                write!(f, "cell {cell} has {found} vertices")
            }
            Violation::FacetArity { facet, found } => {
                write!(f, "facet {facet} has {found} vertices")
            }
            Violation::CellIndexOutOfRange { cell, index } => {
                write!(f, "cell {cell} references missing vertex {index}")
            }
            Violation::FacetIndexOutOfRange { facet, index } => {
                write!(f, "facet {facet} references missing vertex {index}")
            }
            Violation::NonpositiveCell { cell, signed_measure } => {
                write!(f, "cell {cell} has signed measure {signed_measure:e}")
            }
            Violation::FacetNotOnBoundary { facet, parents } => {
                write!(f, "facet {facet} is a face of {parents} cells, expected 1")
            }
            Violation::DuplicateFacet { first, second } => {
                write!(f, "facets {first} and {second} cover the same face")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialMesh {
    pub dim: usize,
    pub vertices: Vec<[f64; 3]>,
    pub cells: Vec<Vec<usize>>,
    pub boundary_facets: Vec<BoundaryFacet>,
}

impl SimplicialMesh {
    /// Builds a mesh, fixing cell orientation and checking every invariant.
    pub fn new(
        dim: usize,
        vertices: Vec<[f64; 3]>,
        cells: Vec<Vec<usize>>,
        boundary_facets: Vec<BoundaryFacet>,
    ) -> Result<Self, MeshError> {
        let mut mesh = SimplicialMesh { dim, vertices, cells, boundary_facets };
        mesh.orient();
        let violations = mesh.validate();
        if violations.is_empty() {
            Ok(mesh)
        } else {
            Err(MeshError::Validation(violations))
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_points(&self, cell: usize) -> Vec<[f64; 3]> {
        self.cells[cell].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn signed_cell_measure(&self, cell: usize) -> f64 {
        signed_measure(self.dim, &self.cell_points(cell))
    }

    pub fn cell_measure(&self, cell: usize) -> f64 {
        self.signed_cell_measure(cell).abs()
    }

    pub fn total_measure(&self) -> f64 {
        (0..self.num_cells()).map(|c| self.cell_measure(c)).sum()
    }

    pub fn facet_measure(&self, facet: usize) -> f64 {
        let pts: Vec<[f64; 3]> = self.boundary_facets[facet]
            .vertices
            .iter()
            .map(|&v| self.vertices[v])
            .collect();
        facet_measure(self.dim, &pts)
    }

    /// Swaps the last two vertices of every negatively oriented cell.
    /// Cells with out-of-range indices are left for `validate` to report.
    pub fn orient(&mut self) {
        let n = self.vertices.len();
        for c in 0..self.cells.len() {
            let cell = &self.cells[c];
            if cell.len() != self.dim + 1 || cell.len() < 2 || cell.iter().any(|&v| v >= n) {
                continue;
            }
            if self.signed_cell_measure(c) < 0.0 {
                let k = self.cells[c].len();
                self.cells[c].swap(k - 2, k - 1);
            }
        }
    }

    /// Returns every invariant violation; an empty list means the mesh is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(1..=3).contains(&self.dim) {
            out.push(Violation::BadDimension(self.dim));
            return out;
        }
        let n = self.vertices.len();
        let mut cells_ok = true;
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.len() != self.dim + 1 {
                out.push(Violation::CellArity { cell: c, found: cell.len() });
                cells_ok = false;
                continue;
            }
            let mut in_range = true;
            for &v in cell {
                if v >= n {
                    out.push(Violation::CellIndexOutOfRange { cell: c, index: v });
                    in_range = false;
                }
            }
            if !in_range {
                cells_ok = false;
                continue;
            }
            let m = self.signed_cell_measure(c);
            if !(m > 0.0) {
                out.push(Violation::NonpositiveCell { cell: c, signed_measure: m });
            }
        }

        let mut facets_ok = true;
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for (f, facet) in self.boundary_facets.iter().enumerate() {
            if facet.vertices.len() != self.dim {
                out.push(Violation::FacetArity { facet: f, found: facet.vertices.len() });
                facets_ok = false;
                continue;
            }
            for &v in &facet.vertices {
                if v >= n {
                    out.push(Violation::FacetIndexOutOfRange { facet: f, index: v });
                    facets_ok = false;
                }
            }
            let key = sorted(&facet.vertices);
            if let Some(&first) = seen.get(&key) {
                out.push(Violation::DuplicateFacet { first, second: f });
            } else {
                seen.insert(key, f);
            }
        }

        if cells_ok && facets_ok {
            let parents = self.face_parents();
            for (f, facet) in self.boundary_facets.iter().enumerate() {
                let count = parents.get(&sorted(&facet.vertices)).map_or(0, Vec::len);
                if count != 1 {
                    out.push(Violation::FacetNotOnBoundary { facet: f, parents: count });
                }
            }
        }
        out
    }

    /// Maps each sorted face (dim vertices) to the `(cell, opposite local vertex)`
    /// pairs that contain it.
    pub fn face_parents(&self) -> HashMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for opp in 0..cell.len() {
                let face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != opp)
                    .map(|(_, &v)| v)
                    .collect();
                map.entry(sorted(&face)).or_default().push((c, opp));
            }
        }
        map
    }

    /// Faces that belong to exactly one cell, in sorted-vertex form.
    pub fn exterior_faces(&self) -> Vec<Vec<usize>> {
        let mut faces: Vec<Vec<usize>> = self
            .face_parents()
            .into_iter()
            .filter(|(_, p)| p.len() == 1)
            .map(|(k, _)| k)
            .collect();
        faces.sort();
        faces
    }

    /// Unit outward normal of every boundary facet, computed from its parent cell.
    pub fn facet_normals(&self) -> Vec<[f64; 3]> {
        let parents = self.face_parents();
        self.boundary_facets
            .iter()
            .map(|facet| {
                let (cell, opp) = parents[&sorted(&facet.vertices)][0];
                let grads = barycentric_gradients(self.dim, &self.cell_points(cell));
                let g = grads[opp];
                let len = norm3(&g);
                [-g[0] / len, -g[1] / len, -g[2] / len]
            })
            .collect()
    }

    pub fn cell_centroid(&self, cell: usize) -> [f64; 3] {
        centroid(&self.cell_points(cell))
    }

    /// Vertices that lie on a Dirichlet facet.
    pub fn dirichlet_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertices.len()];
        for facet in &self.boundary_facets {
            if facet.marker == BoundaryKind::Dirichlet {
                for &v in &facet.vertices {
                    mask[v] = true;
                }
            }
        }
        mask
    }
}

pub(crate) fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

pub(crate) fn sub3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

pub fn centroid(pts: &[[f64; 3]]) -> [f64; 3] {
    let mut c = [0.0; 3];
    for p in pts {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    let n = pts.len() as f64;
    [c[0] / n, c[1] / n, c[2] / n]
}

/// Signed measure of a simplex given its `dim + 1` vertices.
pub fn signed_measure(dim: usize, pts: &[[f64; 3]]) -> f64 {
    match dim {
        1 => pts[1][0] - pts[0][0],
        2 => {
            let a = sub3(&pts[1], &pts[0]);
            let b = sub3(&pts[2], &pts[0]);
            0.5 * (a[0] * b[1] - a[1] * b[0])
        }
        3 => {
            let a = sub3(&pts[1], &pts[0]);
            let b = sub3(&pts[2], &pts[0]);
            let c = sub3(&pts[3], &pts[0]);
            dot3(&a, &cross3(&b, &c)) / 6.0
        }
        _ => f64::NAN,
    }
}

/// Measure of a boundary facet of a `dim`-dimensional mesh (a point has measure 1).
pub fn facet_measure(dim: usize, pts: &[[f64; 3]]) -> f64 {
    match dim {
        1 => 1.0,
        2 => norm3(&sub3(&pts[1], &pts[0])),
        3 => 0.5 * norm3(&cross3(&sub3(&pts[1], &pts[0]), &sub3(&pts[2], &pts[0]))),
        _ => f64::NAN,
    }
}

/// Gradients of the barycentric coordinates (the P1 basis) on a simplex.
pub fn barycentric_gradients(dim: usize, pts: &[[f64; 3]]) -> Vec<[f64; 3]> {
    // Rows of J^{-1}, J = [x1 - x0 | ... | xd - x0], are the gradients of λ1..λd.
    let mut j = [[0.0; 3]; 3];
    for k in 0..dim {
        let e = sub3(&pts[k + 1], &pts[0]);
        for r in 0..dim {
            j[r][k] = e[r];
        }
    }
    let inv = invert_small(dim, &j);
    let mut grads = vec![[0.0; 3]; dim + 1];
    for k in 0..dim {
        let mut g = [0.0; 3];
        g[..dim].copy_from_slice(&inv[k][..dim]);
        grads[k + 1] = g;
        for r in 0..3 {
            grads[0][r] -= g[r];
        }
    }
    grads
}

fn invert_small(dim: usize, m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut inv = [[0.0; 3]; 3];
    match dim {
        1 => inv[0][0] = 1.0 / m[0][0],
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            inv[0][0] = m[1][1] / det;
            inv[0][1] = -m[0][1] / det;
            inv[1][0] = -m[1][0] / det;
            inv[1][1] = m[0][0] / det;
        }
        3 => {
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            for r in 0..3 {
                for c in 0..3 {
                    // cofactor of (c, r) gives the adjugate entry (r, c)
                    let (r1, r2) = others(c);
                    let (c1, c2) = others(r);
                    let minor = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
                    let sign = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
                    inv[r][c] = sign * minor / det;
                }
            }
        }
        _ => {}
    }
    inv
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_triangle() -> SimplicialMesh {
        SimplicialMesh {
            dim: 2,
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            cells: vec![vec![0, 1, 2]],
            boundary_facets: vec![
                BoundaryFacet { marker: BoundaryKind::Robin, vertices: vec![0, 1] },
                BoundaryFacet { marker: BoundaryKind::Robin, vertices: vec![1, 2] },
            ],
        }
    }

    #[test]
    fn gradients_sum_to_zero_and_reproduce_linears() {
        let pts = [[0.2, 0.1, 0.0], [1.3, 0.4, 0.1], [0.1, 1.2, -0.2], [0.3, 0.2, 0.9]];
        let g = barycentric_gradients(3, &pts);
        for r in 0..3 {
            let s: f64 = g.iter().map(|v| v[r]).sum();
            assert!(s.abs() < 1e-14);
        }
        // grad λ_i · (x_j - x_0) = δ_ij - δ_i0
        for i in 0..4 {
            for j in 1..4 {
                let e = sub3(&pts[j], &pts[0]);
                let expect = if i == j { 1.0 } else if i == 0 { -1.0 } else { 0.0 };
                assert!((dot3(&g[i], &e) - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn inverted_cell_is_reported() {
        let mut m = unit_triangle();
        m.cells[0] = vec![0, 2, 1];
        let v = m.validate();
        assert!(v.iter().any(|x| matches!(x, Violation::NonpositiveCell { .. })));
        m.orient();
        assert!(m.validate().is_empty());
    }

    #[test]
    fn duplicated_facet_markers_are_reported() {
        let mut m = unit_triangle();
        m.boundary_facets.push(BoundaryFacet { marker: BoundaryKind::Dirichlet, vertices: vec![1, 0] });
        let v = m.validate();
        assert!(v.contains(&Violation::DuplicateFacet { first: 0, second: 2 }));
    }

    #[test]
    fn interior_facet_is_reported() {
        let mut m = SimplicialMesh {
            dim: 2,
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]],
            cells: vec![vec![0, 1, 2], vec![1, 3, 2]],
            boundary_facets: vec![],
        };
        m.boundary_facets.push(BoundaryFacet { marker: BoundaryKind::Robin, vertices: vec![1, 2] });
        assert_eq!(
            m.validate(),
            vec![Violation::FacetNotOnBoundary { facet: 0, parents: 2 }]
        );
    }

    #[test]
    fn out_of_range_index_is_reported() {
        let mut m = unit_triangle();
        m.cells[0][2] = 7;
        assert!(m
            .validate()
            .contains(&Violation::CellIndexOutOfRange { cell: 0, index: 7 }));
    }

    #[test]
    fn triangle_normals_point_outward() {
        let m = unit_triangle();
        let n = m.facet_normals();
        assert!((n[0][1] + 1.0).abs() < 1e-14);
        let s = 0.5f64.sqrt();
        assert!((n[1][0] - s).abs() < 1e-14 && (n[1][1] - s).abs() < 1e-14);
    }
}
