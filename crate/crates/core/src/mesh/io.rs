//! Plain-text mesh files.
//!
//! ```text
//! dim <1|2|3>
//! vertices <N>
//! <x> [<y> [<z>]]
//! cells <M>
//! <i0> ... <i_dim>
//! boundary_facets <B>
//! <dirichlet|robin> <i0> [... <i_{dim-1}>]
//! ```
//!
//! Indices are 0-based and coordinates are written with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BoundaryFacet, MeshError, SimplicialMesh};

pub fn save_mesh(mesh: &SimplicialMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    fs::write(path, write_mesh(mesh))?;
    Ok(())
}

pub fn write_mesh(mesh: &SimplicialMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dim {}", mesh.dim);
    let _ = writeln!(s, "vertices {}", mesh.vertices.len());
    for v in &mesh.vertices {
        let coords: Vec<String> = v[..mesh.dim].iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(s, "{}", coords.join(" "));
    }
    let _ = writeln!(s, "cells {}", mesh.cells.len());
    for c in &mesh.cells {
        let _ = writeln!(s, "{}", join_indices(c));
    }
    let _ = writeln!(s, "boundary_facets {}", mesh.boundary_facets.len());
    for f in &mesh.boundary_facets {
        let _ = writeln!(s, "{} {}", f.marker.as_str(), join_indices(&f.vertices));
    }
    s
}

fn join_indices(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<SimplicialMesh, MeshError> {
    parse_mesh(&fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_tokens(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), MeshError> {
        for (i, line) in self.inner.by_ref() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            self.last = i + 1;
            if !toks.is_empty() {
                return Ok((i + 1, toks));
            }
        }
        Err(MeshError::Parse { line: self.last + 1, message: format!("unexpected end of file, expected {what}") })
    }

    fn header(&mut self, key: &str) -> Result<(usize, usize), MeshError> {
        let (line, toks) = self.next_tokens(key)?;
        if toks.len() != 2 || toks[0] != key {
            return Err(MeshError::Parse { line, message: format!("expected `{key} <count>`") });
        }
        let n = toks[1]
            .parse()
            .map_err(|_| MeshError::Parse { line, message: format!("bad count `{}`", toks[1]) })?;
        Ok((line, n))
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize, MeshError> {
    tok.parse()
        .map_err(|_| MeshError::Parse { line, message: format!("bad vertex index `{tok}`") })
}

/// Parses the text format, then orients and validates the result.
pub fn parse_mesh(text: &str) -> Result<SimplicialMesh, MeshError> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };

    let (line, dim) = lines.header("dim")?;
    if !(1..=3).contains(&dim) {
        return Err(MeshError::Parse { line, message: format!("unsupported dimension {dim}") });
    }

    let (_, nv) = lines.header("vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, toks) = lines.next_tokens("vertex coordinates")?;
        if toks.len() != dim {
            return Err(MeshError::Parse {
                line,
                message: format!("expected {dim} coordinates, found {}", toks.len()),
            });
        }
        let mut p = [0.0; 3];
        for (k, t) in toks.iter().enumerate() {
            p[k] = t
                .parse()
                .map_err(|_| MeshError::Parse { line, message: format!("bad coordinate `{t}`") })?;
        }
        vertices.push(p);
    }

    let (_, nc) = lines.header("cells")?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (line, toks) = lines.next_tokens("cell indices")?;
        if toks.len() != dim + 1 {
            return Err(MeshError::Parse {
                line,
                message: format!("expected {} indices, found {}", dim + 1, toks.len()),
            });
        }
        cells.push(toks.iter().map(|t| parse_index(t, line)).collect::<Result<Vec<_>, _>>()?);
    }

    let (_, nb) = lines.header("boundary_facets")?;
    let mut facets = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (line, toks) = lines.next_tokens("boundary facet")?;
        if toks.len() != dim + 1 {
            return Err(MeshError::Parse {
                line,
                message: format!("expected marker and {dim} indices, found {} tokens", toks.len()),
            });
        }
        let marker = toks[0].parse().map_err(|message| MeshError::Parse { line, message })?;
        let vertices = toks[1..].iter().map(|t| parse_index(t, line)).collect::<Result<Vec<_>, _>>()?;
        facets.push(BoundaryFacet { marker, vertices });
    }

    if let Ok((line, _)) = lines.next_tokens("") {
        return Err(MeshError::Parse { line, message: "trailing content after boundary facets".into() });
    }

    SimplicialMesh::new(dim, vertices, cells, facets)
}
