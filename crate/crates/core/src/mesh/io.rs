//! Line-oriented text format for meshes and their Robin coefficients.
//!
//! ```text
//! symcomp-mesh v1
//! manifold <plane|sphere|cone> <kappa> <fraction>
//! vertices <N>
//! <x> <y> [<z>]          one line per vertex; z only for sphere meshes
//! triangles <T>
//! <a> <b> <c>            0-based, counterclockwise
//! boundary <B>
//! <a> <b> <beta>         directed edges, domain on the left
//! ```
//!
//! Reals are written with 17 significant digits so a round trip is exact.

use std::fmt::Write as _;

use super::{BoundaryField, Mesh};
use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldKind};

const HEADER: &str = "symcomp-mesh v1";

pub fn export_mesh(mesh: &Mesh, beta: &BoundaryField) -> Result<String> {
    beta.check_against(mesh)?;
    let m = mesh.manifold();
    let sphere = m.kind() == ManifoldKind::Sphere;
    let mut out = String::new();
    // writing to a String cannot fail
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "manifold {} {:.16e} {:.16e}", m.kind().as_str(), m.kappa(), m.cone_fraction());
    let _ = writeln!(out, "vertices {}", mesh.num_vertices());
    for v in mesh.vertices() {
        if sphere {
            let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
        } else {
            let _ = writeln!(out, "{:.16e} {:.16e}", v[0], v[1]);
        }
    }
    let _ = writeln!(out, "triangles {}", mesh.triangles().len());
    for t in mesh.triangles() {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(out, "boundary {}", mesh.boundary().len());
    for (e, b) in mesh.boundary().iter().zip(beta.values()) {
        let _ = writeln!(out, "{} {} {:.16e}", e[0], e[1], b);
    }
    Ok(out)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, record: &str) -> Result<&'a str> {
        loop {
            match self.inner.next() {
                Some((i, l)) => {
                    self.line = i + 1;
                    let l = l.trim();
                    if !l.is_empty() {
                        return Ok(l);
                    }
                }
                None => {
                    return Err(Error::Parse {
                        line: self.line + 1,
                        record: record.to_string(),
                        message: "unexpected end of file".into(),
                    })
                }
            }
        }
    }

    fn err(&self, record: impl Into<String>, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            record: record.into(),
            message: message.into(),
        }
    }

    fn fields<T: std::str::FromStr>(&mut self, record: &str, count: usize) -> Result<Vec<T>> {
        let l = self.next(record)?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != count {
            return Err(self.err(record, format!("expected {count} fields, found {}", parts.len())));
        }
        parts
            .iter()
            .map(|p| p.parse::<T>().map_err(|_| self.err(record, format!("cannot parse `{p}`"))))
            .collect()
    }

    fn section(&mut self, keyword: &str) -> Result<usize> {
        let l = self.next(keyword)?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(keyword) {
            return Err(self.err(keyword, format!("expected `{keyword} <count>`, found `{l}`")));
        }
        let count = parts
            .next()
            .and_then(|c| c.parse::<usize>().ok())
            .ok_or_else(|| self.err(keyword, "missing or invalid count"))?;
        if parts.next().is_some() {
            return Err(self.err(keyword, "trailing fields after count"));
        }
        Ok(count)
    }
}

/// Parses a mesh file. The imported mesh has no analytic domain attached and
/// its target length `h` is set to the longest edge.
pub fn import_mesh(text: &str) -> Result<(Mesh, BoundaryField)> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let header = lines.next("header")?;
    if header != HEADER {
        return Err(lines.err("header", format!("expected `{HEADER}`, found `{header}`")));
    }

    let l = lines.next("manifold")?;
    let parts: Vec<&str> = l.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "manifold" {
        return Err(lines.err("manifold", "expected `manifold <kind> <kappa> <fraction>`"));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| lines.err("manifold", format!("cannot parse `{s}`")));
    let (kappa, fraction) = (num(parts[2])?, num(parts[3])?);
    let manifold = match parts[1] {
        "plane" => Ok(Manifold::plane()),
        "sphere" => Manifold::sphere(kappa),
        "cone" => Manifold::cone(fraction),
        other => return Err(lines.err("manifold", format!("unknown manifold kind `{other}`"))),
    }
    .map_err(|e| lines.err("manifold", e.to_string()))?;
    let dims = if manifold.kind() == ManifoldKind::Sphere { 3 } else { 2 };

    let nv = lines.section("vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let record = format!("vertex {i}");
        let c: Vec<f64> = lines.fields(&record, dims)?;
        if c.iter().any(|x| !x.is_finite()) {
            return Err(lines.err(record, "non-finite coordinate"));
        }
        vertices.push([c[0], c[1], if dims == 3 { c[2] } else { 0.0 }]);
    }

    let nt = lines.section("triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for i in 0..nt {
        let record = format!("triangle {i}");
        let t: Vec<usize> = lines.fields(&record, 3)?;
        if let Some(&bad) = t.iter().find(|&&v| v >= nv) {
            return Err(lines.err(record, format!("vertex index {bad} out of range ({nv} vertices)")));
        }
        triangles.push([t[0], t[1], t[2]]);
    }

    let nb = lines.section("boundary")?;
    let mut boundary = Vec::with_capacity(nb);
    let mut beta = Vec::with_capacity(nb);
    for i in 0..nb {
        let record = format!("boundary edge {i}");
        let l = lines.next(&record)?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(lines.err(record, format!("expected 3 fields, found {}", parts.len())));
        }
        let idx = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| lines.err(record.as_str(), format!("cannot parse `{s}`")))
        };
        let (a, b) = (idx(parts[0])?, idx(parts[1])?);
        if a >= nv || b >= nv {
            return Err(lines.err(record, format!("vertex index {} out of range ({nv} vertices)", a.max(b))));
        }
        let value = parts[2]
            .parse::<f64>()
            .map_err(|_| lines.err(record.as_str(), format!("cannot parse `{}`", parts[2])))?;
        boundary.push([a, b]);
        beta.push(value);
    }
    if let Ok(extra) = lines.next("end of file") {
        return Err(lines.err("end of file", format!("unexpected trailing content `{extra}`")));
    }

    let beta = BoundaryField::new(beta)?;
    // provisional h for validation, replaced by the longest edge below
    let mesh = Mesh::from_parts(manifold, vertices, triangles, boundary, 1.0, None)?;
    let h = mesh.max_edge_length();
    let mesh = Mesh { h, ..mesh };
    Ok((mesh, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, DomainSpec};

    #[test]
    fn round_trip_is_bitwise() {
        let m = Manifold::sphere(2.0).unwrap();
        let mesh = build_mesh(&DomainSpec::SphericalCap { radius: 0.7 }, &m, 0.1).unwrap();
        let beta = BoundaryField::from_fn(&mesh, |p| 1.0 + p[0].abs() / 3.0).unwrap();
        let text = export_mesh(&mesh, &beta).unwrap();
        let (back, beta_back) = import_mesh(&text).unwrap();
        assert_eq!(back.vertices(), mesh.vertices());
        assert_eq!(back.triangles(), mesh.triangles());
        assert_eq!(back.boundary(), mesh.boundary());
        assert_eq!(beta_back, beta);
        assert_eq!(export_mesh(&back, &beta_back).unwrap(), text);
    }

    #[test]
    fn dangling_index_names_record() {
        let text = "symcomp-mesh v1\nmanifold plane 0 1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 7\nboundary 3\n0 1 1\n1 2 1\n2 0 1\n";
        match import_mesh(text).unwrap_err() {
            Error::Parse { line, record, .. } => {
                assert_eq!(line, 8);
                assert_eq!(record, "triangle 0");
            }
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn open_chain_rejected() {
        let text = "symcomp-mesh v1\nmanifold plane 0 1\nvertices 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 2\nboundary 3\n0 1 1\n2 1 1\n2 0 1\n";
        let err = import_mesh(text).unwrap_err();
        assert!(err.to_string().contains("boundary not closed"), "{err}");
    }
}
