//! Text file formats: scalars, signatures, bases, matrices, planar
//! graphs, matchgates, matchgrid manifests and collapse manifests.
//!
//! Scalars use the form `a/b`, `a/b+c/d*i` or `a/b-c/d*i` with decimal
//! integers and positive denominators; the integer shorthand `a` means
//! `a/1`. Vertices and edge indices in graph files are 1-based; `rot`
//! lines list a vertex's incident edges in counterclockwise order and
//! `outer` gives the outer face's boundary vertex sequence in face-walk
//! order. Lines starting with `#` are comments.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::basis::Basis;
use crate::graph::PlanarGraph;
use crate::holant::Matchgrid;
use crate::matchgate::Matchgate;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::signature::{Role, Signature};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file}: {message}")]
    Invalid { file: String, message: String },
}

fn parse_err(file: &str, line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { file: file.to_string(), line, message: message.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn kv<'a>(token: &'a str, key: &str, file: &str, line: usize) -> Result<&'a str, FormatError> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| parse_err(file, line, format!("expected {key}=<value>, got {token:?}")))
}

fn parse_usize(text: &str, file: &str, line: usize) -> Result<usize, FormatError> {
    text.parse::<usize>()
        .map_err(|_| parse_err(file, line, format!("expected integer, got {text:?}")))
}

fn parse_scalar(text: &str, file: &str, line: usize) -> Result<Scalar, FormatError> {
    text.parse::<Scalar>().map_err(|e| parse_err(file, line, e.to_string()))
}

fn parse_role(text: &str, file: &str, line: usize) -> Result<Role, FormatError> {
    text.parse::<Role>().map_err(|e| parse_err(file, line, e))
}

/// Parses `signature k=<int> n=<int> role=<role>` followed by k^n
/// whitespace-separated scalars in lexicographic order.
pub fn parse_signature(text: &str, file: &str) -> Result<Signature, FormatError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(file, 1, "empty signature file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("signature") {
        return Err(parse_err(file, line_no, "expected 'signature' header"));
    }
    let k = parse_usize(kv(toks.next().unwrap_or(""), "k", file, line_no)?, file, line_no)?;
    let n = parse_usize(kv(toks.next().unwrap_or(""), "n", file, line_no)?, file, line_no)?;
    let role = parse_role(kv(toks.next().unwrap_or(""), "role", file, line_no)?, file, line_no)?;
    let mut entries = Vec::new();
    for (line_no, l) in lines {
        for tok in l.split_whitespace() {
            entries.push(parse_scalar(tok, file, line_no)?);
        }
    }
    Signature::new(k, n, role, entries)
        .map_err(|e| FormatError::Invalid { file: file.to_string(), message: e.to_string() })
}

pub fn write_signature(sig: &Signature) -> String {
    let mut out = format!("signature k={} n={} role={}\n", sig.k(), sig.arity(), sig.role());
    for e in sig.entries() {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

/// Parses `basis l=<l> k=<k>` followed by 2^l rows of k scalars.
pub fn parse_basis(text: &str, file: &str) -> Result<Basis, FormatError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(file, 1, "empty basis file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("basis") {
        return Err(parse_err(file, line_no, "expected 'basis' header"));
    }
    let l = parse_usize(kv(toks.next().unwrap_or(""), "l", file, line_no)?, file, line_no)?;
    let k = parse_usize(kv(toks.next().unwrap_or(""), "k", file, line_no)?, file, line_no)?;
    let mut entries = Vec::new();
    for (line_no, line) in lines {
        for tok in line.split_whitespace() {
            entries.push(parse_scalar(tok, file, line_no)?);
        }
    }
    if entries.len() != (1 << l) * k {
        return Err(FormatError::Invalid {
            file: file.to_string(),
            message: format!("expected {} entries, got {}", (1 << l) * k, entries.len()),
        });
    }
    Basis::new(l, k, Matrix::new(1 << l, k, entries))
        .map_err(|e| FormatError::Invalid { file: file.to_string(), message: e.to_string() })
}

pub fn write_basis(b: &Basis) -> String {
    let mut out = format!("basis l={} k={}\n", b.l(), b.k());
    for r in 0..b.matrix().rows() {
        let row: Vec<String> = (0..b.k()).map(|c| b.matrix().at(r, c).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses `matrix rows=<r> cols=<c>` followed by the entries row-major.
pub fn parse_matrix(text: &str, file: &str) -> Result<Matrix, FormatError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(file, 1, "empty matrix file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("matrix") {
        return Err(parse_err(file, line_no, "expected 'matrix' header"));
    }
    let rows = parse_usize(kv(toks.next().unwrap_or(""), "rows", file, line_no)?, file, line_no)?;
    let cols = parse_usize(kv(toks.next().unwrap_or(""), "cols", file, line_no)?, file, line_no)?;
    let mut entries = Vec::new();
    for (line_no, line) in lines {
        for tok in line.split_whitespace() {
            entries.push(parse_scalar(tok, file, line_no)?);
        }
    }
    if entries.len() != rows * cols {
        return Err(FormatError::Invalid {
            file: file.to_string(),
            message: format!("expected {} entries, got {}", rows * cols, entries.len()),
        });
    }
    Ok(Matrix::new(rows, cols, entries))
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = format!("matrix rows={} cols={}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.at(r, c).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

struct GraphParts {
    graph: PlanarGraph,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

fn parse_graph_parts(text: &str, file: &str) -> Result<GraphParts, FormatError> {
    let mut vertex_count = None;
    let mut edges: Vec<(usize, usize, Scalar)> = Vec::new();
    let mut rotations: Vec<Option<Vec<usize>>> = Vec::new();
    let mut outer: Option<Vec<usize>> = None;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (line_no, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap();
        match head {
            "vertices" => {
                let n = parse_usize(toks.next().unwrap_or(""), file, line_no)?;
                vertex_count = Some(n);
                rotations = vec![None; n];
            }
            "edge" => {
                let n = vertex_count
                    .ok_or_else(|| parse_err(file, line_no, "edge before vertices"))?;
                let u = parse_usize(toks.next().unwrap_or(""), file, line_no)?;
                let v = parse_usize(toks.next().unwrap_or(""), file, line_no)?;
                if u < 1 || u > n || v < 1 || v > n {
                    return Err(parse_err(file, line_no, "vertex id out of range"));
                }
                let w = parse_scalar(toks.next().unwrap_or("1"), file, line_no)?;
                edges.push((u - 1, v - 1, w));
            }
            "rot" => {
                let n = vertex_count
                    .ok_or_else(|| parse_err(file, line_no, "rot before vertices"))?;
                let v = parse_usize(toks.next().unwrap_or(""), file, line_no)?;
                if v < 1 || v > n {
                    return Err(parse_err(file, line_no, "vertex id out of range"));
                }
                let mut ids = Vec::new();
                for tok in toks {
                    let e = parse_usize(tok, file, line_no)?;
                    if e < 1 || e > edges.len() {
                        return Err(parse_err(file, line_no, format!("edge index {e} out of range")));
                    }
                    ids.push(e - 1);
                }
                rotations[v - 1] = Some(ids);
            }
            "outer" => {
                let mut ids = Vec::new();
                for tok in toks {
                    ids.push(parse_usize(tok, file, line_no)? - 1);
                }
                outer = Some(ids);
            }
            "inputs" => {
                for tok in toks {
                    inputs.push(parse_usize(tok, file, line_no)? - 1);
                }
            }
            "outputs" => {
                for tok in toks {
                    outputs.push(parse_usize(tok, file, line_no)? - 1);
                }
            }
            other => return Err(parse_err(file, line_no, format!("unknown directive {other:?}"))),
        }
    }
    let n = vertex_count.ok_or_else(|| parse_err(file, 1, "missing 'vertices' line"))?;
    let mut rots = Vec::with_capacity(n);
    for (v, r) in rotations.into_iter().enumerate() {
        match r {
            Some(ids) => rots.push(ids),
            None => {
                // unlisted vertices must be isolated
                let incident: Vec<usize> = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, (a, b, _))| *a == v || *b == v)
                    .map(|(i, _)| i)
                    .collect();
                if !incident.is_empty() {
                    return Err(FormatError::Invalid {
                        file: file.to_string(),
                        message: format!("vertex {} has edges but no rot line", v + 1),
                    });
                }
                rots.push(Vec::new());
            }
        }
    }
    let graph = PlanarGraph::new(n, edges, rots, outer)
        .map_err(|e| FormatError::Invalid { file: file.to_string(), message: e.to_string() })?;
    Ok(GraphParts { graph, inputs, outputs })
}

pub fn parse_graph(text: &str, file: &str) -> Result<PlanarGraph, FormatError> {
    let parts = parse_graph_parts(text, file)?;
    if !parts.inputs.is_empty() || !parts.outputs.is_empty() {
        return Err(FormatError::Invalid {
            file: file.to_string(),
            message: "graph file must not declare externals; use a matchgate file".into(),
        });
    }
    Ok(parts.graph)
}

pub fn parse_matchgate(text: &str, file: &str) -> Result<Matchgate, FormatError> {
    let parts = parse_graph_parts(text, file)?;
    Matchgate::new(parts.graph, parts.inputs, parts.outputs)
        .map_err(|e| FormatError::Invalid { file: file.to_string(), message: e.to_string() })
}

pub fn write_graph(g: &PlanarGraph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for e in g.edges() {
        out.push_str(&format!("edge {} {} {}\n", e.u + 1, e.v + 1, e.weight));
    }
    for (v, rot) in g.rotations().iter().enumerate() {
        if rot.is_empty() {
            continue;
        }
        let ids: Vec<String> = rot.iter().map(|e| (e + 1).to_string()).collect();
        out.push_str(&format!("rot {} {}\n", v + 1, ids.join(" ")));
    }
    if let Some(hint) = g.outer_hint() {
        let ids: Vec<String> = hint.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&format!("outer {}\n", ids.join(" ")));
    }
    out
}

pub fn write_matchgate(m: &Matchgate) -> String {
    let mut out = write_graph(m.graph());
    if !m.inputs().is_empty() {
        let ids: Vec<String> = m.inputs().iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&format!("inputs {}\n", ids.join(" ")));
    }
    if !m.outputs().is_empty() {
        let ids: Vec<String> = m.outputs().iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&format!("outputs {}\n", ids.join(" ")));
    }
    out
}

fn read_to_string(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn file_label(path: &Path) -> String {
    path.display().to_string()
}

pub fn load_signature(path: &Path) -> Result<Signature, FormatError> {
    parse_signature(&read_to_string(path)?, &file_label(path))
}

pub fn load_basis(path: &Path) -> Result<Basis, FormatError> {
    parse_basis(&read_to_string(path)?, &file_label(path))
}

pub fn load_graph(path: &Path) -> Result<PlanarGraph, FormatError> {
    parse_graph(&read_to_string(path)?, &file_label(path))
}

pub fn load_matchgate(path: &Path) -> Result<Matchgate, FormatError> {
    parse_matchgate(&read_to_string(path)?, &file_label(path))
}

/// Matchgrid manifest: `generator <file>` and `recognizer <file>` lines
/// (paths relative to the manifest) followed by `connect <g>.<out>
/// <r>.<in>` lines with 1-based gate indices per role.
pub fn load_matchgrid(path: &Path) -> Result<Matchgrid, FormatError> {
    let text = read_to_string(path)?;
    let file = file_label(path);
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut generators = Vec::new();
    let mut recognizers = Vec::new();
    let mut connectors = Vec::new();
    let parse_ref = |tok: &str, line_no: usize| -> Result<(usize, usize), FormatError> {
        let (a, b) = tok
            .split_once('.')
            .ok_or_else(|| parse_err(&file, line_no, format!("expected <gate>.<node>, got {tok:?}")))?;
        Ok((parse_usize(a, &file, line_no)?, parse_usize(b, &file, line_no)?))
    };
    for (line_no, line) in content_lines(&text) {
        let mut toks = line.split_whitespace();
        match toks.next().unwrap() {
            "generator" => {
                let rel = toks.next().ok_or_else(|| parse_err(&file, line_no, "missing file"))?;
                generators.push(load_matchgate(&dir.join(rel))?);
            }
            "recognizer" => {
                let rel = toks.next().ok_or_else(|| parse_err(&file, line_no, "missing file"))?;
                recognizers.push(load_matchgate(&dir.join(rel))?);
            }
            "connect" => {
                let g = parse_ref(toks.next().unwrap_or(""), line_no)?;
                let r = parse_ref(toks.next().unwrap_or(""), line_no)?;
                if g.0 < 1 || r.0 < 1 {
                    return Err(parse_err(&file, line_no, "gate indices are 1-based"));
                }
                connectors.push((g.0 - 1, g.1, r.0 - 1, r.1));
            }
            other => return Err(parse_err(&file, line_no, format!("unknown directive {other:?}"))),
        }
    }
    Matchgrid::new(generators, recognizers, connectors)
        .map_err(|e| FormatError::Invalid { file, message: e.to_string() })
}

/// A collapse manifest: the basis, the (domain tensor, standard
/// signature) pairs, and an optional wiring for the Holant regression.
pub struct CollapseManifest {
    pub basis: Basis,
    pub generators: Vec<(Signature, Option<Signature>)>,
    pub recognizers: Vec<(Signature, Option<Signature>)>,
    pub wires: Vec<crate::holant::Wire>,
}

/// Lines: `basis <file>`, `generator <G-file> [<underG-file>]`,
/// `recognizer <R-file> [<underR-file>]`, `wire <g>.<slot> <r>.<slot>`.
pub fn load_collapse_manifest(path: &Path) -> Result<CollapseManifest, FormatError> {
    let text = read_to_string(path)?;
    let file = file_label(path);
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut basis = None;
    let mut generators = Vec::new();
    let mut recognizers = Vec::new();
    let mut wires = Vec::new();
    for (line_no, line) in content_lines(&text) {
        let mut toks = line.split_whitespace();
        match toks.next().unwrap() {
            "basis" => {
                let rel = toks.next().ok_or_else(|| parse_err(&file, line_no, "missing file"))?;
                basis = Some(load_basis(&dir.join(rel))?);
            }
            "generator" | "recognizer" => {
                let is_gen = line.starts_with("generator");
                let rel = toks.next().ok_or_else(|| parse_err(&file, line_no, "missing file"))?;
                let tensor = load_signature(&dir.join(rel))?;
                let under = toks.next().map(|rel| load_signature(&dir.join(rel))).transpose()?;
                if is_gen {
                    generators.push((tensor, under));
                } else {
                    recognizers.push((tensor, under));
                }
            }
            "wire" => {
                let parse_ref = |tok: &str| -> Result<(usize, usize), FormatError> {
                    let (a, b) = tok.split_once('.').ok_or_else(|| {
                        parse_err(&file, line_no, format!("expected <gate>.<slot>, got {tok:?}"))
                    })?;
                    Ok((parse_usize(a, &file, line_no)?, parse_usize(b, &file, line_no)?))
                };
                let g = parse_ref(toks.next().unwrap_or(""))?;
                let r = parse_ref(toks.next().unwrap_or(""))?;
                wires.push(crate::holant::Wire {
                    generator: g.0 - 1,
                    generator_slot: g.1,
                    recognizer: r.0 - 1,
                    recognizer_slot: r.1,
                });
            }
            other => return Err(parse_err(&file, line_no, format!("unknown directive {other:?}"))),
        }
    }
    let basis = basis.ok_or_else(|| parse_err(&file, 1, "missing 'basis' line"))?;
    Ok(CollapseManifest { basis, generators, recognizers, wires })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_round_trip() {
        let text = "signature k=2 n=2 role=generator\n7 0 0 1\n";
        let sig = parse_signature(text, "test").unwrap();
        assert_eq!(sig.k(), 2);
        assert_eq!(sig.arity(), 2);
        assert_eq!(write_signature(&sig), "signature k=2 n=2 role=generator\n7\n0\n0\n1\n");
        let t = parse_signature(
            "signature k=2 n=3 role=transducer[out=2,in=1]\n1 0 0 2 0 3 4 0\n",
            "test",
        )
        .unwrap();
        assert_eq!(t.role(), Role::Transducer { outputs: 2, inputs: 1 });
        let back = parse_signature(&write_signature(&t), "round").unwrap();
        assert_eq!(back.entries(), t.entries());
    }

    #[test]
    fn basis_round_trip() {
        let text = "basis l=1 k=2\n1 1\n1 -1\n";
        let b = parse_basis(text, "test").unwrap();
        assert_eq!(b.l(), 1);
        assert!(b.is_full_rank());
        let again = parse_basis(&write_basis(&b), "round").unwrap();
        assert_eq!(again.matrix(), b.matrix());
    }

    #[test]
    fn graph_round_trip_with_scalars() {
        let text = "vertices 3\nedge 1 2 1/2\nedge 2 3 -3+1/5*i\nrot 1 1\nrot 2 1 2\nrot 3 2\n";
        let g = parse_graph(text, "test").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges()[1].weight, "-3+1/5*i".parse().unwrap());
        let again = parse_graph(&write_graph(&g), "round").unwrap();
        assert_eq!(again.edges(), g.edges());
        assert_eq!(again.rotations(), g.rotations());
    }

    #[test]
    fn matchgate_file_with_externals() {
        let text = "vertices 2\nedge 1 2 5\nrot 1 1\nrot 2 1\noutputs 2 1\n";
        let gate = parse_matchgate(text, "test").unwrap();
        let sig = gate.standard_signature().unwrap();
        assert_eq!(sig.entries()[0], Scalar::from_int(5));
        let again = parse_matchgate(&write_matchgate(&gate), "round").unwrap();
        assert_eq!(again.outputs(), gate.outputs());
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_signature("signature k=2 n=2 role=generator\n1 x 0 1\n", "f").unwrap_err();
        assert!(err.to_string().contains("f:2"), "{err}");
        let err = parse_graph("vertices 1\nedge 1 2 1\n", "f").unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }
}
