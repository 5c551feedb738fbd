//! The Doppler Shift edge-coloring problem on 3-regular planar graphs:
//! count the {Red, Yellow, Green, Blue} edge colorings such that every
//! vertex sees either a red shift (no incident Blue) or a blue shift (no
//! incident Red). Solved by brute force, by an inclusion-exclusion
//! identity over per-vertex shift assignments, and through the
//! holographic transformation with the 4x4 sign basis whose (x1x2, y1y2)
//! entry is (-1)^(x1 y2 + x2 y1).
//!
//! The holographic route transforms the per-edge equality generator by
//! M^{ox 2} and the per-vertex constraint recognizer by (M^{-1})^{ox 3},
//! verifies both transformed families against the standard-signature
//! checker, and evaluates the count by exact contraction of the
//! transformed tensors over 2-bit wire pairs with a sequential frontier
//! sweep. The contraction equals the brute-force count unconditionally
//! (M^{-1} M = I on every wire); the verifier verdicts report how much of
//! the transformed instance is realizable by actual matchgates.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::basis::Basis;
use crate::graph::{GraphError, PlanarGraph};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::signature::{MgiOutcome, Role, Signature, SignatureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DopplerError {
    #[error("vertex {vertex} has degree {degree}, graph is not 3-regular")]
    NotCubic { vertex: usize, degree: usize },
    #[error("edge count {edges} exceeds the enumeration bound {bound}")]
    BoundExceeded { edges: usize, bound: usize },
    #[error("frontier cut {cut} exceeds the contraction bound {bound}")]
    CutBoundExceeded { cut: usize, bound: usize },
    #[error("holographic count is not a natural number: {0}")]
    NonIntegerCount(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Edge colors, identified with 2-bit strings: Red=00, Yellow=01,
/// Green=10, Blue=11.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Red = 0,
    Yellow = 1,
    Green = 2,
    Blue = 3,
}

impl Color {
    pub fn from_index(i: usize) -> Color {
        match i {
            0 => Color::Red,
            1 => Color::Yellow,
            2 => Color::Green,
            _ => Color::Blue,
        }
    }
}

/// 1 iff the three colors avoid Blue (red shift) or avoid Red (blue
/// shift); a vertex satisfying both shifts still counts once.
pub fn vertex_constraint(c1: Color, c2: Color, c3: Color) -> Scalar {
    let cs = [c1, c2, c3];
    let red_shift = cs.iter().all(|&c| c != Color::Blue);
    let blue_shift = cs.iter().all(|&c| c != Color::Red);
    if red_shift || blue_shift {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

fn constraint_index(j1: usize, j2: usize, j3: usize) -> bool {
    !vertex_constraint(Color::from_index(j1), Color::from_index(j2), Color::from_index(j3))
        .is_zero()
}

/// The 4x4 sign basis of the Doppler construction: entry (x1x2, y1y2) is
/// (-1)^(x1 y2 + x2 y1). Symmetric, and M.M = 4I.
pub fn appendix_basis() -> Basis {
    let m = Matrix::from_fn(4, 4, |r, c| {
        let (x1, x2) = ((r >> 1) & 1, r & 1);
        let (y1, y2) = ((c >> 1) & 1, c & 1);
        if (x1 * y2 + x2 * y1) % 2 == 0 {
            Scalar::one()
        } else {
            Scalar::from_int(-1)
        }
    });
    Basis::new(2, 4, m).expect("4x4 full-rank basis")
}

pub const DEFAULT_COLORING_EDGE_BOUND: usize = 14;
pub const DEFAULT_FRONTIER_CUT_BOUND: usize = 10;

fn check_cubic(g: &PlanarGraph) -> Result<Vec<[usize; 3]>, DopplerError> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.u].push(i);
        incident[e.v].push(i);
    }
    incident
        .into_iter()
        .enumerate()
        .map(|(v, inc)| {
            if inc.len() != 3 {
                Err(DopplerError::NotCubic { vertex: v, degree: inc.len() })
            } else {
                Ok([inc[0], inc[1], inc[2]])
            }
        })
        .collect()
}

/// Exhaustive 4^|E| count with early pruning as vertices complete.
pub fn doppler_bruteforce(g: &PlanarGraph) -> Result<u64, DopplerError> {
    doppler_bruteforce_bounded(g, DEFAULT_COLORING_EDGE_BOUND)
}

pub fn doppler_bruteforce_bounded(g: &PlanarGraph, bound: usize) -> Result<u64, DopplerError> {
    let incident = check_cubic(g)?;
    let ne = g.edges().len();
    if ne > bound {
        return Err(DopplerError::BoundExceeded { edges: ne, bound });
    }
    // vertices whose last incident edge (by index) is e, checked when e
    // gets its color
    let mut finish_at: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for (v, inc) in incident.iter().enumerate() {
        let last = *inc.iter().max().unwrap();
        finish_at[last].push(v);
    }
    let mut colors = vec![0u8; ne];
    fn rec(
        e: usize,
        ne: usize,
        colors: &mut [u8],
        incident: &[[usize; 3]],
        finish_at: &[Vec<usize>],
    ) -> u64 {
        if e == ne {
            return 1;
        }
        let mut total = 0;
        for c in 0..4u8 {
            colors[e] = c;
            let ok = finish_at[e].iter().all(|&v| {
                let [a, b, d] = incident[v];
                constraint_index(colors[a] as usize, colors[b] as usize, colors[d] as usize)
            });
            if ok {
                total += rec(e + 1, ne, colors, incident, finish_at);
            }
        }
        total
    }
    Ok(rec(0, ne, &mut colors, &incident, &finish_at))
}

/// Independent oracle: inclusion-exclusion over per-vertex shift choices
/// (red, blue, or the overcounted both), with per-edge color counts 3 or 2.
pub fn doppler_inclusion_exclusion(g: &PlanarGraph) -> Result<u64, DopplerError> {
    check_cubic(g)?;
    let nv = g.vertex_count();
    let mut assign = vec![0u8; nv]; // 0 = red shift, 1 = blue shift, 2 = both
    let mut total: i128 = 0;
    loop {
        let sign: i128 = if assign.iter().filter(|&&a| a == 2).count() % 2 == 0 { 1 } else { -1 };
        let mut term: i128 = sign;
        for e in g.edges() {
            let (a, b) = (assign[e.u], assign[e.v]);
            term *= if a == b && a != 2 { 3 } else { 2 };
        }
        total += term;
        let mut pos = nv;
        loop {
            if pos == 0 {
                assert!(total >= 0, "inclusion-exclusion must be non-negative");
                return Ok(total as u64);
            }
            pos -= 1;
            assign[pos] += 1;
            if assign[pos] < 3 {
                break;
            }
            assign[pos] = 0;
        }
    }
}

/// Verifier verdict on one transformed tensor family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCheck {
    /// Which bit layout the family was checked in.
    pub layout: &'static str,
    pub standard: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct DopplerOutcome {
    pub count: u64,
    pub edge_family: FamilyCheck,
    pub vertex_family: FamilyCheck,
}

impl DopplerOutcome {
    /// The appendix realizability claim, mechanized: both transformed
    /// tensor families pass the verifier.
    pub fn realizable(&self) -> bool {
        self.edge_family.standard && self.vertex_family.standard
    }
}

/// The transformed edge-equality tensor M^{ox 2} eq, 16 entries. In
/// `boundary` layout the second 2-bit block is reversed, matching the
/// counterclockwise external-node order of a two-wire planar gate (the
/// nested pairing); the plain Kronecker layout is the crossing pairing.
pub fn transformed_edge_tensor(boundary_layout: bool) -> Signature {
    let basis = appendix_basis();
    let eq = Signature::from_fn(4, 2, Role::Generator, |d| {
        if d[0] == d[1] {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let plain = basis.generator_to_standard(&eq).expect("transform");
    if !boundary_layout {
        return plain;
    }
    Signature::from_fn(2, 4, Role::Generator, |bits| {
        let reordered = [bits[0], bits[1], bits[3], bits[2]];
        let idx = reordered.iter().fold(0usize, |acc, &b| (acc << 1) | b);
        plain.flat(idx).clone()
    })
}

/// The transformed vertex-constraint tensor f (M^{-1})^{ox 3}, 64
/// entries, in the recognizer's label order (which is its boundary
/// order).
pub fn transformed_vertex_tensor() -> Signature {
    let basis = appendix_basis();
    let m_inv = basis.matrix().inverse().expect("orthogonal basis");
    let f = Signature::from_fn(4, 3, Role::Recognizer, |d| {
        if constraint_index(d[0], d[1], d[2]) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let entries = m_inv.transpose().kronecker_power(3).mul_vec(f.entries());
    Signature::new(2, 6, Role::Recognizer, entries).expect("shape")
}

fn family_check(sig: &Signature, layout: &'static str) -> Result<FamilyCheck, DopplerError> {
    match sig.parity_check()? {
        crate::signature::ParityClass::Violation { even_witness, odd_witness } => {
            Ok(FamilyCheck {
                layout,
                standard: false,
                witness: Some(format!(
                    "parity violation: nonzero at {even_witness} and {odd_witness}"
                )),
            })
        }
        _ => match sig.mgi_check()? {
            MgiOutcome::Pass => Ok(FamilyCheck { layout, standard: true, witness: None }),
            MgiOutcome::Fail { alpha, positions, residual } => Ok(FamilyCheck {
                layout,
                standard: false,
                witness: Some(format!("MGI fail at alpha={alpha} P={positions:?} residual={residual}")),
            }),
        },
    }
}

/// The holographic count: transform both families, run the verifier on
/// each, and contract the transformed tensors exactly over 2-bit wire
/// pairs with a sequential frontier sweep over the vertices.
pub fn doppler_holographic(g: &PlanarGraph) -> Result<DopplerOutcome, DopplerError> {
    let incident = check_cubic(g)?;
    g.trace_faces()?; // the planar embedding is part of the contract

    let edge_tensor = transformed_edge_tensor(true);
    let vertex_tensor = transformed_vertex_tensor();
    let edge_family = family_check(&edge_tensor, "boundary (second block reversed)")?;
    let vertex_family = family_check(&vertex_tensor, "label order")?;

    // 4x4 edge coupling in plain block layout: rows u-side, columns v-side
    let w = transformed_edge_tensor(false)
        .with_role(Role::Generator)
        .block_matrix_form(1, 2)?;
    let count = frontier_contract(g, &incident, &w, &vertex_tensor, DEFAULT_FRONTIER_CUT_BOUND)?;
    Ok(DopplerOutcome { count, edge_family, vertex_family })
}

/// Sequential vertex-elimination contraction: the state maps assignments
/// of the cut half-edges (edges with exactly one processed endpoint) to
/// partial sums. Exact throughout.
fn frontier_contract(
    g: &PlanarGraph,
    incident: &[[usize; 3]],
    edge_matrix: &Matrix,
    vertex_tensor: &Signature,
    cut_bound: usize,
) -> Result<u64, DopplerError> {
    let nv = g.vertex_count();
    let mut processed = vec![false; nv];
    let mut cut: Vec<usize> = Vec::new(); // edge ids carrying a stored value
    let mut state: HashMap<Vec<u8>, Scalar> = HashMap::new();
    state.insert(Vec::new(), Scalar::one());
    for v in 0..nv {
        let closing: Vec<usize> = incident[v]
            .iter()
            .copied()
            .filter(|&e| {
                let other = if g.edges()[e].u == v { g.edges()[e].v } else { g.edges()[e].u };
                processed[other]
            })
            .collect();
        let opening: Vec<usize> =
            incident[v].iter().copied().filter(|e| !closing.contains(e)).collect();
        let mut new_cut: Vec<usize> = cut.iter().copied().filter(|e| !closing.contains(e)).collect();
        new_cut.extend(opening.iter().copied());
        if new_cut.len() > cut_bound {
            return Err(DopplerError::CutBoundExceeded { cut: new_cut.len(), bound: cut_bound });
        }
        let keep_positions: Vec<usize> = cut
            .iter()
            .enumerate()
            .filter(|(_, e)| !closing.contains(e))
            .map(|(i, _)| i)
            .collect();
        let closing_positions: Vec<(usize, usize)> = closing
            .iter()
            .map(|&e| (e, cut.iter().position(|&c| c == e).expect("closing edge on cut")))
            .collect();
        let mut next: HashMap<Vec<u8>, Scalar> = HashMap::new();
        for (key, weight) in &state {
            // assign the three half-edge values at v
            for s0 in 0..4u8 {
                for s1 in 0..4u8 {
                    for s2 in 0..4u8 {
                        let vals = [s0, s1, s2];
                        let digit_of = |e: usize| -> usize {
                            let pos = incident[v].iter().position(|&x| x == e).unwrap();
                            vals[pos] as usize
                        };
                        // vertex factor over 2-bit blocks per slot
                        let mut pat = 0usize;
                        for &e in &incident[v] {
                            pat = (pat << 2) | digit_of(e);
                        }
                        let mut term = vertex_tensor.flat(pat).clone();
                        if term.is_zero() {
                            continue;
                        }
                        for &(e, pos) in &closing_positions {
                            let stored = key[pos] as usize;
                            let mine = digit_of(e);
                            // edge matrix rows are the u-side block
                            let cell = if g.edges()[e].v == v {
                                edge_matrix.at(stored, mine)
                            } else {
                                edge_matrix.at(mine, stored)
                            };
                            if cell.is_zero() {
                                term = Scalar::zero();
                                break;
                            }
                            term *= cell;
                        }
                        if term.is_zero() {
                            continue;
                        }
                        term *= weight;
                        let mut new_key: Vec<u8> =
                            keep_positions.iter().map(|&i| key[i]).collect();
                        for &e in &opening {
                            new_key.push(digit_of(e) as u8);
                        }
                        let slot = next.entry(new_key).or_insert_with(Scalar::zero);
                        *slot += &term;
                    }
                }
            }
        }
        state = next;
        cut = new_cut;
        processed[v] = true;
    }
    let total = state.remove(&Vec::new()).unwrap_or_else(Scalar::zero);
    if !total.im.is_zero() || !total.re.denom().is_one() || total.re < num_rational::BigRational::from_integer(0.into()) {
        return Err(DopplerError::NonIntegerCount(total.to_string()));
    }
    let digits = total.re.numer().to_string();
    digits
        .parse::<u64>()
        .map_err(|_| DopplerError::NonIntegerCount(total.to_string()))
}

/// K4 drawn with vertex 3 inside the triangle 0,1,2; unit weights.
pub fn k4() -> PlanarGraph {
    let edges = vec![
        (0, 1, Scalar::one()),
        (1, 2, Scalar::one()),
        (2, 0, Scalar::one()),
        (0, 3, Scalar::one()),
        (1, 3, Scalar::one()),
        (2, 3, Scalar::one()),
    ];
    let rotations = vec![vec![0, 3, 2], vec![1, 4, 0], vec![2, 5, 1], vec![3, 4, 5]];
    PlanarGraph::new(4, edges, rotations, None).expect("planar K4")
}

/// Planar embedding derived from explicit coordinates: the rotation at
/// each vertex sorts its incident edges counterclockwise by angle.
pub fn embed_by_coordinates(
    n: usize,
    edges: Vec<(usize, usize, Scalar)>,
    coords: &[(f64, f64)],
) -> PlanarGraph {
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut ids: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|(_, (a, b, _))| *a == v || *b == v)
            .map(|(i, _)| i)
            .collect();
        ids.sort_by(|&p, &q| {
            let angle = |e: usize| {
                let (a, b, _) = edges[e];
                let other = if a == v { b } else { a };
                let dx = coords[other].0 - coords[v].0;
                let dy = coords[other].1 - coords[v].1;
                dy.atan2(dx)
            };
            angle(p).partial_cmp(&angle(q)).expect("distinct angles")
        });
        rotations[v] = ids;
    }
    PlanarGraph::new(n, edges, rotations, None).expect("coordinate embedding")
}

/// Triangular prism: outer triangle 0,1,2 and inner triangle 3,4,5.
pub fn triangular_prism() -> PlanarGraph {
    let one = Scalar::one;
    let edges = vec![
        (0, 1, one()),
        (1, 2, one()),
        (2, 0, one()),
        (3, 4, one()),
        (4, 5, one()),
        (5, 3, one()),
        (0, 3, one()),
        (1, 4, one()),
        (2, 5, one()),
    ];
    let outer = |i: f64| ((i * 2.0944).cos() * 2.0, (i * 2.0944).sin() * 2.0);
    let inner = |i: f64| ((i * 2.0944).cos(), (i * 2.0944).sin());
    let coords = vec![outer(0.0), outer(1.0), outer(2.0), inner(0.0), inner(1.0), inner(2.0)];
    embed_by_coordinates(6, edges, &coords)
}

/// The cube graph: outer square 0..3 and inner square 4..7.
pub fn cube_graph() -> PlanarGraph {
    let one = Scalar::one;
    let edges = vec![
        (0, 1, one()),
        (1, 2, one()),
        (2, 3, one()),
        (3, 0, one()),
        (4, 5, one()),
        (5, 6, one()),
        (6, 7, one()),
        (7, 4, one()),
        (0, 4, one()),
        (1, 5, one()),
        (2, 6, one()),
        (3, 7, one()),
    ];
    let outer = |i: f64| ((i * 1.5708 + 0.7854).cos() * 2.0, (i * 1.5708 + 0.7854).sin() * 2.0);
    let inner = |i: f64| ((i * 1.5708 + 0.7854).cos(), (i * 1.5708 + 0.7854).sin());
    let coords = vec![
        outer(0.0),
        outer(1.0),
        outer(2.0),
        outer(3.0),
        inner(0.0),
        inner(1.0),
        inner(2.0),
        inner(3.0),
    ];
    embed_by_coordinates(8, edges, &coords)
}

/// The theta multigraph: two vertices joined by three parallel edges, the
/// smallest 3-regular instance.
pub fn theta_multigraph() -> PlanarGraph {
    let one = Scalar::one;
    let edges = vec![(0, 1, one()), (0, 1, one()), (0, 1, one())];
    PlanarGraph::new(2, edges, vec![vec![0, 1, 2], vec![2, 1, 0]], None).expect("theta")
}
