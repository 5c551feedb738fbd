//! Matchgates: planar embedded weighted graphs with ordered input and
//! output external nodes, their standard signatures via PerfMatch, and the
//! pendant-edge / external-projection surgeries.
//!
//! Walking the outer face counterclockwise one meets the inputs labeled
//! 1..|X| and then the outputs labeled |Y|..1. Standard-signature entries
//! are indexed with the node-1 bit leftmost: generators by output labels,
//! recognizers by input labels, transducers in boundary order (input bits
//! in label order, then output bits in reverse label order).

use thiserror::Error;

use crate::graph::{Face, GraphError, PlanarGraph};
use crate::pattern::Pattern;
use crate::scalar::Scalar;
use crate::signature::{Role, Signature, SignatureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchgateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("vertex {0} is not an external node")]
    NotExternal(usize),
    #[error("external nodes repeat or overlap")]
    OverlappingExternals,
    #[error("external nodes do not appear on a common face in boundary order")]
    OrderViolation,
}

/// A planar matchgate: graph plus ordered input and output node lists.
/// `inputs[j]` is the input labeled j+1; `outputs[j]` the output labeled
/// j+1.
#[derive(Debug, Clone)]
pub struct Matchgate {
    graph: PlanarGraph,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Matchgate {
    pub fn new(
        graph: PlanarGraph,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    ) -> Result<Self, MatchgateError> {
        let mut seen = vec![false; graph.vertex_count()];
        for &v in inputs.iter().chain(outputs.iter()) {
            if v >= graph.vertex_count() {
                return Err(MatchgateError::NotExternal(v));
            }
            if seen[v] {
                return Err(MatchgateError::OverlappingExternals);
            }
            seen[v] = true;
        }
        let gate = Matchgate { graph, inputs, outputs };
        gate.boundary_face()?;
        Ok(gate)
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn arity(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn role(&self) -> Role {
        match (self.inputs.len(), self.outputs.len()) {
            (0, _) => Role::Generator,
            (_, 0) => Role::Recognizer,
            (s, l) => Role::Transducer { outputs: l, inputs: s },
        }
    }

    /// Even matchgates have an even number of vertices.
    pub fn is_even(&self) -> bool {
        self.graph.vertex_count() % 2 == 0
    }

    /// External nodes in counterclockwise boundary order: inputs 1..|X|,
    /// then outputs |Y|..1.
    pub fn boundary_sequence(&self) -> Vec<usize> {
        let mut seq = self.inputs.clone();
        seq.extend(self.outputs.iter().rev());
        seq
    }

    /// External nodes in the order their bits appear in signature patterns.
    pub fn pattern_order(&self) -> Vec<usize> {
        match self.role() {
            Role::Generator => self.outputs.clone(),
            Role::Recognizer => self.inputs.clone(),
            Role::Transducer { .. } => self.boundary_sequence(),
        }
    }

    /// The face whose (reversed) walk carries all external nodes in
    /// counterclockwise boundary order. Uses the graph's outer-face hint
    /// when set, otherwise the first face that fits.
    pub fn boundary_face(&self) -> Result<usize, MatchgateError> {
        let seq = self.boundary_sequence();
        if seq.is_empty() {
            return Ok(0);
        }
        let faces = self.graph.trace_faces()?;
        if faces.is_empty() {
            return Err(MatchgateError::OrderViolation);
        }
        let candidates: Vec<usize> = match self.graph.outer_hint() {
            Some(_) => vec![self.graph.outer_face_index(&faces)?],
            None => (0..faces.len()).collect(),
        };
        for f in candidates {
            if boundary_order_holds(&self.graph, &faces[f], &seq) {
                return Ok(f);
            }
        }
        Err(MatchgateError::OrderViolation)
    }

    /// The standard signature: entry at characteristic pattern chi_Z equals
    /// PerfMatch(G - Z).
    pub fn standard_signature(&self) -> Result<Signature, MatchgateError> {
        let order = self.pattern_order();
        let n = order.len();
        let mut entries = Vec::with_capacity(1 << n);
        for idx in 0..(1usize << n) {
            let pat = Pattern::from_index(n, idx);
            let removed: Vec<usize> = (1..=n).filter(|&p| pat.bit(p) == 1).map(|p| order[p - 1]).collect();
            entries.push(self.graph.remove_vertices(&removed).perfmatch()?);
        }
        Ok(Signature::new(2, n, self.role(), entries)?)
    }

    /// The transducer matrix view, rows indexed by output patterns and
    /// columns by input patterns.
    pub fn signature_matrix(&self) -> Result<crate::matrix::Matrix, MatchgateError> {
        let sig = self.standard_signature()?;
        match self.role() {
            Role::Transducer { .. } => Ok(sig.transducer_matrix()?),
            Role::Generator => {
                Ok(crate::matrix::Matrix::new(sig.entries().len(), 1, sig.into_entries()))
            }
            Role::Recognizer => {
                Ok(crate::matrix::Matrix::new(1, sig.entries().len(), sig.into_entries()))
            }
        }
    }

    /// Joins a fresh weight-1 pendant vertex to external node `v`; the new
    /// vertex replaces `v` as the external node. The signature picks up an
    /// XOR of e_i at `v`'s pattern position.
    pub fn attach_pendant(&self, v: usize) -> Result<Matchgate, MatchgateError> {
        let in_pos = self.inputs.iter().position(|&x| x == v);
        let out_pos = self.outputs.iter().position(|&x| x == v);
        if in_pos.is_none() && out_pos.is_none() {
            return Err(MatchgateError::NotExternal(v));
        }
        let face = self.boundary_face()?;
        let (graph, new_vertex) = self.graph.add_pendant_into_face(v, face, Scalar::one())?;
        let mut inputs = self.inputs.clone();
        let mut outputs = self.outputs.clone();
        if let Some(p) = in_pos {
            inputs[p] = new_vertex;
        }
        if let Some(p) = out_pos {
            outputs[p] = new_vertex;
        }
        Matchgate::new(graph, inputs, outputs)
    }

    /// Keeps only the listed external nodes (given in their label order:
    /// kept inputs first, then kept outputs, matching the boundary order);
    /// all other externals become internal. The signature of the result is
    /// the restriction of the original to patterns with 0 on the demoted
    /// positions.
    pub fn project_externals(&self, keep: &[usize]) -> Result<Matchgate, MatchgateError> {
        if keep.is_empty() {
            return Err(MatchgateError::OrderViolation);
        }
        for &v in keep {
            if !self.inputs.contains(&v) && !self.outputs.contains(&v) {
                return Err(MatchgateError::NotExternal(v));
            }
        }
        let inputs: Vec<usize> = keep
            .iter()
            .copied()
            .filter(|v| self.inputs.contains(v))
            .collect();
        let outputs: Vec<usize> = keep
            .iter()
            .copied()
            .filter(|v| self.outputs.contains(v))
            .collect();
        // the keep list must read as inputs then outputs in label order
        let mut expect = inputs.clone();
        expect.extend(outputs.iter().copied());
        if expect != keep {
            return Err(MatchgateError::OrderViolation);
        }
        let in_order: Vec<usize> = self
            .inputs
            .iter()
            .copied()
            .filter(|v| inputs.contains(v))
            .collect();
        let out_order: Vec<usize> = self
            .outputs
            .iter()
            .copied()
            .filter(|v| outputs.contains(v))
            .collect();
        if in_order != inputs || out_order != outputs {
            return Err(MatchgateError::OrderViolation);
        }
        Matchgate::new(self.graph.clone(), inputs, outputs)
    }
}

/// Whether the reversed face walk (counterclockwise around the gate) meets
/// the external nodes in exactly the order of `seq`, cyclically.
fn boundary_order_holds(g: &PlanarGraph, face: &Face, seq: &[usize]) -> bool {
    let mut walk = face.vertex_walk(g);
    walk.reverse();
    let externals: Vec<usize> = walk.iter().copied().filter(|v| seq.contains(v)).collect();
    if externals.is_empty() {
        return false;
    }
    // every external must lie on this face, and each exactly once
    let mut sorted_seq = seq.to_vec();
    sorted_seq.sort_unstable();
    let mut sorted_ext = externals.clone();
    sorted_ext.sort_unstable();
    if sorted_ext != sorted_seq {
        return false;
    }
    let n = seq.len();
    (0..n).any(|shift| (0..n).all(|i| externals[(i + shift) % n] == seq[i]))
}
