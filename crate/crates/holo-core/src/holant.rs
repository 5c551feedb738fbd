//! Matchgrids and Holant evaluation: direct tensor contraction over the
//! connecting wires, the PerfMatch route through the assembled planar
//! graph (Valiant's Holant Theorem), and planar matchgate composition.

use thiserror::Error;

use crate::graph::{GraphError, PlanarGraph};
use crate::matchgate::{Matchgate, MatchgateError};
use crate::matrix::Matrix;
use crate::pattern::Pattern;
use crate::scalar::Scalar;
use crate::signature::{Role, Signature, SignatureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HolantError {
    #[error("wire bound exceeded: {wires} > {bound}")]
    BoundExceeded { wires: usize, bound: usize },
    #[error("wiring mismatch: {0}")]
    WiringMismatch(String),
    #[error("composed graph does not stay planar: {0}")]
    PlanarityViolation(String),
    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matchgate(#[from] MatchgateError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

pub const DEFAULT_WIRE_BOUND: usize = 16;

/// One connecting wire: pairs a generator slot with a recognizer slot
/// (slots 1-based in signature order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wire {
    pub generator: usize,
    pub generator_slot: usize,
    pub recognizer: usize,
    pub recognizer_slot: usize,
}

/// Direct contraction: sum over all wire assignments in [k]^f of the
/// product of generator and recognizer tensor entries. This is the
/// brute-force reference everything else is measured against.
pub fn holant_contract(
    generators: &[Signature],
    recognizers: &[Signature],
    wires: &[Wire],
    bound: usize,
) -> Result<Scalar, HolantError> {
    if wires.len() > bound {
        return Err(HolantError::BoundExceeded { wires: wires.len(), bound });
    }
    let k = generators
        .iter()
        .chain(recognizers.iter())
        .map(Signature::k)
        .next()
        .unwrap_or(2);
    for s in generators.iter().chain(recognizers.iter()) {
        if s.k() != k {
            return Err(HolantError::WiringMismatch("mixed domain sizes".into()));
        }
    }
    // slot -> wire maps, each slot covered exactly once
    let mut gen_slots: Vec<Vec<usize>> = generators.iter().map(|g| vec![usize::MAX; g.arity()]).collect();
    let mut rec_slots: Vec<Vec<usize>> = recognizers.iter().map(|r| vec![usize::MAX; r.arity()]).collect();
    for (w, wire) in wires.iter().enumerate() {
        let g = gen_slots
            .get_mut(wire.generator)
            .ok_or_else(|| HolantError::WiringMismatch(format!("generator {} missing", wire.generator)))?;
        let slot = g
            .get_mut(wire.generator_slot.wrapping_sub(1))
            .ok_or_else(|| HolantError::WiringMismatch(format!("generator slot {} missing", wire.generator_slot)))?;
        if *slot != usize::MAX {
            return Err(HolantError::WiringMismatch("generator slot wired twice".into()));
        }
        *slot = w;
        let r = rec_slots
            .get_mut(wire.recognizer)
            .ok_or_else(|| HolantError::WiringMismatch(format!("recognizer {} missing", wire.recognizer)))?;
        let slot = r
            .get_mut(wire.recognizer_slot.wrapping_sub(1))
            .ok_or_else(|| HolantError::WiringMismatch(format!("recognizer slot {} missing", wire.recognizer_slot)))?;
        if *slot != usize::MAX {
            return Err(HolantError::WiringMismatch("recognizer slot wired twice".into()));
        }
        *slot = w;
    }
    for slots in gen_slots.iter().chain(rec_slots.iter()) {
        if slots.iter().any(|&w| w == usize::MAX) {
            return Err(HolantError::WiringMismatch("unwired slot".into()));
        }
    }

    let f = wires.len();
    let mut assignment = vec![0usize; f];
    let mut total = Scalar::zero();
    loop {
        let mut term = Scalar::one();
        let mut zero = false;
        for (sig, slots) in generators
            .iter()
            .zip(gen_slots.iter())
            .chain(recognizers.iter().zip(rec_slots.iter()))
        {
            let digits: Vec<usize> = slots.iter().map(|&w| assignment[w]).collect();
            let v = sig.at(&digits);
            if v.is_zero() {
                zero = true;
                break;
            }
            term *= v;
        }
        if !zero {
            total += &term;
        }
        // advance the base-k counter
        let mut pos = f;
        loop {
            if pos == 0 {
                return Ok(total);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < k {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// A matchgrid: generator and recognizer matchgates joined by weight-1
/// connecting edges, every external node carrying exactly one connector.
#[derive(Debug, Clone)]
pub struct Matchgrid {
    pub generators: Vec<Matchgate>,
    pub recognizers: Vec<Matchgate>,
    /// (generator index, output label, recognizer index, input label)
    pub connectors: Vec<(usize, usize, usize, usize)>,
}

impl Matchgrid {
    pub fn new(
        generators: Vec<Matchgate>,
        recognizers: Vec<Matchgate>,
        connectors: Vec<(usize, usize, usize, usize)>,
    ) -> Result<Self, HolantError> {
        for (i, g) in generators.iter().enumerate() {
            if !g.inputs().is_empty() {
                return Err(HolantError::WiringMismatch(format!("generator {i} has inputs")));
            }
        }
        for (j, r) in recognizers.iter().enumerate() {
            if !r.outputs().is_empty() {
                return Err(HolantError::WiringMismatch(format!("recognizer {j} has outputs")));
            }
        }
        let grid = Matchgrid { generators, recognizers, connectors };
        grid.wires()?;
        Ok(grid)
    }

    /// The connectors as contraction wires, validating the exactly-once
    /// coverage of every external node.
    pub fn wires(&self) -> Result<Vec<Wire>, HolantError> {
        let mut gen_seen: Vec<Vec<bool>> =
            self.generators.iter().map(|g| vec![false; g.outputs().len()]).collect();
        let mut rec_seen: Vec<Vec<bool>> =
            self.recognizers.iter().map(|r| vec![false; r.inputs().len()]).collect();
        let mut wires = Vec::with_capacity(self.connectors.len());
        for &(g, out, r, inp) in &self.connectors {
            let gs = gen_seen
                .get_mut(g)
                .ok_or_else(|| HolantError::WiringMismatch(format!("generator {g} missing")))?;
            let out_flag = gs
                .get_mut(out.wrapping_sub(1))
                .ok_or_else(|| HolantError::WiringMismatch(format!("output {out} missing")))?;
            if *out_flag {
                return Err(HolantError::WiringMismatch(format!("output {g}.{out} wired twice")));
            }
            *out_flag = true;
            let rs = rec_seen
                .get_mut(r)
                .ok_or_else(|| HolantError::WiringMismatch(format!("recognizer {r} missing")))?;
            let in_flag = rs
                .get_mut(inp.wrapping_sub(1))
                .ok_or_else(|| HolantError::WiringMismatch(format!("input {inp} missing")))?;
            if *in_flag {
                return Err(HolantError::WiringMismatch(format!("input {r}.{inp} wired twice")));
            }
            *in_flag = true;
            wires.push(Wire {
                generator: g,
                generator_slot: out,
                recognizer: r,
                recognizer_slot: inp,
            });
        }
        for seen in gen_seen.iter().chain(rec_seen.iter()) {
            if seen.iter().any(|&s| !s) {
                return Err(HolantError::WiringMismatch("external node without connector".into()));
            }
        }
        Ok(wires)
    }

    /// The union graph: disjoint gate graphs plus the weight-1 connectors,
    /// inserted mechanically in connector order, each placed in the faces
    /// that keep the most still-unwired external nodes on a common region.
    pub fn assemble_graph(&self) -> Result<PlanarGraph, HolantError> {
        let gates: Vec<&Matchgate> = self.generators.iter().chain(self.recognizers.iter()).collect();
        let mut union = PlanarGraph::new(0, vec![], vec![], None)?;
        let mut v_off = Vec::with_capacity(gates.len());
        for gate in &gates {
            v_off.push(union.vertex_count());
            union = union.disjoint_union(gate.graph());
        }
        // endpoints of each connector in union coordinates
        let endpoints: Vec<(usize, usize)> = self
            .connectors
            .iter()
            .map(|&(g, out, r, inp)| {
                (
                    v_off[g] + self.generators[g].outputs()[out - 1],
                    v_off[self.generators.len() + r] + self.recognizers[r].inputs()[inp - 1],
                )
            })
            .collect();
        for (i, &(u, v)) in endpoints.iter().enumerate() {
            let pending: Vec<usize> = endpoints[i + 1..]
                .iter()
                .flat_map(|&(a, b)| [a, b])
                .collect();
            union = union
                .connect_planar(u, v, Scalar::one(), &pending)
                .map_err(|e| HolantError::PlanarityViolation(e.to_string()))?;
        }
        union.trace_faces()?; // final Euler validation
        Ok(union)
    }

    /// Standard signatures of all gates, generators first.
    pub fn standard_signatures(&self) -> Result<(Vec<Signature>, Vec<Signature>), HolantError> {
        let gens = self
            .generators
            .iter()
            .map(Matchgate::standard_signature)
            .collect::<Result<Vec<_>, _>>()?;
        let recs = self
            .recognizers
            .iter()
            .map(Matchgate::standard_signature)
            .collect::<Result<Vec<_>, _>>()?;
        Ok((gens, recs))
    }
}

/// Holant via the Holant Theorem: PerfMatch of the assembled union graph.
pub fn holant_via_perfmatch(grid: &Matchgrid) -> Result<Scalar, HolantError> {
    Ok(grid.assemble_graph()?.perfmatch()?)
}

/// A gate produced by [`compose`], with the provenance of each external:
/// `(from_second_gate, original_label)`.
#[derive(Debug, Clone)]
pub struct ComposedGate {
    pub gate: Matchgate,
    pub input_sources: Vec<(bool, usize)>,
    pub output_sources: Vec<(bool, usize)>,
}

/// Joins outputs of `first` to inputs of `second` with weight-1 edges,
/// respecting planarity. The composite keeps `first`'s inputs and
/// unpaired outputs, and `second`'s outputs and unpaired inputs; its
/// standard signature contracts the constituents' over the paired slots.
pub fn compose(
    first: &Matchgate,
    second: &Matchgate,
    pairing: &[(usize, usize)],
) -> Result<ComposedGate, HolantError> {
    let mut out_used = vec![false; first.outputs().len()];
    let mut in_used = vec![false; second.inputs().len()];
    for &(o, i) in pairing {
        let of = out_used
            .get_mut(o.wrapping_sub(1))
            .ok_or_else(|| HolantError::PairingMismatch(format!("output {o} missing")))?;
        let inf = in_used
            .get_mut(i.wrapping_sub(1))
            .ok_or_else(|| HolantError::PairingMismatch(format!("input {i} missing")))?;
        if *of || *inf {
            return Err(HolantError::PairingMismatch("slot paired twice".into()));
        }
        *of = true;
        *inf = true;
    }
    let off = first.graph().vertex_count();
    let mut union = first.graph().disjoint_union(second.graph());
    let endpoints: Vec<(usize, usize)> = pairing
        .iter()
        .map(|&(o, i)| (first.outputs()[o - 1], off + second.inputs()[i - 1]))
        .collect();
    // the final externals must stay co-facial alongside the pending pairs
    let mut finals: Vec<usize> = first.inputs().to_vec();
    for (idx, &v) in second.inputs().iter().enumerate() {
        if !in_used[idx] {
            finals.push(off + v);
        }
    }
    for (idx, &v) in first.outputs().iter().enumerate() {
        if !out_used[idx] {
            finals.push(v);
        }
    }
    for &v in second.outputs() {
        finals.push(off + v);
    }
    for (i, &(u, v)) in endpoints.iter().enumerate() {
        let mut pending: Vec<usize> = endpoints[i + 1..]
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect();
        pending.extend(finals.iter().copied());
        union = union
            .connect_planar(u, v, Scalar::one(), &pending)
            .map_err(|e| HolantError::PlanarityViolation(e.to_string()))?;
    }
    let mut inputs = Vec::new();
    let mut input_sources = Vec::new();
    for (idx, &v) in first.inputs().iter().enumerate() {
        inputs.push(v);
        input_sources.push((false, idx + 1));
    }
    for (idx, &v) in second.inputs().iter().enumerate() {
        if !in_used[idx] {
            inputs.push(off + v);
            input_sources.push((true, idx + 1));
        }
    }
    let mut outputs = Vec::new();
    let mut output_sources = Vec::new();
    for (idx, &v) in second.outputs().iter().enumerate() {
        outputs.push(off + v);
        output_sources.push((true, idx + 1));
    }
    for (idx, &v) in first.outputs().iter().enumerate() {
        if !out_used[idx] {
            outputs.push(v);
            output_sources.push((false, idx + 1));
        }
    }
    let gate = Matchgate::new(union, inputs, outputs)?;
    Ok(ComposedGate { gate, input_sources, output_sources })
}

/// Tensor route for Lemma "product transformer": underR' = underR T^{ox n}
/// where T is the 2^l x 2^s matrix of a transducer signature and underR
/// has arity n*l. The result has arity n*s.
pub fn recognizer_times_transducer_power(
    under_r: &Signature,
    t: &Matrix,
    copies: usize,
) -> Result<Signature, HolantError> {
    let l = t.rows().trailing_zeros() as usize;
    let s = t.cols().trailing_zeros() as usize;
    if under_r.k() != 2 || under_r.arity() != copies * l {
        return Err(HolantError::WiringMismatch(format!(
            "arity {} does not match {} copies of 2^{} rows",
            under_r.arity(),
            copies,
            l
        )));
    }
    let out_len = 1usize << (copies * s);
    let mut entries = Vec::with_capacity(out_len);
    for beta_idx in 0..out_len {
        let beta = Pattern::from_index(copies * s, beta_idx);
        let mut acc = Scalar::zero();
        for alpha_idx in 0..under_r.entries().len() {
            let u = under_r.flat(alpha_idx);
            if u.is_zero() {
                continue;
            }
            let alpha = Pattern::from_index(copies * l, alpha_idx);
            let mut coeff = Scalar::one();
            for c in 0..copies {
                let row = alpha.block(c + 1, l).index();
                let col = beta.block(c + 1, s).index();
                let tv = t.at(row, col);
                if tv.is_zero() {
                    coeff = Scalar::zero();
                    break;
                }
                coeff *= tv;
            }
            if !coeff.is_zero() {
                acc += &(u * &coeff);
            }
        }
        entries.push(acc);
    }
    Ok(Signature::new(2, copies * s, Role::Recognizer, entries)?)
}
