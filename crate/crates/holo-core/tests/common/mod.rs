//! Shared test fixtures: random outerplanar matchgates with exact
//! rational weights, and the composition-oracle instances that feed the
//! collapse pipelines with ground-truth realizations.

use holo_core::basis::Basis;
use holo_core::collapse::CollapseInstance;
use holo_core::holant::Wire;
use holo_core::matchgate::Matchgate;
use holo_core::matrix::Matrix;
use holo_core::scalar::Scalar;
use holo_core::signature::{Role, Signature};
use holo_core::PlanarGraph;
use rand::Rng;

pub fn rational(rng: &mut impl Rng, allow_zero: bool) -> Scalar {
    loop {
        let num = rng.random_range(-4i64..=4);
        if num == 0 && !allow_zero {
            continue;
        }
        let den = rng.random_range(1i64..=3);
        return Scalar::from_ratio(num, den);
    }
}

/// Random outerplanar gate on `boundary` convex-position vertices: the
/// full boundary cycle with random weights plus random non-crossing
/// chords. Inputs take hull vertices 0..inputs-1 (labels 1..s); outputs
/// take the next `outputs` hull vertices labeled in reverse so the
/// counterclockwise walk reads inputs 1..s then outputs l..1.
pub fn random_gate(
    rng: &mut impl Rng,
    boundary: usize,
    inputs: usize,
    outputs: usize,
) -> Matchgate {
    assert!(inputs + outputs <= boundary);
    loop {
        let mut edges: Vec<(usize, usize, Scalar)> = (0..boundary)
            .map(|i| (i, (i + 1) % boundary, rational(rng, false)))
            .collect();
        let mut chords: Vec<(usize, usize)> = Vec::new();
        for a in 0..boundary {
            for b in a + 2..boundary {
                if a == 0 && b == boundary - 1 {
                    continue;
                }
                chords.push((a, b));
            }
        }
        let keep: Vec<(usize, usize)> = chords
            .into_iter()
            .filter(|_| rng.random_range(0..10) < 3)
            .collect();
        let mut ok = true;
        for (i, &(a, b)) in keep.iter().enumerate() {
            for &(c, d) in &keep[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        for (a, b) in keep {
            edges.push((a, b, rational(rng, true)));
        }
        let graph = PlanarGraph::convex(boundary, edges, None).expect("convex layout");
        let input_nodes: Vec<usize> = (0..inputs).collect();
        let output_nodes: Vec<usize> = (0..outputs).map(|j| inputs + outputs - 1 - j).collect();
        if let Ok(gate) = Matchgate::new(graph, input_nodes, output_nodes) {
            return gate;
        }
    }
}

/// Random gate retried until a predicate on its standard signature holds.
pub fn random_gate_where(
    rng: &mut impl Rng,
    boundary: usize,
    inputs: usize,
    outputs: usize,
    pred: impl Fn(&Signature) -> bool,
) -> (Matchgate, Signature) {
    loop {
        let gate = random_gate(rng, boundary, inputs, outputs);
        let sig = gate.standard_signature().expect("signature");
        if pred(&sig) {
            return (gate, sig);
        }
    }
}

pub fn random_invertible(rng: &mut impl Rng, k: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(k, k, |_, _| Scalar::from_int(rng.random_range(-3i64..=3)));
        if m.rank() == k {
            return m;
        }
    }
}

/// Composition-oracle instance for the domain-2 pipeline: the basis is
/// M = T0 M0 with T0 a gate-realized transducer signature (l outputs,
/// 1 input) of rank 2 and M0 an invertible 2x2 matrix; the driver
/// generator and the recognizer are gate-realized too, so every claimed
/// standard signature genuinely is one.
pub fn domain2_instance(rng: &mut impl Rng, l: usize, n: usize) -> CollapseInstance {
    let tb = l + 1 + rng.random_range(0..2usize);
    let (_, t0_sig) = random_gate_where(rng, tb, 1, l, |sig| {
        sig.transducer_matrix().map(|m| m.rank() == 2).unwrap_or(false)
    });
    let t0 = t0_sig.transducer_matrix().unwrap();
    let m0 = random_invertible(rng, 2);
    let basis = Basis::new(l, 2, t0.mul(&m0)).expect("basis shape");

    let extra = rng.random_range(0..2usize).max(if n < 3 { 1 } else { 0 });
    let (_, under_g0) = random_gate_where(rng, n + extra, 0, n, |sig| {
        sig.full_rank_slot().is_some()
    });
    let m0_inv = m0.inverse().unwrap();
    let g_entries = m0_inv.kronecker_power(n).mul_vec(under_g0.entries());
    let g = Signature::new(2, n, Role::Generator, g_entries).unwrap();
    let under_g = basis.generator_to_standard(&g).expect("transform");

    let rb = n * l + rng.random_range(0..2usize);
    let (_, under_r) = random_gate_where(rng, rb, n * l, 0, |sig| !sig.is_zero());
    let r = basis.recognizer_from_standard(&under_r).expect("transform");

    let wiring = (1..=n)
        .map(|slot| Wire { generator: 0, generator_slot: slot, recognizer: 0, recognizer_slot: slot })
        .collect();
    CollapseInstance {
        basis,
        generators: vec![(g, under_g)],
        recognizers: vec![(r, under_r)],
        wiring: Some(wiring),
    }
}

/// Composition-oracle instance for the domain-4 pipeline (l = 3, n = 2):
/// M = T0 M0 with T0 a gate-realized 3-output 2-input transducer of rank
/// 4 and M0 invertible 4x4.
pub fn domain4_instance(rng: &mut impl Rng) -> CollapseInstance {
    let tb = 5 + rng.random_range(0..2usize);
    let (_, t0_sig) = random_gate_where(rng, tb, 2, 3, |sig| {
        sig.transducer_matrix().map(|m| m.rank() == 4).unwrap_or(false)
    });
    let t0 = t0_sig.transducer_matrix().unwrap();
    let m0 = random_invertible(rng, 4);
    let basis = Basis::new(3, 4, t0.mul(&m0)).expect("basis shape");

    // driver: an arity-4 gate whose 2-bit block form has rank 4
    let gb = 4 + rng.random_range(0..2usize);
    let (_, under_g0) = random_gate_where(rng, gb, 0, 4, |sig| {
        (1..=2).any(|t| {
            sig.block_matrix_form(t, 2).map(|m| m.rank() == 4).unwrap_or(false)
        })
    });
    let m0_inv = m0.inverse().unwrap();
    let g_entries = m0_inv.kronecker_power(2).mul_vec(under_g0.entries());
    let g = Signature::new(4, 2, Role::Generator, g_entries).unwrap();
    let under_g = basis.generator_to_standard(&g).expect("transform");

    let rb = 6 + rng.random_range(0..2usize);
    let (_, under_r) = random_gate_where(rng, rb, 6, 0, |sig| !sig.is_zero());
    let r = basis.recognizer_from_standard(&under_r).expect("transform");

    let wiring = vec![
        Wire { generator: 0, generator_slot: 1, recognizer: 0, recognizer_slot: 1 },
        Wire { generator: 0, generator_slot: 2, recognizer: 0, recognizer_slot: 2 },
    ];
    CollapseInstance {
        basis,
        generators: vec![(g, under_g)],
        recognizers: vec![(r, under_r)],
        wiring: Some(wiring),
    }
}
