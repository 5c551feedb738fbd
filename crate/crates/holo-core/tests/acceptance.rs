//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured evidence. All quantities are exact; the stated
//! wall-clock budgets are asserted where the criterion carries one.
//!
//! Criterion 9 is split in two: the count equalities (which hold exactly)
//! and the transformed-family realizability clause. The second is
//! asserted faithfully as stated and fails by proof: the transformed
//! counted-once vertex constraint violates the Matchgate Identities in
//! every bit layout (see the doppler module and the maintainers' notes),
//! while the relaxed sum-of-shifts tensor passes. The failing assertion
//! carries the witness.

mod common;

use std::time::Instant;

use holo_core::basis::Basis;
use holo_core::collapse::{
    collapse_domain2, collapse_domain4, classify_domain3, CollapseOptions, Domain3Classification,
};
use holo_core::doppler;
use holo_core::holant::{holant_contract, holant_via_perfmatch, Matchgrid, Wire};
use holo_core::matrix::Matrix;
use holo_core::scalar::Scalar;
use holo_core::signature::{Role, Signature};
use holo_core::{Pattern, PlanarGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational(rng: &mut impl Rng) -> Scalar {
    Scalar::from_ratio(rng.random_range(-5i64..=5), rng.random_range(1i64..=3))
}

fn gaussian_rational(rng: &mut impl Rng) -> Scalar {
    &rational(rng) + &(&rational(rng) * &Scalar::i())
}

fn cycle_graph(n: usize) -> PlanarGraph {
    if n == 2 {
        // the 2-cycle is a pair of parallel edges
        return PlanarGraph::new(
            2,
            vec![(0, 1, Scalar::one()), (0, 1, Scalar::one())],
            vec![vec![0, 1], vec![1, 0]],
            None,
        )
        .unwrap();
    }
    PlanarGraph::convex(n, (0..n).map(|i| (i, (i + 1) % n, Scalar::one())).collect(), None).unwrap()
}

fn wheel_graph(rim: usize) -> PlanarGraph {
    let mut edges = Vec::new();
    for i in 1..=rim {
        edges.push((0, i, Scalar::one())); // spoke i-1
    }
    for i in 1..=rim {
        let j = if i == rim { 1 } else { i + 1 };
        edges.push((i, j, Scalar::one())); // rim edge rim + i-1
    }
    let mut rot = vec![(0..rim).collect::<Vec<_>>()];
    for i in 1..=rim {
        let spoke = i - 1;
        let next_rim = rim + (i - 1);
        let prev_rim = rim + (if i == 1 { rim } else { i - 1 } - 1);
        rot.push(vec![spoke, prev_rim, next_rim]);
    }
    PlanarGraph::new(rim + 1, edges, rot, None).unwrap()
}

fn grid_graph(rows: usize, cols: usize) -> PlanarGraph {
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1), Scalar::one()));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c), Scalar::one()));
            }
        }
    }
    let coords: Vec<(f64, f64)> = (0..rows * cols)
        .map(|v| ((v % cols) as f64, -((v / cols) as f64)))
        .collect();
    doppler::embed_by_coordinates(rows * cols, edges, &coords)
}

fn random_outerplanar(rng: &mut impl Rng, n: usize) -> PlanarGraph {
    loop {
        let mut edges: Vec<(usize, usize, Scalar)> =
            (0..n).map(|i| (i, (i + 1) % n, rational(rng))).collect();
        let mut chords: Vec<(usize, usize)> = Vec::new();
        for a in 0..n {
            for b in a + 2..n {
                if a == 0 && b == n - 1 {
                    continue;
                }
                chords.push((a, b));
            }
        }
        let keep: Vec<(usize, usize)> =
            chords.into_iter().filter(|_| rng.random_range(0..10) < 2).collect();
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
            edges.push((a, b, rational(rng)));
        }
        if edges.len() > 24 {
            continue;
        }
        return PlanarGraph::convex(n, edges, None).unwrap();
    }
}

#[test]
fn acceptance_01_fkt_matches_bruteforce() {
    let start = Instant::now();
    let mut corpus: Vec<PlanarGraph> = Vec::new();
    for n in 2..=12 {
        corpus.push(cycle_graph(n));
    }
    for rim in 3..=9 {
        corpus.push(wheel_graph(rim));
    }
    for (r, c) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4)] {
        corpus.push(grid_graph(r, c));
    }
    for m in 2..=5 {
        // parallel-edge bundles
        let edges = (0..m).map(|_| (0, 1, Scalar::one())).collect();
        let rot = vec![(0..m).collect::<Vec<_>>(), (0..m).rev().collect()];
        corpus.push(PlanarGraph::new(2, edges, rot, None).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    while corpus.len() < 205 {
        let n = rng.random_range(4..=12);
        corpus.push(random_outerplanar(&mut rng, n));
    }
    for (i, g) in corpus.iter().enumerate() {
        let fast = g.perfmatch().unwrap_or_else(|e| panic!("graph {i}: {e}"));
        let brute = g.perfmatch_bruteforce().unwrap();
        assert_eq!(fast, brute, "graph {i}: FKT {fast} vs brute force {brute}");
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "criterion 1 runtime {secs:.1}s exceeds 60s");
    println!(
        "acceptance 1: PASS - perfmatch = brute force on {} connected planar multigraphs ({secs:.1}s)",
        corpus.len()
    );
}

#[test]
fn acceptance_02_pfaffian_squared_is_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut checked = 0;
    for trial in 0..100 {
        let n = rng.random_range(1..=5) * 2;
        let n = if trial % 4 == 0 { n.min(9).max(3) - 1 } else { n }; // mix in odd sizes
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = gaussian_rational(&mut rng);
                *m.at_mut(i, j) = v.clone();
                *m.at_mut(j, i) = -&v;
            }
        }
        let pf = m.pfaffian().unwrap();
        let det = m.determinant().unwrap();
        assert_eq!(&pf * &pf, det, "Pf^2 = det failed at trial {trial} (n = {n})");
        checked += 1;
    }
    println!("acceptance 2: PASS - Pf(A)^2 = det(A) on {checked} random skew matrices up to 10x10");
}

#[test]
fn acceptance_03_theorem2_forward_and_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut survivors = Vec::new();
    let mut gates = 0;
    let mut rejected = 0;
    let mut perturbed = 0;
    while gates < 100 {
        let arity = rng.random_range(4..=6); // MGI-bearing arities
        let boundary = arity + rng.random_range(0..=(8 - arity).min(2));
        let inputs = rng.random_range(0..=arity);
        let gate = common::random_gate(&mut rng, boundary, inputs, arity - inputs);
        assert!(gate.graph().vertex_count() <= 8);
        let sig = gate.standard_signature().unwrap();
        assert!(
            sig.is_standard_signature().unwrap(),
            "gate signature must pass parity + MGI (Theorem 2 forward)"
        );
        gates += 1;
        // single-entry perturbation of a nonzero support entry
        let nonzero: Vec<usize> =
            (0..sig.entries().len()).filter(|&i| !sig.flat(i).is_zero()).collect();
        if nonzero.is_empty() {
            continue;
        }
        perturbed += 1;
        let idx = nonzero[rng.random_range(0..nonzero.len())];
        let mut entries = sig.entries().to_vec();
        let delta = rational(&mut rng);
        let delta = if delta.is_zero() { Scalar::one() } else { delta };
        entries[idx] = &entries[idx] + &delta;
        let tampered = Signature::new(2, sig.arity(), sig.role(), entries).unwrap();
        if tampered.is_standard_signature().unwrap() {
            // exhaustive re-check: mgi_check enumerates every (alpha, P)
            let recheck = tampered.mgi_check().unwrap().is_pass();
            survivors.push((gates, idx, recheck));
        } else {
            rejected += 1;
        }
    }
    assert!(
        rejected >= 95,
        "perturbation rejections {rejected}/{perturbed}; survivors: {survivors:?}"
    );
    println!(
        "acceptance 3: PASS - {gates} random matchgate signatures verified; perturbations rejected {rejected}/{perturbed} (survivors re-checked: {survivors:?})"
    );
}

#[test]
fn acceptance_04_lemma54_equivalence_exhaustive() {
    let start = Instant::now();
    let even_positions = [0b0000, 0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100, 0b1111];
    let odd_positions = [0b1000, 0b0100, 0b0010, 0b0001, 0b0111, 0b1011, 0b1101, 0b1110];
    let mut checked = 0u64;
    for positions in [even_positions, odd_positions] {
        let mut digits = [0u8; 8];
        loop {
            let mut entries = vec![Scalar::zero(); 16];
            for (slot, &pos) in positions.iter().enumerate() {
                entries[pos] = Scalar::from_int(digits[slot] as i64);
            }
            let sig = Signature::new(2, 4, Role::Generator, entries).unwrap();
            let full = sig.is_standard_signature().unwrap();
            let shortcut = sig.arity4_standard_check().unwrap();
            assert_eq!(full, shortcut, "discrepancy at {digits:?} over {positions:?}");
            checked += 1;
            let mut pos = 8;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < 3 {
                    break;
                }
                digits[pos] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert_eq!(checked, 2 * 6561);
    assert!(secs < 30.0, "criterion 4 runtime {secs:.1}s exceeds 30s");
    println!(
        "acceptance 4: PASS - is_standard_signature == arity4_standard_check on {checked} vectors ({secs:.1}s)"
    );
}

#[test]
fn acceptance_05_holant_theorem_on_random_matchgrids() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut grids = 0;
    while grids < 50 {
        let family = rng.random_range(0..4);
        let grid = match family {
            0 => {
                let f = rng.random_range(2..=5);
                let gb = f + rng.random_range(0..2usize);
                let rb = f + rng.random_range(0..2usize);
                let g = common::random_gate(&mut rng, gb, 0, f);
                let r = common::random_gate(&mut rng, rb, f, 0);
                Matchgrid::new(
                    vec![g],
                    vec![r],
                    (1..=f).map(|j| (0, j, 0, j)).collect(),
                )
            }
            1 => {
                let a = rng.random_range(1..=3);
                let b = rng.random_range(1..=3);
                let g1 = common::random_gate(&mut rng, (a + 1).max(2), 0, a);
                let g2 = common::random_gate(&mut rng, (b + 1).max(2), 0, b);
                let r = common::random_gate(&mut rng, a + b + 1, a + b, 0);
                let mut connectors = Vec::new();
                for j in 1..=a {
                    connectors.push((0, j, 0, j));
                }
                for j in 1..=b {
                    connectors.push((1, j, 0, a + j));
                }
                Matchgrid::new(vec![g1, g2], vec![r], connectors)
            }
            2 => {
                let a = rng.random_range(1..=3);
                let b = rng.random_range(1..=3);
                let g = common::random_gate(&mut rng, a + b + 1, 0, a + b);
                let r1 = common::random_gate(&mut rng, (a + 1).max(2), a, 0);
                let r2 = common::random_gate(&mut rng, (b + 1).max(2), b, 0);
                let mut connectors = Vec::new();
                for j in 1..=a {
                    connectors.push((0, j, 0, j));
                }
                for j in 1..=b {
                    connectors.push((0, a + j, 1, j));
                }
                Matchgrid::new(vec![g], vec![r1, r2], connectors)
            }
            _ => {
                // two disjoint zipped pairs
                let f1 = rng.random_range(1..=3);
                let f2 = rng.random_range(1..=3);
                let g1 = common::random_gate(&mut rng, (f1 + 1).max(2), 0, f1);
                let g2 = common::random_gate(&mut rng, (f2 + 1).max(2), 0, f2);
                let r1 = common::random_gate(&mut rng, (f1 + 1).max(2), f1, 0);
                let r2 = common::random_gate(&mut rng, (f2 + 1).max(2), f2, 0);
                let mut connectors = Vec::new();
                for j in 1..=f1 {
                    connectors.push((0, j, 0, j));
                }
                for j in 1..=f2 {
                    connectors.push((1, j, 1, j));
                }
                Matchgrid::new(vec![g1, g2], vec![r1, r2], connectors)
            }
        }
        .expect("valid wiring");
        let (gens, recs) = grid.standard_signatures().unwrap();
        let wires = grid.wires().unwrap();
        assert!(wires.len() <= 10);
        let by_contract = holant_contract(&gens, &recs, &wires, 16).unwrap();
        let by_perfmatch = holant_via_perfmatch(&grid).unwrap();
        assert_eq!(by_contract, by_perfmatch, "Holant theorem violated on grid {grids}");
        grids += 1;
    }
    println!("acceptance 5: PASS - Holant contraction = PerfMatch on {grids} random matchgrids");
}

#[test]
fn acceptance_06_domain2_collapse() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut runs = 0;
    for &(l, n) in &[(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
        for _ in 0..5 {
            let inst = common::domain2_instance(&mut rng, l, n);
            let res = collapse_domain2(&inst, CollapseOptions::default())
                .unwrap_or_else(|e| panic!("l={l} n={n}: {e}"));
            let cert = res.certificate.expect("nontrivial instance");
            assert_eq!((cert.d, cert.d_prime), (1, 1));
            assert_eq!(res.sub_basis.rank(), 2);
            // T restricted to the certificate rows is the identity
            for (i, p) in [cert.sigma, cert.tau].iter().enumerate() {
                for j in 0..2 {
                    let expect = if i == j { Scalar::one() } else { Scalar::zero() };
                    assert_eq!(*res.transducer.at(p.index(), j), expect);
                }
            }
            for sig in res.generators.iter().chain(res.recognizers.iter()) {
                assert!(sig.is_standard_signature().unwrap());
            }
            assert!(res.report.iter().any(|c| c.name == "holant-invariance" && c.pass));
            runs += 1;
        }
    }
    println!("acceptance 6: PASS - domain-2 collapse verified on {runs} composition-oracle instances (l in 2..3, n in 2..3)");
}

#[test]
fn acceptance_07_domain4_collapse() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut runs = 0;
    while runs < 10 {
        let inst = common::domain4_instance(&mut rng);
        let res = collapse_domain4(&inst, CollapseOptions::default())
            .unwrap_or_else(|e| panic!("run {runs}: {e}"));
        let cert = res.certificate.expect("nontrivial instance");
        assert_eq!((cert.d, cert.d_prime), (2, 2));
        assert_eq!(res.sub_basis.rank(), 4);
        assert!(res.report.iter().any(|c| c.name.contains("sub-basis rank-4") && c.pass));
        assert!(res.report.iter().any(|c| c.name.contains("gplemma4") && c.pass));
        for sig in res.generators.iter().chain(res.recognizers.iter()) {
            assert!(sig.is_standard_signature().unwrap());
        }
        assert!(res.report.iter().any(|c| c.name == "holant-invariance" && c.pass));
        runs += 1;
    }
    println!("acceptance 7: PASS - domain-4 collapse verified on {runs} composition-oracle instances (l = 3, n = 2)");
}

#[test]
fn acceptance_08_domain3_impossibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut runs = 0;
    while runs < 20 {
        let m = Matrix::from_fn(4, 3, |_, _| Scalar::from_int(rng.random_range(-3i64..=3)));
        if m.rank() != 3 {
            continue;
        }
        let basis = Basis::new(2, 3, m).unwrap();
        let g1 = common::random_invertible(&mut rng, 3);
        let gen = Signature::from_fn(3, 2, Role::Generator, |d| g1.at(d[0], d[1]).clone());
        assert!(gen.full_rank_slot().is_some());
        let under = basis.generator_to_standard(&gen).unwrap();
        assert!(
            !under.is_standard_signature().unwrap(),
            "Corollary rank3: M^(ox n) G must fail the verifier"
        );
        match classify_domain3(&basis, &[gen]).unwrap() {
            Domain3Classification::FullRankImpossible { witness } => {
                assert!(!witness.is_empty());
            }
            other => panic!("expected FullRankImpossible, got {other:?}"),
        }
        runs += 1;
    }
    println!("acceptance 8: PASS - domain-3 full-rank transforms rejected on {runs} random rank-3 bases");
}

#[test]
fn acceptance_09a_doppler_counts() {
    let start = Instant::now();
    let cases = [
        ("K4", doppler::k4(), 1490u64),
        ("triangular prism", doppler::triangular_prism(), 54134),
        ("cube", doppler::cube_graph(), 1971394),
    ];
    for (name, graph, frozen) in &cases {
        let brute = doppler::doppler_bruteforce(graph).unwrap();
        let ie = doppler::doppler_inclusion_exclusion(graph).unwrap();
        assert_eq!(brute, *frozen, "{name}: enumeration");
        assert_eq!(ie, *frozen, "{name}: inclusion-exclusion cross-check");
        let holo = doppler::doppler_holographic(graph).unwrap();
        assert_eq!(holo.count, *frozen, "{name}: holographic contraction");
        assert!(holo.edge_family.standard, "{name}: edge family must pass in boundary layout");
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 300.0, "criterion 9 runtime {secs:.1}s exceeds 5 minutes");
    println!(
        "acceptance 9a: PASS - holographic = brute force = inclusion-exclusion on K4/prism/cube ({secs:.1}s)"
    );
}

#[test]
fn acceptance_09b_doppler_realizability_claim() {
    // Criterion 9's remaining clause, asserted faithfully as stated:
    // "both transformed tensor families pass the MGI verifier". The edge
    // family does (boundary layout). The vertex family provably cannot:
    // the counted-once constraint tensor violates the MGI in every bit
    // layout (exhaustively checked over all 720 orderings and 64 pendant
    // shifts during development, and cross-checked by an independent
    // sub-Pfaffian oracle), while the sum-of-shifts relaxation passes.
    // This assertion is therefore expected to fail; the witness below is
    // the mechanized refutation of the appendix realizability claim for
    // the counted-once semantics.
    let out = doppler::doppler_holographic(&doppler::k4()).unwrap();
    assert!(out.edge_family.standard, "edge family: {:?}", out.edge_family);
    println!(
        "acceptance 9b: {} - transformed vertex family verdict: {:?}",
        if out.vertex_family.standard { "PASS" } else { "FAIL (expected: spec defect, see notes)" },
        out.vertex_family
    );
    assert!(
        out.vertex_family.standard,
        "criterion 9 realizability clause: the transformed counted-once vertex tensor is not a \
         standard signature; witness: {}",
        out.vertex_family.witness.as_deref().unwrap_or("none")
    );
}

#[test]
fn holant_basis_invariance_under_invertible_change() {
    // transforming generators by N^{ox} and recognizers by (N^{-1})^{ox}
    // on paired wires leaves the contraction unchanged
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10 {
        let f = rng.random_range(1..=3);
        let g = common::random_gate(&mut rng, (f + 1).max(2), 0, f);
        let r = common::random_gate(&mut rng, (f + 1).max(2), f, 0);
        let gs = g.standard_signature().unwrap();
        let rs = r.standard_signature().unwrap();
        let wires: Vec<Wire> = (1..=f)
            .map(|j| Wire { generator: 0, generator_slot: j, recognizer: 0, recognizer_slot: j })
            .collect();
        let before = holant_contract(&[gs.clone()], &[rs.clone()], &wires, 16).unwrap();
        let n = common::random_invertible(&mut rng, 2);
        let n_basis = Basis::new(1, 2, n.clone()).unwrap();
        let n_inv_basis = Basis::new(1, 2, n.inverse().unwrap().transpose()).unwrap();
        let g2 = n_basis.generator_to_standard(&gs.clone().with_role(Role::Generator)).unwrap();
        // recognizer slots transform contravariantly: R' = R (N^{-1})^{ox}
        let r2_entries = n_inv_basis
            .matrix()
            .kronecker_power(f)
            .mul_vec(rs.entries());
        let r2 = Signature::new(2, f, Role::Recognizer, r2_entries).unwrap();
        let after = holant_contract(&[g2], &[r2], &wires, 16).unwrap();
        assert_eq!(before, after);
    }
    println!("holant basis invariance: PASS");
}

#[test]
fn standard_signature_parity_matches_vertex_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    for _ in 0..25 {
        let arity = rng.random_range(1..=5);
        let boundary = arity + rng.random_range(0..2usize).max(if arity < 3 { 1 } else { 0 });
        let gate = common::random_gate(&mut rng, boundary, 0, arity);
        let sig = gate.standard_signature().unwrap();
        if sig.is_zero() {
            continue;
        }
        let even_gate = gate.is_even();
        match sig.parity_check().unwrap() {
            holo_core::signature::ParityClass::EvenMatchgate => assert!(even_gate),
            holo_core::signature::ParityClass::OddMatchgate => assert!(!even_gate),
            v => panic!("gate signature violates parity: {v:?}"),
        }
    }
    println!("gate parity matches vertex-count parity: PASS");
}

#[test]
fn lemma22_small_position_vectors_vanish() {
    // for parity-respecting vectors, Eq.(1) is identically zero for odd
    // wt(p) and for wt(p) = 2, standard signature or not
    let mut rng = ChaCha8Rng::seed_from_u64(1313);
    for _ in 0..20 {
        let n = rng.random_range(4..=6);
        let parity = rng.random_range(0..2u32);
        let entries: Vec<Scalar> = (0..(1usize << n))
            .map(|i| {
                if Pattern::from_index(n, i).wt() % 2 == parity {
                    rational(&mut rng)
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        let sig = Signature::new(2, n, Role::Generator, entries).unwrap();
        for p_idx in 0..(1usize << n) {
            let p = Pattern::from_index(n, p_idx);
            let w = p.wt();
            if !(w % 2 == 1 || w == 2) {
                continue;
            }
            for a_idx in 0..(1usize << n) {
                let alpha = Pattern::from_index(n, a_idx);
                assert!(sig.mgi_residual(&alpha, &p).is_zero());
            }
        }
    }
    println!("Lemma 2.2 small position vectors vanish: PASS");
}
