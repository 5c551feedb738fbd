#!/usr/bin/env python3
"""Smoke test for the holomatch extension module.

Build and stage the module first:

    cargo build --release -p holo-py
    cp target/release/libholomatch.so python/holomatch.so

then run `python3 python/smoke_test.py` from the repository root.
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import holomatch as hm  # noqa: E402

FIXTURES = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "crates", "holo-cli", "tests", "fixtures",
)


def check(label, ok):
    print(f"  {label}: {'ok' if ok else 'FAIL'}")
    if not ok:
        raise SystemExit(f"smoke test failed at: {label}")


def main():
    print("scalar arithmetic")
    a = hm.Scalar("1/2+3*i")
    b = hm.Scalar("-2+1/5*i")
    check("exact product", str(a * b) == "-8/5-59/10*i")
    check("division round trip", (a * b) / b == a)

    print("matrix kernel")
    m = hm.Matrix([["0", "2", "-3", "1"],
                   ["-2", "0", "5", "7"],
                   ["3", "-5", "0", "-1/2"],
                   ["-1", "-7", "1/2", "0"]])
    pf = m.pfaffian()
    det = m.determinant()
    check("Pf(A)^2 = det(A)", pf * pf == det)
    h = hm.Matrix([["1", "1"], ["1", "-1"]])
    check("kronecker power shape", h.kronecker_power(3).rows == 8)
    check("inverse", h.mul(h.inverse()) == hm.Matrix.identity(2))

    print("signatures and the verifier")
    good = hm.Signature(2, 2, "generator", ["7", "0", "0", "1"])
    check("single-edge gate signature is standard", good.is_standard_signature())
    bad = hm.load_signature(os.path.join(FIXTURES, "lemma54_fail.sig"))
    check("arity-4 counterexample rejected", not bad.is_standard_signature())
    alpha, positions, residual = bad.mgi_failure()
    check("witness position vector", positions == [1, 2, 3, 4])
    check("witness residual", residual == "1")
    check("arity-4 shortcut agrees", not bad.arity4_standard_check())

    print("bases and transforms")
    basis = hm.load_basis(os.path.join(FIXTURES, "hadamard.basis"))
    under = basis.generator_to_standard(good)
    check("hadamard transform", under.entries() == ["8", "6", "6", "8"])
    check("(7,0,0,1) not realizable over hadamard", not basis.generator_realizable(good))
    half = hm.Signature(2, 2, "generator", ["1/2", "0", "0", "1/2"])
    check("(1/2,0,0,1/2) realizable over hadamard", basis.generator_realizable(half))

    print("planar graphs and PerfMatch")
    k4 = hm.load_graph(os.path.join(FIXTURES, "k4.graph"))
    check("K4 has 3 perfect matchings", str(k4.perfmatch()) == "3")
    check("FKT equals brute force", k4.perfmatch() == k4.perfmatch_bruteforce())

    print("matchgates")
    gate = hm.load_matchgate(os.path.join(FIXTURES, "gen.gate"))
    sig = gate.standard_signature()
    check("gate signature", sig.entries() == ["3", "0", "0", "1"])

    print("holant")
    contract, perfmatch = hm.holant(os.path.join(FIXTURES, "square.grid"))
    check("Holant Theorem", contract == perfmatch == "16")

    print("doppler shift")
    check("K4 brute count", hm.doppler_bruteforce(os.path.join(FIXTURES, "k4.graph")) == 1490)
    holo = hm.doppler_holographic(os.path.join(FIXTURES, "k4.graph"))
    check("K4 holographic count", holo["count"] == 1490)
    check("edge family standard in boundary layout", holo["edge_family"]["standard"])
    check("vertex family verdict reported", isinstance(holo["vertex_family"]["standard"], bool))

    print("collapse pipeline")
    report = hm.collapse(os.path.join(FIXTURES, "collapse2", "demo.manifest"), 2)
    check("all checks pass", all(ok for (_, ok, _) in report))
    check("holant invariance line present", any(name == "holant-invariance" for (name, _, _) in report))

    print("smoke test passed")


if __name__ == "__main__":
    main()
