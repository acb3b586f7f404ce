#!/usr/bin/env python3
"""Survey random two-qubit unitaries: classify their form, check the
causality of the induced conjugation channel, and show one signalling
witness in detail."""

import argparse
import collections

import numpy as np

from nsbox import causality as cz
from nsbox import channels as qc
from nsbox import linalg as la


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    counts = collections.Counter()
    mismatches = 0
    for i in range(args.samples):
        if i % 4 == 0:
            u = np.kron(la.haar_unitary(2, rng), la.haar_unitary(2, rng))
        else:
            u = la.haar_unitary(4, rng)
        form = cz.unitary_form(u, 2, 2)
        counts[form.kind] += 1
        bch = qc.BipartiteChannel(qc.unitary_channel(u), 2, 2, 2, 2)
        causal = cz.is_causal(bch).causal
        if causal != (form.kind == "product"):
            mismatches += 1

    print(f"samples: {args.samples} (seed {args.seed})")
    for kind, n in sorted(counts.items()):
        print(f"  {kind:>13}: {n}")
    print(f"  classification/causality mismatches: {mismatches}")

    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    bch = qc.BipartiteChannel(qc.unitary_channel(cnot), 2, 2, 2, 2)
    w = cz.signalling_witness(bch, cz.A_TO_B)
    print("\nwitness for the controlled-NOT conjugation (A -> B):")
    print(f"  input_a = {np.round(w.input_a, 6)}")
    print(f"  input_b = {np.round(w.input_b, 6)}")
    print(f"  receiver trace-norm distinguishability = {w.distinguishability:.12f}")


if __name__ == "__main__":
    main()
