#!/usr/bin/env python3
"""Regenerate the CSV data behind the standard plots.

Writes into --outdir (default ./data):
  chsh_sweep.csv     analytic vs numeric CHSH maxima for both box families
  entpower_sweep.csv entangling power of the coherent family
  tradeoff.csv       nonlocality vs entangling power curve
"""

import argparse
import pathlib

from nsbox.cli import run


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="data")
    parser.add_argument("--steps", type=int, default=21)
    parser.add_argument("--nodes", type=int, default=64)
    args = parser.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    steps = str(args.steps)
    nodes = str(args.nodes)

    jobs = [
        ["chsh-sweep", "--steps", steps, "--out", str(outdir / "chsh_sweep.csv")],
        ["entpower-sweep", "--steps", steps, "--nodes", nodes, "--out", str(outdir / "entpower_sweep.csv")],
        ["tradeoff", "--steps", steps, "--nodes", nodes, "--out", str(outdir / "tradeoff.csv")],
    ]
    for job in jobs:
        code = run(job)
        if code != 0:
            raise SystemExit(code)
        print("wrote", job[-1])


if __name__ == "__main__":
    main()
