"""Command-line surface: causality checks, threshold and sweep computations,
box tables and protocol demos.

Exit codes: 0 success, 1 domain error (malformed input, non-PSD Choi,
failed precondition), 2 usage error.  All randomized commands take a seed
(default 0) that is echoed in the output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import boxes, causality, channels, chsh, entpower, vandam


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_bipartite(path: str) -> channels.BipartiteChannel:
    with open(path) as fh:
        doc = json.load(fh)
    ch = channels.channel_from_json_dict(doc)
    if not isinstance(ch, channels.BipartiteChannel):
        raise ValueError("channel document needs factor_in/factor_out for bipartite analysis")
    return ch


def _cmd_check(args) -> int:
    bch = _load_bipartite(args.channel)
    verdict = causality.is_causal(bch, args.tol)
    doc = verdict.to_json_dict()
    if not verdict.causal:
        direction = causality.A_TO_B if not verdict.semicausal_a_to_b else causality.B_TO_A
        witness = causality.signalling_witness(bch, direction, args.tol)
        doc["witness"] = witness.to_json_dict()
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _cmd_reduce(args) -> int:
    bch = _load_bipartite(args.channel)
    red = causality.reduced_map(bch, args.side, args.tol)
    _write(json.dumps(channels.channel_to_json_dict(red), indent=2) + "\n", args.out)
    return 0


def _cmd_semilocalize(args) -> int:
    bch = _load_bipartite(args.channel)
    sl = causality.semilocalize(bch, args.tol)
    doc = {
        "reconstruction_error": sl.reconstruction_error,
        "d_e": sl.d_e,
        "d_c": sl.d_c,
        "d_b_in": bch.db_in,
        "d_b_out": bch.db_out,
        "d_a": bch.da_in,
    }
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _cmd_spa(args) -> int:
    lm = channels.positive_map(args.map, args.d)
    doc = {
        "map": args.map,
        "d_in": lm.d_in,
        "p_max": channels.max_cp_mixing(lm),
        "choi_min_eigenvalue": float(np.linalg.eigvalsh(lm.matrix)[0]),
    }
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _cmd_box(args) -> int:
    if args.measure:
        box = boxes.measure_box(boxes.lambda_k(args.k))
    else:
        box = boxes.pr_extreme(args.k)
    _write(boxes.box_to_csv(box), args.out)
    return 0


def _cmd_chsh_sweep(args) -> int:
    rows = chsh.sweep(np.linspace(0.0, 1.0, args.steps))
    lines = ["alpha,I_coherent_analytic,I_coherent_numeric,I_incoherent_analytic,I_incoherent_numeric"]
    for r in rows:
        lines.append(
            ",".join(
                _fmt(r[k])
                for k in (
                    "alpha",
                    "I_coherent_analytic",
                    "I_coherent_numeric",
                    "I_incoherent_analytic",
                    "I_incoherent_numeric",
                )
            )
        )
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_entpower_sweep(args) -> int:
    lines = ["alpha,e_pow,err_estimate"]
    for alpha in np.linspace(0.0, 1.0, args.steps):
        value, err = entpower.e_pow_quadrature(float(alpha), args.nodes)
        lines.append(f"{_fmt(float(alpha))},{_fmt(value)},{_fmt(err)}")
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_tradeoff(args) -> int:
    points = entpower.tradeoff_curve(np.linspace(0.0, 1.0, args.steps), args.nodes)
    lines = ["alpha,i_m,e_pow,err_estimate"]
    for p in points:
        lines.append(
            f"{_fmt(p.alpha)},{_fmt(p.i_m)},{_fmt(p.e_pow)},{_fmt(p.quadrature_error_estimate)}"
        )
    _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_vandam(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.fn == "ip":
        f = vandam.BooleanFunction.inner_product(args.n)
        name = "inner_product"
    else:
        f = vandam.BooleanFunction.random(args.n, args.n, rng)
        name = "random"
    boxes_used = len(vandam.gf2_decompose(f))
    errors = 0
    bits = set()
    trials = 0
    for _ in range(args.trials):
        x = int(rng.integers(0, 1 << args.n))
        y = int(rng.integers(0, 1 << args.n))
        result, transcript = vandam.general_protocol(f, x, y, rng)
        errors += int(result != f.value(x, y))
        bits.add(transcript.bits_sent)
        trials += 1
    doc = {
        "f": name,
        "n": args.n,
        "boxes_used": boxes_used,
        "bits_sent": bits.pop() if len(bits) == 1 else sorted(bits),
        "trials": trials,
        "errors": errors,
        "seed": args.seed,
    }
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nsbox",
        description="Causality analysis for bipartite quantum channels and non-signalling boxes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="causality verdict (plus witness if signalling)")
    p.add_argument("--channel", required=True, help="channel JSON document")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("reduce", help="reduced single-party channel of a semicausal map")
    p.add_argument("--channel", required=True)
    p.add_argument("--side", choices=["A", "B"], required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("semilocalize", help="one-way realization of an A-/->B semicausal map")
    p.add_argument("--channel", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_semilocalize)

    p = sub.add_parser("spa", help="structural mixing threshold of a positive map")
    p.add_argument("--map", choices=["transpose", "reflection", "pauli_xi"], required=True)
    p.add_argument("--d", type=int, default=None, help="total dimension (transpose/reflection)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_spa)

    p = sub.add_parser("box", help="extremal classical box CSV (or measured quantum box)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--measure", action="store_true", help="measure the quantum box instead")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_box)

    p = sub.add_parser("chsh-sweep", help="analytic vs numeric CHSH maxima over alpha")
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_chsh_sweep)

    p = sub.add_parser("entpower-sweep", help="entangling power over alpha")
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_entpower_sweep)

    p = sub.add_parser("tradeoff", help="nonlocality vs entangling power curve")
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_tradeoff)

    p = sub.add_parser("vandam", help="PR-box protocol demo")
    p.add_argument("--fn", choices=["ip", "rand"], default="ip")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_vandam)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
