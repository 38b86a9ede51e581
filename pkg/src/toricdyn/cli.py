"""Command-line front end (``toricdyn``)."""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import io
from .dynamics import (
    MonomialMap,
    PullbackMatrix,
    cremona_degrees,
    degree_growth_pn,
    dynamical_degrees,
    pullback_matrices_pipeline,
    pullback_matrix_closed,
    pullback_matrix_pipeline,
    random_monomial_map,
)
from .errors import InputError, InvariantFailure, ToricDynError
from .fans import common_refinement, fan_p1n, fan_pn, fan_validate, smooth
from .svg import line_plot
from .weights import DualBasisSpec, cup_at_zero, pick_generic_vector, pullback_along_morphism, verify_weight

RUNTIME_KINDS = {"GENERICITY_FAILURE", "EXHAUSTED", "INVARIANT_FAILURE"}
CHECKS = ("oracle", "weight-verify", "growth")


def _subset(alpha: Sequence[int]) -> list[int]:
    return [i + 1 for i in alpha]


def _pullback_json(m: PullbackMatrix) -> dict:
    return {"k": str(m.k), "basis": [_subset(a) for a in m.basis], "entries": io.matrix_to_json(m.entries)}


def _first_difference(a: PullbackMatrix, b: PullbackMatrix) -> str | None:
    for i, row in enumerate(a.entries):
        for j, x in enumerate(row):
            if x != b.entries[i][j]:
                return (f"k={a.k}: entry (alpha={_subset(a.basis[i])}, beta={_subset(a.basis[j])}) "
                        f"closed={x} pipeline={b.entries[i][j]}")
    return None


def _check_k(k: int, n: int) -> None:
    if not 0 <= k <= n:
        raise InputError(f"k={k} out of range 0..{n}")


# -- subcommands ----------------------------------------------------------------

def cmd_degrees(args) -> tuple[object, int]:
    f = MonomialMap(io.read_matrix(args.matrix))
    rep = dynamical_degrees(f, args.lmax)
    out = {
        "n": str(f.n),
        "moduli": list(rep.moduli),
        "lambdas": rep.lambdas,
        "entropy": rep.entropy,
        "norm_growth": {str(k): seq for k, seq in rep.norm_growth.items()},
    }
    if args.log2:
        out["entropy_log2"] = rep.entropy / math.log(2)
    if args.format == "table":
        lines = ["k  lambda_k  norm_growth[last]"]
        lines += [f"{k}  {lam:.10g}  {rep.norm_growth[k][-1]:.10g}" if rep.norm_growth else f"{k}  {lam:.10g}"
                  for k, lam in enumerate(rep.lambdas)]
        unit = "bits" if args.log2 else "nats"
        value = out["entropy_log2"] if args.log2 else rep.entropy
        lines.append(f"entropy {value:.10g} {unit}")
        return "\n".join(lines) + "\n", 0
    return out, 0


def cmd_pullback(args) -> tuple[object, int]:
    f = MonomialMap(io.read_matrix(args.matrix))
    _check_k(args.k, f.n)
    out: dict = {"k": str(args.k), "basis": None}
    closed = pipeline = None
    if args.method in ("closed", "both"):
        closed = pullback_matrix_closed(f, args.k)
        out.update(_pullback_json(closed))
        out["closed"] = out.pop("entries")
    if args.method in ("pipeline", "both"):
        pipeline = pullback_matrix_pipeline(f, args.k, seed=args.seed)
        out.update(_pullback_json(pipeline))
        out["pipeline"] = out.pop("entries")
    status = 0
    if closed and pipeline:
        diff = _first_difference(closed, pipeline)
        out["equal"] = diff is None
        if diff:
            out["mismatch"] = diff
            status = 1
    if args.format == "table":
        lines = [f"basis {' '.join(''.join(map(str, a)) for a in out['basis'])}"]
        for name in ("closed", "pipeline"):
            if name in out:
                lines.append(name)
                lines += [" ".join(row) for row in out[name]]
        if "mismatch" in out:
            lines.append(f"MISMATCH {out['mismatch']}")
        return "\n".join(lines) + "\n", status
    return out, status


def cmd_cremona(args) -> tuple[object, int]:
    if args.n < 1:
        raise InputError("n must be >= 1")
    degs = cremona_degrees(args.n, seed=args.seed)
    status = 0 if degs == [math.comb(args.n, k) for k in range(args.n + 1)] else 1
    if args.format == "json":
        return {"n": str(args.n), "degrees": [str(d) for d in degs]}, status
    return " ".join(map(str, degs)) + "\n", status


def cmd_growth(args) -> tuple[object, int]:
    f = MonomialMap(io.read_matrix(args.matrix))
    _check_k(args.k, f.n)
    fit = degree_growth_pn(f, args.k, args.lmax, seed=args.seed)
    if args.plot:
        xs = list(range(1, len(fit.values) + 1))
        svg = line_plot(xs, [math.log(v) for v in fit.values], title=f"degree growth, k={args.k}",
                        xlabel="iterate", ylabel="log deg")
        Path(args.plot).write_text(svg)
    out = {
        "k": str(fit.k),
        "values": [str(v) for v in fit.values],
        "lambda_k": fit.lambda_k,
        "exponent": fit.exponent,
        "order": str(fit.order),
        "constant": fit.constant,
        "degenerate": fit.degenerate,
    }
    if args.format == "table":
        lines = ["l  deg"] + [f"{ell}  {v}" for ell, v in enumerate(fit.values, 1)]
        lines.append(f"lambda_k {fit.lambda_k:.10g}  m {fit.exponent:.4f}  degenerate {fit.degenerate}")
        return "\n".join(lines) + "\n", 0
    return out, 0


def _target(name: str, n: int):
    if name == "p1n":
        return fan_p1n(n)
    if name == "pn":
        return fan_pn(n)
    raise InputError(f"unknown target {name!r}")


def cmd_fan(args) -> tuple[object, int]:
    if args.fan_cmd == "standard":
        return io.fan_to_json(_target(args.target, args.n)), 0
    if args.fan_cmd == "validate":
        fan = io.fan_from_json(io.read_json(args.fan))
        report = fan_validate(fan, seed=args.seed)
        out = {"ok": report.ok, "cones": str(len(fan)),
               "violations": [{"axiom": a, "witnesses": repr(w)} for a, w in report.violations]}
        return out, 0 if report.ok else 1
    psi = io.read_matrix(args.matrix)
    refined = common_refinement(_target(args.target, len(psi)), psi)
    if args.smooth:
        refined = smooth(refined)
    return io.fan_to_json(refined), 0


def cmd_weight(args) -> tuple[object, int]:
    if args.weight_cmd == "verify":
        fan = io.fan_from_json(io.read_json(args.fan))
        c = io.weight_from_json(io.read_json(args.weight), fan)
        report = verify_weight(c)
        out = {"ok": report.ok,
               "violations": [{"cone": io.matrix_to_json(t), "u": [str(x) for x in u], "sum": str(s)}
                              for t, u, s in report.violations]}
        return out, 0 if report.ok else 1
    if args.weight_cmd == "pullback":
        psi = io.read_matrix(args.matrix)
        src = io.fan_from_json(io.read_json(args.src))
        dst = io.fan_from_json(io.read_json(args.dst))
        c = io.weight_from_json(io.read_json(args.weight), dst)
        return io.weight_to_json(pullback_along_morphism(psi, src, dst, c)), 0
    fan = io.fan_from_json(io.read_json(args.fan))
    c1 = io.weight_from_json(io.read_json(args.w1), fan)
    c2 = io.weight_from_json(io.read_json(args.w2), fan)
    v = pick_generic_vector([fan], args.seed)
    return {"value": str(cup_at_zero(c1, c2, v)), "v": [str(x) for x in v.v]}, 0


# -- batch --------------------------------------------------------------------

@dataclass(frozen=True)
class BatchSpec:
    count: int
    n: int
    bound: int
    seed: int
    checks: tuple[str, ...]


def _batch_item(spec: BatchSpec, index: int) -> dict:
    rng = random.Random(spec.seed + index)
    f = random_monomial_map(rng, spec.n, spec.bound)
    result: dict = {"index": index, "matrix": io.matrix_to_json(f.psi), "failures": {}}
    try:
        if "oracle" in spec.checks:
            for m in pullback_matrices_pipeline(f, seed=spec.seed + index):
                diff = _first_difference(pullback_matrix_closed(f, m.k), m)
                if diff:
                    result["failures"]["oracle"] = diff
                    break
        if "weight-verify" in spec.checks:
            target = fan_p1n(f.n)
            refined = common_refinement(target, f.psi)
            dual = DualBasisSpec(target)
            for k in range(f.n + 1):
                for label, b in zip(dual.slice(k).labels, dual.slice(k).basis):
                    report = verify_weight(pullback_along_morphism(f.psi, refined, target, b))
                    if not report.ok:
                        cone, u, s = report.violations[0]
                        result["failures"]["weight-verify"] = (
                            f"pullback of c_{_subset(label)}: relation fails at cone "
                            f"{[list(r) for r in cone]}, u={list(u)}, sum={s}")
                        break
        if "growth" in spec.checks:
            fit = degree_growth_pn(f, 1, seed=spec.seed + index)
            band = fit.band()
            if not all(v > 0 for v in fit.values) or band > 10:
                result["failures"]["growth"] = f"values={fit.values} band={band:.3f}"
    except ToricDynError as e:
        result["failures"]["error"] = f"{e.kind}: {e}"
    return result


def _pool_size(count: int) -> int:
    env = os.environ.get("TORICDYN_THREADS")
    cap = int(env) if env and env.isdigit() and int(env) > 0 else (os.cpu_count() or 1)
    return max(1, min(cap, count))


def run_batch(spec: BatchSpec) -> dict:
    workers = _pool_size(spec.count)
    if workers == 1:
        results = [_batch_item(spec, i) for i in range(spec.count)]
    else:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_batch_item, [spec] * spec.count, range(spec.count)))
    summary = {c: {"pass": 0, "fail": 0} for c in spec.checks}
    first = None
    for r in results:
        for c in spec.checks:
            failed = c in r["failures"] or "error" in r["failures"]
            summary[c]["fail" if failed else "pass"] += 1
        if r["failures"] and first is None:
            first = r
    return {"count": str(spec.count), "n": str(spec.n), "bound": str(spec.bound), "seed": str(spec.seed),
            "checks": {c: {k: str(v) for k, v in s.items()} for c, s in summary.items()},
            "first_counterexample": first and {**first, "index": str(first["index"])}}


def cmd_batch(args) -> tuple[object, int]:
    checks = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise InputError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    if args.count < 1 or args.bound < 1 or args.n < 1:
        raise InputError("count, n and bound must be >= 1")
    report = run_batch(BatchSpec(args.count, args.n, args.bound, args.seed, checks))
    status = 1 if report["first_counterexample"] else 0
    if args.format == "table":
        lines = [f"{c}: {s['pass']}/{args.count} pass" for c, s in report["checks"].items()]
        if report["first_counterexample"]:
            lines.append("first counterexample: " + json.dumps(report["first_counterexample"]))
        return "\n".join(lines) + "\n", status
    return report, status


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default=None)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="toricdyn", description="Degrees and entropy of monomial maps.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("degrees", parents=[common], help="dynamical degrees and entropy")
    s.add_argument("--matrix", required=True)
    s.add_argument("--lmax", type=int, default=30)
    s.add_argument("--log2", action="store_true", help="also report entropy in bits")
    s.set_defaults(func=cmd_degrees)

    s = sub.add_parser("pullback", parents=[common], help="pullback matrix on (P^1)^n")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--method", choices=("closed", "pipeline", "both"), default="both")
    s.set_defaults(func=cmd_pullback)

    s = sub.add_parser("cremona", parents=[common], help="degrees of the Cremona involution on P^n")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_cremona, text_default=True)

    s = sub.add_parser("growth", parents=[common], help="degree growth on P^n")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--lmax", type=int, default=None)
    s.add_argument("--plot", help="write an SVG plot of log deg against the iterate")
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("fan", help="emit, validate or refine fans")
    fsub = s.add_subparsers(dest="fan_cmd", required=True)
    t = fsub.add_parser("standard", parents=[common])
    t.add_argument("--target", choices=("p1n", "pn"), required=True)
    t.add_argument("--n", type=int, required=True)
    t = fsub.add_parser("validate", parents=[common])
    t.add_argument("--fan", required=True)
    t = fsub.add_parser("refine", parents=[common])
    t.add_argument("--matrix", required=True)
    t.add_argument("--target", choices=("p1n", "pn"), required=True)
    t.add_argument("--smooth", action="store_true")
    s.set_defaults(func=cmd_fan)

    s = sub.add_parser("weight", help="Minkowski weight operations")
    wsub = s.add_subparsers(dest="weight_cmd", required=True)
    t = wsub.add_parser("verify", parents=[common])
    t.add_argument("--fan", required=True)
    t.add_argument("--weight", required=True)
    t = wsub.add_parser("pullback", parents=[common])
    t.add_argument("--matrix", required=True)
    t.add_argument("--src", required=True)
    t.add_argument("--dst", required=True)
    t.add_argument("--weight", required=True)
    t = wsub.add_parser("cup", parents=[common])
    t.add_argument("--fan", required=True)
    t.add_argument("--w1", required=True)
    t.add_argument("--w2", required=True)
    s.set_defaults(func=cmd_weight)

    s = sub.add_parser("batch", parents=[common], help="checks over seeded random matrices")
    s.add_argument("--count", type=int, default=50)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--bound", type=int, default=3)
    s.add_argument("--checks", default="oracle")
    s.set_defaults(func=cmd_batch)
    return p


def _emit(payload: object, fmt: str, out: str | None) -> None:
    text = payload if isinstance(payload, str) else io.dumps(payload) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = "table" if getattr(args, "text_default", False) else "json"
    try:
        payload, status = args.func(args)
    except ToricDynError as e:
        code = 1 if e.kind in RUNTIME_KINDS else 2
        sys.stderr.write(json.dumps({"kind": e.kind, "message": str(e)}) + "\n")
        return code
    except OSError as e:
        sys.stderr.write(json.dumps({"kind": "IO", "message": str(e)}) + "\n")
        return 2
    _emit(payload, args.format, args.out)
    if status:
        sys.stderr.write(json.dumps({"kind": InvariantFailure.kind, "message": "invariant check failed"}) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
