"""Command-line entry point: ``thrifty {gen,params,approx,verify,bench}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time

import numpy as np

from . import chebyshev
from .approx import LIFTED_DIM_CAP, approximate_general, approximate_symmetric, approximate_to_tau
from .bodies import generate, load_body, save_body
from .errors import ThriftyError
from .sparsify import ratio_bound
from .verify import achieved_factor, baseline_net

log = logging.getLogger("thrifty")

DEFAULT_SEED = 2012
TAU_SLACK = 1e-6
KIND_ALIASES = {"ball": "ball_sample", "cross": "cross_polytope", "ellipsoid": "ellipsoid_sample"}

PARAMS_COLUMNS = ["d", "k", "mu", "parity", "lifted_dim", "vertex_bound", "guaranteed_tau", "margin"]
BENCH_COLUMNS = [
    "cell", "kind", "dim", "n", "k", "parity", "lifted_dim", "lifted_rank",
    "thrifty_vertices", "vertex_bound", "guaranteed_tau", "thrifty_achieved_tau",
    "baseline_vertices", "baseline_achieved_tau", "thrifty_ms", "baseline_ms", "error",
]

BENCH_HELP = "CSV columns: " + ", ".join(BENCH_COLUMNS)


def default_seed() -> int:
    return int(os.environ.get("THRIFTY_SEED", DEFAULT_SEED))


def _kind(name: str) -> str:
    return KIND_ALIASES.get(name, name)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _emit_json(obj, path):
    text = json.dumps(obj, indent=1, allow_nan=False)
    if path in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_gen(args) -> int:
    body = generate(_kind(args.kind), args.dim, args.n, args.seed)
    if args.out in (None, "-"):
        _emit_json(body.to_json(), None)
    else:
        save_body(body, args.out)
    log.info("wrote %s with %d points", body.name, body.n)
    return 0


def cmd_params(args) -> int:
    dilution = math.sqrt(ratio_bound(args.gamma))
    if args.tau is not None:
        try:
            p = chebyshev.min_k(args.d, args.tau, args.mu, dilution=dilution)
        except ThriftyError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return 1
        guaranteed = chebyshev.max_tau(args.d, p.k, args.mu, p.parity, dilution)
    else:
        p = chebyshev.params_for_k(args.d, args.k, args.mu, "auto", dilution)
        guaranteed = p.tau
    row = {"d": p.d, "k": p.k, "mu": p.mu, "parity": p.parity, "lifted_dim": p.lifted_dim,
           "vertex_bound": p.vertex_bound, "guaranteed_tau": guaranteed, "margin": p.margin}
    if args.csv:
        w = csv.DictWriter(sys.stdout, fieldnames=PARAMS_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerow(row)
    else:
        for key in PARAMS_COLUMNS:
            print(f"{key:>15}: {row[key]}")
    return 0


def _run_approx(body, k, tau, gamma, cap):
    if tau is not None:
        return approximate_to_tau(body, tau, gamma, cap)
    if body.symmetric:
        return approximate_symmetric(body, k, gamma, cap)
    return approximate_general(body, k, gamma, cap)


def cmd_approx(args) -> int:
    body = load_body(args.body)
    result = _run_approx(body, args.k, args.tau, args.gamma, args.lifted_cap)
    ok = True
    if not args.no_verify:
        t0 = time.perf_counter()
        result.certificate = achieved_factor(body, result.vertices, args.n_dirs, args.seed)
        result.timings_ms["verify"] = 1e3 * (time.perf_counter() - t0)
        cert = result.certificate
        ok = cert.containment_ok and cert.achieved_tau <= result.guaranteed_tau + TAU_SLACK
        log.info("achieved %.6f vs guaranteed %.6f", cert.achieved_tau, result.guaranteed_tau)
    _emit_json(result.to_json(), args.out)
    return 0 if ok else 2


def cmd_verify(args) -> int:
    body = load_body(args.body)
    with open(args.polytope) as fh:
        obj = json.load(fh)
    verts = np.array(obj["vertices"] if isinstance(obj, dict) else obj, dtype=float)
    cert = achieved_factor(body, verts, args.n_dirs, args.seed)
    _emit_json(cert.to_json(), args.out)
    return 0 if cert.containment_ok else 2


def bench_rows(kind, dims, ks, taus, n, seed, gamma=4.0, cap=LIFTED_DIM_CAP):
    cells = [(d, k, None) for d in dims for k in ks] + [(d, None, t) for d in dims for t in taus]
    for i, (d, k, tau) in enumerate(cells):
        row = dict.fromkeys(BENCH_COLUMNS, "")
        row.update(cell=i, kind=kind, dim=d, n=n if n is not None else "")
        try:
            body = generate(kind, d, n, seed)
            row["n"] = body.n
            t0 = time.perf_counter()
            res = _run_approx(body, k, tau, gamma, cap)
            cert = achieved_factor(body, res.vertices, 200, seed)
            t1 = time.perf_counter()
            p = res.params
            row.update(k=p.k, parity=p.parity, lifted_dim=p.lifted_dim, lifted_rank=res.lifted_rank,
                       thrifty_vertices=res.vertex_count, vertex_bound=p.vertex_bound,
                       guaranteed_tau=f"{res.guaranteed_tau:.9g}",
                       thrifty_achieved_tau=f"{cert.achieved_tau:.9g}",
                       thrifty_ms=f"{1e3 * (t1 - t0):.1f}")
            base_tau = max(cert.achieved_tau, 1.0 + 1e-9)
            t0 = time.perf_counter()
            base = baseline_net(body, base_tau, seed)
            bcert = achieved_factor(body, base, 1, seed)
            row.update(baseline_vertices=len(base), baseline_achieved_tau=f"{bcert.achieved_tau:.9g}",
                       baseline_ms=f"{1e3 * (time.perf_counter() - t0):.1f}")
        except ThriftyError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        yield row


def cmd_bench(args) -> int:
    ks = _int_list(args.ks) if args.ks else []
    taus = _float_list(args.taus) if args.taus else []
    if not ks and not taus:
        ks = [2, 3]
    fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in bench_rows(_kind(args.kind), _int_list(args.dims), ks, taus, args.n, args.seed,
                              args.gamma, args.lifted_cap):
            w.writerow(row)
            fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    seed = default_seed()
    ap = argparse.ArgumentParser(prog="thrifty", description="Few-vertex polytope approximation of point-set bodies.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a body JSON file")
    g.add_argument("--kind", required=True,
                   help="ball | cube | cross | simplex | random_symmetric | ellipsoid (long names accepted)")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--seed", type=int, default=seed)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("params", help="degree / factor / vertex-bound calculator",
                       description="Columns: " + ", ".join(PARAMS_COLUMNS))
    p.add_argument("--d", type=int, required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--tau", type=float)
    grp.add_argument("--k", type=int)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=4.0)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_params)

    a = sub.add_parser("approx", help="build the polytope and certify it")
    a.add_argument("--body", required=True)
    grp = a.add_mutually_exclusive_group(required=True)
    grp.add_argument("--k", type=int)
    grp.add_argument("--tau", type=float)
    a.add_argument("--gamma", type=float, default=4.0)
    a.add_argument("--lifted-cap", type=int, default=LIFTED_DIM_CAP)
    a.add_argument("--seed", type=int, default=seed)
    a.add_argument("--n-dirs", type=int, default=1000)
    a.add_argument("--no-verify", action="store_true")
    a.add_argument("--out", default=None)
    a.set_defaults(func=cmd_approx)

    v = sub.add_parser("verify", help="certify a polytope against a body")
    v.add_argument("--body", required=True)
    v.add_argument("--polytope", required=True, help="result JSON or a JSON array of vertices")
    v.add_argument("--seed", type=int, default=seed)
    v.add_argument("--n-dirs", type=int, default=1000)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="thrifty vs greedy baseline, CSV", description=BENCH_HELP)
    b.add_argument("--kind", default="ball")
    b.add_argument("--dims", default="2,3,4")
    b.add_argument("--ks", default=None)
    b.add_argument("--taus", default=None)
    b.add_argument("--n", type=int, default=None)
    b.add_argument("--seed", type=int, default=seed)
    b.add_argument("--gamma", type=float, default=4.0)
    b.add_argument("--lifted-cap", type=int, default=LIFTED_DIM_CAP)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ThriftyError as exc:
        stage = getattr(exc, "stage", None)
        prefix = f"[{stage}] " if stage else ""
        print(f"error: {prefix}{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
