"""Command-line front end: ``qcluster {gen,run,sweep,bound,dryrun-pairs}``.

Exit codes: 0 success, 2 invalid input, 3 instance too large for the exact
solvers.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

from .bounds import adaptive_query_lower_bound, nonadaptive_query_lower_bound, sbm_feasibility, sbm_rhs
from .config import AlgoConfig
from .core import Clustering
from .errors import InstanceTooLarge, InvalidInput
from .harness import (ALGORITHMS, SCHEMA, SweepSpec, derive_seeds, gen_ground_truth,
                      records_to_csv, records_to_json, run_trial, sweep)
from .nonadaptive import nonadaptive_pairs

EXIT_OK, EXIT_INVALID, EXIT_TOO_LARGE = 0, 2, 3


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def truth_to_json(c: Clustering) -> str:
    return json.dumps({"schema": "qcluster.truth.v1", "n": c.n, "k": c.k,
                       "labels": c.to_list()}) + "\n"


def truth_from_json(text: str) -> Clustering:
    try:
        data = json.loads(text)
        labels = data["labels"] if isinstance(data, dict) else data
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidInput(f"cannot read truth file: {exc}") from None
    return Clustering(labels)


def cmd_gen(a) -> int:
    truth = gen_ground_truth(a.n, a.k, a.shape, a.seed)
    _write(truth_to_json(truth), a.out)
    return EXIT_OK


def cmd_run(a) -> int:
    truth = truth_from_json(Path(a.truth).read_text())
    cfg = AlgoConfig(residual_fallback=a.residual_fallback, ml_fallback=a.ml_fallback)
    rec, res = run_trial(truth, a.algo, a.p, a.q, a.alpha, a.seed, probe_alpha=a.probe_alpha,
                         cfg=cfg, ratio=a.R, mode=a.mode, timing=not a.no_timing)
    out = {"schema": SCHEMA, **asdict(rec), "labels": res.clustering.to_list(),
           "phase_log": [list(e) for e in res.phase_log]}
    _write(json.dumps(out, indent=1) + "\n", a.out)
    return EXIT_OK


def cmd_sweep(a) -> int:
    spec = SweepSpec.from_json(Path(a.spec).read_text())
    if a.workers is not None:
        spec.workers = a.workers
    rows = sweep(spec)
    fmt = a.format or ("json" if a.out and a.out.endswith(".json") else "csv")
    _write(records_to_json(rows) + "\n" if fmt == "json" else records_to_csv(rows), a.out)
    return EXIT_OK


def cmd_bound(a) -> int:
    lb = adaptive_query_lower_bound(a.n, a.k, a.p, a.q)
    lines = [f"adaptive_js\t{lb.js_form:.6g}", f"adaptive_kl\t{lb.kl_form:.6g}",
             f"nonadaptive\t{nonadaptive_query_lower_bound(a.n, a.k, a.p, a.q):.6g}"]
    if a.sbm:
        try:
            sa, sb, sq = (float(x) for x in a.sbm.split(","))
        except ValueError:
            raise InvalidInput("--sbm expects a,b,Q") from None
        if math.isnan(sq):
            raise InvalidInput("Q must be a number")
        ok = sbm_feasibility(sa, sb, a.k, a.n, sq)
        lines.append(f"sbm_lhs\t{math.sqrt(sa) - math.sqrt(sb):.6g}")
        lines.append(f"sbm_rhs\t{sbm_rhs(a.k, a.n, sq):.6g}")
        lines.append(f"sbm_feasible\t{str(ok).lower()}")
    _write("\n".join(lines) + "\n", None)
    return EXIT_OK


def cmd_dryrun(a) -> int:
    # same seed split as ``run``, so the list matches that command's query log
    cfg = AlgoConfig(alpha=a.alpha, seed=derive_seeds(a.seed)[2])
    _, pairs = nonadaptive_pairs(a.algo, a.n, a.p, cfg, k=a.k, R=a.R, mode=a.mode)
    buf = sys.stdout if a.out in (None, "-") else open(a.out, "w", newline="")
    try:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "v"])
        w.writerows(pairs.tolist())
    finally:
        if buf is not sys.stdout:
            buf.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcluster", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write a random ground-truth clustering")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--shape", default="balanced", help="balanced | ratio:R | sizes:a,b,...")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(fn=cmd_gen)

    r = sub.add_parser("run", help="run one algorithm against a fresh oracle")
    r.add_argument("--truth", required=True)
    r.add_argument("--algo", required=True, choices=ALGORITHMS)
    r.add_argument("--p", type=float, required=True)
    r.add_argument("--q", type=float)
    r.add_argument("--alpha", type=float, default=1.0)
    r.add_argument("--probe-alpha", type=float)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--R", type=float, help="size ratio for nonadaptive_general (default: true ratio)")
    r.add_argument("--mode", default="efficient", choices=("efficient", "info_optimal"))
    r.add_argument("--residual-fallback", action="store_true")
    r.add_argument("--ml-fallback", action="store_true")
    r.add_argument("--no-timing", action="store_true")
    r.add_argument("--out")
    r.set_defaults(fn=cmd_run)

    s = sub.add_parser("sweep", help="run a JSON grid spec and write tidy results")
    s.add_argument("--spec", required=True)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--workers", type=int)
    s.set_defaults(fn=cmd_sweep)

    b = sub.add_parser("bound", help="print lower-bound reference values")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--q", type=float, required=True)
    b.add_argument("--sbm", help="a,b,Q")
    b.set_defaults(fn=cmd_bound)

    d = sub.add_parser("dryrun-pairs", help="list a non-adaptive run's queries without an oracle")
    d.add_argument("--algo", required=True, choices=("nonadaptive_k2", "nonadaptive_general"))
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--p", type=float, required=True)
    d.add_argument("--k", type=int, default=2)
    d.add_argument("--R", type=float, default=1.0)
    d.add_argument("--mode", default="efficient", choices=("efficient", "info_optimal"))
    d.add_argument("--alpha", type=float, default=1.0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out")
    d.set_defaults(fn=cmd_dryrun)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InstanceTooLarge as exc:
        print(f"qcluster: instance too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (InvalidInput, OSError) as exc:
        print(f"qcluster: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
