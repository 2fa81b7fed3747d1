"""Command line front end.

Exit codes: 0 pass, 2 statistical failure, 3 unresolved-budget failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional

from . import exact as ex
from .census import brute_force_census, CENSUS_BOUND
from .exact import DomainError, TriType
from .experiments import EXPERIMENTS, THRESHOLDS, frac_str
from .maps import MapError, canonical_code, code_digest, to_text
from .peeling import BudgetExceeded, PEEL_POLICIES
from .rng import ExactRng
from .samplers import (sample_uniform, sample_free, uipt_explore, _ball_from_explorer,
                       sample_type3_ball, core_classify, trace_log)

EXIT_OK, EXIT_STAT, EXIT_UNRESOLVED, EXIT_USAGE = 0, 2, 3, 1


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--type", dest="tri_type", type=int, choices=(2, 3), default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = argparse.ArgumentParser(prog="uipt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("count", parents=[common], help="exact count phi(type, n, m)")
    s.add_argument("type", type=int, choices=(2, 3))
    s.add_argument("n", type=int)
    s.add_argument("m", type=int)

    s = sub.add_parser("zvalue", parents=[common], help="partition function Z_m(theta)")
    s.add_argument("type", type=int, choices=(2, 3))
    s.add_argument("m", type=int)
    s.add_argument("--theta", type=Fraction, default=None)

    s = sub.add_parser("census", parents=[common], help="brute-force census")
    s.add_argument("type", type=int, choices=(2, 3))
    s.add_argument("n", type=int)
    s.add_argument("m", type=int)

    s = sub.add_parser("sample-uniform", parents=[common], help="uniform (m+2)-gon triangulation")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--m", type=int, default=1)

    s = sub.add_parser("sample-free", parents=[common], help="free (critical Boltzmann) triangulation")
    s.add_argument("m", type=int)

    s = sub.add_parser("uipt-ball", parents=[common], help="UIPT ball of radius r")
    s.add_argument("r", type=int)
    s.add_argument("--policy", choices=PEEL_POLICIES, default="min-distance")
    s.add_argument("--trace", action="store_true", help="include the peeling event log")

    sub.add_parser("core-classify", parents=[common], help="classify the root core")

    s = sub.add_parser("experiment", parents=[common], help="run a named experiment")
    s.add_argument("name", choices=sorted(EXPERIMENTS))
    s.add_argument("--r-max", type=int, default=8)
    return p


def _emit(args, payload: dict, rows: Optional[list] = None, text: Optional[str] = None) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2) + "\n"
    elif text is not None:
        out = text
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in rows if rows is not None else [["key", "value"]] + [
                [k, v if not isinstance(v, (dict, list)) else json.dumps(v)]
                for k, v in payload.items()]:
            w.writerow(row)
        out = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _cmd_count(args) -> int:
    v = ex.phi(args.type, args.n, args.m)
    _emit(args, {"type": args.type, "n": args.n, "m": args.m, "count": str(v)})
    return EXIT_OK


def _cmd_zvalue(args) -> int:
    if args.theta is None:
        z = ex.z_critical(args.type, args.m)
        theta = ex.constants(args.type).theta_c
    else:
        theta = args.theta
        z = ex.z_closed(args.type, args.m, theta)
    _emit(args, {"type": args.type, "m": args.m, "theta": frac_str(theta), "z": frac_str(z)})
    return EXIT_OK


def _cmd_census(args) -> int:
    maps = brute_force_census(args.type, args.n, args.m)
    expected = ex.phi(args.type, args.n, args.m)
    digests = [code_digest(canonical_code(mp)).hex() for mp in maps]
    payload = {"type": args.type, "n": args.n, "m": args.m, "count": str(len(maps)),
               "phi": str(expected), "match": len(maps) == expected, "digests": digests}
    rows = [["index", "digest"]] + [[i, d] for i, d in enumerate(digests)]
    _emit(args, payload, rows)
    return EXIT_OK if len(maps) == expected else EXIT_STAT


def _map_payload(mp, **extra) -> dict:
    d = {"map": to_text(mp), "code": canonical_code(mp).hex()}
    d.update(extra)
    return d


def _cmd_sample_uniform(args) -> int:
    t = args.tri_type or 2
    mp = sample_uniform(t, args.n, args.m, ExactRng(args.seed))
    _emit(args, _map_payload(mp, type=t, n=args.n, m=args.m), text=to_text(mp))
    return EXIT_OK


def _cmd_sample_free(args) -> int:
    fs = sample_free(args.m, ExactRng(args.seed), cap=args.budget or 10 ** 9)
    _emit(args, _map_payload(fs.map, m=args.m, size=fs.size), text=to_text(fs.map))
    return EXIT_OK


def _cmd_uipt_ball(args) -> int:
    t = args.tri_type or 2
    budget = args.budget or 10 ** 6
    rng = ExactRng(args.seed)
    if t == 3:
        res = sample_type3_ball(args.r, budget, rng, args.policy)
        if res.map is None:
            _emit(args, {"status": "unresolved", "restarts": res.restarts, "steps": res.steps})
            return EXIT_UNRESOLVED
        _emit(args, _map_payload(res.map, type=3, r=args.r, restarts=res.restarts,
                                 root_degree=res.root_degree), text=to_text(res.map))
        return EXIT_OK
    try:
        E = uipt_explore(args.r, rng, args.policy, budget, trace=args.trace)
    except BudgetExceeded:
        _emit(args, {"status": "unresolved", "budget": budget})
        return EXIT_UNRESOLVED
    if args.r == 0:
        from .samplers import uipt_ball
        mp = uipt_ball(0)
    else:
        mp = _ball_from_explorer(E, args.r)
    extra = {"type": 2, "r": args.r, "steps": E.steps}
    if args.trace:
        extra["trace"] = trace_log(E)
    rows = None
    if args.trace:
        rows = [["step", "m_before", "m_after", "event", "probability"]] + [
            [e["step"], e["m_before"], e["m_after"], e["event"], e["probability"]]
            for e in extra["trace"]]
    _emit(args, _map_payload(mp, **extra), rows=rows, text=None if args.trace else to_text(mp))
    return EXIT_OK


def _cmd_core_classify(args) -> int:
    n = args.samples or 1
    budget = args.budget or 10_000
    labels = [core_classify(budget, ExactRng(args.seed, i)).label() for i in range(n)]
    unres = labels.count("Unresolved") / n
    rows = [["index", "result"]] + [[i, l] for i, l in enumerate(labels)]
    _emit(args, {"samples": n, "budget": budget, "results": labels,
                 "unresolved_fraction": unres}, rows)
    return EXIT_UNRESOLVED if n > 1 and unres > THRESHOLDS["unresolved_abort"] else EXIT_OK


def _cmd_experiment(args) -> int:
    name = args.name
    kw = {}
    if args.samples is not None:
        kw["samples"] = args.samples
    if name == "free-empty":
        kw["seeds"] = (args.seed, args.seed + 1, args.seed + 2)
    else:
        kw["seed"] = args.seed
    if args.budget is not None and name in ("degree", "core", "growth"):
        kw["budget"] = args.budget
    if name == "degree":
        kw["t"] = args.tri_type or 3
    if name == "growth":
        kw["r_max"] = args.r_max
    rep = EXPERIMENTS[name](**kw)
    if args.format == "json":
        _emit(args, rep.to_dict())
    else:
        _emit(args, {}, text=rep.to_csv())
    print(f"{rep.name}: {'pass' if rep.passed else 'FAIL'} in {rep.runtime:.1f}s",
          file=sys.stderr)
    return rep.exit_code


COMMANDS = {
    "count": _cmd_count,
    "zvalue": _cmd_zvalue,
    "census": _cmd_census,
    "sample-uniform": _cmd_sample_uniform,
    "sample-free": _cmd_sample_free,
    "uipt-ball": _cmd_uipt_ball,
    "core-classify": _cmd_core_classify,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (DomainError, MapError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
