"""Command-line interface: model ingestion, dispatch, report rendering.

Exit codes: 0 success, 1 negative-but-valid verdict, 2 input error,
3 statement violation.  Every JSON payload is rendered deterministically
(sorted keys, exact rationals as strings) and wrapped in a run manifest
carrying the command line, model hash, seed and library version.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import dynamics, equicont, measure, morphism, probes, shift
from .errors import CapabilityError, InputError
from .model import load_iso, load_measure, load_model
from .pseudogroup import PartialMap
from .rational import format_rational, is_unbounded, parse_rational

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_VIOLATION = 3


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if is_unbounded(obj):
        return "unbounded"
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, PartialMap):
        return {
            "name": obj.name,
            "word": obj.word_str(),
            "map": {str(obj.space.label(i)): str(obj.space.label(v))
                    for i, v in enumerate(obj.vals) if v is not None},
        }
    if isinstance(obj, shift.ShiftPoint):
        return {"window": list(obj.window), "background": obj.background}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in sorted(
            obj.items(), key=lambda kv: _key(kv[0]))}
    if isinstance(obj, (frozenset, set)):
        return sorted((to_jsonable(v) for v in obj), key=str)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return repr(obj)


def _key(k) -> str:
    if isinstance(k, Fraction):
        return format_rational(k)
    if isinstance(k, tuple):
        return ",".join(_key(v) for v in k)
    return str(k)


def render(payload, fmt: str, manifest: dict | None = None) -> str:
    data = to_jsonable(payload)
    if fmt == "json":
        doc = {"result": data}
        if manifest:
            doc["manifest"] = manifest
        return json.dumps(doc, indent=2, sort_keys=True)
    if fmt == "csv":
        return _render_csv(data)
    return _render_table(data)


def _render_csv(data, prefix="") -> str:
    lines = []

    def walk(node, path):
        if isinstance(node, dict):
            for k, v in node.items():
                walk(v, f"{path}.{k}" if path else str(k))
        elif isinstance(node, list) and node and all(
                isinstance(e, dict) for e in node):
            keys = sorted({k for e in node for k in e})
            lines.append(",".join([path or "row"] + keys))
            for e in node:
                lines.append(",".join(
                    [""] + [str(e.get(k, "")) for k in keys]))
        elif isinstance(node, list):
            lines.append(f"{path}," + ";".join(str(v) for v in node))
        else:
            lines.append(f"{path},{node}")

    walk(data, prefix)
    return "\n".join(lines)


def _render_table(data, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)):
                lines.append(_render_table(v, indent))
                lines.append("")
            else:
                lines.append(f"{pad}- {v}")
        while lines and lines[-1] == "":
            lines.pop()
    else:
        lines.append(f"{pad}{data}")
    return "\n".join(lines)


def _manifest(args, model=None, seed=None, started=None) -> dict:
    return {
        "command": " ".join(sys.argv[1:]) if sys.argv[1:] else args.command,
        "model_sha256": getattr(model, "sha256", None),
        "seed": seed,
        "version": __version__,
        "wall_ms": None if started is None else round((time.time() - started) * 1000),
    }


# -- command implementations -----------------------------------------------------


def cmd_ball(args) -> tuple[int, object]:
    model = load_model(args.model)
    rep = dynamics.dyn_ball(model.system, args.x, args.n,
                            parse_rational(args.eps), closed=args.closed)
    space = model.space
    payload = {
        "center": rep.center,
        "n": rep.n,
        "eps": rep.radius,
        "closed": rep.closed,
        "members": list(space.labels_of(rep.members)),
        "excluded": {
            str(space.label(y)): {"by": g.word_str() or g.name,
                                  "distance": d}
            for y, (g, d) in rep.exclusions.items()
        },
    }
    return EXIT_OK, (payload, model)


def cmd_bowen(args) -> tuple[int, object]:
    model = load_model(args.model)
    rep = dynamics.bowen_ball(model.system, args.x, parse_rational(args.delta))
    space = model.space
    payload = {
        "center": rep.center,
        "delta": rep.radius,
        "stabilized_at": model.system.word_closure().stable_index,
        "members": list(space.labels_of(rep.members)),
        "excluded": {
            str(space.label(y)): {"by": g.word_str() or g.name, "distance": d}
            for y, (g, d) in rep.exclusions.items()
        },
    }
    return EXIT_OK, (payload, model)


def cmd_htop(args) -> tuple[int, object]:
    model = load_model(args.model)
    grid = None
    if args.eps_grid != "auto":
        grid = [parse_rational(v) for v in args.eps_grid.split(",")]
    table = dynamics.h_top_table(model.system, eps_grid=grid, n_max=args.n_max)
    payload = {
        "rows": [{"eps": r.eps, "n": r.n, "count_lower": r.count_lower,
                  "count_upper": r.count_upper, "rate": r.rate}
                 for r in table.rows],
        "limit": table.limit,
        "note": table.note,
    }
    return EXIT_OK, (payload, model)


def cmd_entropy(args) -> tuple[int, object]:
    model = load_model(args.model)
    mu = model.measure
    if args.measure:
        mu = load_measure(args.measure, model.space)
    if mu is None:
        raise InputError("local entropy needs a measure (--measure or 'mu')")
    grid = None
    if args.eps_grid != "auto":
        grid = [parse_rational(v) for v in args.eps_grid.split(",")]
    table = measure.local_entropy(mu, model.system, args.x, side=args.side,
                                  eps_grid=grid, n_max=args.n_max)
    payload = {
        "x": table.x,
        "side": table.side,
        "cells": [{"eps": c.eps, "n": c.n, "ball_measure": c.ball_measure,
                   "value": c.value} for c in table.cells],
        "limit": table.limit,
    }
    return EXIT_OK, (payload, model)


def cmd_check(args) -> tuple[int, object]:
    model = load_model(args.model)
    mu = model.measure
    if args.measure:
        mu = load_measure(args.measure, model.space)
    if mu is None:
        raise InputError("checks need a measure (--measure or 'mu')")
    sysm = model.system
    what = args.what
    if what == "invariant":
        rep = measure.is_invariant_measure(mu, sysm)
        return (EXIT_OK if rep.ok else EXIT_NEGATIVE), ({
            "what": what, "ok": rep.ok, "witness": rep.witness}, model)
    if what == "ergodic":
        rep = measure.is_ergodic(mu, sysm)
        return (EXIT_OK if rep.ok else EXIT_NEGATIVE), ({
            "what": what, "ok": rep.ok,
            "components": [sorted(model.space.labels_of(c), key=str)
                           for c in rep.components],
            "witness": None if rep.witness is None
            else sorted(model.space.labels_of(rep.witness), key=str)}, model)
    if what == "homogeneous":
        rep = measure.is_homogeneous(mu, sysm)
        payload = {
            "what": what, "ok": rep.ok, "degenerate": rep.degenerate,
            "witnesses": {format_rational(e): {
                "delta": w.delta, "c_exact": w.c_exact, "c_ladder": w.c_ladder}
                for e, w in rep.witnesses.items()},
            "counterexample": rep.counterexample,
        }
        return (EXIT_OK if rep.ok else EXIT_NEGATIVE), (payload, model)
    if what == "expansive":
        if args.delta is None:
            raise InputError("--delta is required for the expansiveness check")
        rep = measure.expansiveness_verdict(mu, sysm, parse_rational(args.delta))
        payload = {
            "what": what, "delta": rep.delta,
            "classification": rep.classification,
            "ball_measures": rep.ball_measures,
            "zero_set": sorted(model.space.labels_of(rep.zero_set), key=str),
            "atoms": sorted(model.space.labels_of(rep.atoms), key=str),
            "note": rep.note,
        }
        code = EXIT_OK if rep.classification != "neither" else EXIT_NEGATIVE
        return code, (payload, model)
    raise InputError(f"unknown check {what!r}")


def cmd_conjugate(args) -> tuple[int, object]:
    model = load_model(args.model)
    iso = model.iso
    if args.iso:
        iso = load_iso(args.iso, model.space)
    if iso is None:
        raise InputError("conjugation needs an iso (--iso or 'phi')")
    mu = model.measure
    if args.measure:
        mu = load_measure(args.measure, model.space)
    if args.check == "entropy":
        rep = morphism.compare_entropy(model.system, iso, mu=mu,
                                       x=model.space.points[0] if mu else None)
        payload = {
            "check": "entropy",
            "isometric": rep.isometric,
            "forward_ok": rep.forward_ok,
            "backward_ok": rep.backward_ok,
            "tables_equal": rep.tables_equal,
            "local_equal": rep.local_equal,
            "counts_src": {f"n={n} eps={format_rational(e)}": c
                           for (n, e), c in rep.counts_src.items()},
            "counts_dst": {f"n={n} eps={format_rational(e)}": c
                           for (n, e), c in rep.counts_dst.items()},
        }
        ok = rep.forward_ok and rep.backward_ok and rep.tables_equal is not False
        return (EXIT_OK if ok else EXIT_VIOLATION), (payload, model)
    if args.check == "expansive":
        if mu is None:
            raise InputError("the expansiveness transfer check needs a measure")
        eta = parse_rational(args.eta)
        delta = morphism.transfer_expansive_constant(eta, iso)
        src = measure.expansiveness_verdict(mu, model.system, eta)
        conj = morphism.conjugate_system(model.system, iso)
        dst = measure.expansiveness_verdict(morphism.pushforward(mu, iso),
                                            conj, delta)
        violated = src.expansive and not dst.expansive
        payload = {
            "check": "expansive", "eta": eta, "delta": delta,
            "source": src.classification, "target": dst.classification,
            "transfer_violated": violated,
        }
        return (EXIT_VIOLATION if violated else EXIT_OK), (payload, model)
    raise InputError(f"unknown conjugation check {args.check!r}")


def cmd_equicont(args) -> tuple[int, object]:
    model = load_model(args.model)
    sysm = model.system
    if args.compacted:
        rep = equicont.no_expansive_certificate_good(sysm)
        payload = {
            "mode": "core-restricted",
            "rows": [{"rho": r.rho, "delta": r.delta, "lambda": r.lam,
                      "xi": r.xi, "inclusion_ok": r.inclusion_ok}
                     for r in rep.rows],
            "all_ok": rep.all_ok,
            "conclusion": rep.conclusion,
        }
        return (EXIT_OK if rep.all_ok else EXIT_VIOLATION), (payload, model)
    maps = sysm.word_closure().stabilized_maps
    cert = equicont.equicontinuity_modulus(maps, model.space)
    rows = [{"eps": e, "delta": d,
             "witness": None if cert.witnesses[e] is None else {
                 "map": cert.witnesses[e][0].word_str() or cert.witnesses[e][0].name,
                 "x": str(cert.witnesses[e][1]), "y": str(cert.witnesses[e][2])}}
            for e, d in cert.table.items()]
    payload = {"mode": "closure", "isometric": cert.isometric, "rows": rows,
               "audit_ok": cert.audit(maps, model.space)}
    if args.rho is not None:
        if all(g.is_total() for g in sysm.generators):
            rep = equicont.no_expansive_certificate_group(
                sysm, parse_rational(args.rho))
            payload["group_certificate"] = {
                "rho": rep.rho, "delta": rep.delta,
                "inclusion_ok": rep.inclusion_ok,
                "conclusion": rep.conclusion,
            }
            if not rep.inclusion_ok:
                return EXIT_VIOLATION, (payload, model)
        else:
            payload["group_certificate"] = "generators not total; use --compacted"
    return EXIT_OK, (payload, model)


def cmd_shift(args) -> tuple[int, object]:
    spec = shift.BernoulliSpec(parse_rational(args.p))
    if args.shift_command == "entropy":
        val = shift.measure_entropy_shift(spec, parse_rational(args.eps), args.n)
        payload = {
            "eps": val.eps, "n": val.n, "window_radius": val.s,
            "ball_interval": val.ball.interval,
            "ball_measure": val.ball_measure,
            "log2_multiple": val.log2_coeff,
            "value": val.value,
            "limit_log2_multiple": val.limit_log2_coeff,
            "limit": "2 log 2" if val.limit_log2_coeff == 2 else val.limit_value,
        }
        return EXIT_OK, (payload, None)
    if args.shift_command == "ball":
        x = shift.ShiftPoint.from_string(args.x, center=args.center)
        cyl = shift.dyn_ball_cylinder(x, args.n, parse_rational(args.eps))
        sandwich = shift.dyn_ball_cylinder_bounds(x, args.n, parse_rational(args.eps))
        payload = {
            "x": x, "n": args.n, "eps": parse_rational(args.eps),
            "cylinder": {"interval": cyl.interval, "block": list(cyl.block)},
            "inner_interval": sandwich.inner.interval,
            "outer_interval": None if sandwich.outer is None
            else sandwich.outer.interval,
            "measure": shift.cylinder_measure(cyl, spec),
        }
        return EXIT_OK, (payload, None)
    if args.shift_command == "bowen":
        x = shift.ShiftPoint.from_string(args.x, center=args.center)
        rep = shift.bowen_ball_shift(x, parse_rational(args.delta), spec=spec)
        payload = {
            "delta": rep.delta, "singleton": rep.singleton,
            "measure_zero": rep.measure_zero,
            "measure_bounds": [{"n": n, "bound": b}
                               for n, b in rep.measure_bounds],
            "witness": rep.non_singleton_witness,
            "note": rep.note,
        }
        code = EXIT_OK if rep.singleton else EXIT_NEGATIVE
        return code, (payload, None)
    if args.shift_command == "htop":
        rep = shift.htop_shift(parse_rational(args.eps), args.n)
        payload = {
            "eps": rep.eps, "n": rep.n,
            "count_lower": rep.lower, "count_upper": rep.upper,
            "rate_lower_log2": rep.rate_lower_log2_coeff,
            "rate_upper_log2": rep.rate_upper_log2_coeff,
            "limit": "2 log 2",
        }
        return EXIT_OK, (payload, None)
    raise InputError(f"unknown shift command {args.shift_command!r}")


def cmd_probe(args) -> tuple[int, object]:
    threads = args.threads
    if threads is None:
        env = os.environ.get("PSEUDODYN_THREADS")
        threads = int(env) if env else None
    spec = probes.InstanceSpec(seed=args.seed, count=args.seeds)
    if args.survey:
        survey = probes.question_probe(args.survey, spec)
        payload = {
            "survey": survey.topic, "instances": survey.instances,
            "agreements": survey.agreements,
            "disagreements": survey.disagreements,
            "note": survey.note,
        }
        return EXIT_OK, (payload, None)
    statements = "all" if args.statements == "all" else args.statements.split(",")
    reports = probes.run_suite(spec, statements=statements, threads=threads)
    payload = {
        "seeds": args.seeds,
        "statements": {
            name: {
                "instances": rep.instances,
                "vacuous": rep.vacuous,
                "substantive": rep.substantive,
                "violations": [
                    {"index": v.index, "witness": v.witness,
                     "shrunk_size": v.shrunk_size,
                     "shrunk_witness": v.shrunk_witness}
                    for v in rep.violations
                ],
            }
            for name, rep in reports.items()
        },
    }
    bad = any(rep.violations for rep in reports.values())
    return (EXIT_VIOLATION if bad else EXIT_OK), (payload, None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudodyn",
        description="Exact dynamical balls, entropy and expansiveness "
                    "verdicts for finitely generated systems of partial maps",
    )
    parser.add_argument("--format", choices=["table", "json", "csv"],
                        default="table")
    # accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="format_sub",
                        choices=["table", "json", "csv"], default=None)

    def with_common(**kw):
        return argparse.ArgumentParser(parents=[common], **kw)

    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=with_common)

    p = sub.add_parser("ball", help="dynamical n-ball")
    p.add_argument("--model", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--closed", action="store_true")

    p = sub.add_parser("bowen", help="stabilized Bowen ball")
    p.add_argument("--model", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--delta", required=True)

    p = sub.add_parser("htop", help="separated-count table")
    p.add_argument("--model", required=True)
    p.add_argument("--eps-grid", default="auto")
    p.add_argument("--n-max", type=int, default=8)

    p = sub.add_parser("entropy", help="local measure entropy table")
    p.add_argument("--model", required=True)
    p.add_argument("--measure")
    p.add_argument("--x", required=True)
    p.add_argument("--side", choices=["lower", "upper"], default="upper")
    p.add_argument("--eps-grid", default="auto")
    p.add_argument("--n-max", type=int, default=None)

    p = sub.add_parser("check", help="measure verdicts")
    p.add_argument("--model", required=True)
    p.add_argument("--measure")
    p.add_argument("--what", required=True,
                   choices=["invariant", "ergodic", "homogeneous", "expansive"])
    p.add_argument("--delta")

    p = sub.add_parser("conjugate", help="transfer checks across a bijection")
    p.add_argument("--model", required=True)
    p.add_argument("--iso")
    p.add_argument("--measure")
    p.add_argument("--check", choices=["entropy", "expansive"], default="entropy")
    p.add_argument("--eta", default="1")

    p = sub.add_parser("equicont", help="equicontinuity certificates")
    p.add_argument("--model", required=True)
    p.add_argument("--compacted", action="store_true")
    p.add_argument("--rho")

    p = sub.add_parser("shift", help="full binary shift computations")
    shift_sub = p.add_subparsers(dest="shift_command", required=True,
                                 parser_class=with_common)
    q = shift_sub.add_parser("entropy")
    q.add_argument("--eps", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--p", default="1/2")
    q = shift_sub.add_parser("ball")
    q.add_argument("--x", required=True)
    q.add_argument("--center", type=int, default=0)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--eps", required=True)
    q.add_argument("--p", default="1/2")
    q = shift_sub.add_parser("bowen")
    q.add_argument("--x", required=True)
    q.add_argument("--center", type=int, default=0)
    q.add_argument("--delta", required=True)
    q.add_argument("--p", default="1/2")
    q = shift_sub.add_parser("htop")
    q.add_argument("--eps", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--p", default="1/2")

    for name in ("probe", "verify"):
        p = sub.add_parser(name, help="randomized statement conformance suite")
        p.add_argument("--seeds", type=int, default=500)
        p.add_argument("--seed", default=0)
        p.add_argument("--statements", default="all")
        p.add_argument("--survey", choices=probes.QUESTION_TOPICS)
        p.add_argument("--threads", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    handlers = {
        "ball": cmd_ball,
        "bowen": cmd_bowen,
        "htop": cmd_htop,
        "entropy": cmd_entropy,
        "check": cmd_check,
        "conjugate": cmd_conjugate,
        "equicont": cmd_equicont,
        "shift": cmd_shift,
        "probe": cmd_probe,
        "verify": cmd_probe,
    }
    try:
        code, (payload, model) = handlers[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    seed = getattr(args, "seed", None)
    manifest = _manifest(args, model=model, seed=seed, started=started)
    fmt = getattr(args, "format_sub", None) or args.format
    print(render(payload, fmt, manifest=manifest))
    return code


if __name__ == "__main__":
    sys.exit(main())
