"""Command-line front end.

Three subcommands:

``nsopt analyze``
    Estimate the directional derivatives of one function at one point,
    run the requested condition checks, optionally run the grid oracles,
    and write a JSON report (plus an optional per-direction CSV table).

``nsopt corpus``
    Re-run every built-in corpus entry's expected results and print a
    pass/fail table.  Exits 0 only if everything reproduced.

``nsopt vecopt``
    Load a cone-constrained vector problem from a JSON file and run the
    scalarization checks, or run the seeded definitional-equivalence suite.

Exit codes encode operability, not mathematical verdicts: 0 the command
ran (verdicts live in the report), 1 corpus expectations failed to
reproduce, 2 configuration or usage error, 3 infeasible vecopt candidate.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import classify, oracle, report as report_mod, vecopt
from .corpus import CorpusEntry
from .corpus import by_name as corpus_by_name
from .corpus import corpus as corpus_entries
from .corpus import names as corpus_names
from .cones import PolyhedralCone
from .core import SampleSchedule
from .derivatives import DirectionSet, dini1, dini2, hadamard1, hadamard2
from .errors import ConfigurationError, NsoptError, ParseError, PreconditionError
from .exprparse import parse_expression, parse_function_file
from .functions import ProperFunction

POINT_CHECKS = ["Thm1", "Thm1-Dini", "Thm2", "2Stat", "SPC-Dini", "SPC-Had",
                "LStab", "Thm5"]


def _parse_schedule(text: str | None, seed: int | None) -> SampleSchedule:
    kwargs = {}
    if text:
        keymap = {
            "t0": "t0", "tratio": "t_ratio", "t_ratio": "t_ratio",
            "eps0": "eps0", "epsratio": "eps_ratio", "eps_ratio": "eps_ratio",
            "stages": "stages", "samples": "samples_per_stage",
            "samples_per_stage": "samples_per_stage", "seed": "seed",
        }
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise ConfigurationError(f"bad schedule fragment {part!r}")
            key, value = part.split("=", 1)
            key = key.strip().lower()
            if key not in keymap:
                raise ConfigurationError(f"unknown schedule key {key!r}")
            field = keymap[key]
            kwargs[field] = int(value) if field in ("stages", "samples_per_stage", "seed") else float(value)
    if seed is not None:
        kwargs["seed"] = seed
    return SampleSchedule(**kwargs)


def _parse_point(text: str, dim: int | None = None) -> np.ndarray:
    try:
        pt = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ConfigurationError(f"malformed point {text!r}") from None
    if dim is not None and pt.size != dim:
        raise ConfigurationError(f"point has {pt.size} coordinates, function needs {dim}")
    return pt


def _parse_directions(text: str | None, dim: int) -> DirectionSet:
    if not text or text.startswith("fibonacci"):
        n = 64
        if text and ":" in text:
            n = int(text.split(":", 1)[1])
        return DirectionSet.fibonacci_sphere(n, dim)
    if text == "axes":
        return DirectionSet.axis_and_diagonals(dim)
    if text.startswith("explicit:"):
        path = Path(text.split(":", 1)[1])
        rows = [
            [float(v) for v in line.replace(",", " ").split()]
            for line in path.read_text().splitlines()
            if line.strip() and not line.strip().startswith("#")
        ]
        return DirectionSet.explicit(rows)
    raise ConfigurationError(f"unknown direction spec {text!r}")


def _resolve_function(spec: str) -> tuple[ProperFunction, "CorpusEntry | None", dict]:
    if spec in corpus_names():
        entry = corpus_by_name(spec)
        meta = {"name": spec, "source": "corpus", "sha256": None}
        return entry.function, entry, meta
    path = Path(spec)
    if not path.exists():
        raise ConfigurationError(f"unknown function {spec!r} (not a corpus name or file)")
    text = path.read_text()
    f = parse_function_file(text, name=path.stem)
    meta = {"name": path.stem, "source": "file",
            "sha256": report_mod.source_hash(text)}
    return f, None, meta


def _run_checks(f, x, dirs, schedule, zero_band, check_tags):
    verdicts = []
    for tag in check_tags:
        if tag == "Thm1":
            verdicts.append(classify.check_necessary_local_min(f, x, dirs, schedule, zero_band))
        elif tag == "Thm1-Dini":
            verdicts.append(classify.check_necessary_local_min_dini(f, x, dirs, schedule, zero_band))
        elif tag == "Thm2":
            verdicts.append(classify.check_isolated_order2(f, x, dirs, schedule, "b", zero_band))
            verdicts.append(classify.check_isolated_order2(f, x, dirs, schedule, "c", zero_band))
        elif tag == "2Stat":
            verdicts.append(classify.is_2stationary(f, x, dirs, schedule, zero_band))
        elif tag == "SPC-Dini":
            verdicts.append(classify.check_strong_pseudoconvex(f, x, dirs, schedule, "dini", zero_band).outcome)
        elif tag == "SPC-Had":
            verdicts.append(classify.check_strong_pseudoconvex(f, x, dirs, schedule, "hadamard", zero_band).outcome)
        elif tag == "LStab":
            verdicts.append(classify.check_lstability(f, x, dirs, schedule).outcome)
        elif tag == "Thm5":
            verdicts.append(classify.check_spc_first_order_sufficiency(f, x, dirs, schedule, zero_band))
        else:
            raise ConfigurationError(f"unknown check tag {tag!r}")
    return verdicts


def cmd_analyze(args) -> int:
    schedule = _parse_schedule(args.schedule, args.seed)
    f, entry, meta = _resolve_function(args.function)
    x = _parse_point(args.point, f.dim)
    dirs = _parse_directions(args.directions, f.dim)
    check_tags = POINT_CHECKS if args.checks == "all" else [
        t.strip() for t in args.checks.split(",") if t.strip()
    ]
    for tag in check_tags:
        if tag not in POINT_CHECKS:
            raise ConfigurationError(f"unknown check tag {tag!r}")

    t_start = time.perf_counter()

    def estimate_rows(u):
        rows = [
            report_mod.estimate_row(u, "hadamard1", hadamard1(f, x, u, schedule)),
            report_mod.estimate_row(u, "hadamard2",
                                    hadamard2(f, x, np.zeros(f.dim), u, schedule)),
        ]
        d1 = dini1(f, x, u, schedule)
        rows.append(report_mod.estimate_row(u, "dini1", d1))
        rows.append(report_mod.estimate_row(u, "dini2",
                                            dini2(f, x, u, schedule, first_order=d1)))
        return rows

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            nested = list(pool.map(estimate_rows, list(dirs)))
    else:
        nested = [estimate_rows(u) for u in dirs]
    estimates = [row for rows in nested for row in rows]

    verdicts = _run_checks(f, x, dirs, schedule, args.zero_band, check_tags)

    oracles = {}
    if args.oracle == "on":
        grid = oracle.GridSpec.around(x)
        rep_local = oracle.local_min(f, x, grid)
        rep_iso = oracle.isolated_order2(f, x, grid)
        oracles = {
            "local_min": _oracle_dict(rep_local),
            "isolated_order2": _oracle_dict(rep_iso),
        }

    rep = {
        "schema_version": report_mod.SCHEMA_VERSION,
        "command": "analyze",
        "seed": schedule.seed,
        "function": meta,
        "point": [float(c) for c in x],
        "schedule": _schedule_dict(schedule),
        "directions": {
            "generator": dirs.generator,
            "vectors": [list(d) for d in dirs.directions],
        },
        "zero_band": args.zero_band,
        "checks_requested": check_tags,
        "estimates": estimates,
        "verdicts": [v.to_dict() for v in verdicts],
        "oracles": oracles,
    }
    if not args.no_timings:
        rep["timings"] = {"total_s": time.perf_counter() - t_start}

    _emit_report(rep, args.report)
    if args.csv:
        Path(args.csv).write_text(report_mod.csv_table(estimates, f.dim))
    for v in verdicts:
        print(f"{v.condition_id}: {v.outcome}" + (f"  [{v.note}]" if v.note else ""))
    for name, orep in oracles.items():
        print(f"oracle.{name}: {orep['outcome']}")
    return 0


def _schedule_dict(s: SampleSchedule) -> dict:
    return {
        "t0": s.t0, "t_ratio": s.t_ratio, "eps0": s.eps0, "eps_ratio": s.eps_ratio,
        "stages": s.stages, "samples_per_stage": s.samples_per_stage, "seed": s.seed,
    }


def _oracle_dict(rep: oracle.OracleReport) -> dict:
    return {
        "kind": rep.kind,
        "outcome": rep.outcome,
        "C_estimates": [[r, c] for r, c in rep.C_estimates],
        "counterexample": rep.counterexample,
    }


def _emit_report(rep: dict, path: str | None):
    text = report_mod.dumps(rep)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_corpus(args) -> int:
    schedule = _parse_schedule(args.schedule, args.seed)
    entries = corpus_entries()
    if args.entry:
        entries = [e for e in entries if e.name == args.entry]
        if not entries:
            raise ConfigurationError(f"unknown corpus entry {args.entry!r}")
    failures = 0
    rows = []
    for entry in entries:
        for exp in entry.expected:
            ok, detail = exp.run(entry, schedule)
            status = "ok" if ok else "FAIL"
            if not ok:
                failures += 1
            rows.append((entry.name, exp.id, status, detail))
    width = max(len(r[0]) + len(r[1]) for r in rows) + 2
    for name, ident, status, detail in rows:
        label = f"{name}.{ident}"
        print(f"{label:<{width}} {status:<5} {detail}")
    print(f"\n{len(rows) - failures}/{len(rows)} expected results reproduced")
    return 0 if failures == 0 else 1


def _load_vector_problem(path: Path) -> tuple[vecopt.VectorProblem, np.ndarray, str]:
    spec = json.loads(path.read_text())
    dim = int(spec["dim"])
    objectives = [parse_expression(e, dim) for e in spec["objectives"]]
    constraints = [parse_expression(e, dim) for e in spec["constraints"]]
    box = (np.array(spec["box"][0], dtype=float), np.array(spec["box"][1], dtype=float))
    problem = vecopt.VectorProblem(
        name=spec.get("name", path.stem),
        dim=dim,
        n_objectives=len(objectives),
        n_constraints=len(constraints),
        f=lambda x, fns=objectives: np.array([fn(x) for fn in fns]),
        g=lambda x, fns=constraints: np.array([fn(x) for fn in fns]),
        C=PolyhedralCone.from_literal(spec["C"]),
        K=PolyhedralCone.from_literal(spec["K"]),
        domain_box=box,
    )
    candidate = np.array(spec["candidate"], dtype=float)
    return problem, candidate, report_mod.source_hash(path.read_text())


def cmd_vecopt(args) -> int:
    if args.equivalence_suite:
        agree, mismatches = vecopt.definitional_equivalence_suite(args.n, args.seed or 7)
        print(f"definitional equivalence: {agree}/{args.n} agree")
        if mismatches:
            print(f"disagreeing seeds: {mismatches}")
        return 0 if not mismatches else 1

    if not args.problem:
        raise ConfigurationError("--problem FILE or --equivalence-suite required")
    schedule = _parse_schedule(args.schedule, args.seed)
    problem, xbar, digest = _load_vector_problem(Path(args.problem))
    t_start = time.perf_counter()
    if not vecopt.feasible(problem, xbar):
        g = problem.constraint(xbar)
        H = problem.K.halfspaces
        viol = H[int(np.argmin(H @ (-g)))] if H.shape[0] else None
        print(f"candidate {xbar.tolist()} infeasible: g = {g.tolist()}, "
              f"violated halfspace {None if viol is None else viol.tolist()}",
              file=sys.stderr)
        return 3

    F = vecopt.scalarize(problem, xbar)
    dirs = _parse_directions(args.directions, problem.dim)
    v_nec = vecopt.check_weak_min_necessary(problem, xbar, dirs, schedule)
    v_iso = vecopt.check_vector_isolated_order2(problem, xbar, dirs, schedule)
    verdicts = [v_nec, v_iso]

    oracles = {}
    if args.oracle == "on":
        radii = (0.5, 0.25, 0.125)
        rep = vecopt.vector_isolated_oracle(problem, xbar, radii, 13, 2, "lambda")
        oracles["vector_isolated_order2:lambda"] = _oracle_dict(rep)
        if problem.C.is_orthant():
            for variant in ("jimenez", "isolmin"):
                r = vecopt.vector_isolated_oracle(problem, xbar, radii, 13, 2, variant)
                oracles[f"vector_isolated_order2:{variant}"] = _oracle_dict(r)

    rep = {
        "schema_version": report_mod.SCHEMA_VERSION,
        "command": "vecopt",
        "seed": schedule.seed,
        "function": {"name": problem.name, "source": "file", "sha256": digest},
        "point": [float(c) for c in xbar],
        "schedule": _schedule_dict(schedule),
        "directions": {
            "generator": dirs.generator,
            "vectors": [list(d) for d in dirs.directions],
        },
        "zero_band": args.zero_band,
        "scalarization": {"F_at_candidate": F.eval(xbar)},
        "verdicts": [v.to_dict() for v in verdicts],
        "oracles": oracles,
    }
    if not args.no_timings:
        rep["timings"] = {"total_s": time.perf_counter() - t_start}
    _emit_report(rep, args.report)
    for v in verdicts:
        print(f"{v.condition_id}: {v.outcome}" + (f"  [{v.note}]" if v.note else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nsopt",
        description="Directional-derivative estimation and optimality-condition checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--schedule", default=None,
                        help="t0=..,tratio=..,eps0=..,epsratio=..,stages=..,samples=..")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--report", default=None, help="write the JSON report here")
    common.add_argument("--no-timings", action="store_true",
                        help="omit wall-clock timings (byte-stable reports)")
    common.add_argument("--zero-band", type=float, default=classify.DEFAULT_ZERO_BAND)
    common.add_argument("--threads", type=int, default=1,
                        help="cap on worker threads for direction sweeps")

    pa = sub.add_parser("analyze", parents=[common],
                        help="analyze one (function, point)")
    pa.add_argument("--function", required=True, help="corpus name or expression file")
    pa.add_argument("--point", required=True, help="comma-separated coordinates")
    pa.add_argument("--directions", default=None,
                    help="fibonacci:N | axes | explicit:FILE")
    pa.add_argument("--checks", default="all",
                    help=f"comma list from {','.join(POINT_CHECKS)} or 'all'")
    pa.add_argument("--oracle", choices=("on", "off"), default="off")
    pa.add_argument("--csv", default=None, help="write per-direction table here")
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("corpus", parents=[common],
                        help="reproduce the built-in expected results")
    pc.add_argument("--entry", default=None, help="run a single corpus entry")
    pc.set_defaults(func=cmd_corpus)

    pv = sub.add_parser("vecopt", parents=[common],
                        help="cone-constrained vector problem checks")
    pv.add_argument("--problem", default=None, help="problem JSON file")
    pv.add_argument("--directions", default=None)
    pv.add_argument("--oracle", choices=("on", "off"), default="off")
    pv.add_argument("--equivalence-suite", action="store_true")
    pv.add_argument("--n", type=int, default=100)
    pv.set_defaults(func=cmd_vecopt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return 2
    except NsoptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
