"""Command-line front end: ``nonfill-scl {validate,paths,solve,extremal} INPUT``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import ParseError, PathExplosion, SclError
from .homology import check_null_homologous
from .lp import build_program, enumerate_vertices_bruteforce, solve, verify_certificate
from .model import format_rational, load_spec, validate
from .reassembly import extremal_surface
from .turnpaths import DEFAULT_PATH_CAP, build_side_graph, enumerate_taut_turn_paths

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_LP, EXIT_AUDIT, EXIT_CAP = 0, 1, 2, 3, 4, 5


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    format: str = "text"
    certificate: bool = False
    dump_lp: str | None = None
    path_cap: int = DEFAULT_PATH_CAP
    oracle: bool = False
    single_slot: bool = False


def _emit(out, text):
    out.write(text if text.endswith("\n") else text + "\n")


def _diag(err, code, message):
    err.write(f"error[{code}]: {message}\n")


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


def _print_report(report, cfg, out):
    if cfg.format == "json":
        _emit(out, _dumps(report.to_dict()))
        return
    _emit(out, f"status: {report.status}")
    if report.derived_genus is not None:
        _emit(out, f"genus: {report.derived_genus}")
    _emit(out, f"turn arcs: {len(report.derived_turn_arcs)}")
    for f in report.failures:
        loc = f" at {f.location}" if f.location else ""
        _emit(out, f"  {f.code}{loc}: {f.message}")


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    if cfg.path_cap < 1:
        _diag(err, "MALFORMED_INPUT", "--path-cap must be at least 1")
        return EXIT_MALFORMED
    try:
        spec = load_spec(cfg.input)
    except (ParseError, OSError) as e:
        _diag(err, getattr(e, "code", "MALFORMED_INPUT"), str(e.args[0]) if e.args else str(e))
        return EXIT_MALFORMED
    report = validate(spec)
    if cfg.command == "validate":
        _print_report(report, cfg, out)
        return EXIT_OK if report.valid else EXIT_INVALID
    if not report.valid:
        _print_report(report, cfg, err)
        for f in report.failures:
            _diag(err, f.code, f.message)
        return EXIT_INVALID
    try:
        graph = build_side_graph(report, single_slot=cfg.single_slot)
        paths = enumerate_taut_turn_paths(graph, cap=cfg.path_cap)
    except PathExplosion as e:
        _diag(err, e.code, str(e.args[0]))
        return EXIT_CAP
    except SclError as e:
        _diag(err, e.code, e.args[0])
        return EXIT_INVALID

    if cfg.command == "paths":
        return _paths(paths, graph, cfg, out)

    if not check_null_homologous(report):
        _diag(err, "NOT_NULL_HOMOLOGOUS", "the chain is not null-homologous; scl is undefined")
        return EXIT_INVALID
    try:
        inst = build_program(report, paths)
    except SclError as e:
        _diag(err, e.code, e.args[0])
        return EXIT_LP
    if cfg.dump_lp:
        with open(cfg.dump_lp, "w") as fh:
            fh.write(_dumps(inst.to_dict()) + "\n")
    result = solve(inst)
    if result.status != "optimal":
        _diag(err, "LP_" + result.status.upper(), f"linear program is {result.status}")
        return EXIT_LP
    if not verify_certificate(inst, result):
        _diag(err, "CERTIFICATE", "optimality certificate failed to verify")
        return EXIT_AUDIT
    if cfg.oracle:
        try:
            vertices = enumerate_vertices_bruteforce(inst)
        except SclError as e:
            _diag(err, e.code, e.args[0])
            return EXIT_AUDIT
        best = min((v for _, v in vertices), default=None)
        if best != result.value:
            _diag(err, "ORACLE_MISMATCH", f"brute force gives {best}, simplex {result.value}")
            return EXIT_AUDIT

    if cfg.command == "solve":
        return _solve_output(inst, result, cfg, out)

    rep = extremal_surface(report, inst, result)
    if cfg.format == "json":
        _emit(out, _dumps(rep.to_dict()))
    else:
        _emit(out, f"scl = {format_rational(rep.scl_value)}")
        _emit(out, f"N0 = {rep.N0}  N = {rep.N}  n_final = {rep.n_final}  chi_final = {rep.chi_final}")
        _emit(out, f"S3: chi = {rep.s3['euler_char']}, components = {len(rep.s3['components'])}")
        _emit(out, f"Sigma1 cover: {rep.sigma1_cover.sheets} sheets, "
                   f"{rep.branch_count_before} branch points before removal")
        for name, ok in rep.checks.items():
            _emit(out, f"  [{'ok' if ok else 'FAIL'}] {name}")
    return EXIT_OK if rep.ok else EXIT_AUDIT


def _paths(paths, graph, cfg, out):
    for i, p in enumerate(paths):
        rec = {"id": f"p{i}", "disk": p.disk, "steps": [str(s) for s in p.steps],
               "kappa": format_rational(p.kappa),
               "sides": [{"side": str(s), "dual": str(graph.dual(s))} for s in p.sides]}
        if cfg.format == "json":
            _emit(out, json.dumps(rec, sort_keys=True))
        else:
            _emit(out, f"p{i:<4} {p.disk:<6} kappa={rec['kappa']:<6} {p.label}")
    if cfg.format == "text":
        _emit(out, f"{len(paths)} taut turn paths")
    return EXIT_OK


def _solve_output(inst, result, cfg, out):
    if cfg.format == "json":
        doc = {"scl": format_rational(result.value), "status": result.status,
               "stats": result.stats}
        if cfg.certificate:
            doc["certificate"] = result.to_dict()
        _emit(out, _dumps(doc))
    else:
        _emit(out, f"scl = {format_rational(result.value)}")
        if cfg.certificate:
            _emit(out, _dumps(result.to_dict()))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="nonfill-scl",
                                 description="Exact scl of non-filling chains on closed surfaces.")
    ap.add_argument("command", choices=["validate", "paths", "solve", "extremal"])
    ap.add_argument("input", help="decomposition document (JSON, format 1)")
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--certificate", action="store_true", help="emit primal and dual vectors")
    ap.add_argument("--dump-lp", metavar="PATH", help="write the program as JSON")
    ap.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP)
    ap.add_argument("--oracle", action="store_true",
                    help="cross-check against brute-force vertex enumeration")
    ap.add_argument("--single-slot", action="store_true",
                    help="restrict sides to one slot between adjacent marked points")
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(RunConfig(ns.command, ns.input, ns.format, ns.certificate, ns.dump_lp,
                         ns.path_cap, ns.oracle, ns.single_slot))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
