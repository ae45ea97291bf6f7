"""Command-line verification suites with JSON reports.

Each subcommand collects named checks, prints a report on stdout and exits
0 when every check passes, 1 when one fails, 2 on bad flags or unreadable
input, and 3 when an input tuple violates an invariant.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

from . import barhodge, monodromic, pathalg, plumbing
from .monodromic import InvariantError, MonodromicTuple, NormalForm

log = logging.getLogger("hodgemicro")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    parameters: dict
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    def check(self, name: str, expected, actual) -> bool:
        ok = expected == actual
        self.checks.append({"name": name, "status": "pass" if ok else "fail",
                            "expected": _jsonable(expected), "actual": _jsonable(actual)})
        return ok

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "checks": sorted(self.checks, key=lambda c: c["name"]),
            "data": self.data,
            "elapsed_ms": self.elapsed_ms,
        }


def _jsonable(x):
    if isinstance(x, dict):
        if all(isinstance(k, tuple) for k in x):
            return [[*k, v] for k, v in sorted(x.items())]
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _table_rows(table: dict, names=("a", "b")) -> list:
    return [{names[0]: k[0], names[1]: k[1], "dim": d} for k, d in sorted(table.items())]


def _seed() -> int:
    raw = os.environ.get("HODGE_MICRO_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"HODGE_MICRO_SEED must be an integer, got {raw!r}") from exc


def _positive(name: str, value: int, minimum: int = 1) -> None:
    if value < minimum:
        raise UsageError(f"--{name} must be >= {minimum}")


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _load_tuple(path: str) -> MonodromicTuple:
    """A tuple file holds {psi, phi, can, var} or a normal form {blocks: [...]}."""
    data = _load_json(path)
    try:
        if "blocks" in data:
            return monodromic.realize(NormalForm.from_json(data))
        return MonodromicTuple.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvariantError):
            raise
        raise UsageError(f"malformed tuple JSON: {exc}") from exc


# ---------------------------------------------------------------- homtables

def homtable_fixtures(smax: int) -> list:
    """(name, source block, target block, expected (hom, ext¹)) rows up to size smax."""
    rows = []
    for s in range(1, smax + 1):
        for t in range(1, s):
            rows.append((f"hom(A_{s},A_{t})", ("A", s), ("A", t), (t, t)))
        for t in range(1, s + 1):
            rows.append((f"hom(A_{s},P_{t})", ("A", s), ("P", t), (t, t)))
        rows.append((f"hom(Sky,A_{s})", ("Sky", 1), ("A", s), (1, 1)))
    return rows


def cmd_verify_homtables(args, report: Report,
                         catalog: Callable = monodromic.block_tuple) -> None:
    _positive("smax", args.smax)
    for name, src, tgt, expected in homtable_fixtures(args.smax):
        actual = monodromic.homext(catalog(*src), catalog(*tgt))
        report.check(name, list(expected), list(actual))


# ---------------------------------------------------------------- fourier

def _fourier_checks(report: Report, t: MonodromicTuple, tag: str) -> NormalForm:
    nf = monodromic.decompose(t)
    image, _ = monodromic.fourier_tuple(t)
    fl_nf = monodromic.fourier(nf)
    report.check(f"{tag}fourier_matches_block_rule", fl_nf.untwisted().label(),
                 monodromic.decompose(image).label())
    back, _ = monodromic.fourier_tuple(image)
    report.check(f"{tag}involution", nf.label(), monodromic.decompose(back).label())
    report.check(f"{tag}involution_blocks", nf.label(), monodromic.fourier(fl_nf).label())
    return fl_nf


def cmd_fourier(args, report: Report) -> None:
    if args.input:
        t = _load_tuple(args.input)
        fl_nf = _fourier_checks(report, t, "")
        report.data["normal_form"] = monodromic.decompose(t).label()
        report.data["fourier"] = fl_nf.label()
        report.data["fourier_blocks"] = fl_nf.to_json()["blocks"]
        return
    if not args.roundtrip:
        raise UsageError("fourier needs --input FILE or --roundtrip")
    _positive("dims", args.dims)
    _positive("trials", args.trials)
    rng = random.Random(report.parameters["seed"])
    failures = []
    for trial in range(args.trials):
        nf = monodromic.random_normal_form(rng, args.dims)
        t = monodromic.random_tuple(rng, nf)
        sub = Report("fourier", {})
        _fourier_checks(sub, t, "")
        if monodromic.fourier(monodromic.fourier(nf)) != nf or not sub.passed:
            failures.append((trial, nf.label()))
    report.check("roundtrip_failures", [], failures)


# ---------------------------------------------------------------- endo

def _markdown(table: dict) -> str:
    lines = ["| a | b | dim |", "|---|---|---|"]
    lines += [f"| {a} | {b} | {d} |" for (a, b), d in sorted(table.items())]
    return "\n".join(lines)


def cmd_endo(args, report: Report) -> None:
    _positive("n", args.n)
    _positive("a-cutoff", args.a_cutoff, 0)
    _positive("b-cutoff", args.b_cutoff, 0)
    n = args.n
    table = plumbing.endo_table(n, args.variant, args.a_cutoff, args.b_cutoff)
    report.data["table"] = _table_rows(table)
    if args.variant == "core":
        reference = {k: d for k, d in plumbing.ginzburg_table_ab(n, args.b_cutoff).items()
                     if abs(k[0]) <= args.a_cutoff}
        report.check("core_equals_ginzburg_cohomology", _jsonable(reference), _jsonable(table))
        report.check("core_origin_dim", n, table.get((0, 0), 0))
        report.check("core_vanishing_pattern", [],
                     [list(k) for k in table if k[0] < 0 or k[1] < 0
                      or (k[1] == 0 and k[0] > 0) or (k[0] == 0 and k[1] > 0)])
    else:
        resolved = plumbing.endo_table_resolved(n, "relcore", args.a_cutoff, args.b_cutoff)
        counts = plumbing.relcore_path_counts(n)
        totals = {ij: sum(cell.values()) for ij, cell in resolved.items()}
        expected = {(i, j): min(i, j) for i in range(1, n + 1) for j in range(1, n + 1)}
        report.check("relcore_supported_in_total_degree_zero", [],
                     [list(k) for k in table if k[0] != k[1]])
        report.check("relcore_totals_min_ij", _jsonable(expected), _jsonable(totals))
        report.check("relcore_totals_path_counts", _jsonable(counts), _jsonable(totals))
    if args.format == "md":
        report.data["markdown"] = _markdown(table)


# ---------------------------------------------------------------- koszul

_ALGEBRAS = {
    "agamma": pathalg.construct_AGamma,
    "lgamma": pathalg.construct_LGamma,
    "mgamma": pathalg.construct_MGamma,
}


def _ext_by_step(table: dict) -> dict:
    out = {}
    for (p, _), d in table.items():
        out[p] = out.get(p, 0) + d
    return out


def _nonzero(dims: dict) -> dict:
    return {k: v for k, v in sorted(dims.items()) if v}


def cmd_koszul(args, report: Report) -> None:
    _positive("n", args.n)
    _positive("cutoff", args.cutoff)
    n, cutoff = args.n, args.cutoff
    if args.algebra in ("lgamma", "mgamma") and n < 2:
        raise UsageError("--n must be >= 2 for lgamma and mgamma")
    alg = _ALGEBRAS[args.algebra](n)
    ext = pathalg.ext_kk_table(alg, cutoff)
    report.data["ext"] = _table_rows(ext, ("p", "adams"))
    if args.algebra == "agamma":
        g = pathalg.construct_Ginzburg(n)
        report.check("ext_equals_ginzburg_cohomology",
                     _jsonable(pathalg.dg_cohomology_table(g, cutoff)), _jsonable(ext))
        bar_cut = min(cutoff, 6)
        report.check(f"ginzburg_adams_koszul_cutoff_{bar_cut}", True,
                     pathalg.koszul_check(g, "adams", bar_cut))
        # reported for reference; Ext of A_Γ sits off total degree zero
        report.data["agamma_literal_adams_koszul"] = pathalg.koszul_check(alg, "adams", cutoff)
        return
    dual = "mgamma" if args.algebra == "lgamma" else "lgamma"
    dual_dims = pathalg.quotient(_ALGEBRAS[dual](n), cutoff).degree_dims()
    report.check("koszul_classical", True, pathalg.koszul_check(alg, "classical", cutoff))
    report.check(f"ext_equals_{dual}_dims", _jsonable(_nonzero(dual_dims)),
                 _jsonable(_nonzero(_ext_by_step(ext))))
    if args.algebra == "lgamma":
        own = pathalg.quotient(alg, cutoff).degree_dims()
        formula = {i: pathalg.L_dim_formula(n, i) for i in own}
        report.check("dim_formula", _jsonable(formula), _jsonable(own))
        report.check("projective_resolution", True, pathalg.verify_LGamma_resolution(n))


# ---------------------------------------------------------------- bar / decompose

def cmd_bar(args, report: Report) -> None:
    _positive("pn", args.pn)
    _positive("degree-cutoff", args.degree_cutoff, 0)
    alg = barhodge.cohomology_ring_Pn(args.pn)
    table = barhodge.bar_cohomology_table(alg, args.degree_cutoff)
    if args.degree_cutoff < 2 * args.pn:
        log.warning("degree cutoff %d is below 2n = %d; the comparison sees only the "
                    "first two classes", args.degree_cutoff, 2 * args.pn)
    report.data["table"] = _table_rows(table, ("degree", "weight"))
    report.check("bar_d_squared_zero", True,
                 barhodge.check_bar_d_squared(alg, args.degree_cutoff))
    report.check("matches_wrapping_sequence", True,
                 barhodge.compare_loop_hodge(args.pn, args.degree_cutoff))


def cmd_decompose(args, report: Report) -> None:
    t = _load_tuple(args.input)
    nf = monodromic.decompose(t)
    report.data["normal_form"] = nf.label()
    report.data["blocks"] = nf.to_json()["blocks"]
    report.check("resynthesis_rank_invariants",
                 _jsonable(monodromic.rank_invariants(t)),
                 _jsonable(monodromic.rank_invariants(monodromic.realize(nf))))
    report.check("dimensions", [t.psi, t.phi],
                 [monodromic.realize(nf).psi, monodromic.realize(nf).phi])


# ---------------------------------------------------------------- entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hodgemicro", description=__doc__.splitlines()[0])
    p.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify-homtables", help="Hom/Ext¹ fixtures between catalog blocks")
    s.add_argument("--smax", type=int, default=6)

    s = sub.add_parser("fourier", help="Fourier transform of a tuple, or random involution trials")
    s.add_argument("--input")
    s.add_argument("--roundtrip", action="store_true")
    s.add_argument("--dims", type=int, default=12)
    s.add_argument("--trials", type=int, default=100)

    s = sub.add_parser("endo", help="bigraded endomorphism table with cross-checks")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--variant", choices=("core", "relcore"), default="core")
    s.add_argument("--a-cutoff", type=int, default=12)
    s.add_argument("--b-cutoff", type=int, default=12)
    s.add_argument("--format", choices=("json", "md"), default="json")

    s = sub.add_parser("koszul", help="Koszul checks for A_Γ, L_Γ, M_Γ")
    s.add_argument("--algebra", choices=tuple(_ALGEBRAS), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--cutoff", type=int, default=8)

    s = sub.add_parser("bar", help="bar cohomology of H*(P^n) against the wrapping sequence")
    s.add_argument("--pn", type=int, required=True)
    s.add_argument("--degree-cutoff", type=int, default=12)

    s = sub.add_parser("decompose", help="normal form of a tuple")
    s.add_argument("--input", required=True)
    return p


_COMMANDS = {
    "verify-homtables": cmd_verify_homtables,
    "fourier": cmd_fourier,
    "endo": cmd_endo,
    "koszul": cmd_koszul,
    "bar": cmd_bar,
    "decompose": cmd_decompose,
}


def run(argv: list | None = None, catalog: Callable | None = None) -> tuple:
    """Parse and execute; returns (report or None, exit code).

    ``catalog`` replaces the block catalog for verify-homtables (a test hook
    for corrupted-fixture runs).
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        log.error("%s", exc)
        return None, EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s: %(message)s")
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "verbose")}
    start = time.perf_counter()
    try:
        if args.command == "fourier":
            params["seed"] = _seed()
        report = Report(args.command, params)
        handler = _COMMANDS[args.command]
        if args.command == "verify-homtables" and catalog is not None:
            handler(args, report, catalog)
        else:
            handler(args, report)
    except UsageError as exc:
        log.error("%s", exc)
        return None, EXIT_USAGE
    except InvariantError as exc:
        log.error("invariant violated: %s", exc)
        return None, EXIT_INVARIANT
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    for c in report.checks:
        if c["status"] == "fail":
            log.warning("check failed: %s", c["name"])
    return report, EXIT_OK if report.passed else EXIT_FAIL


def main(argv: list | None = None) -> int:
    report, code = run(argv)
    if report is not None:
        out = report.to_json()
        if report.parameters.get("format") == "md":
            print(report.data["markdown"])
            print()
            for c in out["checks"]:
                print(f"- {c['name']}: {c['status']}")
        else:
            print(json.dumps(out, indent=2, sort_keys=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
