"""Command-line front end: ``padicdyn --p P --a A <command> ...``.

Exit status is 0 on success, 1 when ``reproduce`` reports a Fail and 2 on a
usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .basins import (
    DEFAULT_TAIL_SEED,
    AnalysisConfig,
    Boundary,
    basin_scan,
    default_boundary_log_radius,
    siegel_scan,
)
from .claims import SUITES, Status, reports_json, run_suite
from .core import PAdic, PAdicError, Sphere, compact
from .dynamics import Kind, MapParams, Which, orbit_fate, parse_parameter
from .roots import padic_sqrt, sqrt_a2p4_verdict, sqrt_exists

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int
    a: Optional[str]
    precision: int
    max_iter: int
    kmax: int
    depth: Optional[int]
    seed: int
    fmt: str
    out: Optional[str]

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        if ns.precision < 16:
            raise UsageError("--precision must be at least 16")
        return cls(ns.p, ns.a, ns.precision, ns.max_iter, ns.kmax, ns.depth, ns.seed, ns.format, ns.out)

    @property
    def analysis(self) -> AnalysisConfig:
        return AnalysisConfig(depth=self.depth, tails=(None, self.seed), max_iter=self.max_iter, kmax=self.kmax)

    def params(self) -> MapParams:
        if self.a is None:
            raise UsageError("this command needs --a")
        try:
            return MapParams.parse(self.p, self.a, self.precision)
        except (ValueError, PAdicError) as exc:
            raise UsageError(f"cannot parse --a {self.a!r}: {exc}") from exc


@dataclass
class Output:
    """What a command produced, renderable in each format."""

    doc: dict
    text: str
    rows: Optional[list[Sequence]] = None
    header: Optional[Sequence[str]] = None
    exit_code: int = EXIT_OK

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.doc, indent=2) + "\n"
        if fmt == "csv":
            if self.rows is None:
                raise UsageError("csv output is available for scan and reproduce only")
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            w.writerows(self.rows)
            return buf.getvalue()
        return self.text if self.text.endswith("\n") else self.text + "\n"


def _value(text: str, cfg: RunConfig) -> PAdic:
    try:
        return parse_parameter(text, cfg.p, cfg.precision)
    except (ValueError, PAdicError) as exc:
        raise UsageError(f"cannot parse {text!r} as an element of Q_{cfg.p}: {exc}") from exc


# -- commands ---------------------------------------------------------------


def cmd_sqrt(cfg: RunConfig, target: str) -> Output:
    if target == "a2p4":
        params = cfg.params()
        verdict = sqrt_a2p4_verdict(params.a)
        radicand = params.a * params.a + 4
        exists, tag, decided = verdict.exists, verdict.case_tag.value, verdict.decided
    else:
        radicand = _value(target, cfg)
        try:
            exists, decided = sqrt_exists(radicand), True
        except PAdicError:
            exists, decided = False, False
        tag = "SQUARE_ROOT_CRITERION"
    doc = {"p": cfg.p, "target": target, "radicand": compact(radicand, 12),
           "exists": exists, "case_tag": tag, "decided": decided, "roots": None}
    lines = [f"sqrt({target}) in Q_{cfg.p}: exists={str(exists).lower()} case={tag}"
             + ("" if decided else " (undetermined at this precision)")]
    if exists:
        pair = padic_sqrt(radicand, cfg.precision)
        roots = []
        for name, r in (("root", pair.root), ("neg_root", pair.neg_root)):
            residue = r.unit_residue(1)
            roots.append({"branch": name, "value": compact(r), "unit_residue_mod_p": residue})
            lines.append(f"  {name}: {compact(r)}  (unit digit {residue} mod {cfg.p})")
        doc["roots"] = roots
    return Output(doc, "\n".join(lines))


def cmd_classify(cfg: RunConfig) -> Output:
    params = cfg.params()
    cl = params.classification
    partial = not cl.existence_decided
    doc = {
        "p": cfg.p,
        "a": compact(params.a, 12),
        "stratum": params.stratum,
        "a2p4": cl.verdict.to_dict(),
        "fixed_points": [r.to_dict() for r in cl.records],
        "partial": partial,
    }
    lines = [f"{params.label()}  stratum={params.stratum}  sqrt(a^2+4): "
             f"exists={str(cl.verdict.exists).lower()} ({cl.verdict.case_tag.value})"]
    for r in cl.records:
        lines.append(f"  {r.which.value}: {r.kind.value:<11} |lambda| = {r.multiplier_norm}  x = {compact(r.value, 12)}")
    if partial:
        lines.append("  partial listing: existence of x2, x3 undecided at this precision")
    return Output(doc, "\n".join(lines))


def cmd_orbit(cfg: RunConfig, x0_text: str) -> Output:
    params = cfg.params()
    x0 = _value(x0_text, cfg)
    fate = orbit_fate(params, x0, cfg.analysis.orbit)
    doc = {"p": cfg.p, "a": compact(params.a, 12), "x0": compact(x0, 12), "fate": fate.to_dict(),
           "label": fate.label}
    return Output(doc, f"x0 = {compact(x0, 12)}: {fate.label} after {fate.steps_used} steps ({fate.certificate})")


_REGION_RE = re.compile(r"^\s*([SB])\s*\(\s*(.+?)\s*,\s*(-?\d+)\s*\)\s*$")


def _center(params: MapParams, cfg: RunConfig, text: str) -> PAdic:
    if text == "-a":
        return -params.a
    if text in ("x2", "x3"):
        rec = params.classification.get(Which(text))
        if rec is None:
            raise UsageError(f"center {text} is unavailable: sqrt(a^2+4) does not exist for {params.label()}")
        return rec.value
    return _value(text, cfg)


def parse_region(params: MapParams, cfg: RunConfig, region_text: str) -> list[Sphere]:
    """``S(c, e)`` is one sphere; ``B(c, e)`` samples spheres ``e, e-1, e-2``."""
    m = _REGION_RE.match(region_text)
    if not m:
        raise UsageError(f"region must look like S(center, e) or B(center, e), got {region_text!r}")
    shape, center_text, e = m.group(1), m.group(2), int(m.group(3))
    c = _center(params, cfg, center_text)
    if shape == "S":
        return [Sphere(c, e)]
    return [Sphere(c, e - j) for j in range(3)]


def cmd_scan(cfg: RunConfig, region_text: str) -> Output:
    params = cfg.params()
    spheres = parse_region(params, cfg, region_text)
    result = basin_scan(params, spheres, cfg.analysis)
    rows = result.csv_rows()
    total = len(rows)
    counts = result.counts
    doc = {
        "p": cfg.p,
        "a": compact(params.a, 12),
        "region": region_text,
        "samples": total,
        "counts": counts,
        "entries": [{"point": pt, "valuation": v, "fate": f, "steps": s} for pt, v, f, s in rows],
    }
    lines = [f"{params.label()}  region {region_text}: {total} samples"]
    for label, n in counts.items():
        lines.append(f"  {label:<28} {n:>6}  {100.0 * n / total:6.2f}%")
    return Output(doc, "\n".join(lines), rows, ("point", "valuation", "fate", "steps"))


def cmd_siegel(cfg: RunConfig, which: str) -> Output:
    params = cfg.params()
    rec = params.classification.get(Which(which))
    if rec is None:
        raise UsageError(f"{which} does not exist for {params.label()}")
    if rec.kind is not Kind.INDIFFERENT:
        raise UsageError(f"{which} is {rec.kind.value}; Siegel scans need an indifferent fixed point")
    rb = default_boundary_log_radius(params)
    report = siegel_scan(params, rec, range(rb - 2, rb + 2), cfg.analysis, rb)
    doc = {"p": cfg.p, "a": compact(params.a, 12), **report.to_dict()}
    conclusion = {Boundary.OPEN_BALL: "OpenBall", Boundary.CLOSED_BALL: "ClosedBall",
                  Boundary.UNDETERMINED: "Undetermined"}[report.boundary_conclusion]
    lines = [f"{params.label()}  Siegel scan around {which}: {conclusion} at radius p^{rb}"]
    for rv in report.per_radius:
        d = rv.to_dict()
        extra = f"  counterexample {d['counterexample']}" if rv.counterexample is not None else ""
        lines.append(f"  S(x*, p^{rv.log_radius:>3}): {d['verdict']} ({rv.samples} samples){extra}")
    if report.witness is not None:
        lines.append(f"  boundary escape witness: {compact(report.witness, 12)}")
    return Output(doc, "\n".join(lines))


def cmd_reproduce(cfg: RunConfig, suite: str) -> Output:
    reports = run_suite(suite, cfg.analysis, cfg.precision)
    doc = json.loads(reports_json(reports))
    rows = [(r.claim_id, r.p, r.a, r.status.value) for r in reports]
    width = max(len(r.claim_id) for r in reports)
    lines = [f"{r.claim_id:<{width}}  p={r.p:<3} a={r.a:<28} {r.status.value}"
             + (f"  ({r.reason})" if r.reason else "") for r in reports]
    s = doc["summary"]
    lines.append(f"{s['Pass']} Pass, {s['Fail']} Fail, {s['Skipped']} Skipped")
    code = EXIT_FAIL if any(r.status is Status.FAIL for r in reports) else EXIT_OK
    return Output(doc, "\n".join(lines), rows, ("claim_id", "p", "a", "status"), code)


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padicdyn", description="Dynamics of f(x) = x^3 + a x^2 over Q_p.")
    ap.add_argument("--p", type=int, default=5, help="prime (default 5)")
    ap.add_argument("--a", help='parameter: "n/d", digit string "v;d0,d1,..." or "sqrt(<either>)"')
    ap.add_argument("--precision", type=int, default=64, help="p-adic digits carried (>= 16)")
    ap.add_argument("--max-iter", type=int, default=200)
    ap.add_argument("--kmax", type=int, default=100, help="hitting-time bound")
    ap.add_argument("--depth", type=int, default=None, help="sphere enumeration depth (default 3 for p<=7, else 2)")
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_TAIL_SEED, help="tail seed")
    ap.add_argument("--format", choices=("json", "csv", "text"), default="text")
    ap.add_argument("--out", help="write the report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sqrt", help="existence and roots of a square root")
    sp.add_argument("target", help='"a2p4" for a^2+4, or any literal such as -3')
    sub.add_parser("classify", help="fixed points, multipliers and kinds")
    sp = sub.add_parser("orbit", help="certified fate of one orbit")
    sp.add_argument("x0")
    sp = sub.add_parser("scan", help="fates of sampled sphere or ball points")
    sp.add_argument("region", help='"S(c,e)" or "B(c,e)" with c in 0, -a, x2, x3 or a literal')
    sp = sub.add_parser("siegel", help="sampled sphere invariance around x2 or x3")
    sp.add_argument("which", choices=("x2", "x3"))
    sp = sub.add_parser("reproduce", help="run the claim catalog")
    sp.add_argument("suite", choices=("all", *SUITES))
    return ap


def run(cfg: RunConfig, ns: argparse.Namespace) -> Output:
    if ns.command == "sqrt":
        return cmd_sqrt(cfg, ns.target)
    if ns.command == "classify":
        return cmd_classify(cfg)
    if ns.command == "orbit":
        return cmd_orbit(cfg, ns.x0)
    if ns.command == "scan":
        return cmd_scan(cfg, ns.region)
    if ns.command == "siegel":
        return cmd_siegel(cfg, ns.which)
    return cmd_reproduce(cfg, ns.suite)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = RunConfig.from_args(ns)
        result = run(cfg, ns)
        text = result.render(cfg.fmt)
    except ValueError as exc:
        print(f"padicdyn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
