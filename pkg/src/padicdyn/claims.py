"""Executable checks of the basin and Siegel-disc statements on sampled points.

Each claim takes a :class:`MapParams` and an :class:`AnalysisConfig` and
returns a :class:`ClaimReport`.  ``Pass`` means no sampled counterexample;
every ``Fail`` carries at least one concrete witness.
"""

from __future__ import annotations

import enum
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .basins import (
    DEFAULT_TAIL_SEED,
    AnalysisConfig,
    Boundary,
    HitStatus,
    ball_samples,
    boundary_escape_witness,
    hitting_time,
    siegel_scan,
    sphere_invariance,
    sphere_samples,
)
from .core import Ball, IndeterminateZero, PAdic, PrecisionError, compact, distance
from .dynamics import (
    Kind,
    MapParams,
    Which,
    apply_f,
    contraction_certificate,
    orbit_fate,
)
from .roots import (
    CaseTag,
    is_quadratic_residue,
    padic_sqrt,
    sqrt_a2p4_verdict,
    sqrt_exists,
)


class Status(str, enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    SKIPPED = "Skipped"


@dataclass
class ClaimReport:
    claim_id: str
    p: int
    a: str
    status: Status
    reason: Optional[str] = None
    counts: dict[str, int] = field(default_factory=dict)
    witnesses: list[tuple[str, str]] = field(default_factory=list)
    checks: list[tuple[str, bool]] = field(default_factory=list)
    depth: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "p": self.p,
            "a": self.a,
            "status": self.status.value,
            "reason": self.reason,
            "depth": self.depth,
            "counts": dict(sorted(self.counts.items())),
            "checks": [{"name": n, "ok": ok} for n, ok in self.checks],
            "witnesses": [{"point": pt, "observation": obs} for pt, obs in self.witnesses],
        }


class _Skip(Exception):
    pass


class _Probe:
    """Collects named checks, fate counts and witnesses for one claim run."""

    def __init__(self, params: MapParams, cfg: AnalysisConfig):
        self.params = params
        self.cfg = cfg
        self.p = params.p
        self.a = params.a
        self.checks: list[tuple[str, bool]] = []
        self.witnesses: list[tuple[str, str]] = []
        self.counts: Counter = Counter()

    def check(self, name: str, ok: bool, point: Optional[PAdic] = None, observation: str = "") -> bool:
        self.checks.append((name, bool(ok)))
        if not ok:
            where = compact(point, 12) if point is not None else f"a={compact(self.a, 12)}"
            self.witnesses.append((where, observation or f"{name} violated"))
        return bool(ok)

    def check_all(self, name: str, points: Iterable[PAdic], pred: Callable[[PAdic], bool], observation: str):
        """One check over many points; the first failing point is the witness."""
        for x in points:
            if not pred(x):
                return self.check(name, False, x, observation)
        return self.check(name, True)

    def note(self, point: PAdic, observation: str) -> None:
        self.witnesses.append((compact(point, 12), observation))

    def require(self, ok: bool, hypothesis: str) -> None:
        if not ok:
            raise _Skip(f"hypothesis not met: {hypothesis}")

    # -- frequently used quantities ------------------------------------

    @property
    def m(self) -> Optional[int]:
        return self.params.a_log_norm

    def samples(self, center: PAdic, log_radius: int) -> list[PAdic]:
        return sphere_samples(center, log_radius, self.cfg)

    def fate(self, x: PAdic):
        f = orbit_fate(self.params, x, self.cfg.orbit)
        self.counts[f.label] += 1
        return f

    def fixed(self, which: Which):
        rec = self.params.classification.get(which)
        if rec is None:
            raise _Skip("hypothesis not met: x2, x3 exist")
        return rec

    def nontrivial(self):
        self.require(len(self.params.classification.records) == 3, "x2, x3 exist")
        return self.params.classification.records[1:]


def _log_norm(x: PAdic) -> Optional[int]:
    """``e`` with ``|x| = p**e``; ``None`` for zero.  Raises on indeterminate zeros."""
    if x.is_exact_zero:
        return None
    if x.is_indeterminate:
        raise IndeterminateZero("norm undecidable at this precision")
    return -x.valuation


def _below_one(x: PAdic) -> bool:
    e = _log_norm(x)
    return e is None or e < 0


def _close(x: PAdic, y: PAdic, digits: int = 24) -> bool:
    bound = (x - y).log_norm_bound()
    return bound is None or bound <= -digits


def _norm_is(x: PAdic, e: Optional[int]) -> bool:
    try:
        return _log_norm(x) == e
    except IndeterminateZero:
        return False


def _residue_squares(p: int, k: int) -> set[int]:
    mod = p**k
    return {y * y % mod for y in range(mod)}


def _brute_square(value_u: int, v: int, p: int, squares: set[int], k: int) -> bool:
    return (value_u * p**v) % p**k in squares


# -- existence of sqrt(a^2 + 4) ----------------------------------------------


def sqrt_criterion(pr: _Probe) -> None:
    """Square-root criterion against residue enumeration mod p**5."""
    p = pr.p
    squares = _residue_squares(p, 5)
    ok, bad = True, None
    for v in (0, 1, 2):
        for u in range(1, p**3):
            if u % p == 0:
                continue
            x = PAdic.exact(u * p**v, p, 16)
            if sqrt_exists(x) != _brute_square(u, v, p, squares, 5):
                ok, bad = False, x
                break
        if not ok:
            break
    pr.check("criterion matches squares mod p^5", ok, bad, "criterion disagrees with enumeration")


def _sweep_units(p: int, n: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        u = rng.randrange(1, p**8)
        if u % p:
            out.append(u)
    return out


def a2p4_small_a(pr: _Probe) -> None:
    p, a = pr.p, pr.a
    pr.require(pr.m is None or pr.m < 0, "|a| < 1")

    def rule(k: Optional[int]) -> bool:
        return p != 2 or k is None or k >= 3

    v = sqrt_a2p4_verdict(a)
    k = None if a.is_exact_zero else a.valuation
    pr.check("verdict follows the table", v.exists == rule(k), observation=f"verdict {v.exists} for v(a)={k}")
    pr.check("verdict matches direct criterion", v.exists == sqrt_exists(a * a + 4))
    for kk in (1, 2, 3, 4):
        for u in _sweep_units(p, 20, DEFAULT_TAIL_SEED + 31 * p + kk):
            b = PAdic.exact(u * p**kk, p, pr.params.precision)
            vb = sqrt_a2p4_verdict(b)
            if vb.exists != rule(kk) or vb.exists != sqrt_exists(b * b + 4):
                pr.check(f"random units at v(a)={kk}", False, b, f"verdict {vb.exists}")
                break
        else:
            pr.check(f"random units at v(a)={kk}", True)


def a2p4_large_a(pr: _Probe) -> None:
    pr.require(pr.m is not None and pr.m > 0, "|a| > 1")
    a = pr.a
    t = a * a + 4
    v = sqrt_a2p4_verdict(a)
    pr.check("verdict exists", v.exists and v.case_tag is CaseTag.A_LARGE)
    pr.check("direct criterion agrees", sqrt_exists(t))
    r = padic_sqrt(t).root
    pr.check("root squares back", _close(r * r, t, t.precision - 2 + t.valuation), r)


def _degenerate_conditions(a: PAdic) -> tuple[bool, bool, bool]:
    p = a.p
    a0, a1, a2 = a.digits(3)
    s0 = a0 * a0 + 4
    first = s0 % p == 0
    second = first and (s0 // p + 2 * a0 * a1) % p == 0
    third = (a1 * a1 + 2 * a0 * a2) % p != 0
    return first, second, third


def a2p4_unit_a(pr: _Probe) -> None:
    p, a = pr.p, pr.a
    pr.require(pr.m == 0, "|a| = 1")
    v = sqrt_a2p4_verdict(a)
    direct = sqrt_exists(a * a + 4)
    if p in (2, 3):
        pr.check("no root for p in {2, 3}", not v.exists and not direct)
        return
    pr.check("verdict matches direct criterion", v.exists == direct)
    first, second, third = _degenerate_conditions(a)
    if not first:
        a0 = a.unit_residue(1)
        pr.check("residue test", v.exists == is_quadratic_residue(a0 * a0 + 4, p))
    elif second and third:
        pr.check("degenerate conditions imply existence", v.exists, observation="conditions hold, no root")
    # sweep over unit residues mod p**3
    for u in range(1, p**3):
        if u % p == 0:
            continue
        b = PAdic.exact(u, p, pr.params.precision)
        if sqrt_a2p4_verdict(b).exists != sqrt_exists(b * b + 4):
            pr.check("verdict sweep over units mod p^3", False, b)
            return
    pr.check("verdict sweep over units mod p^3", True)


# -- kinds of fixed points ---------------------------------------------------


def _unit_pair(pr: _Probe):
    pr.require(pr.m == 0, "|a| = 1")
    x2, x3 = pr.nontrivial()
    a = pr.a
    prod = x2.multiplier * x3.multiplier
    summ = x2.multiplier + x3.multiplier
    pr.check("f'(x2) f'(x3) = 9 + 2a^2", _close(prod, 9 + 2 * a * a))
    pr.check("f'(x2) + f'(x3) = 6 + a^2", _close(summ, 6 + a * a))
    return x2, x3


def unit_a_both_indifferent(pr: _Probe) -> None:
    x2, x3 = _unit_pair(pr)
    a = pr.a
    pr.check("|9 + 2a^2| = 1", _norm_is(9 + 2 * a * a, 0))
    pr.check("|6 + a^2| = 1", _norm_is(6 + a * a, 0))
    pr.check("both indifferent", x2.kind is Kind.INDIFFERENT and x3.kind is Kind.INDIFFERENT)


def unit_a_indifferent_degenerate_sum(pr: _Probe) -> None:
    x2, x3 = _unit_pair(pr)
    a = pr.a
    pr.check("|9 + 2a^2| = 1", _norm_is(9 + 2 * a * a, 0))
    pr.check("|6 + a^2| < 1", _log_norm(6 + a * a) is None or _log_norm(6 + a * a) < 0)
    pr.check("both indifferent", x2.kind is Kind.INDIFFERENT and x3.kind is Kind.INDIFFERENT)
    pr.check("|a^2 + 4| = 1", _norm_is(a * a + 4, 0))


def unit_a_mixed_kinds(pr: _Probe) -> None:
    x2, x3 = _unit_pair(pr)
    a = pr.a
    pr.check("|9 + 2a^2| < 1", _below_one(9 + 2 * a * a))
    pr.check("|6 + a^2| = 1", _norm_is(6 + a * a, 0))
    kinds = sorted([x2.kind.value, x3.kind.value])
    pr.check("one attractive, one indifferent", kinds == ["attractive", "indifferent"])
    pr.check("|a^2 + 4| = 1", _norm_is(a * a + 4, 0))


def vieta_identities(pr: _Probe) -> None:
    x2, x3 = pr.nontrivial()
    a = pr.a
    pr.check("x2 + x3 = -a", _close(x2.value + x3.value, -a))
    pr.check("x2 x3 = -1", _close(x2.value * x3.value, PAdic.exact(-1, pr.p, 64)))
    for rec in (x2, x3):
        pr.check(f"f'({rec.which.value}) = 3 - a x", _close(rec.multiplier, 3 - a * rec.value))
        pr.check(f"{rec.which.value} is fixed", _close(apply_f(pr.params, rec.value), rec.value))


def small_a_kinds(pr: _Probe) -> None:
    pr.require(pr.m is None or pr.m < 0, "|a| < 1")
    x2, x3 = pr.nontrivial()
    want = Kind.ATTRACTIVE if pr.p == 3 else Kind.INDIFFERENT
    for rec in (x2, x3):
        pr.check(f"|{rec.which.value}| = 1", _norm_is(rec.value, 0), rec.value)
        pr.check(f"{rec.which.value} is {want.value}", rec.kind is want, rec.value)


def unit_a_conditions_exclusive(pr: _Probe) -> None:
    p = pr.p
    pr.require(p >= 5, "p >= 5")
    for u in _sweep_units(p, 200, DEFAULT_TAIL_SEED + p):
        if (9 + 2 * u * u) % p == 0 and (6 + u * u) % p == 0:
            pr.check("never both |9+2a^2| < 1 and |6+a^2| < 1", False, PAdic.exact(u, p, 16))
            return
    pr.check("never both |9+2a^2| < 1 and |6+a^2| < 1", True)


def unit_a_kinds(pr: _Probe) -> None:
    x2, x3 = _unit_pair(pr)
    for rec in (x2, x3):
        pr.check(f"|{rec.which.value}| = 1", _norm_is(rec.value, 0), rec.value)
    pr.check("not both attractive", not (x2.kind is Kind.ATTRACTIVE and x3.kind is Kind.ATTRACTIVE))
    pr.check("no repelling point", Kind.REPELLING not in (x2.kind, x3.kind))


def large_a_kinds(pr: _Probe) -> None:
    m = pr.m
    pr.require(m is not None and m > 0, "|a| > 1")
    recs = pr.nontrivial()
    rep = [r for r in recs if r.kind is Kind.REPELLING]
    ind = [r for r in recs if r.kind is Kind.INDIFFERENT]
    pr.check("one repelling, one indifferent", len(rep) == 1 and len(ind) == 1)
    if rep and ind:
        pr.check("|lambda| = |a|^2 at the repelling point", rep[0].multiplier_norm.exponent == 2 * m)
        pr.check("|x| = |a| at the repelling point", _norm_is(rep[0].value, m), rep[0].value)
        pr.check("|x| = 1/|a| at the indifferent point", _norm_is(ind[0].value, -m), ind[0].value)


# -- basins and Siegel discs -------------------------------------------------


def local_factorisation(pr: _Probe) -> None:
    """Cubic factorisation around each fixed point and the linear norm law."""
    params = pr.params
    for rec in params.classification.records:
        xs, lam = rec.value, rec.multiplier
        c = 3 * xs + params.a
        lam_e = None if lam.is_exact_zero else _log_norm(lam)
        pts = pr.samples(xs, -1) + pr.samples(xs, 0)
        ok_fac = ok_law = True
        for x in pts:
            g = x - xs
            img = apply_f(params, x) - xs
            if ok_fac and not _close(img, g * (lam + c * g + g * g), 20):
                ok_fac = pr.check(f"factorisation at {rec.which.value}", False, x)
            ge = _log_norm(g)
            cb = c.log_norm_bound()
            hyp = lam_e is not None and max((cb if cb is not None else -10**9) + ge, 2 * ge) < lam_e
            if ok_law and hyp and not _norm_is(img, ge + lam_e):
                ok_law = pr.check(f"|f(x) - x*| = |g||lambda| at {rec.which.value}", False, x)
        if ok_fac:
            pr.check(f"factorisation at {rec.which.value}", True)
        if ok_law:
            pr.check(f"|f(x) - x*| = |g||lambda| at {rec.which.value}", True)


def certified_balls_hold(pr: _Probe) -> None:
    """Certified balls lie in the basin (attractive) or the Siegel disc (indifferent)."""
    params = pr.params
    for rec, ball in params.certified_balls:
        e = ball.log_radius
        name = rec.which.value
        pr.check(f"certificate holds at {name}", contraction_certificate(params, rec, e))
        pts = ball_samples(rec.value, e, pr.cfg)[1:]
        if rec.kind is Kind.ATTRACTIVE:
            pr.check_all(
                f"contraction at {name}", pts,
                lambda x: (apply_f(params, x) - rec.value).log_norm_bound() < _log_norm(x - rec.value),
                "image not closer to the fixed point",
            )
            pr.check_all(f"samples converge to {name}", pts, lambda x: pr.fate(x).converged_to(rec.which),
                         "sample did not converge")
        else:
            pr.check_all(
                f"spheres invariant at {name}", pts,
                lambda x: _norm_is(apply_f(params, x) - rec.value, _log_norm(x - rec.value)),
                "image left the sphere",
            )


def _large(pr: _Probe, need_condition: bool = True) -> int:
    m = pr.m
    pr.require(m is not None and m > 0, "|a| > 1")
    if need_condition:
        pr.require(m % 2 == 1, "sqrt|a| is not a power of p (v(a) odd)")
    return m


def _image_norm_check(pr: _Probe, name: str, pts: list[PAdic], e_out: int, iterations: int = 1) -> None:
    def lands(x: PAdic) -> bool:
        y = x
        for _ in range(iterations):
            y = apply_f(pr.params, y)
        return _norm_is(y, e_out)

    pr.check_all(name, pts, lands, f"image norm differs from p^{e_out}")


def _escapes(pr: _Probe, name: str, pts: list[PAdic]) -> None:
    pr.check_all(name, pts, lambda x: pr.fate(x).outcome.value == "escaped", "sample did not escape")


def large_a_inner_sphere(pr: _Probe) -> None:
    m = _large(pr, need_condition=False)
    zero = PAdic.zero(pr.p)
    _image_norm_check(pr, "f(S_r1(0)) in S_r1(0)", pr.samples(zero, -m), -m)
    pr.check_all("samples of B_r1(0) converge to x1", ball_samples(zero, -m - 1, pr.cfg),
                 lambda x: pr.fate(x).converged_to(Which.X1), "sample did not converge")


def large_a_outer_escape(pr: _Probe) -> None:
    m = _large(pr)
    zero = PAdic.zero(pr.p)
    for e in (m + 1, m + 2):
        pts = pr.samples(zero, e)
        _image_norm_check(pr, f"|f(x)| = |x|^3 on S_p^{e}(0)", pts, 3 * e)
        _escapes(pr, f"S_p^{e}(0) escapes", pts)


def _radii_between(lo: int, hi: int, skip: tuple[int, ...] = ()) -> list[int]:
    return [e for e in range(lo + 1, hi) if e not in skip]


def large_a_norm_chain(pr: _Probe) -> None:
    m = _large(pr)
    radii = _radii_between(-m, m, skip=(0,))
    pr.require(bool(radii), "some integer log-radius lies in (r1, r0) or (r0, |a|)")
    zero = PAdic.zero(pr.p)
    for e in radii:
        chain, cur = [e], e
        while cur <= m and len(chain) <= 64:
            cur = 2 * cur + m
            chain.append(cur)
        pr.check(f"norm chain from p^{e} avoids 1 and exceeds |a|", 0 not in chain[1:] and cur > m,
                 observation=f"chain {chain}")
        pts = pr.samples(zero, e)
        _image_norm_check(pr, f"f(S_p^{e}(0)) in S_p^{2 * e + m}(0)", pts, 2 * e + m)
        _escapes(pr, f"S_p^{e}(0) escapes", pts)


def large_a_unit_sphere_image(pr: _Probe) -> None:
    m = _large(pr)
    _image_norm_check(pr, "f(S_r0(0)) in S_|a|(0)", pr.samples(PAdic.zero(pr.p), 0), m)


def large_a_norm_identity(pr: _Probe) -> None:
    m = _large(pr)
    a = pr.a
    params = pr.params

    def law(x: PAdic) -> bool:
        d = _log_norm(x + a)
        return d is not None and d <= m and _norm_is(apply_f(params, x), 2 * m + d)

    pr.check_all("|f(x)| = |a|^2 |x + a| on S_|a|(0)", pr.samples(PAdic.zero(pr.p), m), law,
                 "norm identity fails")


def large_a_preimage_ball(pr: _Probe) -> None:
    m = _large(pr)
    neg_a = -pr.a
    target = Ball(PAdic.zero(pr.p), -m - 1)
    pts = ball_samples(neg_a, -3 * m - 1, pr.cfg)
    pr.check_all("B_r3(-a) reaches B_r1(0) with T = 1", pts,
                 lambda x: hitting_time(pr.params, x, target, pr.cfg.kmax).T == 1, "hitting time differs from 1")
    pr.check_all("B_r3(-a) converges to x1", pts, lambda x: pr.fate(x).converged_to(Which.X1),
                 "sample did not converge")
    _image_norm_check(pr, "f(S_r3(-a)) in S_r1(0)", pr.samples(neg_a, -3 * m), -m)


def large_a_r1_sphere(pr: _Probe) -> None:
    m = _large(pr)
    _image_norm_check(pr, "f(S_r1(-a)) in S_|a|(0)", pr.samples(-pr.a, -m), m)


def large_a_r2_sphere(pr: _Probe) -> None:
    m = _large(pr)
    pts = pr.samples(-pr.a, -2 * m)
    _image_norm_check(pr, "f(S_r2(-a)) in S_r0(0)", pts, 0)
    _image_norm_check(pr, "f^2(S_r2(-a)) in S_|a|(0)", pts, m, iterations=2)


def large_a_minus_a_spheres(pr: _Probe) -> None:
    m = _large(pr)
    neg_a = -pr.a
    radii = _radii_between(-3 * m, -m, skip=(-2 * m,)) + list(range(-m + 1, m + 1))
    for e in radii:
        pts = [x for x in pr.samples(neg_a, e) if _norm_is(x, m)]
        if not pts:
            continue
        _image_norm_check(pr, f"f(S_p^{e}(-a)) in S_p^{2 * m + e}(0)", pts, 2 * m + e)
        _escapes(pr, f"S_p^{e}(-a) escapes", pts)


def large_a_basins(pr: _Probe) -> None:
    m = _large(pr)
    params, cfg = pr.params, pr.cfg
    zero = PAdic.zero(pr.p)
    pr.check_all("B_r1(0) in A(x1)", ball_samples(zero, -m - 1, cfg),
                 lambda x: pr.fate(x).converged_to(Which.X1), "sample did not converge")
    pr.check_all("S_r1(0) outside A(x1)", pr.samples(zero, -m),
                 lambda x: not pr.fate(x).converged_to(Which.X1), "sample converged")
    target = Ball(-params.a, -3 * m - 1)
    region = pr.samples(zero, 0) + pr.samples(zero, m) + ball_samples(-params.a, -3 * m - 1, cfg)[1:]
    hits = 0
    for x in region:
        rec = hitting_time(params, x, target, cfg.kmax)
        fate = pr.fate(x)
        if rec.status is HitStatus.HIT:
            hits += 1
            if not fate.converged_to(Which.X1):
                pr.check("D[S_r0 u S_|a|, B_r3(-a)] in A(x1)", False, x, f"hit at T={rec.T}, fate {fate.label}")
                break
        elif fate.converged_to(Which.X1):
            pr.check("A(x1) on S_r0 u S_|a| lies in D", False, x, f"converged without hitting ({rec.status.value})")
            break
    else:
        pr.check("fates agree with hitting times on S_r0 u S_|a|", True)
    pr.check("D nonempty", hits > 0)
    others = [e for e in _radii_between(-m, m, skip=(0,))] + [m + 1]
    for e in others:
        pr.check_all(f"S_p^{e}(0) outside A(x1)", pr.samples(zero, e),
                     lambda x: not pr.fate(x).converged_to(Which.X1), "sample converged")
    ind = [r for r in pr.nontrivial() if r.kind is Kind.INDIFFERENT]
    pr.check("one indifferent fixed point", len(ind) == 1)
    for rec in ind:
        for e in (-m - 1, -m - 2):
            rv = sphere_invariance(params, rec.value, e, pr.samples(rec.value, e))
            pr.check(f"SI({rec.which.value}) sphere p^{e} invariant", rv.invariant, rv.counterexample)
        stays = [
            x for x in pr.samples(rec.value, -m)
            if _norm_is(x, -m) and _norm_is(apply_f(params, x), -m)
        ]
        pr.check(f"some sample of S_r1({rec.which.value}) stays in S_r1(0)", bool(stays))


def _small(pr: _Probe) -> None:
    pr.require(pr.m is None or pr.m < 0, "|a| < 1")


def small_a_basin_of_zero(pr: _Probe) -> None:
    _small(pr)
    zero = PAdic.zero(pr.p)
    pr.check_all("B_1(0) in A(x1)", ball_samples(zero, -1, pr.cfg),
                 lambda x: pr.fate(x).converged_to(Which.X1), "sample did not converge")

    def pinned(x: PAdic) -> bool:
        y = x
        for _ in range(pr.cfg.max_iter):
            y = apply_f(pr.params, y)
            if not _norm_is(y, 0):
                return False
        return True

    pr.check_all("S_1(0) keeps norm 1", pr.samples(zero, 0), pinned, "norm left 1")


def _siegel_expectation(pr: _Probe, expect_open: Callable, radii=(-1, 0, 1)) -> None:
    for rec in pr.nontrivial():
        if rec.kind is not Kind.INDIFFERENT:
            continue
        rep = siegel_scan(pr.params, rec, radii, pr.cfg)
        want = Boundary.OPEN_BALL if expect_open(rec) else Boundary.CLOSED_BALL
        name = rec.which.value
        pr.counts[f"siegel:{name}:{rep.boundary_conclusion.value}"] += 1
        rv = rep.verdict_at(rep.boundary_log_radius)
        witness = rep.witness or (rv.counterexample if rv else None)
        if witness is not None:
            pr.note(witness, f"S_1({name}) point whose image falls inside B_1({name})")
        pr.check(f"SI({name}) is {want.value}", rep.boundary_conclusion is want, witness or rec.value,
                 f"scan concluded {rep.boundary_conclusion.value}")
        inner = rep.verdict_at(-1)
        pr.check(f"S_p^-1({name}) invariant", inner.invariant, inner.counterexample)


def small_a_siegel_boundary(pr: _Probe) -> None:
    _small(pr)
    pr.require(pr.p != 3, "p != 3")
    root_m3 = sqrt_exists(PAdic.exact(-3, pr.p, 16))
    _siegel_expectation(pr, lambda rec: root_m3)
    for rec in pr.nontrivial():
        outer = sphere_invariance(pr.params, rec.value, 1, pr.samples(rec.value, 1))
        pr.check(f"S_p({rec.which.value}) not invariant", not outer.invariant)


def small_a_separation(pr: _Probe) -> None:
    _small(pr)
    pr.require(pr.p != 3, "p != 3")
    x2, x3 = pr.nontrivial()
    d = distance(x2.value, x3.value).exponent
    if pr.p == 2:
        pr.check("|x2 - x3| = 1/2", d == -1)
        b2, b3 = Ball(x2.value, 0), Ball(x3.value, 0)
        pts = ball_samples(x2.value, 1, pr.cfg, levels=2)
        pr.check_all("B_1(x2) and B_1(x3) agree on samples", pts,
                     lambda x: b2.contains(x) == b3.contains(x), "membership differs")
    else:
        pr.check("|x2 - x3| = 1", d == 0)
        b3 = Ball(x3.value, -1)
        pr.check_all("B_1(x2) misses B_1(x3)", ball_samples(x2.value, -1, pr.cfg),
                     lambda x: not b3.contains(x), "sample in both balls")


def small_a_p3_basins(pr: _Probe) -> None:
    _small(pr)
    pr.require(pr.p == 3, "p = 3")
    for rec in pr.nontrivial():
        name = rec.which.value
        pr.check_all(f"B_1({name}) in A({name})", ball_samples(rec.value, -1, pr.cfg),
                     lambda x: pr.fate(x).converged_to(rec.which), "sample did not converge")
        pr.check_all(f"S_1({name}) outside A({name})", pr.samples(rec.value, 0),
                     lambda x: not pr.fate(x).converged_to(rec.which), "sample converged")
        pr.check_all(
            f"f(S_1({name})) in S_1({name})", pr.samples(rec.value, 0),
            lambda x: _norm_is(apply_f(pr.params, x) - rec.value, 0), "image left the sphere",
        )


def small_a_escape_witness(pr: _Probe) -> None:
    _small(pr)
    pr.require(pr.p != 3, "p != 3")
    root_m3 = sqrt_exists(PAdic.exact(-3, pr.p, 16))
    for rec in pr.nontrivial():
        name = rec.which.value
        disc = -3 - 9 * pr.a * rec.value
        pr.check(f"sqrt(-3 - 9a {name}) exists iff sqrt(-3) does", sqrt_exists(disc) == root_m3)
        w = boundary_escape_witness(pr.params, rec)
        pr.check(f"witness at {name} iff sqrt(-3)", (w is not None) == root_m3, w)
        if w is not None:
            pr.note(w, f"|f(x) - {name}| < 1 on S_1({name})")
        rv = sphere_invariance(pr.params, rec.value, 0, pr.samples(rec.value, 0))
        pr.check(f"S_1({name}) invariant iff no sqrt(-3)", rv.invariant != root_m3, rv.counterexample)


_SQRT_MINUS_3 = {2: False, 5: False, 11: False, 7: True, 13: True}


def sqrt_minus_3_table(pr: _Probe) -> None:
    p = pr.p
    pr.require(p in _SQRT_MINUS_3, "p in {2, 5, 7, 11, 13}")
    got = sqrt_exists(PAdic.exact(-3, p, 16))
    k = 3 if p == 2 else 1
    brute = (-3) % p**k in _residue_squares(p, k)
    pr.check("sqrt(-3) matches the listed answer", got == _SQRT_MINUS_3[p])
    pr.check("sqrt(-3) matches residue enumeration", got == brute)


def _unit(pr: _Probe) -> None:
    pr.require(pr.m == 0, "|a| = 1")


def unit_a_basins(pr: _Probe) -> None:
    _unit(pr)
    params, cfg = pr.params, pr.cfg
    zero = PAdic.zero(pr.p)
    pr.check_all("B_1(0) in A(x1)", ball_samples(zero, -1, cfg),
                 lambda x: pr.fate(x).converged_to(Which.X1), "sample did not converge")
    rec = hitting_time(params, -params.a, Ball(zero, -1), cfg.kmax)
    pr.check("-a hits B_1(0) in one step", rec.T == 1, -params.a, f"T={rec.T}")
    for e in (1, 2):
        _escapes(pr, f"S_p^{e}(0) escapes", pr.samples(zero, e))
    target = Ball(-params.a, -1)
    hits, times = 0, Counter()
    for x in pr.samples(zero, 0):
        h = hitting_time(params, x, target, cfg.kmax)
        fate = pr.fate(x)
        if h.status is HitStatus.HIT:
            hits += 1
            times[h.T] += 1
            if not fate.converged_to(Which.X1):
                pr.check("D[S_1(0), B_1(-a)] in A(x1)", False, x, f"T={h.T}, fate {fate.label}")
                break
        elif fate.converged_to(Which.X1):
            pr.check("A(x1) on S_1(0) lies in D", False, x, f"converged without hitting ({h.status.value})")
            break
    else:
        pr.check("fates agree with hitting times on S_1(0)", True)
    for t, n in times.items():
        pr.counts[f"hit:T={t}"] += n
    pr.check("D[S_1(0), B_1(-a)] nonempty within kmax", hits > 0)


def _radical(pr: _Probe, rec) -> PAdic:
    a = pr.a
    return a * a - 3 + a * rec.value


def unit_a_siegel_boundary(pr: _Probe) -> None:
    _unit(pr)
    recs = pr.nontrivial()
    pr.require(all(r.kind is Kind.INDIFFERENT for r in recs), "x2, x3 indifferent")
    a = pr.a
    small_t = _below_one(a * a + 4)
    if small_t:
        root_m5 = pr.p > 5 and sqrt_exists(PAdic.exact(-5, pr.p, 16))
        _siegel_expectation(pr, lambda rec: root_m5)
        pr.check("|x2 - x3| < 1, so SI(x2) = SI(x3)", distance(recs[0].value, recs[1].value).exponent < 0)
    else:
        _siegel_expectation(pr, lambda rec: sqrt_exists(_radical(pr, rec)))


def unit_a_degenerate_siegel(pr: _Probe) -> None:
    _unit(pr)
    a = pr.a
    pr.require(_below_one(a * a + 4), "|a^2 + 4| < 1")
    pr.require(pr.p >= 7, "p >= 7")
    pr.nontrivial()
    pr.check("|6 + a^2| = 1", _norm_is(6 + a * a, 0))
    pr.check("-48 - 7a^2 = -20 - 7(a^2 + 4)", _close(-48 - 7 * a * a, -20 - 7 * (a * a + 4)))
    root_m5 = sqrt_exists(PAdic.exact(-5, pr.p, 16))
    k = 1
    pr.check("sqrt(-5) matches residue enumeration", root_m5 == ((-5) % pr.p**k in _residue_squares(pr.p, k)))
    _siegel_expectation(pr, lambda rec: root_m5)


def unit_a_p5_closed_disc(pr: _Probe) -> None:
    _unit(pr)
    a = pr.a
    pr.require(pr.p == 5, "p = 5")
    pr.require(_below_one(a * a + 4), "|a^2 + 4| < 1")
    pr.nontrivial()
    _siegel_expectation(pr, lambda rec: False)


def unit_a_coefficient_open_disc(pr: _Probe) -> None:
    _unit(pr)
    a = pr.a
    pr.require(_norm_is(a * a + 4, 0), "|a^2 + 4| = 1")
    pr.require(_below_one(3 * a * a - a + 20), "|3a^2 - a + 20| < 1")
    pr.nontrivial()
    _siegel_expectation(pr, lambda rec: True)


def unit_a_attractive_basin(pr: _Probe) -> None:
    _unit(pr)
    params, cfg = pr.params, pr.cfg
    recs = pr.nontrivial()
    att = [r for r in recs if r.kind is Kind.ATTRACTIVE]
    pr.require(len(att) == 1, "one attractive and one indifferent fixed point")
    rec = att[0]
    name = rec.which.value
    xs = rec.value
    pr.check_all(f"B_1({name}) in A({name})", ball_samples(xs, -1, cfg),
                 lambda x: pr.fate(x).converged_to(rec.which), "sample did not converge")
    gate = -2 * xs - params.a
    pr.check_all(f"B_1(-2{name} - a) in A({name})", ball_samples(gate, -1, cfg),
                 lambda x: pr.fate(x).converged_to(rec.which), "sample did not converge")
    for e in (1, 2):
        pr.check_all(f"S_p^{e}({name}) outside A({name})", pr.samples(xs, e),
                     lambda x: not pr.fate(x).converged_to(rec.which), "sample converged")
    target = Ball(gate, -1)
    hits = 0
    for x in pr.samples(xs, 0):
        h = hitting_time(params, x, target, cfg.kmax)
        fate = pr.fate(x)
        if h.status is HitStatus.HIT:
            hits += 1
            if not fate.converged_to(rec.which):
                pr.check(f"D[S_1({name}), B_1(-2{name}-a)] in A({name})", False, x, f"fate {fate.label}")
                break
        elif fate.converged_to(rec.which):
            pr.check(f"A({name}) on S_1({name}) lies in D", False, x, f"converged without hitting ({h.status.value})")
            break
    else:
        pr.check(f"fates agree with hitting times on S_1({name})", True)
    pr.check("D nonempty", hits > 0)


CLAIMS: dict[str, Callable[[_Probe], None]] = {
    "sqrt-criterion": sqrt_criterion,
    "a2p4-small-a": a2p4_small_a,
    "a2p4-large-a": a2p4_large_a,
    "a2p4-unit-a": a2p4_unit_a,
    "vieta-identities": vieta_identities,
    "unit-a-both-indifferent": unit_a_both_indifferent,
    "unit-a-indifferent-degenerate-sum": unit_a_indifferent_degenerate_sum,
    "unit-a-mixed-kinds": unit_a_mixed_kinds,
    "small-a-kinds": small_a_kinds,
    "unit-a-conditions-exclusive": unit_a_conditions_exclusive,
    "unit-a-kinds": unit_a_kinds,
    "large-a-kinds": large_a_kinds,
    "local-factorisation": local_factorisation,
    "certified-balls": certified_balls_hold,
    "large-a-inner-sphere": large_a_inner_sphere,
    "large-a-outer-escape": large_a_outer_escape,
    "large-a-norm-chain-escape": large_a_norm_chain,
    "large-a-unit-sphere-image": large_a_unit_sphere_image,
    "large-a-norm-identity": large_a_norm_identity,
    "large-a-preimage-ball-hits-zero": large_a_preimage_ball,
    "large-a-r1-sphere-around-minus-a": large_a_r1_sphere,
    "large-a-r2-sphere-around-minus-a": large_a_r2_sphere,
    "large-a-spheres-around-minus-a-escape": large_a_minus_a_spheres,
    "large-a-basins": large_a_basins,
    "small-a-basin-of-zero": small_a_basin_of_zero,
    "small-a-siegel-boundary": small_a_siegel_boundary,
    "small-a-fixed-point-separation": small_a_separation,
    "small-a-p3-basins": small_a_p3_basins,
    "small-a-escape-witness": small_a_escape_witness,
    "sqrt-minus-3-table": sqrt_minus_3_table,
    "unit-a-basins": unit_a_basins,
    "unit-a-siegel-boundary": unit_a_siegel_boundary,
    "unit-a-degenerate-siegel": unit_a_degenerate_siegel,
    "unit-a-p5-closed-disc": unit_a_p5_closed_disc,
    "unit-a-coefficient-open-disc": unit_a_coefficient_open_disc,
    "unit-a-attractive-basin": unit_a_attractive_basin,
}

_SMALL = [(2, "8"), (3, "3"), (5, "5"), (7, "7"), (11, "11")]
_LARGE = [(5, "1/5"), (3, "1/3")]
_CONSTRUCTED = [(13, "sqrt(165)"), (29, "sqrt(837)")]

# (claim id, p, a) in report order within each claim
CATALOG: list[tuple[str, int, str]] = (
    [("sqrt-criterion", p, "1") for p in (2, 3, 5, 7)]
    + [("a2p4-small-a", p, a) for p, a in [(2, "2"), (2, "4"), (2, "8"), (2, "16"), (3, "3"), (5, "5"), (7, "7")]]
    + [("a2p4-large-a", p, a) for p, a in [(2, "1/2"), (3, "1/3"), (5, "1/5"), (7, "1/49")]]
    + [("a2p4-unit-a", p, a) for p, a in [(2, "1"), (3, "1"), (5, "0;1,2,2"), (11, "4"), (11, "1"), (7, "2")]]
    + [("vieta-identities", p, a) for p, a in [(11, "1"), (11, "4"), (5, "1/5"), (7, "7")]]
    + [("unit-a-both-indifferent", 5, "0;1,2,2"), ("unit-a-both-indifferent", 7, "2"), ("unit-a-indifferent-degenerate-sum", 11, "4"), ("unit-a-mixed-kinds", 11, "1")]
    + [("small-a-kinds", p, a) for p, a in _SMALL]
    + [("unit-a-conditions-exclusive", p, "1") for p in (5, 7, 11, 13)]
    + [("unit-a-kinds", p, a) for p, a in [(5, "0;1,2,2"), (7, "2"), (11, "4"), (11, "1")]]
    + [("large-a-kinds", p, a) for p, a in _LARGE + [(2, "1/2")]]
    + [("local-factorisation", p, a) for p, a in [(11, "1"), (7, "7"), (5, "1/5"), (3, "3")]]
    + [("certified-balls", p, a) for p, a in [(11, "1"), (7, "7"), (5, "1/5"), (3, "3")]]
    + [(s, p, a) for s in ("large-a-inner-sphere", "large-a-outer-escape", "large-a-unit-sphere-image", "large-a-norm-identity", "large-a-preimage-ball-hits-zero", "large-a-r1-sphere-around-minus-a", "large-a-r2-sphere-around-minus-a", "large-a-spheres-around-minus-a-escape")
       for p, a in _LARGE]
    + [("large-a-norm-chain-escape", p, a) for p, a in [(5, "1/125"), (3, "1/27")]]
    + [("large-a-basins", p, a) for p, a in _LARGE]
    + [("small-a-basin-of-zero", p, a) for p, a in _SMALL]
    + [(s, p, a) for s in ("small-a-siegel-boundary", "small-a-fixed-point-separation") for p, a in _SMALL if p != 3]
    + [("small-a-p3-basins", 3, "3"), ("small-a-p3-basins", 3, "9")]
    + [("small-a-escape-witness", p, a) for p, a in [(2, "8"), (5, "5"), (7, "7"), (11, "11"), (13, "13")]]
    + [("sqrt-minus-3-table", p, "1") for p in (2, 5, 7, 11, 13)]
    + [("unit-a-basins", p, a) for p, a in [(5, "1"), (7, "3")]]
    + [("unit-a-siegel-boundary", p, a) for p, a in [(5, "0;1,2,2"), (11, "4")] + _CONSTRUCTED]
    + [("unit-a-degenerate-siegel", p, a) for p, a in _CONSTRUCTED]
    + [("unit-a-p5-closed-disc", p, a) for p, a in [(5, "sqrt(21)"), (5, "0;1,2,2")]]
    + [("unit-a-coefficient-open-disc", p, a) for p, a in [(11, "1"), (17, "15")]]
    + [("unit-a-attractive-basin", 11, "1")]
)

SUITES = {
    "section3": ("sqrt-criterion", "a2p4-small-a", "a2p4-large-a", "a2p4-unit-a"),
    "section4": ("unit-a-both-indifferent", "unit-a-indifferent-degenerate-sum", "unit-a-mixed-kinds"),
    "section5": tuple(CLAIMS)[list(CLAIMS).index("local-factorisation"):],
}


def verify_claim(
    claim_id: str, params: MapParams, config: Optional[AnalysisConfig] = None
) -> ClaimReport:
    if claim_id not in CLAIMS:
        raise KeyError(f"unknown claim {claim_id!r}")
    cfg = config or AnalysisConfig()
    pr = _Probe(params, cfg)
    base = dict(claim_id=claim_id, p=params.p, a=compact(params.a, 12), depth=cfg.depth_for(params.p))
    try:
        CLAIMS[claim_id](pr)
    except _Skip as skip:
        return ClaimReport(status=Status.SKIPPED, reason=str(skip), counts=dict(pr.counts),
                           checks=pr.checks, **base)
    except (PrecisionError, IndeterminateZero) as exc:
        return ClaimReport(status=Status.SKIPPED, reason=f"undetermined at this precision: {exc}",
                           counts=dict(pr.counts), checks=pr.checks, **base)
    failed = [n for n, ok in pr.checks if not ok]
    status = Status.FAIL if failed else Status.PASS
    return ClaimReport(
        status=status,
        reason=("expected but not observed: " + "; ".join(failed)) if failed else None,
        counts=dict(pr.counts),
        witnesses=pr.witnesses,
        checks=pr.checks,
        **base,
    )


def catalog_for(suite: str) -> list[tuple[str, int, str]]:
    if suite == "all":
        ids = set(CLAIMS)
    elif suite in SUITES:
        ids = set(SUITES[suite])
    else:
        raise ValueError(f"unknown suite {suite!r}; choose all, section3, section4 or section5")
    rows = [row for row in CATALOG if row[0] in ids]
    order = list(CLAIMS)
    return sorted(rows, key=lambda r: order.index(r[0]))  # stable: catalog order within a claim


def run_suite(
    suite: str = "all", config: Optional[AnalysisConfig] = None, precision: int = 64
) -> list[ClaimReport]:
    cfg = config or AnalysisConfig()
    return [verify_claim(cid, MapParams.parse(p, a, precision), cfg) for cid, p, a in catalog_for(suite)]


def reports_json(reports: list[ClaimReport]) -> str:
    summary = Counter(r.status.value for r in reports)
    doc = {
        "summary": {s.value: summary.get(s.value, 0) for s in Status},
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=False)
