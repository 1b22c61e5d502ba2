"""The cubic map ``f(x) = x**3 + a x**2``, its fixed points and certified orbits.

``f`` is conjugate to the generalized logistic map ``G(x) = (a x)**2 (x + 1)``
through ``h(x) = a x``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .core import (
    DEFAULT_PRECISION,
    Ball,
    IndeterminateZero,
    NormValue,
    PAdic,
    PrecisionError,
    compact,
    parse_padic,
    require_prime,
)
from .roots import ExistenceVerdict, padic_sqrt, sqrt_a2p4_verdict, solve_fixed_quadratic

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MapParams:
    """Prime ``p`` and parameter ``a`` of the map."""

    p: int
    a: PAdic
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        require_prime(self.p)
        if self.a.p != self.p:
            raise ValueError("a lives in a different Q_p")
        if self.a.is_indeterminate:
            raise IndeterminateZero("parameter a must have a determinate norm")

    @classmethod
    def parse(cls, p: int, a: str, precision: int = DEFAULT_PRECISION) -> "MapParams":
        """``a`` as accepted by :func:`parse_padic`, or ``sqrt(<that>)`` for the ``root`` branch."""
        return cls(p, parse_parameter(a, p, precision), precision)

    @property
    def a_log_norm(self) -> Optional[int]:
        """``e`` with ``|a| = p**e``; ``None`` when ``a = 0``."""
        return None if self.a.is_exact_zero else -self.a.valuation

    @property
    def stratum(self) -> str:
        e = self.a_log_norm
        if e is None or e < 0:
            return "small"
        return "unit" if e == 0 else "large"

    @property
    def escape_log_norm(self) -> int:
        """Iterates with ``|x| > p**escape_log_norm`` escape to infinity."""
        e = self.a_log_norm
        return 0 if e is None else max(0, e)

    @cached_property
    def classification(self) -> "Classification":
        return classify(self)

    @cached_property
    def certified_balls(self) -> tuple[tuple["FixedPointRecord", Ball], ...]:
        """Largest certified ball around each attractive or indifferent fixed point."""
        out = []
        for rec in self.classification.records:
            if rec.kind is Kind.REPELLING:
                continue
            out.append((rec, Ball(rec.value, max_certified_log_radius(self, rec))))
        return tuple(out)

    def label(self) -> str:
        return f"p={self.p}, a={compact(self.a, 8)}"


def parse_parameter(text: str, p: int, precision: int = DEFAULT_PRECISION) -> PAdic:
    text = text.strip()
    if text.startswith("sqrt(") and text.endswith(")"):
        radicand = parse_padic(text[5:-1], p, precision)
        return padic_sqrt(radicand, precision).root
    return parse_padic(text, p, precision)


def apply_f(params: MapParams, x: PAdic) -> PAdic:
    """``f(x) = x**2 (x + a)``; the factored form keeps the most digits."""
    return x * x * (x + params.a)


def apply_G(params: MapParams, x: PAdic) -> PAdic:
    ax = params.a * x
    return ax * ax * (x + 1)


def derivative(params: MapParams, x: PAdic) -> PAdic:
    """``f'(x) = 3x**2 + 2ax``."""
    return x * (3 * x + 2 * params.a)


def iterate(params: MapParams, x: PAdic, n: int) -> PAdic:
    for _ in range(n):
        x = apply_f(params, x)
    return x


class Which(str, enum.Enum):
    X1 = "x1"
    X2 = "x2"
    X3 = "x3"


class Kind(str, enum.Enum):
    ATTRACTIVE = "attractive"
    INDIFFERENT = "indifferent"
    REPELLING = "repelling"


@dataclass(frozen=True)
class FixedPointRecord:
    which: Which
    value: PAdic
    multiplier: PAdic
    multiplier_norm: NormValue
    kind: Kind

    def to_dict(self) -> dict:
        return {
            "which": self.which.value,
            "value": compact(self.value),
            "multiplier": compact(self.multiplier),
            "multiplier_log_norm": self.multiplier_norm.exponent,
            "kind": self.kind.value,
        }


@dataclass(frozen=True)
class Classification:
    verdict: ExistenceVerdict
    records: tuple[FixedPointRecord, ...]

    @property
    def existence_decided(self) -> bool:
        return self.verdict.decided

    def get(self, which: Which) -> Optional[FixedPointRecord]:
        for rec in self.records:
            if rec.which is which:
                return rec
        return None

    def of_kind(self, kind: Kind) -> list[FixedPointRecord]:
        return [r for r in self.records if r.kind is kind and r.which is not Which.X1]


def _record(params: MapParams, which: Which, x: PAdic) -> FixedPointRecord:
    lam = derivative(params, x)
    if lam.is_exact_zero:
        return FixedPointRecord(which, x, lam, NormValue.ZERO, Kind.ATTRACTIVE)
    if lam.is_indeterminate:
        raise PrecisionError(f"multiplier of {which.value} cancelled to O(p^{lam.absolute_precision})")
    n = lam.norm()
    kind = Kind.ATTRACTIVE if n < NormValue.ONE else Kind.INDIFFERENT if n == NormValue.ONE else Kind.REPELLING
    return FixedPointRecord(which, x, lam, n, kind)


def classify(params: MapParams) -> Classification:
    """All fixed points with multipliers and kinds.

    ``x1 = 0`` is always present.  ``x2`` and ``x3`` are listed when
    ``sqrt(a**2 + 4)`` exists; an undecided existence verdict yields the
    partial listing ``[x1]`` with ``existence_decided`` False.
    """
    verdict = sqrt_a2p4_verdict(params.a)
    records = [_record(params, Which.X1, PAdic.zero(params.p, params.precision))]
    if verdict.exists:
        x2, x3 = solve_fixed_quadratic(params.a, params.precision)
        records.append(_record(params, Which.X2, x2))
        records.append(_record(params, Which.X3, x3))
    elif not verdict.decided:
        log.warning("existence of x2, x3 undecided at this precision for %s", params.label())
    return Classification(verdict, tuple(records))


def fixed_points(params: MapParams) -> list[FixedPointRecord]:
    return list(params.classification.records)


def _bound_3x_plus_a(params: MapParams, fp: FixedPointRecord) -> Optional[int]:
    # an upper bound is enough: the certificate only needs "< 1"
    return (3 * fp.value + params.a).log_norm_bound()


def contraction_certificate(params: MapParams, fp: FixedPointRecord, log_r: int) -> bool:
    """``max(|3x* + a| p**log_r, p**(2 log_r)) < 1``.

    When true, the closed ball of log-radius ``log_r`` around an attractive
    ``x*`` lies in its basin, and around an indifferent ``x*`` it lies in its
    Siegel disc.
    """
    c = _bound_3x_plus_a(params, fp)
    return 2 * log_r < 0 and (c is None or c + log_r < 0)


def max_certified_log_radius(params: MapParams, fp: FixedPointRecord) -> int:
    c = _bound_3x_plus_a(params, fp)
    return -1 if c is None else min(-1, -c - 1)


def norm_step_law(params: MapParams, x_norm: NormValue) -> Optional[NormValue]:
    """``|f(x)|`` when it is forced by ``|x|`` alone, else ``None``.

    ``|f(x)| = |x|**2 |x + a|`` and ``|x + a| = max(|x|, |a|)`` whenever
    ``|x| != |a|``.
    """
    a_norm = params.a.norm()
    if x_norm.is_zero:
        return NormValue.ZERO
    if x_norm == a_norm:
        return None
    return x_norm**2 * max(x_norm, a_norm)


class Outcome(str, enum.Enum):
    CONVERGED = "converged"
    ESCAPED = "escaped"
    SIEGEL_TRAPPED = "siegel_trapped"
    CYCLE = "cycle"
    UNDECIDED = "undecided"


MAX_ITERATIONS = "max_iterations"
PRECISION_EXHAUSTED = "precision_exhausted"


@dataclass(frozen=True)
class OrbitConfig:
    max_iter: int = 200
    min_precision: int = 16
    cycle_digits: int = 32


@dataclass(frozen=True)
class OrbitFate:
    """Certified outcome of iterating ``f`` from one seed."""

    outcome: Outcome
    steps_used: int
    certificate: str
    fixed_point: Optional[Which] = None
    log_radius: Optional[int] = None
    period: Optional[int] = None
    entry_index: Optional[int] = None
    reason: Optional[str] = None

    @property
    def label(self) -> str:
        if self.outcome in (Outcome.CONVERGED, Outcome.SIEGEL_TRAPPED):
            return f"{self.outcome.value}:{self.fixed_point.value}"
        if self.outcome is Outcome.UNDECIDED:
            return f"undecided:{self.reason}"
        return self.outcome.value

    def converged_to(self, which: Which) -> bool:
        return self.outcome is Outcome.CONVERGED and self.fixed_point is which

    def to_dict(self) -> dict:
        d = {"outcome": self.outcome.value, "steps": self.steps_used, "certificate": self.certificate}
        for key in ("fixed_point", "log_radius", "period", "entry_index", "reason"):
            val = getattr(self, key)
            if val is not None:
                d[key] = val.value if isinstance(val, enum.Enum) else val
        return d


def orbit_fate(params: MapParams, x0: PAdic, config: Optional[OrbitConfig] = None) -> OrbitFate:
    """Iterate ``f`` from ``x0`` until a certificate fires.

    Convergence and Siegel trapping are only reported once an iterate lies in
    a certified ball; escape once ``|x| > max(1, |a|)``, after which norms
    grow as ``|x|**3``.  A repeated truncated state is reported as a cycle of
    the truncated system.
    """
    cfg = config or OrbitConfig()
    balls = params.certified_balls
    esc = params.escape_log_norm
    seen: dict[tuple[int, int], int] = {}
    x = x0
    for step in range(cfg.max_iter + 1):
        for rec, ball in balls:
            try:
                inside = ball.contains(x)
            except IndeterminateZero:
                continue
            if inside:
                if rec.kind is Kind.ATTRACTIVE:
                    return OrbitFate(
                        Outcome.CONVERGED, step, f"entered certified contraction ball {ball}",
                        fixed_point=rec.which, log_radius=ball.log_radius,
                    )
                return OrbitFate(
                    Outcome.SIEGEL_TRAPPED, step, f"entered certified Siegel ball {ball}",
                    fixed_point=rec.which, log_radius=ball.log_radius,
                )
        if x.is_zero_to_precision or (not x.is_exact and x.precision < cfg.min_precision):
            return OrbitFate(
                Outcome.UNDECIDED, step, "guaranteed digits below minimum", reason=PRECISION_EXHAUSTED
            )
        if -x.valuation > esc:
            return OrbitFate(Outcome.ESCAPED, step, f"|x| = p^{-x.valuation} > p^{esc}: norms cube from here")
        if x.is_exact or x.precision >= cfg.cycle_digits:
            key = (x.valuation, x.unit_residue(cfg.cycle_digits))
            first = seen.get(key)
            if first is not None:
                return OrbitFate(
                    Outcome.CYCLE, step, f"truncated state (v + {cfg.cycle_digits} digits) repeated",
                    period=step - first, entry_index=first,
                )
            seen[key] = step
        if step < cfg.max_iter:
            x = apply_f(params, x)
    return OrbitFate(Outcome.UNDECIDED, cfg.max_iter, "no certificate fired", reason=MAX_ITERATIONS)
