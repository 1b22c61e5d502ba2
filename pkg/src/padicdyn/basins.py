"""Finite sampling of spheres and balls, hitting times and Siegel-disc scans."""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .core import Ball, IndeterminateZero, PAdic, PrecisionError, Sphere, compact
from .dynamics import (
    FixedPointRecord,
    Kind,
    MapParams,
    OrbitConfig,
    OrbitFate,
    apply_f,
    orbit_fate,
)
from .roots import padic_sqrt, sqrt_exists

DEFAULT_TAIL_SEED = 0x5EED
TAIL_DIGITS = 16


def default_depth(p: int) -> int:
    return 3 if p <= 7 else 2


@dataclass(frozen=True)
class AnalysisConfig:
    """Sampling and iteration budget shared by scans and claims."""

    depth: Optional[int] = None  # None: default_depth(p)
    tails: tuple[Optional[int], ...] = (None, DEFAULT_TAIL_SEED)
    max_iter: int = 200
    min_precision: int = 16
    kmax: int = 100

    def depth_for(self, p: int) -> int:
        return self.depth or default_depth(p)

    @property
    def orbit(self) -> OrbitConfig:
        return OrbitConfig(self.max_iter, self.min_precision)


@dataclass(frozen=True)
class SampleSet:
    center: PAdic
    log_radius: int
    depth: int
    tail_seed: Optional[int]
    points: tuple[PAdic, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def describe(self) -> str:
        tail = "zero tail" if self.tail_seed is None else f"tail seed {self.tail_seed:#x}"
        return f"S[{compact(self.center, 8)}, p^{self.log_radius}] depth {self.depth}, {tail}"


def enumerate_sphere(
    center: PAdic, log_radius: int, depth: int, tail_seed: Optional[int] = None
) -> SampleSet:
    """Points ``c + p**(-e) (u + p**k t)`` for every unit residue ``u`` mod ``p**k``.

    ``e`` is the log-radius: every point satisfies ``|x - c| = p**e``.

    ``t`` is 0 for the zero tail, otherwise a pseudo-random p-adic integer
    with ``TAIL_DIGITS`` digits drawn from ``random.Random(tail_seed)``.
    """
    if depth < 1:
        raise ValueError("enumeration depth must be at least 1")
    p = center.p
    pk = p**depth
    rng = random.Random(tail_seed) if tail_seed is not None else None
    scale = Fraction(p) ** -log_radius
    n = center.precision or 64
    sphere = Sphere(center, log_radius)
    points = []
    for u in range(1, pk):
        if u % p == 0:
            continue
        t = rng.randrange(p**TAIL_DIGITS) if rng else 0
        x = center + PAdic.exact(scale * (u + pk * t), p, n)
        try:
            on_sphere = sphere.contains(x)
        except IndeterminateZero as exc:
            raise PrecisionError(f"center too imprecise for radius p^{log_radius}") from exc
        assert on_sphere, "enumerated point left its sphere"
        points.append(x)
    return SampleSet(center, log_radius, depth, tail_seed, tuple(points))


def sphere_samples(center: PAdic, log_radius: int, cfg: AnalysisConfig) -> list[PAdic]:
    """All tails of :func:`enumerate_sphere` at the configured depth."""
    depth = cfg.depth_for(center.p)
    out: list[PAdic] = []
    for seed in cfg.tails:
        out.extend(enumerate_sphere(center, log_radius, depth, seed).points)
    return out


def ball_samples(center: PAdic, log_radius: int, cfg: AnalysisConfig, levels: int = 3) -> list[PAdic]:
    """The center plus samples of the ``levels`` outermost spheres of the closed ball."""
    out = [center]
    for j in range(levels):
        out.extend(sphere_samples(center, log_radius - j, cfg))
    return out


class HitStatus(str, enum.Enum):
    HIT = "hit"
    NOT_WITHIN_BOUND = "not_within_bound"
    NEVER = "never"  # escape certificate: the orbit can no longer enter
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class HittingTimeRecord:
    point: PAdic
    T: Optional[int]
    bound_used: int
    status: HitStatus

    def to_dict(self) -> dict:
        return {"point": compact(self.point, 12), "T": self.T, "bound": self.bound_used, "status": self.status.value}


Region = Union[Ball, Sphere]


def _max_log_norm(target: Region) -> int:
    c = target.center.log_norm_bound()
    return target.log_radius if c is None else max(c, target.log_radius)


def hitting_time(params: MapParams, x: PAdic, target: Region, kmax: int) -> HittingTimeRecord:
    """Least ``k`` in ``0..kmax`` with ``f^k(x)`` in ``target``.

    ``k = 0`` counts, so every member of the target hits at once.
    """
    esc = params.escape_log_norm
    bound = _max_log_norm(target)
    y = x
    for k in range(kmax + 1):
        try:
            if target.contains(y):
                return HittingTimeRecord(x, k, kmax, HitStatus.HIT)
        except IndeterminateZero:
            return HittingTimeRecord(x, None, k, HitStatus.UNDETERMINED)
        if y.is_zero_to_precision:
            if y.is_indeterminate:
                return HittingTimeRecord(x, None, k, HitStatus.UNDETERMINED)
        elif -y.valuation > max(esc, bound):
            return HittingTimeRecord(x, None, k, HitStatus.NEVER)
        if k < kmax:
            y = apply_f(params, y)
    return HittingTimeRecord(x, None, kmax, HitStatus.NOT_WITHIN_BOUND)


@dataclass
class ScanResult:
    entries: list[tuple[PAdic, OrbitFate]] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        return dict(sorted(Counter(f.label for _, f in self.entries).items()))

    def fates(self) -> dict[PAdic, OrbitFate]:
        return dict(self.entries)

    def csv_rows(self) -> list[tuple[str, str, str, int]]:
        rows = []
        for x, f in self.entries:
            v = "" if x.is_zero_to_precision else str(x.valuation)
            rows.append((compact(x, 12), v, f.label, f.steps_used))
        return rows


def basin_scan(
    params: MapParams, region: Iterable[Sphere], config: Optional[AnalysisConfig] = None
) -> ScanResult:
    """``orbit_fate`` for every enumerated sample of every sphere, in order."""
    cfg = config or AnalysisConfig()
    result = ScanResult()
    for sphere in region:
        for x in sphere_samples(sphere.center, sphere.log_radius, cfg):
            result.entries.append((x, orbit_fate(params, x, cfg.orbit)))
    return result


class Boundary(str, enum.Enum):
    OPEN_BALL = "open_ball"
    CLOSED_BALL = "closed_ball"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class RadiusVerdict:
    log_radius: int
    invariant: bool
    counterexample: Optional[PAdic]
    samples: int
    undetermined: int = 0

    def to_dict(self) -> dict:
        return {
            "log_radius": self.log_radius,
            "verdict": "invariant_on_samples" if self.invariant else "counterexample_found",
            "counterexample": None if self.counterexample is None else compact(self.counterexample, 12),
            "samples": self.samples,
            "undetermined": self.undetermined,
        }


@dataclass(frozen=True)
class SiegelReport:
    fixed_point: FixedPointRecord
    per_radius: tuple[RadiusVerdict, ...]
    boundary_log_radius: int
    boundary_conclusion: Boundary
    witness: Optional[PAdic] = None

    def verdict_at(self, log_radius: int) -> Optional[RadiusVerdict]:
        for rv in self.per_radius:
            if rv.log_radius == log_radius:
                return rv
        return None

    def to_dict(self) -> dict:
        return {
            "fixed_point": self.fixed_point.to_dict(),
            "per_radius": [rv.to_dict() for rv in self.per_radius],
            "boundary_log_radius": self.boundary_log_radius,
            "boundary_conclusion": self.boundary_conclusion.value,
            "witness": None if self.witness is None else compact(self.witness, 12),
        }


def sphere_invariance(
    params: MapParams, center: PAdic, log_radius: int, points: Sequence[PAdic]
) -> RadiusVerdict:
    """Check ``|f(x) - c| = |x - c|`` on samples of ``S(c, log_radius)``."""
    sphere = Sphere(center, log_radius)
    undetermined = 0
    for x in points:
        try:
            stays = sphere.contains(apply_f(params, x))
        except IndeterminateZero:
            undetermined += 1
            continue
        if not stays:
            return RadiusVerdict(log_radius, False, x, len(points), undetermined)
    return RadiusVerdict(log_radius, True, None, len(points), undetermined)


def default_boundary_log_radius(params: MapParams) -> int:
    """Log-radius of the sphere that decides open vs closed Siegel disc."""
    e = params.a_log_norm
    return -e if e is not None and e > 0 else 0


def siegel_scan(
    params: MapParams,
    fp: FixedPointRecord,
    log_radii: Iterable[int],
    config: Optional[AnalysisConfig] = None,
    boundary_log_radius: Optional[int] = None,
) -> SiegelReport:
    """Sampled invariance of the spheres ``S(x*, p**e)`` for each ``e``.

    The boundary conclusion is ``open_ball`` when the boundary sphere has a
    counterexample or a boundary-escape witness exists, ``closed_ball`` when
    the boundary sphere is invariant on samples and no witness exists.
    """
    cfg = config or AnalysisConfig()
    rb = default_boundary_log_radius(params) if boundary_log_radius is None else boundary_log_radius
    radii = sorted(set(log_radii) | {rb})
    per_radius = tuple(
        sphere_invariance(params, fp.value, e, sphere_samples(fp.value, e, cfg)) for e in radii
    )
    witness = None
    witness_known = True
    if fp.kind is Kind.INDIFFERENT and params.stratum != "large":
        try:
            witness = boundary_escape_witness(params, fp)
        except PrecisionError:
            witness_known = False
    boundary = next(rv for rv in per_radius if rv.log_radius == rb)
    if witness is not None or not boundary.invariant:
        conclusion = Boundary.OPEN_BALL
    elif witness_known and boundary.undetermined == 0:
        conclusion = Boundary.CLOSED_BALL
    else:
        conclusion = Boundary.UNDETERMINED
    return SiegelReport(fp, per_radius, rb, conclusion, witness)


def boundary_escape_witness(params: MapParams, fp: FixedPointRecord) -> Optional[PAdic]:
    """A point of ``S_1(x*)`` whose image falls strictly inside ``B_1(x*)``.

    ``f(x) - x* = g (g**2 + (3x*+a) g + f'(x*))`` with ``g = x - x*``.  For
    ``|a| < 1`` the root ``z`` of ``z**2 + 3x* z + 3`` (discriminant
    ``-3 - 9a x*``) is used; for ``|a| = 1`` the root of
    ``z**2 + (3x*+a) z + 3 - a x*``, whose discriminant reduces to
    ``a**2 - 3 + a x*`` on ``x*^2 = 1 - a x*``.  Returns ``None`` when the governing
    square root does not exist.
    """
    if fp.kind is not Kind.INDIFFERENT:
        raise ValueError("boundary escape witnesses are defined for indifferent fixed points")
    a, xs = params.a, fp.value
    if params.stratum == "small":
        b, disc = 3 * xs, -3 - 9 * a * xs
    elif params.stratum == "unit":
        b, disc = 3 * xs + a, a * a - 3 + a * xs
    else:
        raise ValueError("boundary escape witnesses cover |a| <= 1")
    try:
        exists = sqrt_exists(disc)
    except IndeterminateZero as exc:
        raise PrecisionError("discriminant cancelled at this precision") from exc
    if not exists:
        return None
    pair = padic_sqrt(disc)
    for r in (pair.root, pair.neg_root):
        z = (r - b) / 2
        if z.is_zero_to_precision or z.valuation != 0:
            continue  # the witness must lie on S_1(x*)
        x = xs + z
        gap = (apply_f(params, x) - xs).log_norm_bound()
        if gap is not None and gap >= 0:
            raise AssertionError(f"constructed witness {x} does not fall inside B_1(x*)")
        return x
    return None
