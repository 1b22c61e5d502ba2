"""Square roots in Q_p and the fixed-point quadratic ``x**2 + a*x - 1 = 0``."""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

from .core import DEFAULT_PRECISION, IndeterminateZero, PAdic, PrecisionError, _ppow, require_prime


@functools.lru_cache(maxsize=None)
def _roots_mod_p(p: int) -> dict[int, tuple[int, ...]]:
    table: dict[int, list[int]] = {}
    for x in range(1, p):
        table.setdefault(x * x % p, []).append(x)
    return {r: tuple(xs) for r, xs in table.items()}


def is_quadratic_residue(a0: int, p: int) -> bool:
    """Whether ``x**2 = a0 (mod p)`` has a solution, by enumerating residues."""
    require_prime(p)
    if a0 % p == 0:
        raise ValueError(f"{a0} is divisible by {p}")
    return a0 % p in _roots_mod_p(p)


def residue_square_roots(a0: int, p: int) -> tuple[int, ...]:
    """Sorted ``x`` in ``[1, p-1]`` with ``x**2 = a0 (mod p)``."""
    return _roots_mod_p(require_prime(p)).get(a0 % p, ())


def sqrt_exists(x: PAdic) -> bool:
    """Square-root criterion: even valuation and a square leading unit.

    For odd p the first unit digit must be a quadratic residue; for p = 2
    the unit must be ``1 (mod 8)``, i.e. digits ``1, 0, 0``.
    """
    if x.is_exact_zero:
        return True
    if x.is_indeterminate:
        raise IndeterminateZero("cannot test an indeterminate zero for squareness")
    if x.valuation % 2:
        return False
    if x.p == 2:
        if not x.is_exact and x.precision < 3:
            raise PrecisionError("three unit digits are needed to decide squareness in Q_2")
        return x.unit_residue(3) == 1
    return is_quadratic_residue(x.unit_residue(1), x.p)


@dataclass(frozen=True)
class SqrtPair:
    root: PAdic
    neg_root: PAdic


def _lift_unit_sqrt(u: int, p: int, n: int) -> int:
    """Unit ``r`` with ``r**2 = u``; mod p**n for odd p, mod 2**n from u mod 2**(n+1)."""
    if p == 2:
        r = 1
        for j in range(3, n + 1):
            if (r * r - u) % (1 << (j + 1)):
                r += 1 << (j - 1)
        r %= 1 << n
        if r % 4 == 3:
            r = -r % (1 << n)
        return r
    r = residue_square_roots(u % p, p)[0]
    k = 1
    while k < n:
        k = min(2 * k, n)
        mod = _ppow(p, k)
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return r


def _exact_square_root(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def padic_sqrt(x: PAdic, N: Optional[int] = None) -> SqrtPair:
    """Both square roots of ``x`` by Hensel lifting.

    ``root`` is the branch whose unit is congruent (mod p) to the smaller seed
    residue in ``[1, p-1]``; for p = 2 it is the branch congruent to 1 mod 4.
    Inexact inputs bound the output precision (one digit is lost at p = 2).
    """
    if not sqrt_exists(x):
        raise ValueError(f"{x} has no square root in Q_{x.p}")
    p = x.p
    if x.is_exact_zero:
        return SqrtPair(x, x)
    half_v = x.valuation // 2
    if x.is_exact:
        n = N or x.precision
        r = _exact_square_root(x.to_fraction())
        if r is not None:
            root = PAdic.exact(r, p, n)
            seed = 1 if p == 2 else residue_square_roots(x.unit_residue(1), p)[0]
            mod = 4 if p == 2 else p
            if root.unit_residue(2 if p == 2 else 1) % mod != seed:
                root = -root
            return SqrtPair(root, -root)
    else:
        n = x.precision - (1 if p == 2 else 0)
        if N is not None:
            n = min(n, N)
        if n < 1:
            raise PrecisionError("not enough digits to extract a square root")
    u = x.unit_residue(n + 1 if p == 2 else n)
    r = _lift_unit_sqrt(u, p, n)
    root = PAdic._approx(p, half_v, r, n)
    return SqrtPair(root, -root)


class CaseTag(str, enum.Enum):
    """Which existence statement governs ``sqrt(a**2 + 4)``."""

    P_GE_3_SMALL_A = "P_GE_3_SMALL_A"
    P2_K_GE_3 = "P2_K_GE_3"
    P2_K_EQ_2 = "P2_K_EQ_2"
    P2_K_EQ_1 = "P2_K_EQ_1"
    A_LARGE = "A_LARGE"
    UNIT_A_P2 = "UNIT_A_P2"
    UNIT_A_P3 = "UNIT_A_P3"
    UNIT_A_RESIDUE = "UNIT_A_RESIDUE"
    UNIT_A_DEGENERATE = "UNIT_A_DEGENERATE"
    UNIT_A_UNDETERMINED = "UNIT_A_UNDETERMINED"


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: bool
    case_tag: CaseTag
    witness: Optional[int] = None
    decided: bool = True

    def to_dict(self) -> dict:
        return {
            "exists": self.exists,
            "case_tag": self.case_tag.value,
            "witness": self.witness,
            "decided": self.decided,
        }


def _direct(t: PAdic) -> Optional[bool]:
    try:
        return sqrt_exists(t)
    except (IndeterminateZero, PrecisionError):
        return None


def _witness(t: PAdic) -> Optional[int]:
    if t.is_exact_zero:
        return 0
    if t.p == 2:
        return 1
    roots = residue_square_roots(t.unit_residue(1), t.p)
    return roots[0] if roots else None


def sqrt_a2p4_verdict(a: PAdic) -> ExistenceVerdict:
    """Decide whether ``sqrt(a**2 + 4)`` exists, tagged by the governing case.

    ``|a| < 1``: exists for odd p; for p = 2 exactly when ``v(a) >= 3``.
    ``|a| > 1``: always exists.
    ``|a| = 1``: never for p in {2, 3}; for p >= 5 the residue test on
    ``a0**2 + 4`` when it is a unit, otherwise the degenerate conditions on
    ``a0, a1, a2``.  In the degenerate strata the answer comes from the square
    root criterion applied to ``a**2 + 4`` itself.
    """
    if a.is_indeterminate:
        raise IndeterminateZero("parameter a must be determinate")
    p = a.p
    t = a * a + 4

    def verdict(exists: bool, tag: CaseTag) -> ExistenceVerdict:
        return ExistenceVerdict(exists, tag, _witness(t) if exists else None)

    if a.is_exact_zero or a.valuation > 0:
        if p != 2:
            return verdict(True, CaseTag.P_GE_3_SMALL_A)
        k = None if a.is_exact_zero else a.valuation
        if k is None or k >= 3:
            return verdict(True, CaseTag.P2_K_GE_3)
        return verdict(False, CaseTag.P2_K_EQ_2 if k == 2 else CaseTag.P2_K_EQ_1)
    if a.valuation < 0:
        return verdict(True, CaseTag.A_LARGE)
    if p == 2:
        return verdict(False, CaseTag.UNIT_A_P2)
    if p == 3:
        return verdict(False, CaseTag.UNIT_A_P3)

    a0 = a.unit_residue(1)
    s0 = a0 * a0 + 4
    if s0 % p:
        return verdict(is_quadratic_residue(s0, p), CaseTag.UNIT_A_RESIDUE)
    if not a.is_exact and a.precision < 3:
        raise PrecisionError("digits a0, a1, a2 are needed in the degenerate case")
    _, a1, a2 = a.digits(3)
    second = (s0 // p + 2 * a0 * a1) % p == 0
    third = (a1 * a1 + 2 * a0 * a2) % p != 0
    direct = _direct(t)
    if second and not third:
        return ExistenceVerdict(
            bool(direct), CaseTag.UNIT_A_UNDETERMINED, _witness(t) if direct else None, direct is not None
        )
    if direct is None:
        raise PrecisionError("a**2 + 4 cancelled completely at this precision")
    return verdict(direct, CaseTag.UNIT_A_DEGENERATE)


def solve_fixed_quadratic(a: PAdic, N: Optional[int] = None) -> tuple[PAdic, PAdic]:
    """Roots ``(x2, x3) = ((-a + r)/2, (-a - r)/2)`` of ``x**2 + a x - 1``.

    ``r`` is the ``root`` branch of :func:`padic_sqrt` applied to ``a**2 + 4``.
    """
    v = sqrt_a2p4_verdict(a)
    if not v.exists:
        raise ValueError(f"sqrt(a^2+4) does not exist in Q_{a.p} ({v.case_tag.value})")
    n = N or a.precision or DEFAULT_PRECISION
    # one branch of -a +/- r cancels 2|v(a)| digits when |a| > 1
    headroom = 2 * max(0, -a.valuation) + 2 if not a.is_exact_zero else 2
    t = a * a + 4
    pair = padic_sqrt(t, n + headroom)
    x2 = (pair.root - a) / 2
    x3 = (pair.neg_root - a) / 2
    return x2.with_precision(n) if not x2.is_exact else x2, x3.with_precision(n) if not x3.is_exact else x3


def quadratic_roots(b: PAdic, c: PAdic, N: Optional[int] = None) -> Optional[tuple[PAdic, PAdic]]:
    """Roots of ``z**2 + b z + c`` in Q_p, or ``None`` if the discriminant is not a square."""
    disc = b * b - 4 * c
    if not sqrt_exists(disc):
        return None
    pair = padic_sqrt(disc, N)
    return (pair.root - b) / 2, (pair.neg_root - b) / 2
