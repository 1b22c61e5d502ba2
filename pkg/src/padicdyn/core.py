"""Exact p-adic numbers with tracked precision, norms, balls and spheres.

A :class:`PAdic` is ``p**v * u`` where ``u`` is a p-adic unit known modulo
``p**N``.  Values built from rationals may be marked *exact*; they then carry
the rational itself and arithmetic between exact values stays exact.  Every
other value knows how many of its unit digits are trustworthy, and each
operation returns the pessimistic count.

Two zeros are kept apart:

* the exact zero, whose norm is ``0``;
* an *indeterminate* zero, produced when every known digit cancels.  It is
  only known to be divisible by ``p**A`` and asking for its norm raises
  :class:`IndeterminateZero`.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

DEFAULT_PRECISION = 64

# exact rationals taller than this degrade to N-digit approximations
_EXACT_HEIGHT_BITS = 2048


class PAdicError(ArithmeticError):
    """Base class for p-adic arithmetic failures."""


class IndeterminateZero(PAdicError):
    """Every known digit cancelled, so the norm of the value is unknown."""


class PrecisionError(PAdicError):
    """Not enough guaranteed digits to answer the question asked."""


@functools.lru_cache(maxsize=None)
def require_prime(p: int) -> int:
    """Return ``p`` if it is a prime, else raise ``ValueError``."""
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        raise ValueError(f"{p!r} is not a prime")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"{p} is not a prime")
        d += 1
    return p


@functools.lru_cache(maxsize=8192)
def _ppow(p: int, k: int) -> int:
    return p**k


def _vp_int(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _split_fraction(q: Fraction, p: int) -> tuple[int, int, int]:
    """Return ``(v, num, den)`` with ``q = p**v * num/den`` and num, den prime to p."""
    num, den = q.numerator, q.denominator
    vn = _vp_int(num, p)
    vd = _vp_int(den, p)
    return vn - vd, num // _ppow(p, vn), den // _ppow(p, vd)


class PAdic:
    """An element of Q_p known to a guaranteed number of digits.

    Instances are immutable.  Use :func:`from_rational`, :func:`from_digits`,
    :meth:`PAdic.exact` or :func:`parse_padic` to build them; Python ints and
    Fractions are coerced to exact values in arithmetic.

    Equality (``==``) is structural: two values compare equal when they have
    the same prime, exactness, valuation, digits and precision.  Use
    :meth:`agrees_with` for "equal to the available precision".
    """

    __slots__ = ("p", "_v", "_u", "_n", "_q")

    p: int
    _v: Optional[int]  # valuation; absolute precision for an indeterminate zero
    _u: int  # unit mod p**_n; 0 for zeros
    _n: int  # guaranteed unit digits (nominal for exact values)
    _q: Optional[Fraction]  # the exact value, when known

    # -- construction -------------------------------------------------------

    @classmethod
    def _make(cls, p, v, u, n, q):
        obj = object.__new__(cls)
        obj.p = p
        obj._v = v
        obj._u = u
        obj._n = n
        obj._q = q
        return obj

    @classmethod
    def _approx(cls, p: int, v: int, u: int, n: int) -> "PAdic":
        return cls._make(p, v, u % _ppow(p, n), n, None)

    @classmethod
    def _indeterminate(cls, p: int, abs_prec: int) -> "PAdic":
        return cls._make(p, abs_prec, 0, 0, None)

    @classmethod
    def _from_fraction(cls, p: int, q: Fraction, n: int, exact: bool = True) -> "PAdic":
        if q == 0:
            if exact:
                return cls._make(p, None, 0, n, Fraction(0))
            return cls._indeterminate(p, n)
        v, num, den = _split_fraction(q, p)
        mod = _ppow(p, n)
        u = num * pow(den, -1, mod) % mod
        if exact and max(q.numerator.bit_length(), q.denominator.bit_length()) <= _EXACT_HEIGHT_BITS:
            return cls._make(p, v, u, n, q)
        return cls._make(p, v, u, n, None)

    @classmethod
    def exact(cls, value: Union[int, Fraction], p: int, N: int = DEFAULT_PRECISION) -> "PAdic":
        """Exact p-adic image of a rational."""
        require_prime(p)
        return cls._from_fraction(p, Fraction(value), N, exact=True)

    @classmethod
    def zero(cls, p: int, N: int = DEFAULT_PRECISION) -> "PAdic":
        return cls._make(require_prime(p), None, 0, N, Fraction(0))

    # -- state --------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._q is not None

    @property
    def is_exact_zero(self) -> bool:
        return self._q is not None and self._v is None

    @property
    def is_indeterminate(self) -> bool:
        return self._q is None and self._u == 0

    @property
    def is_zero_to_precision(self) -> bool:
        return self.is_exact_zero or self.is_indeterminate

    @property
    def valuation(self) -> int:
        """The exponent ``v`` in ``x = p**v * unit``."""
        if self._u == 0:
            if self._q is None:
                raise IndeterminateZero(f"valuation of O({self.p}^{self._v}) is unknown")
            raise ValueError("the valuation of exact zero is +infinity")
        return self._v

    @property
    def precision(self) -> int:
        """Guaranteed unit digits N (nominal working precision for exact values)."""
        return self._n

    @property
    def absolute_precision(self) -> Optional[int]:
        """Largest k with the value known mod p**k; ``None`` when exact."""
        if self._q is not None:
            return None
        if self._u == 0:
            return self._v
        return self._v + self._n

    @property
    def unit_digits(self) -> tuple[int, ...]:
        """The N guaranteed digits of the unit part, least significant first."""
        if self._u == 0:
            return ()
        return self.digits(self._n)

    def unit_residue(self, k: int) -> int:
        """The unit part reduced mod ``p**k``."""
        if self._u == 0:
            raise ValueError("zero has no unit part")
        if k <= self._n:
            return self._u % _ppow(self.p, k)
        if self._q is None:
            raise PrecisionError(f"{k} digits requested, only {self._n} known")
        _, num, den = _split_fraction(self._q, self.p)
        mod = _ppow(self.p, k)
        return num * pow(den, -1, mod) % mod

    def digits(self, k: int) -> tuple[int, ...]:
        """First ``k`` canonical digits of the unit part."""
        r = self.unit_residue(k)
        p = self.p
        out = []
        for _ in range(k):
            r, d = divmod(r, p)
            out.append(d)
        return tuple(out)

    def norm(self) -> "NormValue":
        if self._u == 0:
            if self._q is None:
                raise IndeterminateZero(f"norm of O({self.p}^{self._v}) is unknown")
            return NormValue.ZERO
        return NormValue(-self._v)

    def log_norm_bound(self) -> Optional[int]:
        """Exponent e with |x| <= p**e, valid also for indeterminate zeros.

        ``None`` stands for an exact zero (no finite bound needed).
        """
        if self._u == 0:
            return None if self._q is not None else -self._v
        return -self._v

    def to_fraction(self) -> Fraction:
        if self._q is None:
            raise PrecisionError("value is not exact")
        return self._q

    def approximation(self) -> Fraction:
        """A rational that agrees with the value to its precision."""
        if self._q is not None:
            return self._q
        if self._u == 0:
            return Fraction(0)
        return Fraction(self.p) ** self._v * self._u

    def with_precision(self, n: int) -> "PAdic":
        """Forget digits beyond the first ``n`` (never adds any)."""
        if self._u == 0:
            return self
        n = max(1, min(n, self._n) if self._q is None else n)
        return PAdic._approx(self.p, self._v, self.unit_residue(n), n)

    def agrees_with(self, other) -> bool:
        """True when ``self - other`` is zero to the available precision."""
        return (self - other).is_zero_to_precision

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "PAdic":
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise ValueError(f"cannot mix Q_{self.p} and Q_{other.p}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return PAdic._from_fraction(self.p, Fraction(other), self._n or DEFAULT_PRECISION)
        return NotImplemented

    def _add(self, y: "PAdic", sign: int) -> "PAdic":
        x = self
        p = x.p
        if x._u and y._u and (x._q is None or y._q is None):
            # at least one approximate operand, both nonzero
            vx, vy, nx, ny = x._v, y._v, x._n, y._n
            m = vx if vx < vy else vy
            if x._q is None:
                A = vx + nx if y._q is not None else min(vx + nx, vy + ny)
            else:
                A = vy + ny
            k = min(A - m, nx if nx > ny else ny)
            if k <= 0:
                return PAdic._indeterminate(p, A)
            total = 0
            for z, s, vz, nz in ((x, 1, vx, nx), (y, sign, vy, ny)):
                shift = vz - m
                if shift < k:
                    r = k - shift
                    u = z._u % _ppow(p, r) if r <= nz else z.unit_residue(r)
                    total += s * u * _ppow(p, shift)
            total %= _ppow(p, k)
            if total == 0:
                return PAdic._indeterminate(p, m + k)
            t = 0 if total % p else _vp_int(total, p)
            return PAdic._make(p, m + t, total // _ppow(p, t) if t else total, k - t, None)
        if x._q is not None and y._q is not None:
            return PAdic._from_fraction(p, x._q + sign * y._q, max(x._n, y._n))
        if y.is_exact_zero:
            return x
        if x.is_exact_zero:
            return y if sign > 0 else -y
        ax = x.absolute_precision
        ay = y.absolute_precision
        A = ay if ax is None else ax if ay is None else min(ax, ay)
        terms = [(z, s) for z, s in ((x, 1), (y, sign)) if z._u != 0]
        if not terms:
            return PAdic._indeterminate(p, A)
        m = min(z._v for z, _ in terms)
        # an exact operand imposes no cap, so keep at most the larger operand precision
        k = min(A - m, max(x._n, y._n))
        if k <= 0:
            return PAdic._indeterminate(p, A)
        total = 0
        for z, s in terms:
            shift = z._v - m
            if shift < k:
                total += s * z.unit_residue(k - shift) * _ppow(p, shift)
        total %= _ppow(p, k)
        if total == 0:
            return PAdic._indeterminate(p, m + k)
        t = _vp_int(total, p)
        return PAdic._make(p, m + t, total // _ppow(p, t), k - t, None)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._add(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._add(self, -1)

    def __neg__(self):
        if self._q is not None:
            return PAdic._from_fraction(self.p, -self._q, self._n)
        if self._u == 0:
            return self
        return PAdic._make(self.p, self._v, -self._u % _ppow(self.p, self._n), self._n, None)

    def __pos__(self):
        return self

    def __mul__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        x = self
        p = x.p
        if x._q is None and y._q is None and x._u and y._u:
            n = x._n if x._n < y._n else y._n
            mod = _ppow(p, n)
            return PAdic._make(p, x._v + y._v, x._u * y._u % mod, n, None)
        if x.is_exact_zero or y.is_exact_zero:
            return PAdic.zero(p, max(x._n, y._n))
        if x._q is not None and y._q is not None:
            return PAdic._from_fraction(p, x._q * y._q, max(x._n, y._n))
        if x._u == 0 or y._u == 0:
            # _v is the valuation or, for an indeterminate zero, its absolute precision
            return PAdic._indeterminate(p, x._v + y._v)
        if x._q is not None:
            n = y._n
        elif y._q is not None:
            n = x._n
        else:
            n = min(x._n, y._n)
        mod = _ppow(p, n)
        u = x.unit_residue(n) * y.unit_residue(n) % mod
        return PAdic._make(p, x._v + y._v, u, n, None)

    __rmul__ = __mul__

    def __truediv__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return _divide(self, y)

    def __rtruediv__(self, other):
        x = self._coerce(other)
        if x is NotImplemented:
            return x
        return _divide(x, self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return _divide(PAdic._from_fraction(self.p, Fraction(1), self._n or DEFAULT_PRECISION), self**-k)
        result = PAdic._from_fraction(self.p, Fraction(1), self._n or DEFAULT_PRECISION)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison, hashing, printing -------------------------------------

    def _key(self):
        if self._q is not None:
            return (self.p, "exact", self._q)
        return (self.p, self._v, self._u, self._n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._q is not None and self._q == other
        if not isinstance(other, PAdic):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self._q is not None:
            return f"PAdic({self._q}, p={self.p}, exact)"
        return f"PAdic({compact(self)!r}, p={self.p}, N={self._n})"

    def __str__(self):
        return render(self)


def _divide(x: PAdic, y: PAdic) -> PAdic:
    p = x.p
    if y.is_exact_zero:
        raise ZeroDivisionError("division by exact zero")
    if y.is_indeterminate:
        raise IndeterminateZero("division by an indeterminate zero")
    if x.is_exact_zero:
        return PAdic.zero(p, max(x._n, y._n))
    if x._q is not None and y._q is not None:
        return PAdic._from_fraction(p, x._q / y._q, max(x._n, y._n))
    if x._u == 0:
        return PAdic._indeterminate(p, x._v - y._v)
    if x._q is not None:
        n = y._n
    elif y._q is not None:
        n = x._n
    else:
        n = min(x._n, y._n)
    mod = _ppow(p, n)
    u = x.unit_residue(n) * pow(y.unit_residue(n), -1, mod) % mod
    return PAdic._make(p, x._v - y._v, u, n, None)


@functools.total_ordering
@dataclass(frozen=True)
class NormValue:
    """A p-adic norm on the discrete scale: ``p**exponent``, or zero.

    ``exponent is None`` encodes the norm of zero, which sorts below every
    power of p.
    """

    exponent: Optional[int]

    ZERO = None  # replaced below
    ONE = None

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __lt__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        if self.exponent is None:
            return other.exponent is not None
        if other.exponent is None:
            return False
        return self.exponent < other.exponent

    def __mul__(self, other):
        if not isinstance(other, NormValue):
            return NotImplemented
        if self.exponent is None or other.exponent is None:
            return NormValue.ZERO
        return NormValue(self.exponent + other.exponent)

    def __pow__(self, k: int):
        if self.exponent is None:
            return self
        return NormValue(self.exponent * k)

    def value(self, p: int) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        return Fraction(p) ** self.exponent

    def __str__(self):
        return "0" if self.exponent is None else f"p^{self.exponent}"


NormValue.ZERO = NormValue(None)
NormValue.ONE = NormValue(0)


# -- construction helpers ----------------------------------------------------


def from_rational(num: int, den: int, p: int, N: int = DEFAULT_PRECISION, *, exact: bool = False) -> PAdic:
    """The image of ``num/den`` in Q_p with ``N`` unit digits.

    With ``exact=True`` the rational is kept and arithmetic with other exact
    values loses no precision.
    """
    require_prime(p)
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if N < 1:
        raise ValueError("precision must be positive")
    q = Fraction(num, den)
    if q == 0:
        return PAdic.zero(p, N)
    return PAdic._from_fraction(p, q, N, exact=exact)


def from_digits(
    v: int, digits: Sequence[int], p: int, N: int = DEFAULT_PRECISION, *, repeat_last: bool = True
) -> PAdic:
    """``p**v * (d0 + d1 p + ...)`` as an exact value.

    With ``repeat_last`` the final digit repeats forever, so the result is the
    rational ``p**v * (sum_{i<k} d_i p**i + d_k p**k / (1 - p))``.
    """
    require_prime(p)
    if not digits:
        raise ValueError("at least one digit is required")
    if any(not 0 <= d < p for d in digits):
        raise ValueError(f"digits must lie in [0, {p - 1}]")
    k = len(digits) - 1
    head = sum(d * p**i for i, d in enumerate(digits[:k]))
    last = Fraction(digits[k] * p**k, 1 - p) if repeat_last else Fraction(digits[k] * p**k)
    return PAdic.exact(Fraction(p) ** v * (head + last), p, N)


_DIGITS_RE = re.compile(r"^\s*(-?\d+)\s*;\s*(\d+(?:\s*,\s*\d+)*)\s*$")
_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(-?\d+))?\s*$")


def parse_padic(text: str, p: int, N: int = DEFAULT_PRECISION) -> PAdic:
    """Parse ``"num/den"``, ``"int"`` or the digit form ``"v;d0,d1,..."``.

    Parsed values are exact; digit strings repeat their last digit.
    """
    m = _DIGITS_RE.match(text)
    if m:
        digits = [int(d) for d in m.group(2).split(",")]
        return from_digits(int(m.group(1)), digits, p, N)
    m = _RATIONAL_RE.match(text)
    if m:
        den = int(m.group(2)) if m.group(2) else 1
        return from_rational(int(m.group(1)), den, p, N, exact=True)
    raise ValueError(f"cannot parse {text!r} as a p-adic number")


# -- operations on values ----------------------------------------------------


def add(x: PAdic, y: PAdic) -> PAdic:
    return x + y


def sub(x: PAdic, y: PAdic) -> PAdic:
    return x - y


def neg(x: PAdic) -> PAdic:
    return -x


def mul(x: PAdic, y: PAdic) -> PAdic:
    return x * y


def div(x: PAdic, y: PAdic) -> PAdic:
    return x / y


def norm(x: PAdic) -> NormValue:
    return x.norm()


def valuation(x: PAdic) -> int:
    return x.valuation


def canonical_digits(x: PAdic, k: int) -> tuple[int, ...]:
    """The first ``k`` digits of the unit part of ``x``.

    Raises :class:`PrecisionError` if ``k`` exceeds the guaranteed precision
    of an inexact value.
    """
    if not x.is_exact and k > x.precision:
        raise PrecisionError(f"{k} digits requested, only {x.precision} guaranteed")
    return x.digits(k)


# -- geometry ----------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """Closed ball ``{x : |x - center| <= p**log_radius}``."""

    center: PAdic
    log_radius: int

    @classmethod
    def closed(cls, center: PAdic, log_radius: int) -> "Ball":
        return cls(center, log_radius)

    @classmethod
    def open(cls, center: PAdic, log_radius: int) -> "Ball":
        """``{x : |x - center| < p**log_radius}``, i.e. the closed ball one step in."""
        return cls(center, log_radius - 1)

    def contains(self, x: PAdic) -> bool:
        d = x - self.center
        bound = d.log_norm_bound()
        if bound is None or bound <= self.log_radius:
            return True
        if d.is_indeterminate:
            raise IndeterminateZero("cannot decide ball membership at this precision")
        return False

    def max_log_norm(self) -> int:
        """Exponent bounding the norm of every member."""
        c = self.center.log_norm_bound()
        return self.log_radius if c is None else max(c, self.log_radius)

    def __str__(self):
        return f"B[{compact(self.center)}, p^{self.log_radius}]"


@dataclass(frozen=True)
class Sphere:
    """``{x : |x - center| = p**log_radius}``."""

    center: PAdic
    log_radius: int

    def contains(self, x: PAdic) -> bool:
        d = x - self.center
        if d.is_exact_zero:
            return False
        if d.is_indeterminate:
            if -d.absolute_precision < self.log_radius:
                return False
            raise IndeterminateZero("cannot decide sphere membership at this precision")
        return -d._v == self.log_radius

    def ball(self) -> Ball:
        return Ball(self.center, self.log_radius)

    def __str__(self):
        return f"S[{compact(self.center)}, p^{self.log_radius}]"


def ball_contains(ball: Ball, x: PAdic) -> bool:
    return ball.contains(x)


def sphere_contains(sphere: Sphere, x: PAdic) -> bool:
    return sphere.contains(x)


def distance(x: PAdic, y: PAdic) -> NormValue:
    """``|x - y|``; raises :class:`IndeterminateZero` if the difference cancelled."""
    return (x - y).norm()


# -- rendering ---------------------------------------------------------------


def render(x: PAdic, terms: int = 8) -> str:
    """Human-readable ``p^v * (d0 + d1*p + ...) [N digits]``."""
    p = x.p
    if x.is_exact_zero:
        return "0 [exact]"
    if x.is_indeterminate:
        return f"O({p}^{x.absolute_precision})"
    shown = x.digits(min(terms, x.precision))
    parts = []
    for i, d in enumerate(shown):
        parts.append(str(d) if i == 0 else f"{d}*{p}" if i == 1 else f"{d}*{p}^{i}")
    if x.precision > len(shown) or x.is_exact:
        parts.append("...")
    tag = "exact" if x.is_exact else f"{x.precision} digits"
    return f"{p}^{x.valuation} * ({' + '.join(parts)}) [{tag}]"


def compact(x: PAdic, max_digits: Optional[int] = None) -> str:
    """Compact form ``"v; d0,d1,...,dk"`` used in reports."""
    if x.is_exact_zero:
        return "0"
    if x.is_indeterminate:
        return f"O({x.p}^{x.absolute_precision})"
    k = x.precision if max_digits is None else min(max_digits, x.precision)
    return f"{x.valuation}; " + ",".join(str(d) for d in x.digits(k))
