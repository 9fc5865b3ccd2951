"""Exact rational arithmetic and certified real intervals.

Two layers live here.  The rational layer is `fractions.Fraction`
(re-exported as `Rational`) plus the Bernoulli numbers needed for the
orders of groups of homotopy spheres.  The certified layer evaluates
cotangent sums whose values are known in advance to be integers: every
intermediate quantity is kept as an interval [lo, hi] of MPFR floats
rounded outward, so the true real number is trapped between the
endpoints.  When the interval around the final sum has width below 1/2
and hugs a single integer, that integer is certified; otherwise we
retry at doubled precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable

import gmpy2

from .errors import AmbiguousRounding

Rational = Fraction

DEFAULT_PRECISION_BITS = 128
MAX_PRECISION_BITS = 16384


# ----------------------------------------------------------------------
# Bernoulli numbers
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_modern(index: int) -> Fraction:
    """Bernoulli number B_index in the modern convention (B_1 = -1/2).

    Computed by the defining recurrence
        sum_{j=0}^{m} C(m+1, j) B_j = 0   (m >= 1),
    solved for B_m.  Exact rational arithmetic throughout; the loop is
    iterative so large indices do not hit the recursion limit.
    """
    if index < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    row = [Fraction(1)]
    for m in range(1, index + 1):
        acc = sum(comb(m + 1, j) * row[j] for j in range(m))
        row.append(Fraction(-acc, m + 1))
    return row[index]


def bernoulli(m: int) -> Fraction:
    """The m-th Bernoulli number as topologists index them.

    This is |B_{2m}| in the modern convention, so the sequence runs
    1/6, 1/30, 1/42, 1/30, 5/66, ...  Only m >= 1 is meaningful.
    """
    if m < 1:
        raise ValueError("Bernoulli index must be >= 1")
    return abs(bernoulli_modern(2 * m))


def numerator_of(q: Fraction | int) -> int:
    """Numerator of q in lowest terms (Fraction keeps itself reduced).

    Only exact rationals are accepted; a float here would mean some
    upstream computation silently left exact arithmetic.
    """
    if not isinstance(q, (Fraction, int)):
        raise TypeError(f"exact rational required, got {type(q).__name__}")
    return Fraction(q).numerator


# ----------------------------------------------------------------------
# Directed-rounding contexts
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _contexts(bits: int) -> tuple[gmpy2.context, gmpy2.context]:
    """A (round-down, round-up) pair of MPFR contexts at `bits` precision."""
    if bits < 2:
        raise ValueError("precision must be at least 2 bits")
    down = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=bits, round=gmpy2.RoundUp)
    return down, up


@dataclass(frozen=True)
class CertifiedReal:
    """An interval [lo, hi] certified to contain one real number.

    Endpoints are gmpy2 numbers: mpfr in general, exact mpz when the
    value is an integer.  Arithmetic rounds lo down and hi up at every
    step, so enclosure is preserved under +, -, *, and / (division by
    an interval straddling zero is refused).  Mixed operands take the
    larger precision.
    """

    lo: object
    hi: object
    precision: int

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise AmbiguousRounding(f"inverted interval [{self.lo}, {self.hi}]")

    # -- constructors --------------------------------------------------

    @classmethod
    def from_int(cls, value: int, precision: int = DEFAULT_PRECISION_BITS) -> "CertifiedReal":
        exact = gmpy2.mpz(value)
        return cls(exact, exact, precision)

    @classmethod
    def from_fraction(cls, value: Fraction | int, precision: int = DEFAULT_PRECISION_BITS) -> "CertifiedReal":
        value = Fraction(value)
        down, up = _contexts(precision)
        lo = down.div(value.numerator, value.denominator)
        hi = up.div(value.numerator, value.denominator)
        return cls(lo, hi, precision)

    @classmethod
    def pi(cls, precision: int = DEFAULT_PRECISION_BITS) -> "CertifiedReal":
        down, up = _contexts(precision)
        return cls(down.const_pi(), up.const_pi(), precision)

    # -- queries ---------------------------------------------------------

    def width(self) -> "gmpy2.mpfr":
        _, up = _contexts(self.precision)
        return up.sub(self.hi, self.lo)

    def contains(self, value: Fraction | int) -> bool:
        return self.lo <= value <= self.hi

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"CertifiedReal([{self.lo}, {self.hi}], bits={self.precision})"

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "CertifiedReal":
        if isinstance(other, CertifiedReal):
            return other
        if isinstance(other, (int, Fraction)):
            return CertifiedReal.from_fraction(other, self.precision)
        return NotImplemented  # type: ignore[return-value]

    def __neg__(self) -> "CertifiedReal":
        # Python's unary minus on mpfr re-rounds under the ambient
        # context and would silently shrink the enclosure; negate with
        # the directed contexts instead.
        down, up = _contexts(self.precision)
        return CertifiedReal(down.minus(self.hi), up.minus(self.lo), self.precision)

    def __add__(self, other) -> "CertifiedReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.precision, other.precision)
        down, up = _contexts(prec)
        return CertifiedReal(down.add(self.lo, other.lo), up.add(self.hi, other.hi), prec)

    __radd__ = __add__

    def __sub__(self, other) -> "CertifiedReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CertifiedReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "CertifiedReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.precision, other.precision)
        down, up = _contexts(prec)
        pairs = ((self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi))
        lo = min(down.mul(a, b) for a, b in pairs)
        hi = max(up.mul(a, b) for a, b in pairs)
        return CertifiedReal(lo, hi, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CertifiedReal":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("certified division by an interval containing zero")
        prec = max(self.precision, other.precision)
        down, up = _contexts(prec)
        pairs = ((self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi))
        lo = min(down.div(a, b) for a, b in pairs)
        hi = max(up.div(a, b) for a, b in pairs)
        return CertifiedReal(lo, hi, prec)


def cot_pi(r: Fraction, precision: int = DEFAULT_PRECISION_BITS) -> CertifiedReal:
    """Certified enclosure of cot(pi * r) for rational r.

    r is reduced mod 1 exactly first.  r = 1/2 gives the exact zero
    interval; an integral r is a pole and is rejected.  On (0, 1) the
    cotangent is strictly decreasing, so the enclosure comes from
    evaluating at outward-rounded endpoints of pi*r and swapping.
    """
    r = Fraction(r) % 1
    if r == 0:
        raise ZeroDivisionError("cot(pi * integer) is a pole")
    if r == Fraction(1, 2):
        return CertifiedReal.from_int(0, precision)
    down, up = _contexts(precision)
    num, den = r.numerator, r.denominator
    x_lo = down.div(down.mul(down.const_pi(), num), den)
    x_hi = up.div(up.mul(up.const_pi(), num), den)
    # cot is decreasing on (0, pi): lower bound at the right endpoint.
    return CertifiedReal(down.cot(x_hi), up.cot(x_lo), precision)


def round_to_integer(x: CertifiedReal) -> int:
    """The unique integer certified by x, if there is one.

    Requires the interval width below 1/2 and both endpoints within
    1/4 of the same integer; anything looser raises AmbiguousRounding
    so the caller can retry at higher precision.
    """
    if not x.width() < Fraction(1, 2):
        raise AmbiguousRounding(f"interval width {x.width()} is not below 1/2")
    down, _ = _contexts(x.precision)
    mid = down.div(down.add(x.lo, x.hi), 2)
    floor_mid = int(gmpy2.floor(mid))
    for candidate in (floor_mid, floor_mid + 1):
        if x.lo >= Fraction(4 * candidate - 1, 4) and x.hi <= Fraction(4 * candidate + 1, 4):
            return candidate
    raise AmbiguousRounding(f"no integer within 1/4 of both endpoints of [{x.lo}, {x.hi}]")


def certified_integer(
    evaluate: Callable[[int], CertifiedReal],
    start_bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> tuple[int, int]:
    """Run `evaluate(bits)` at escalating precision until it rounds.

    Returns (integer, bits_used).  Precision doubles on each
    AmbiguousRounding until `max_bits`; if even that fails, the final
    AmbiguousRounding propagates, which means the quantity is either
    not an integer or astronomically ill-conditioned.
    """
    bits = start_bits
    while True:
        try:
            return round_to_integer(evaluate(bits)), bits
        except AmbiguousRounding:
            if bits >= max_bits:
                raise
            bits = min(2 * bits, max_bits)
