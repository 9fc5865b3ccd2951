"""Signature of the Milnor fibre of a Brieskorn-Pham singularity.

For exponents a = (a_0, ..., a_n) with n even, the intersection form
on the middle homology of the fibre is symmetric and its signature
t(a) is computed here three independent ways:

* `lattice`: Brieskorn's count over the open box of lattice points
  x in prod (0, a_i), classifying sum x_i / a_i mod 2 into (0, 1)
  (positive) and (1, 2) (negative).  Transparent and O(mu); the
  reference the other methods are tested against.

* `dp`: the same count folded through the residues of
  S = sum x_i * (N / a_i) mod 2N, N = lcm(a_i), built by dynamic
  programming one variable at a time.  Cost O(N * sum a_i) regardless
  of mu.

* `zagier`: the finite cotangent sum
  t(a) = ((-1)^{n/2} / N) * sum_{j<N} cot(pi(2j+1)/2N) prod_i cot(pi(2j+1)/2a_i)
  valid for any common multiple N of the a_i, evaluated in certified
  interval arithmetic and rounded to the unique enclosed integer.

t_pair and tau expose the signature data of the distinguished
one-parameter family whose consecutive members differ by tau_k
exotic-sphere steps.
"""

from __future__ import annotations

import enum
import itertools
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod

import numpy as np

from .errors import (
    AmbiguousRounding,
    BudgetExceeded,
    InvalidExponent,
    NotCommonMultiple,
    NotDivisibleBy8,
    OddDimension,
)
from .exact_arith import (
    DEFAULT_PRECISION_BITS,
    MAX_PRECISION_BITS,
    CertifiedReal,
    certified_integer,
    cot_pi,
)
from .link_model import _validate_exponents

LATTICE_BUDGET_DEFAULT = 10**8
LATTICE_AUTO_LIMIT = 10**4
DP_AUTO_LIMIT = 10**8

# Counts in the residue table are bounded by mu; stay clear of int64.
_INT64_SAFE = 2**62


class Method(enum.Enum):
    LATTICE = "lattice"
    DP = "dp"
    ZAGIER = "zagier"


def _check_even_fibre(exponents: tuple[int, ...]) -> None:
    n = len(exponents) - 1
    if n % 2:
        raise OddDimension(
            f"{len(exponents)} variables give fibre dimension {n}; "
            "the intersection form is symmetric only for even n"
        )


# ----------------------------------------------------------------------
# Residue distribution kernel (shared with the branched-cover module)
# ----------------------------------------------------------------------

def residue_distribution(exponents) -> tuple[int, list[int]]:
    """Distribution of S = sum x_i * (N / a_i) mod 2N over the open box.

    Returns (N, counts) where N = lcm(a_i) and counts[r] is the number
    of lattice points x in prod (0, a_i) with S congruent to r mod 2N.
    Uses an int64 convolution when the Milnor number fits, exact Python
    integers otherwise.
    """
    exps = _validate_exponents(exponents)
    big_n = lcm(*exps)
    two_n = 2 * big_n
    mu = prod(a - 1 for a in exps)
    if mu < _INT64_SAFE:
        freq = np.zeros(two_n, dtype=np.int64)
        freq[0] = 1
        for a in exps:
            step = big_n // a
            acc = np.zeros_like(freq)
            for x in range(1, a):
                acc += np.roll(freq, (x * step) % two_n)
            freq = acc
        return big_n, [int(c) for c in freq]
    counts = [0] * two_n
    counts[0] = 1
    for a in exps:
        step = big_n // a
        acc = [0] * two_n
        for x in range(1, a):
            shift = (x * step) % two_n
            for r, c in enumerate(counts):
                if c:
                    acc[(r + shift) % two_n] += c
        counts = acc
    return big_n, counts


# ----------------------------------------------------------------------
# The three signature computations
# ----------------------------------------------------------------------

def signature_lattice(exponents, budget: int = LATTICE_BUDGET_DEFAULT) -> int:
    """Signature by direct enumeration of the open lattice box."""
    exps = _validate_exponents(exponents)
    _check_even_fibre(exps)
    mu = prod(a - 1 for a in exps)
    if mu > budget:
        raise BudgetExceeded(f"lattice enumeration of {mu} points exceeds budget {budget}")
    positive = negative = 0
    for x in itertools.product(*(range(1, a) for a in exps)):
        s = sum(Fraction(xi, ai) for xi, ai in zip(x, exps)) % 2
        if 0 < s < 1:
            positive += 1
        elif 1 < s < 2:
            negative += 1
    return positive - negative


def signature_dp(exponents) -> int:
    """Signature from the residue distribution of S mod 2N."""
    exps = _validate_exponents(exponents)
    _check_even_fibre(exps)
    big_n, counts = residue_distribution(exps)
    positive = sum(counts[1:big_n])
    negative = sum(counts[big_n + 1 :])
    return positive - negative


def _cot_table(precision: int):
    """Memoized cot(pi * u / den2) factory for one evaluation pass."""
    cache: dict[tuple[int, int], CertifiedReal] = {}

    def factor(u: int, den2: int) -> CertifiedReal:
        key = (u % den2, den2)
        value = cache.get(key)
        if value is None:
            value = cot_pi(Fraction(key[0], den2), precision)
            cache[key] = value
        return value

    return factor


def _zagier_interval(exps: tuple[int, ...], big_n: int, precision: int) -> CertifiedReal:
    """Certified enclosure of the cotangent sum for t(a) at modulus N.

    Terms j and N-1-j are equal (each cotangent flips sign under
    u -> 2N - u and there are n+2 factors, an even count together with
    the leading one), and for odd N the middle term vanishes, so only
    j < N//2 is evaluated and the half-sum doubled.
    """
    multiplicity = Counter(exps)
    factor = _cot_table(precision)
    total = CertifiedReal.from_int(0, precision)
    for j in range(big_n // 2):
        u = 2 * j + 1
        lead = factor(u, 2 * big_n)
        if lead.lo == 0 and lead.hi == 0:
            continue
        term = lead
        zero = False
        for a, count in multiplicity.items():
            f = factor(u, 2 * a)
            if f.lo == 0 and f.hi == 0:
                zero = True
                break
            for _ in range(count):
                term = term * f
        if zero:
            continue
        total = total + term
    n = len(exps) - 1
    sign = 1 if (n // 2) % 2 == 0 else -1
    return (total * (2 * sign)) / CertifiedReal.from_int(big_n, precision)


def signature_zagier(
    exponents,
    modulus: int | None = None,
    start_bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> int:
    """Signature by the certified cotangent sum."""
    value, _ = _signature_zagier_with_bits(exponents, modulus, start_bits, max_bits)
    return value


def _signature_zagier_with_bits(
    exponents,
    modulus: int | None,
    start_bits: int,
    max_bits: int,
) -> tuple[int, int]:
    exps = _validate_exponents(exponents)
    _check_even_fibre(exps)
    big_n = lcm(*exps)
    if modulus is None:
        modulus = big_n
    elif modulus < 1 or modulus % big_n:
        raise NotCommonMultiple(f"{modulus} is not a common multiple of {exps}")
    return certified_integer(
        lambda bits: _zagier_interval(exps, modulus, bits),
        start_bits=start_bits,
        max_bits=max_bits,
    )


# ----------------------------------------------------------------------
# Dispatch
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SignatureReport:
    """A signature value plus how it was obtained."""

    exponents: tuple[int, ...]
    value: int
    method: Method
    modulus: int | None
    precision_bits: int | None
    elapsed: float


def compute_signature(
    exponents,
    method: str | Method = "auto",
    modulus: int | None = None,
    lattice_budget: int = LATTICE_BUDGET_DEFAULT,
    start_bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> SignatureReport:
    """Compute t(a) by the requested method, or pick one automatically.

    Auto dispatch: the lattice count when mu <= 10^4, the residue DP
    while 2N * (number of variables) stays within 10^8, the certified
    cotangent sum otherwise.  A modulus other than lcm(a) forces the
    cotangent sum, which is the only method that takes one.
    """
    exps = _validate_exponents(exponents)
    _check_even_fibre(exps)
    chosen = Method(method) if not isinstance(method, Method) and method != "auto" else method
    if chosen == "auto":
        if modulus is not None:
            chosen = Method.ZAGIER
        elif prod(a - 1 for a in exps) <= LATTICE_AUTO_LIMIT:
            chosen = Method.LATTICE
        elif 2 * lcm(*exps) * len(exps) <= DP_AUTO_LIMIT:
            chosen = Method.DP
        else:
            chosen = Method.ZAGIER
    if modulus is not None and chosen is not Method.ZAGIER:
        raise NotCommonMultiple("an explicit modulus requires the zagier method")

    started = time.perf_counter()
    bits_used: int | None = None
    used_modulus: int | None = None
    if chosen is Method.LATTICE:
        value = signature_lattice(exps, budget=lattice_budget)
    elif chosen is Method.DP:
        value = signature_dp(exps)
    else:
        value, bits_used = _signature_zagier_with_bits(exps, modulus, start_bits, max_bits)
        used_modulus = modulus if modulus is not None else lcm(*exps)
    elapsed = time.perf_counter() - started
    return SignatureReport(
        exponents=exps,
        value=value,
        method=chosen,
        modulus=used_modulus,
        precision_bits=bits_used,
        elapsed=elapsed,
    )


# ----------------------------------------------------------------------
# The distinguished family and tau
# ----------------------------------------------------------------------

def t_pair(k: int, n: int = 2, method: str | Method = "auto") -> tuple[int, int]:
    """Signatures (t_d, t_2d) of the degree-d and degree-2d family members.

    The exponent vectors are (2(2k+1), 2k+1, 2, ..., 2) and
    (4(2k+1), 2k+1, 2, ..., 2) on n+1 variables, n even.
    """
    if k < 1:
        raise InvalidExponent(f"family index k={k} must be >= 1")
    tail = (2,) * (n - 1)
    t_d = compute_signature((2 * (2 * k + 1), 2 * k + 1) + tail, method=method).value
    t_2d = compute_signature((4 * (2 * k + 1), 2 * k + 1) + tail, method=method).value
    return t_d, t_2d


def tau_via_signatures(k: int, n: int = 2, method: str | Method = "auto") -> int:
    """tau_k as |t_2d - t_d| / 8, straight from the two signatures."""
    t_d, t_2d = t_pair(k, n, method)
    diff = abs(t_2d - t_d)
    if diff % 8:
        raise NotDivisibleBy8(f"|t_2d - t_d| = {diff} is not divisible by 8")
    return diff // 8


def _tau_interval(k: int, precision: int) -> CertifiedReal:
    """Enclosure of (64k+32) * tau_k via the three-cotangent identity.

    tau_k * (64k+32) = sum_{j=0}^{8k+3} (-1)^j cot(pi u_j) (cot(pi u_j) - cot(pi v_j)) cot(pi w_j)
    with u_j = (2j+1)/(16k+8), v_j = (2j+1)/(8k+4), w_j = (2j+1)/(4k+2).
    Terms j and 8k+3-j agree, so half the range is summed and doubled.
    """
    factor = _cot_table(precision)
    total = CertifiedReal.from_int(0, precision)
    for j in range(4 * k + 2):
        u = 2 * j + 1
        c_outer = factor(u, 16 * k + 8)
        c_mid = factor(u, 8 * k + 4)
        c_inner = factor(u, 4 * k + 2)
        term = c_outer * (c_outer - c_mid) * c_inner
        if j % 2:
            term = -term
        total = total + term
    return (total * 2) / CertifiedReal.from_int(64 * k + 32, precision)


def tau(
    k: int,
    start_bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> int:
    """tau_k from the closed cotangent identity (independent of n)."""
    if k < 1:
        raise InvalidExponent(f"family index k={k} must be >= 1")
    value, _ = certified_integer(
        lambda bits: _tau_interval(k, bits),
        start_bits=start_bits,
        max_bits=max_bits,
    )
    if value < 1:
        raise AmbiguousRounding(f"tau_{k} evaluated to {value}, expected a positive integer")
    return value
