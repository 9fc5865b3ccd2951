"""Brieskorn-Pham links and the parametric families studied here.

A link is determined by its exponent vector a = (a_0, ..., a_n), all
entries at least 2: it is the intersection of the hypersurface
z_0^{a_0} + ... + z_n^{a_n} = 0 with the unit sphere, a smooth
(2n-1)-manifold.  This module holds the combinatorial data attached to
the exponents (Milnor number, weights, degree), the weighted-link
stabilization step used when passing to higher dimensions, and the
Sasakian positivity criterion |w| - d > 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from math import lcm, prod

from .errors import InvalidExponent


def _validate_exponents(exponents) -> tuple[int, ...]:
    exps = tuple(int(a) for a in exponents)
    if not exps:
        raise InvalidExponent("exponent vector is empty")
    for a in exps:
        if a < 2:
            raise InvalidExponent(f"exponent {a} is below 2")
    return exps


@dataclass(frozen=True)
class BrieskornLink:
    """Exponent vector plus the numerical data it determines."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "exponents", _validate_exponents(self.exponents))

    @property
    def variable_count(self) -> int:
        return len(self.exponents)

    @property
    def fibre_dimension(self) -> int:
        """Complex dimension n of the Milnor fibre (variables minus one)."""
        return self.variable_count - 1

    @property
    def link_dimension(self) -> int:
        """Real dimension of the link: 2n - 1 for n + 1 variables."""
        return 2 * self.variable_count - 3

    @cached_property
    def milnor_number(self) -> int:
        """Rank of the middle homology of the Milnor fibre: prod(a_i - 1)."""
        return prod(a - 1 for a in self.exponents)

    @cached_property
    def degree(self) -> int:
        """lcm of the exponents; the degree d of the weighted defining polynomial."""
        return lcm(*self.exponents)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        """Integer weights w_i = d / a_i, so each monomial has degree d."""
        d = self.degree
        return tuple(d // a for a in self.exponents)


def make_link(exponents) -> BrieskornLink:
    """Build a link from any iterable of integer exponents (all >= 2)."""
    return BrieskornLink(tuple(exponents))


def milnor_number(link: BrieskornLink) -> int:
    return link.milnor_number


def is_ricci_positive(weights, degree: int) -> bool:
    """Whether |w| - d > 0, the criterion for positive Sasakian structures."""
    return sum(weights) - degree > 0


def stabilize(weights_prime, degree_prime: int) -> tuple[tuple[int, ...], int]:
    """One suspension step on weighted data, keeping weights integral.

    Given weights w' with degree d' in n variables, the stabilized
    hypersurface adds a square term.  If d' is odd the data is doubled
    so the new weight d'/2 stays integral:

        d' odd:  ((d', d', 2*w'_1, ..., 2*w'_n), 2*d')
        d' even: ((d'/2, d'/2, w'_1, ..., w'_n), d')

    The first two entries are the weights of the two new coordinates
    in the standard presentation used for the induction.
    """
    weights_prime = tuple(int(w) for w in weights_prime)
    degree_prime = int(degree_prime)
    if degree_prime % 2:
        return (degree_prime, degree_prime) + tuple(2 * w for w in weights_prime), 2 * degree_prime
    return (degree_prime // 2, degree_prime // 2) + weights_prime, degree_prime


# ----------------------------------------------------------------------
# Parametric families
# ----------------------------------------------------------------------

class Family(enum.Enum):
    """The five exponent-vector families with worked-out classifications."""

    SPHERE_PRODUCT = "sphere-product"
    FREE_ODD = "free-odd"
    FREE_EVEN = "free-even"
    UNIT_TANGENT = "unit-tangent"
    TORSION_Z3 = "torsion-z3"


@dataclass(frozen=True)
class FamilySpec:
    """A family tag with its parameters.

    n controls the dimension (4n-1 for SPHERE_PRODUCT and TORSION_Z3,
    4n+1 for the others), k indexes the member, and i is the extra
    cover-fold index of the SPHERE_PRODUCT family (must stay 1
    elsewhere).
    """

    family: Family
    n: int
    k: int
    i: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidExponent(f"family parameter n={self.n} must be >= 1")
        if self.i < 1:
            raise InvalidExponent(f"family parameter i={self.i} must be >= 1")
        if self.i != 1 and self.family is not Family.SPHERE_PRODUCT:
            raise InvalidExponent(f"parameter i applies only to {Family.SPHERE_PRODUCT.value}")


def family_exponents(spec: FamilySpec) -> tuple[int, ...]:
    """The exponent vector of a family member.

    Entries below 2 (for example UNIT_TANGENT with k=0, or TORSION_Z3
    with k=1) fail link validation, so bad parameters surface as
    InvalidExponent from make_link.
    """
    n, k, i = spec.n, spec.k, spec.i
    if spec.family is Family.SPHERE_PRODUCT:
        return (2 * i * (2 * k + 1), 2 * k + 1) + (2,) * (2 * n - 1)
    if spec.family is Family.FREE_ODD:
        return (2 * (2 * k + 1), 2 * k + 1) + (2,) * (2 * n)
    if spec.family is Family.FREE_EVEN:
        return (2 * k, 2 * k) + (2,) * (2 * n)
    if spec.family is Family.UNIT_TANGENT:
        return (2 * k,) + (2,) * (2 * n + 1)
    if spec.family is Family.TORSION_Z3:
        return (k, 3) + (2,) * (2 * n - 1)
    raise ValueError(f"unknown family {spec.family!r}")


def build_family(spec: FamilySpec) -> BrieskornLink:
    return make_link(family_exponents(spec))
