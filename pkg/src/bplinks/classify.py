"""Classification data: bP-group orders, exotic-sphere offsets, tables.

The group bP_{4m} of (4m-1)-spheres bounding parallelizable manifolds
is cyclic of order

    2^{2m-2} (2^{2m-1} - 1) * numerator(4 B_m / m),

B_m the m-th Bernoulli number in the topologists' indexing.  In
dimension 4m+1 the group bP_{4m+2} is trivial or Z/2, settled except
for a short list of exceptional m.  Signatures of Milnor fibres refine
the homology classification of the links by an offset in bP: two links
with the same (torsion-free) middle homology differ by the element of
bP_{4n} numbered (t(a) - t(b))/8.

D_n(k) counts the distinct differentiable structures realized by the
k-th member of the distinguished family relative to its base member:
|bP_{4n}| / gcd(tau_k, |bP_{4n}|).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import IncomparableLinks, InvalidExponent, NotDivisibleBy8
from .exact_arith import bernoulli, numerator_of
from .link_model import (
    BrieskornLink,
    Family,
    FamilySpec,
    build_family,
    make_link,
)
from .monodromy import FgAbelianGroup, cover_homology, link_rank
from .signature import compute_signature, tau


# ----------------------------------------------------------------------
# Orders of the groups bP
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BpOrder:
    """|bP_{4m}| together with its three factors."""

    m: int
    order: int
    power_of_two: int
    mersenne_factor: int
    bernoulli_numerator: int


def bp_order(m: int) -> BpOrder:
    """Order of bP_{4m} for m >= 2 (below that the group is trivial)."""
    if m < 2:
        raise ValueError(f"bp_order needs m >= 2, got {m}")
    power = 2 ** (2 * m - 2)
    mersenne = 2 ** (2 * m - 1) - 1
    b_num = numerator_of(4 * bernoulli(m) / m)
    return BpOrder(
        m=m,
        order=power * mersenne * b_num,
        power_of_two=power,
        mersenne_factor=mersenne,
        bernoulli_numerator=b_num,
    )


class KervaireCase(enum.Enum):
    """bP_{4m+2}: trivial, Z/2, or not yet determined."""

    TRIVIAL = "trivial"
    Z2 = "Z/2"
    UNKNOWN = "unknown"


_KERVAIRE_TRIVIAL = frozenset({1, 3, 7, 15})


def bp_order_4m_plus_2(m: int) -> KervaireCase:
    """The group bP_{4m+2} by the Kervaire-invariant dichotomy.

    Trivial for m in {1, 3, 7, 15}; Z/2 whenever m is not of the form
    2^i - 1 with i >= 3; the remaining cases (m = 31, 63, ...) are
    recorded as unknown.
    """
    if m < 1:
        raise ValueError(f"bp_order_4m_plus_2 needs m >= 1, got {m}")
    if m in _KERVAIRE_TRIVIAL:
        return KervaireCase.TRIVIAL
    value = m + 1
    if value & (value - 1) == 0 and value >= 8:
        return KervaireCase.UNKNOWN
    return KervaireCase.Z2


# ----------------------------------------------------------------------
# Counting structures and comparing links
# ----------------------------------------------------------------------

def diffeo_count(n: int, k: int) -> int:
    """D_n(k) = |bP_{4n}| / gcd(tau_k, |bP_{4n}|)."""
    order = bp_order(n).order
    return order // gcd(tau(k), order)


def _as_exponents(link) -> tuple[int, ...]:
    if isinstance(link, BrieskornLink):
        return link.exponents
    return make_link(link).exponents


def diffeo_offset(link_a, link_b, n: int) -> int:
    """Which element of bP_{4n} separates two homeomorphic links.

    Both links must have middle homology of the same rank (and the
    caller is responsible for torsion-freeness); the offset is
    (t(a) - t(b)) / 8 reduced mod |bP_{4n}|.
    """
    exps_a = _as_exponents(link_a)
    exps_b = _as_exponents(link_b)
    rank_a = link_rank(exps_a)
    rank_b = link_rank(exps_b)
    if rank_a != rank_b:
        raise IncomparableLinks(
            f"middle homology ranks differ: {rank_a} for {exps_a} vs {rank_b} for {exps_b}"
        )
    t_a = compute_signature(exps_a).value
    t_b = compute_signature(exps_b).value
    diff = t_a - t_b
    if diff % 8:
        raise NotDivisibleBy8(f"t(a) - t(b) = {diff} is not divisible by 8")
    return (diff // 8) % bp_order(n).order


# ----------------------------------------------------------------------
# Family classification records
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationRecord:
    """Everything the classification pins down for one family member."""

    spec: FamilySpec
    exponents: tuple[int, ...]
    dimension: int
    homology: FgAbelianGroup
    fibre_signature: int | None
    bp_order: BpOrder | None
    kervaire: KervaireCase | None
    offset: int | None
    base_exponents: tuple[int, ...] | None
    label: str


def _sphere_product_record(spec: FamilySpec) -> ClassificationRecord:
    n, k, i = spec.n, spec.k, spec.i
    link = build_family(spec)
    branch = (2 * k + 1,) + (2,) * (2 * n - 1)
    homology = cover_homology(branch, 2 * i * (2 * k + 1))
    base = build_family(FamilySpec(Family.SPHERE_PRODUCT, n=n, k=k, i=1))
    offset = diffeo_offset(link, base, n)
    order = bp_order(n)
    label = (
        f"{2 * k}#(S^{2 * n - 1} x S^{2 * n}) # {offset}*Sigma rel. base"
    )
    return ClassificationRecord(
        spec=spec,
        exponents=link.exponents,
        dimension=link.link_dimension,
        homology=homology,
        fibre_signature=compute_signature(link.exponents).value,
        bp_order=order,
        kervaire=None,
        offset=offset,
        base_exponents=base.exponents,
        label=label,
    )


_TORSION_BASE_FOLD = {0: 6, 1: 7, 2: 2, 3: 3, 4: 4, 5: 5}


def _torsion_record(spec: FamilySpec) -> ClassificationRecord:
    n, k = spec.n, spec.k
    link = build_family(spec)
    branch = (3,) + (2,) * (2 * n - 1)
    homology = cover_homology(branch, k)
    base_fold = _TORSION_BASE_FOLD[k % 6]
    base = make_link((base_fold, 3) + (2,) * (2 * n - 1))
    offset = diffeo_offset(link, base, n)
    order = bp_order(n)
    kind = {
        0: "free rank 2",
        1: "homotopy sphere",
        2: "Z/3 type K_2",
        3: "torsion Z/2+Z/2",
        4: "Z/3 type K_4",
        5: "homotopy sphere",
    }[k % 6]
    label = f"{kind} # {offset}*Sigma rel. K_{base_fold}"
    return ClassificationRecord(
        spec=spec,
        exponents=link.exponents,
        dimension=link.link_dimension,
        homology=homology,
        fibre_signature=compute_signature(link.exponents).value,
        bp_order=order,
        kervaire=None,
        offset=offset,
        base_exponents=base.exponents,
        label=label,
    )


def _free_odd_record(spec: FamilySpec) -> ClassificationRecord:
    n, k = spec.n, spec.k
    link = build_family(spec)
    branch = (2 * k + 1,) + (2,) * (2 * n)
    homology = cover_homology(branch, 2 * (2 * k + 1))
    case = bp_order_4m_plus_2(n)
    products = f"{2 * k}#(S^{2 * n} x S^{2 * n + 1})"
    tangent = f"{2 * k - 1}#(S^{2 * n} x S^{2 * n + 1}) # T"
    if case is KervaireCase.TRIVIAL:
        label = f"one of {products}, {tangent}"
    else:
        label = f"one of {products}, {tangent}, {products} # Sigma"
    return ClassificationRecord(
        spec=spec,
        exponents=link.exponents,
        dimension=link.link_dimension,
        homology=homology,
        fibre_signature=None,
        bp_order=None,
        kervaire=case,
        offset=None,
        base_exponents=None,
        label=label,
    )


def _free_even_record(spec: FamilySpec) -> ClassificationRecord:
    n, k = spec.n, spec.k
    link = build_family(spec)
    branch = (2 * k,) + (2,) * (2 * n)
    homology = cover_homology(branch, 2 * k)
    case = bp_order_4m_plus_2(n)
    if k == 1:
        label = f"T(S^{2 * n + 1})"
    else:
        products = f"{2 * k - 1}#(S^{2 * n} x S^{2 * n + 1})"
        with_tangent = f"{2 * k - 2}#(S^{2 * n} x S^{2 * n + 1}) # T"
        label = f"free rank {2 * k - 1}: one of {products}, {with_tangent}"
        if case is not KervaireCase.TRIVIAL:
            label += " (possibly # Sigma)"
    return ClassificationRecord(
        spec=spec,
        exponents=link.exponents,
        dimension=link.link_dimension,
        homology=homology,
        fibre_signature=None,
        bp_order=None,
        kervaire=case,
        offset=None,
        base_exponents=None,
        label=label,
    )


def _unit_tangent_record(spec: FamilySpec) -> ClassificationRecord:
    n, k = spec.n, spec.k
    link = build_family(spec)
    branch = (2,) * (2 * n + 1)
    homology = cover_homology(branch, 2 * k)
    case = bp_order_4m_plus_2(n)
    residue = k % 4
    if residue in (1, 3):
        label = f"T(S^{2 * n + 1})"
    elif residue == 0:
        label = f"S^{2 * n} x S^{2 * n + 1}"
    elif case is KervaireCase.TRIVIAL:
        label = f"S^{2 * n} x S^{2 * n + 1}"
    elif case is KervaireCase.Z2:
        label = f"(S^{2 * n} x S^{2 * n + 1}) # Sigma_K"
    else:
        label = f"(S^{2 * n} x S^{2 * n + 1}) # Sigma_K (Sigma_K possibly standard)"
    return ClassificationRecord(
        spec=spec,
        exponents=link.exponents,
        dimension=link.link_dimension,
        homology=homology,
        fibre_signature=None,
        bp_order=None,
        kervaire=case,
        offset=None,
        base_exponents=None,
        label=label,
    )


def classification_record(spec: FamilySpec) -> ClassificationRecord:
    """Homology, signature data, and a label for one family member."""
    if spec.family in (Family.SPHERE_PRODUCT, Family.TORSION_Z3) and spec.n < 2:
        raise InvalidExponent(
            f"classification in dimension {4 * spec.n - 1} needs n >= 2"
        )
    builder = {
        Family.SPHERE_PRODUCT: _sphere_product_record,
        Family.TORSION_Z3: _torsion_record,
        Family.FREE_ODD: _free_odd_record,
        Family.FREE_EVEN: _free_even_record,
        Family.UNIT_TANGENT: _unit_tangent_record,
    }[spec.family]
    return builder(spec)


# ----------------------------------------------------------------------
# Tables of D_n(k)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    k: int
    tau: int
    count: int
    ratio: Fraction


@dataclass(frozen=True)
class TableData:
    dimension: int
    n: int
    bp: BpOrder
    rows: tuple[TableRow, ...]


_TABLE_DIMENSION_TO_N = {7: 2, 11: 3}


def table_emit(dimension: int, k_values) -> TableData:
    """Rows (k, tau_k, D_n(k), D_n(k)/|bP_{4n}|) for the given dimension.

    Supported link dimensions are 7 (n = 2) and 11 (n = 3), the two
    fully tabulated cases.
    """
    if dimension not in _TABLE_DIMENSION_TO_N:
        raise ValueError(f"tables exist for dimensions 7 and 11, not {dimension}")
    n = _TABLE_DIMENSION_TO_N[dimension]
    order = bp_order(n)
    rows = []
    for k in k_values:
        t = tau(k)
        count = order.order // gcd(t, order.order)
        rows.append(TableRow(k=k, tau=t, count=count, ratio=Fraction(count, order.order)))
    return TableData(dimension=dimension, n=n, bp=order, rows=tuple(rows))
