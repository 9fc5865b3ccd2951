"""Integral monodromy, Smith normal form, and cyclic branched covers.

The monodromy of the Milnor fibration of z_0^{a_0} + ... + z_n^{a_n}
acts on the middle homology (free of rank mu) as the tensor product of
companion matrices of the polynomials (t^{a_i} - 1)/(t - 1).  The
k-fold cyclic cover of the sphere branched along the link of a' (one
variable fewer) has middle homology equal to the cokernel of
I + h + h^2 + ... + h^{k-1} for h the monodromy of the branch
singularity; that cokernel is read off a Smith normal form over the
integers.

All matrices here are exact integer matrices stored as tuples of
tuples; sizes are guarded by an explicit budget since mu grows as a
product.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm, prod

from .errors import BudgetExceeded, NotFiniteOrder
from .link_model import _validate_exponents
from .signature import residue_distribution

MATRIX_BUDGET_DEFAULT = 4096

Matrix = tuple[tuple[int, ...], ...]


# ----------------------------------------------------------------------
# Integer matrix helpers
# ----------------------------------------------------------------------

def _identity(size: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(size)] for i in range(size)]


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    size = len(a)
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def _mat_add(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _freeze(a: list[list[int]]) -> Matrix:
    return tuple(tuple(row) for row in a)


def _companion_cyclic(a: int) -> list[list[int]]:
    """Companion matrix of (t^a - 1)/(t - 1) = t^{a-1} + ... + t + 1."""
    size = a - 1
    mat = [[0] * size for _ in range(size)]
    for i in range(size - 1):
        mat[i + 1][i] = 1
    for i in range(size):
        mat[i][size - 1] = -1
    return mat


def _kron(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    rows_a, rows_b = len(a), len(b)
    cols_a, cols_b = len(a[0]), len(b[0])
    out = [[0] * (cols_a * cols_b) for _ in range(rows_a * rows_b)]
    for i in range(rows_a):
        for j in range(cols_a):
            aij = a[i][j]
            if aij == 0:
                continue
            for p in range(rows_b):
                for q in range(cols_b):
                    out[i * rows_b + p][j * cols_b + q] = aij * b[p][q]
    return out


def _geometric_sum(h: list[list[int]], k: int) -> list[list[int]]:
    """I + h + ... + h^{k-1} with O(log k) multiplications.

    Recursion on (S_m, h^m): S_{2m} = S_m + h^m S_m, and an odd step
    appends the single power h^{2m}.
    """
    size = len(h)

    def step(m: int) -> tuple[list[list[int]], list[list[int]]]:
        if m == 1:
            return _identity(size), [row[:] for row in h]
        half, odd = divmod(m, 2)
        s, p = step(half)
        s = _mat_add(s, _mat_mul(p, s))
        p = _mat_mul(p, p)
        if odd:
            s = _mat_add(s, p)
            p = _mat_mul(p, h)
        return s, p

    if k < 1:
        raise ValueError("fold must be >= 1")
    total, _ = step(k)
    return total


# ----------------------------------------------------------------------
# Monodromy operator
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyOperator:
    """The monodromy on middle homology, with its eigenvalue order.

    The eigenvalues are the roots of unity exp(2 pi i sum x_j / a_j)
    over interior lattice points x, so the operator is semisimple of
    finite order `period` = lcm of the denominators of those sums.
    """

    exponents: tuple[int, ...]
    matrix: Matrix
    period: int

    @property
    def size(self) -> int:
        return len(self.matrix)


def _eigenvalue_period(exponents: tuple[int, ...]) -> int:
    """lcm of denominators of sum x_j / a_j over the open lattice box.

    Read off the residue distribution: the denominator of S/N for a
    residue class S mod N is N / gcd(S, N).
    """
    big_n, counts = residue_distribution(exponents)
    period = 1
    for r in range(big_n):
        if counts[r] or counts[r + big_n]:
            period = lcm(period, big_n // gcd(r, big_n))
    return period


def milnor_lattice(branch_exponents, budget: int = MATRIX_BUDGET_DEFAULT) -> MonodromyOperator:
    """Monodromy operator of the singularity with the given exponents."""
    exps = _validate_exponents(branch_exponents)
    mu = prod(a - 1 for a in exps)
    if mu > budget:
        raise BudgetExceeded(f"monodromy matrix of size {mu} exceeds budget {budget}")
    mat = _companion_cyclic(exps[0])
    for a in exps[1:]:
        mat = _kron(mat, _companion_cyclic(a))
    return MonodromyOperator(
        exponents=exps,
        matrix=_freeze(mat),
        period=_eigenvalue_period(exps),
    )


def monodromy_period(op: MonodromyOperator) -> int:
    """Least d >= 1 with h^d = I; cached on the operator at build time."""
    if op.period < 1:
        raise NotFiniteOrder(f"operator on {op.exponents} has no positive period")
    return op.period


# ----------------------------------------------------------------------
# Smith normal form
# ----------------------------------------------------------------------

def smith_normal_decomposition(matrix) -> tuple[Matrix, tuple[int, ...], Matrix]:
    """(U, divisors, V) with U * A * V diagonal and U, V unimodular.

    The divisor list has length min(rows, cols); entries are
    nonnegative, each divides the next, and zeros come last.  Pivoting
    always picks the entry of least absolute value (first in row-major
    order on ties), which makes the reduction deterministic.
    """
    a = [[int(v) for v in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise ValueError("matrix rows have unequal lengths")
    u = _identity(m)
    v = _identity(n)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, factor: int) -> None:
        a[dst] = [x + factor * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + factor * y for x, y in zip(u[dst], u[src])]

    def add_col(src: int, dst: int, factor: int) -> None:
        for row in a:
            row[dst] += factor * row[src]
        for row in v:
            row[dst] += factor * row[src]

    def scale_row(i: int, factor: int) -> None:
        a[i] = [factor * x for x in a[i]]
        u[i] = [factor * x for x in u[i]]

    def min_pivot(t: int) -> tuple[int, int] | None:
        best = None
        best_val = None
        for i in range(t, m):
            for j in range(t, n):
                val = abs(a[i][j])
                if val and (best_val is None or val < best_val):
                    best, best_val = (i, j), val
        return best

    rank_bound = min(m, n)
    t = 0
    while t < rank_bound:
        pos = min_pivot(t)
        if pos is None:
            break
        while True:
            swap_rows(t, pos[0])
            swap_cols(t, pos[1])
            if a[t][t] < 0:
                scale_row(t, -1)
            pivot = a[t][t]
            # Clear column t with row operations, then row t with
            # column operations.  A nonzero remainder becomes the new
            # (strictly smaller) pivot and the loop repeats.
            dirty = False
            for i in range(m):
                if i != t and a[i][t]:
                    add_row(t, i, -(a[i][t] // pivot))
                    if a[i][t]:
                        dirty = True
            if dirty:
                pos = min_pivot(t)
                continue
            for j in range(n):
                if j != t and a[t][j]:
                    add_col(t, j, -(a[t][j] // pivot))
                    if a[t][j]:
                        dirty = True
            if dirty:
                pos = min_pivot(t)
                continue
            # Divisibility: the pivot must divide the trailing block.
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
            pos = min_pivot(t)
        t += 1

    divisors = tuple(a[i][i] for i in range(rank_bound))
    return _freeze(u), divisors, _freeze(v)


def smith_normal_form(matrix) -> tuple[int, ...]:
    """Just the divisor chain of the Smith normal form."""
    _, divisors, _ = smith_normal_decomposition(matrix)
    return divisors


# ----------------------------------------------------------------------
# Finitely generated abelian groups and branched covers
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^rank plus cyclic torsion in invariant-factor form.

    torsion_divisors is the chain d_1 | d_2 | ... with every d_i >= 2,
    so equal values mean equal groups and dataclass equality is the
    right notion of isomorphism.
    """

    rank: int
    torsion_divisors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        previous = None
        for d in self.torsion_divisors:
            if d < 2:
                raise ValueError(f"torsion divisor {d} must be >= 2")
            if previous is not None and d % previous:
                raise ValueError(f"divisor chain violated: {previous} does not divide {d}")
            previous = d

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion_divisors

    def torsion_order(self) -> int:
        return prod(self.torsion_divisors) if self.torsion_divisors else 1

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion_divisors)
        return " + ".join(parts) if parts else "0"


def cokernel_group(divisors: tuple[int, ...], ambient_rank: int) -> FgAbelianGroup:
    """Cokernel of a map into Z^ambient_rank with the given SNF divisors."""
    rank = ambient_rank - len(divisors) + sum(1 for d in divisors if d == 0)
    torsion = tuple(d for d in divisors if d > 1)
    return FgAbelianGroup(rank=rank, torsion_divisors=torsion)


def cover_homology(branch_exponents, fold: int, budget: int = MATRIX_BUDGET_DEFAULT) -> FgAbelianGroup:
    """Middle homology of the fold-cyclic cover branched along the link.

    Computed as coker(I + h + ... + h^{fold-1}) on the middle homology
    of the branch fibre, h its monodromy.
    """
    if fold < 1:
        raise ValueError(f"fold {fold} must be >= 1")
    op = milnor_lattice(branch_exponents, budget=budget)
    total = _geometric_sum([list(row) for row in op.matrix], fold)
    divisors = smith_normal_form(total)
    return cokernel_group(divisors, op.size)


def link_rank(exponents) -> int:
    """Rank of the middle homology of the link itself.

    This is the number of interior lattice points with
    sum x_j / a_j an integer, read from the residue distribution as
    the counts at 0 and N mod 2N.  Valid in every dimension.
    """
    exps = _validate_exponents(exponents)
    big_n, counts = residue_distribution(exps)
    return counts[0] + counts[big_n]
