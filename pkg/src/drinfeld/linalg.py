"""Exact linear algebra over field-like scalars, plus Smith reduction over the
valuation ring of the ramified quadratic extension.

Field routines are generic: elements must support +, -, *, / and ==. Callers
pass explicit zero/one samples so the routines stay agnostic of the scalar type
(used with ScalarKHat, Fraction and FqElem alike).
"""

from __future__ import annotations

from typing import Callable, Sequence, TypeVar

from .errors import InternalInvariantError
from .scalars import INF, ScalarKHat

T = TypeVar("T")

Matrix = list  # list[list[T]], row-major


def identity(n: int, zero: T, one: T) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    bt = transpose(b)
    return [[_dot(row, col) for col in bt] for row in a]


def _dot(u: Sequence[T], v: Sequence[T]) -> T:
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc


def mat_vec(a: Matrix, v: Sequence[T]) -> list:
    return [_dot(row, v) for row in a]


def rref(rows: Matrix, zero: T) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices (exact Gauss-Jordan)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(a)) if a[i][c] != zero), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != zero:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Matrix, zero: T) -> int:
    return len(rref(rows, zero)[1])


def kernel_basis(rows: Matrix, zero: T, one: T) -> list[list]:
    """Basis of the right kernel, one vector per free column."""
    if not rows:
        return []
    ncols = len(rows[0])
    r, pivots = rref(rows, zero)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for ri, pc in enumerate(pivots):
            vec[pc] = zero - r[ri][fc]
        basis.append(vec)
    return basis


def solve(a: Matrix, b: Sequence[T], zero: T) -> list | None:
    """One solution of a x = b, or None if inconsistent. Free variables are 0."""
    if not a:
        return [] if all(x == zero for x in b) else None
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    r, pivots = rref(aug, zero)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for ri, pc in enumerate(pivots):
        x[pc] = r[ri][ncols]
    return x


def inverse(a: Matrix, zero: T, one: T) -> Matrix:
    n = len(a)
    aug = [list(row) + list(idr) for row, idr in zip(a, identity(n, zero, one))]
    r, pivots = rref(aug, zero)
    if pivots != list(range(n)):
        raise InternalInvariantError("matrix is singular")
    return [row[n:] for row in r]


# -- Smith reduction over the valuation ring ---------------------------------


def _min_val_position(a: Matrix, start: int) -> tuple[int, int] | None:
    best = None
    best_val = INF
    for i in range(start, len(a)):
        for j in range(start, len(a[0])):
            v = a[i][j].valuation()
            if v < best_val:
                best_val = v
                best = (i, j)
    return best if best_val is not INF else None


def smith_over_dvr(m: Matrix) -> tuple[Matrix, list, Matrix]:
    """Decompose m = u * d * v with u, v invertible over the valuation ring
    and d diagonal with i-th entry of valuation evals[i] (ascending Fractions
    in halves, realized as exact pihat powers; absent entries are zero).

    Returns (u, evals, v); u is nrows x nrows, v is ncols x ncols.
    """
    nrows, ncols = len(m), len(m[0]) if m else 0
    if nrows == 0 or ncols == 0:
        return [], [], []
    p = m[0][0].p
    a = [list(r) for r in m]
    zero, one = ScalarKHat.zero(p), ScalarKHat.one(p)
    u = identity(nrows, zero, one)
    v = identity(ncols, zero, one)
    evals = []
    for t in range(min(nrows, ncols)):
        pos = _min_val_position(a, t)
        if pos is None:
            break
        i, j = pos
        if i != t:
            a[t], a[i] = a[i], a[t]
            for row in u:
                row[t], row[i] = row[i], row[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            v[t], v[j] = v[j], v[t]
        pivot = a[t][t]
        e = pivot.valuation()
        # Normalize the pivot to exactly pihat^(2e): scale row t by the unit
        # pihat^(2e)/pivot, compensating in u.
        target = ScalarKHat.pihat(p, int(2 * e))
        unit = target / pivot
        a[t] = [x * unit for x in a[t]]
        unit_inv = unit.inverse()
        for row in u:
            row[t] = row[t] * unit_inv
        for i2 in range(t + 1, nrows):
            if not a[i2][t].is_zero():
                f = a[i2][t] / a[t][t]
                if f.valuation() < 0:
                    raise InternalInvariantError("pivot was not minimal")
                a[i2] = [x - f * y for x, y in zip(a[i2], a[t])]
                for row in u:
                    row[t] = row[t] + f * row[i2]
        for j2 in range(t + 1, ncols):
            if not a[t][j2].is_zero():
                f = a[t][j2] / a[t][t]
                if f.valuation() < 0:
                    raise InternalInvariantError("pivot was not minimal")
                for row in a:
                    row[j2] = row[j2] - f * row[t]
                v[t] = [x + f * y for x, y in zip(v[t], v[j2])]
        evals.append(e)
    return u, evals, v


def smith_valuations(m: Matrix) -> list:
    """Just the elementary divisor valuations of m (ascending)."""
    return smith_over_dvr(m)[1]
