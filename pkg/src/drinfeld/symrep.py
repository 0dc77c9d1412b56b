"""Degree-k symmetric powers of the standard 2-dimensional representation,
their determinant and uniformizer-character twists, and the dual modules in
which residue cochains take values.

Basis conventions: polynomials use the monomials X^i Y^(k-i) (i = 0..k);
dual vectors are coordinate lists against the dual basis h_j = (X^j Y^(k-j))^*.
Matrices act on coordinate columns.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable, TypeVar

from .errors import InvalidParameters, NonInvertibleDeterminant
from .linalg import Matrix, mat_vec, transpose
from .scalars import ScalarKHat
from .tree import Mat2

T = TypeVar("T")


def substitution_matrix(
    a: T, b: T, c: T, d: T, k: int, from_int: Callable[[int], T]
) -> Matrix:
    """Matrix of F(X, Y) -> F(dX + bY, cX + aY) on homogeneous degree-k forms.

    Column i holds the monomial coefficients of (dX+bY)^i (cX+aY)^(k-i).
    """
    if k < 0:
        raise InvalidParameters("degree must be >= 0")
    cols = []
    for i in range(k + 1):
        col = [from_int(0)] * (k + 1)
        for r in range(i + 1):
            for t in range(k - i + 1):
                coeff = from_int(comb(i, r) * comb(k - i, t))
                term = coeff * d**r * b ** (i - r) * c**t * a ** (k - i - t)
                col[r + t] = col[r + t] + term
        cols.append(col)
    return transpose(cols)  # rows indexed by monomial, columns by source index


def chi(g: Mat2, p: int, exponent: int = 1) -> ScalarKHat:
    """The uniformizer character: pihat^(exponent * val(det g))."""
    if g.det() == 0:
        raise NonInvertibleDeterminant("determinant is zero")
    w = g.omega_det(p)
    return ScalarKHat.pihat(p, exponent * int(w))


def epsilon(g: Mat2, p: int) -> ScalarKHat:
    """det(g) scaled to a unit: det * p^(-val(det)). Trivial on the diagonal
    p-power elements and on determinant-one elements."""
    w = g.omega_det(p)
    return ScalarKHat.from_rational(g.det() * Fraction(p) ** (-int(w)), p)


def sym_matrix(
    g: Mat2, k: int, p: int, det_exp: int = 1, chi_exp: int | None = None
) -> Matrix:
    """Matrix over the quadratic extension of the twisted action
    F -> det(g)^det_exp * chi(g)^chi_exp * F(dX+bY, cX+aY).

    The default twist (det_exp=1, chi_exp=-(k+2)) is the coefficient module the
    residue construction pairs against.
    """
    if chi_exp is None:
        chi_exp = -(k + 2)
    lift = lambda n: ScalarKHat.from_rational(n, p)
    base = substitution_matrix(
        lift(g.a), lift(g.b), lift(g.c), lift(g.d), k, lambda n: lift(Fraction(n))
    )
    scalar = lift(g.det()) ** det_exp * chi(g, p, chi_exp)
    return [[x * scalar for x in row] for row in base]


def sym_act(g: Mat2, coords: list, k: int, p: int) -> list:
    """Default-twist action on a polynomial coordinate column."""
    return mat_vec(sym_matrix(g, k, p), coords)


def dual_act_matrix(g: Mat2, k: int, p: int) -> Matrix:
    """Matrix of the contragredient action (g.h)(F) = h(g^{-1}.F) on dual
    coordinates."""
    return transpose(sym_matrix(g.inv(), k, p))


def dual_act(g: Mat2, coords: list, k: int, p: int) -> list:
    return mat_vec(dual_act_matrix(g, k, p), coords)


def dual_zero(k: int, p: int) -> list:
    return [ScalarKHat.zero(p) for _ in range(k + 1)]


def dual_unit(k: int, p: int, j: int) -> list:
    vec = dual_zero(k, p)
    vec[j] = ScalarKHat.one(p)
    return vec
