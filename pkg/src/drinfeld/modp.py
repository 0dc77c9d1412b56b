"""Residue-field geometry over F_q: rational functions on the projective line
with the weight-k action, divisors and their section spaces, the symmetric-
power comparison map, component degrees, global sections over truncated
trees, quotient representations with stable-line search, and the
parity-swapping involution checks.

The coordinate on each component is the reduction of the global coordinate;
matching of sections across an edge happens at the two reduction points of
that edge on its endpoint components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InternalInvariantError,
    InvalidParameters,
    SingularMatrix,
    ZeroFunction,
)
from .linalg import kernel_basis, rank, rref
from .rational import FactoredRational, automorphic_act, raw_gauss_valuation
from .scalars import FiniteField, Fq, FqElem
from .symrep import substitution_matrix
from .tree import (
    Mat2,
    Vertex,
    act_on_vertex,
    child_endpoint,
    parent_endpoint,
    truncated_tree,
    vertex_parity,
    vertex_transporter,
)

INFINITY_POINT = "inf"


# -- polynomials over a finite field ------------------------------------------------


def fqpoly_trim(field: FiniteField, coeffs) -> tuple:
    out = list(coeffs)
    while out and out[-1] == field.zero():
        out.pop()
    return tuple(out)


def fqpoly_add(field: FiniteField, u: tuple, v: tuple) -> tuple:
    if len(u) < len(v):
        u, v = v, u
    out = list(u)
    for i, x in enumerate(v):
        out[i] = out[i] + x
    return fqpoly_trim(field, out)


def fqpoly_neg(field: FiniteField, u: tuple) -> tuple:
    return tuple(-x for x in u)


def fqpoly_mul(field: FiniteField, u: tuple, v: tuple) -> tuple:
    if not u or not v:
        return ()
    out = [field.zero()] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] = out[i + j] + x * y
    return fqpoly_trim(field, out)


def fqpoly_pow(field: FiniteField, u: tuple, n: int) -> tuple:
    out: tuple = (field.one(),)
    for _ in range(n):
        out = fqpoly_mul(field, out, u)
    return out


def fqpoly_divmod(field: FiniteField, u: tuple, v: tuple) -> tuple:
    if not v:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero()] * max(0, len(u) - len(v) + 1)
    r = list(u)
    inv_lead = v[-1].inverse()
    while len(fqpoly_trim(field, r)) >= len(v):
        r = list(fqpoly_trim(field, r))
        shift = len(r) - len(v)
        c = r[-1] * inv_lead
        q[shift] = q[shift] + c
        for i, vi in enumerate(v):
            r[shift + i] = r[shift + i] - c * vi
    return fqpoly_trim(field, q), fqpoly_trim(field, r)


def fqpoly_gcd(field: FiniteField, u: tuple, v: tuple) -> tuple:
    a, b = u, v
    while b:
        _, a = a, fqpoly_divmod(field, a, b)[1]
        a, b = b, a
    if not a:
        return ()
    return fqpoly_mul(field, a, (a[-1].inverse(),))


def fqpoly_eval(field: FiniteField, u: tuple, x: FqElem) -> FqElem:
    acc = field.zero()
    for c in reversed(u):
        acc = acc * x + c
    return acc


def fqpoly_homogeneous_eval(field: FiniteField, u: tuple, n: tuple, d: tuple) -> tuple:
    """u(n/d) * d^deg(u) as a polynomial."""
    deg = len(u) - 1
    acc: tuple = ()
    for i, c in enumerate(u):
        term = fqpoly_mul(
            field, fqpoly_pow(field, n, i), fqpoly_pow(field, d, deg - i)
        )
        acc = fqpoly_add(field, acc, fqpoly_mul(field, term, (c,)))
    return acc


# -- rational functions over a finite field -----------------------------------------


@dataclass(frozen=True)
class FqRatFunc:
    """num/den with den monic and gcd(num, den) = 1; zero is ()/(1)."""

    field: FiniteField
    num: tuple
    den: tuple

    @staticmethod
    def make(field: FiniteField, num, den=None) -> "FqRatFunc":
        num = fqpoly_trim(field, tuple(num))
        den = fqpoly_trim(field, tuple(den)) if den is not None else (field.one(),)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return FqRatFunc(field, (), (field.one(),))
        g = fqpoly_gcd(field, num, den)
        if len(g) > 1:
            num = fqpoly_divmod(field, num, g)[0]
            den = fqpoly_divmod(field, den, g)[0]
        lead_inv = den[-1].inverse()
        num = fqpoly_mul(field, num, (lead_inv,))
        den = fqpoly_mul(field, den, (lead_inv,))
        return FqRatFunc(field, num, den)

    @staticmethod
    def zero(field: FiniteField) -> "FqRatFunc":
        return FqRatFunc(field, (), (field.one(),))

    @staticmethod
    def constant(field: FiniteField, c: FqElem) -> "FqRatFunc":
        return FqRatFunc.make(field, (c,))

    @staticmethod
    def z(field: FiniteField) -> "FqRatFunc":
        return FqRatFunc.make(field, (field.zero(), field.one()))

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "FqRatFunc") -> "FqRatFunc":
        f = self.field
        num = fqpoly_add(
            f,
            fqpoly_mul(f, self.num, other.den),
            fqpoly_mul(f, other.num, self.den),
        )
        return FqRatFunc.make(f, num, fqpoly_mul(f, self.den, other.den))

    def __neg__(self) -> "FqRatFunc":
        return FqRatFunc(self.field, fqpoly_neg(self.field, self.num), self.den)

    def __sub__(self, other: "FqRatFunc") -> "FqRatFunc":
        return self + (-other)

    def __mul__(self, other: "FqRatFunc") -> "FqRatFunc":
        f = self.field
        return FqRatFunc.make(
            f,
            fqpoly_mul(f, self.num, other.num),
            fqpoly_mul(f, self.den, other.den),
        )

    def scale(self, c: FqElem) -> "FqRatFunc":
        return FqRatFunc.make(self.field, fqpoly_mul(self.field, self.num, (c,)), self.den)

    def inverse(self) -> "FqRatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FqRatFunc.make(self.field, self.den, self.num)

    def __truediv__(self, other: "FqRatFunc") -> "FqRatFunc":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FqRatFunc":
        if n < 0:
            return self.inverse() ** (-n)
        out = FqRatFunc.constant(self.field, self.field.one())
        for _ in range(n):
            out = out * self
        return out

    def order_at(self, point) -> int:
        """Vanishing order at an F_q-point or at infinity (poles negative)."""
        f = self.field
        if self.is_zero():
            raise ZeroFunction("the zero function has no finite order")
        if point == INFINITY_POINT:
            return (len(self.den) - 1) - (len(self.num) - 1)
        lin = (-point, f.one())

        def multiplicity(poly: tuple) -> int:
            count = 0
            while poly and fqpoly_eval(f, poly, point) == f.zero():
                poly = fqpoly_divmod(f, poly, lin)[0]
                count += 1
            return count

        return multiplicity(self.num) - multiplicity(self.den)


# -- group elements over F_q ---------------------------------------------------------


def _lift_matrix(field: FiniteField, g) -> tuple:
    rows = []
    for row in g:
        rows.append(tuple(field.elem(x) for x in row))
    m = (rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    if m[0] * m[3] - m[1] * m[2] == field.zero():
        raise SingularMatrix("matrix over the residue field is singular")
    return m


def weight_action_p1(g, f: FqRatFunc, k: int) -> FqRatFunc:
    """(a+cz)^(-k) * f((b+dz)/(a+cz)) for g = [[a,b],[c,d]]."""
    field = f.field
    a, b, c, d = _lift_matrix(field, g)
    n_poly = (b, d)  # b + d z
    d_poly = (a, c)  # a + c z
    num = fqpoly_homogeneous_eval(field, f.num, n_poly, d_poly)
    den = fqpoly_homogeneous_eval(field, f.den, n_poly, d_poly)
    # rebalance the homogenization: multiply by d_poly^(deg den - deg num - k)
    e = (len(f.den) - 1) - (len(f.num) - 1) - k if not f.is_zero() else -k
    if f.is_zero():
        return FqRatFunc.zero(field)
    if e >= 0:
        num = fqpoly_mul(field, num, fqpoly_pow(field, d_poly, e))
    else:
        den = fqpoly_mul(field, den, fqpoly_pow(field, d_poly, -e))
    return FqRatFunc.make(field, num, den)


def all_invertible_matrices(field: FiniteField) -> list:
    """Every element of the general linear group of rank 2, as 2x2 tuples."""
    elems = list(field.elements())
    out = []
    for a in elems:
        for b in elems:
            for c in elems:
                for d in elems:
                    if a * d - b * c != field.zero():
                        out.append(((a, b), (c, d)))
    return out


def gl2_generators(field: FiniteField) -> list:
    one, zero, gen = field.one(), field.zero(), field.gen()
    gens = [((one, one), (zero, one)), ((one, zero), (one, one))]
    if gen != one:
        gens.append(((gen, zero), (zero, one)))
    return gens


def sl2_generators(field: FiniteField) -> list:
    one, zero = field.one(), field.zero()
    gens = []
    for x in field.elements():
        if x == zero:
            continue
        gens.append(((one, x), (zero, one)))
        gens.append(((one, zero), (x, one)))
    return gens


# -- divisors and section spaces -----------------------------------------------------


def divisor_degree(divisor: dict) -> int:
    return sum(divisor.values())


def section_space_basis(field: FiniteField, divisor: dict) -> list:
    """Basis of the rational functions with div(f) + D >= 0: powers of z times
    the product of (z - b)^(-n_b) over the finite support."""
    deg = divisor_degree(divisor)
    if deg < 0:
        return []
    base = FqRatFunc.constant(field, field.one())
    for point, mult in divisor.items():
        if point == INFINITY_POINT:
            continue
        lin = FqRatFunc.make(field, (-point, field.one()))
        base = base * lin ** (-mult)
    zfun = FqRatFunc.z(field)
    return [zfun**j * base for j in range(deg + 1)]


def h0_dimension(divisor: dict) -> int:
    return max(0, divisor_degree(divisor) + 1)


def component_degree(q: int, k: int) -> int:
    """Degree of the reduced weight-k bundle on one component."""
    if k % 2 == 0:
        total = Fraction((q - 1) * k, 2)
    else:
        total = Fraction((q - 1) * (k - 1), 2) - 1
    if total.denominator != 1:
        raise InternalInvariantError("component degree must be an integer")
    return int(total)


# -- the symmetric-power comparison map ----------------------------------------------


def symgeom_parameters(q: int, k: int, i: int) -> tuple[int, int, int]:
    """(t, shift, exponent) for the comparison map; raises when t < 0."""
    if k % 2 == 0:
        t2 = (q - 1) * k - 2 * i * (q + 1)
        shift = i - k // 2
    else:
        t2 = (q - 1) * k - (q + 1) - 2 * i * (q + 1)
        shift = i - (k - 1) // 2
    if t2 % 2:
        raise InternalInvariantError("degree parameter must be an even integer")
    t = t2 // 2
    if t < 0:
        raise InvalidParameters(f"no comparison map for q={q}, k={k}, i={i}")
    return t, shift, shift


def sym_act_fq(field: FiniteField, g, coords: list, t: int, s: int) -> list:
    """Twisted symmetric-power action on coordinate columns over F_q:
    F -> det(g)^s * F(dX+bY, cX+aY)."""
    a, b, c, d = _lift_matrix(field, g)
    m = substitution_matrix(a, b, c, d, t, field.from_int)
    det = a * d - b * c
    scalar = det**s
    return [
        scalar * sum((m[r][i] * coords[i] for i in range(t + 1)), field.zero())
        for r in range(t + 1)
    ]


def symgeom_iso(q: int, k: int, i: int) -> dict:
    """The monomial-by-monomial comparison map from the twisted symmetric power
    to rational sections: X^r Y^(t-r) goes to z^r (z - z^q)^exponent."""
    field = Fq(q)
    t, shift, exponent = symgeom_parameters(q, k, i)
    zq_minus = [field.zero()] * (q + 1)
    zq_minus[1] = field.one()
    zq_minus[q] = -field.one()
    window = FqRatFunc.make(field, tuple(zq_minus))
    zfun = FqRatFunc.z(field)
    images = [zfun**r * window**exponent for r in range(t + 1)]
    return {
        "field": field,
        "t": t,
        "shift": shift,
        "exponent": exponent,
        "images": images,
    }


def symgeom_apply(iso: dict, coords: list) -> FqRatFunc:
    field = iso["field"]
    total = FqRatFunc.zero(field)
    for c, img in zip(coords, iso["images"]):
        total = total + img.scale(c)
    return total


def symgeom_equivariance(q: int, k: int, i: int, g) -> bool:
    """iso(g.F) == (iso F)|_g at weight k, on every monomial."""
    iso = symgeom_iso(q, k, i)
    field, t, shift = iso["field"], iso["t"], iso["shift"]
    for r in range(t + 1):
        coords = [field.one() if j == r else field.zero() for j in range(t + 1)]
        lhs = symgeom_apply(iso, sym_act_fq(field, g, coords, t, shift))
        rhs = weight_action_p1(g, iso["images"][r], k)
        if not (lhs - rhs).is_zero():
            return False
    return True


def symgeom_injectivity_rank(q: int, k: int, i: int) -> int:
    """Rank of the comparison map as a matrix over F_q."""
    iso = symgeom_iso(q, k, i)
    field, t = iso["field"], iso["t"]
    common = iso["images"][0].den
    for img in iso["images"]:
        g = fqpoly_gcd(field, common, img.den)
        common = fqpoly_divmod(
            field, fqpoly_mul(field, common, img.den), g
        )[0]
    numerators = []
    for img in iso["images"]:
        extra = fqpoly_divmod(field, common, img.den)[0]
        numerators.append(fqpoly_mul(field, img.num, extra))
    width = max(len(n) for n in numerators)
    rows = [list(n) + [field.zero()] * (width - len(n)) for n in numerators]
    return rank(rows, field.zero())


# -- truncated-tree global sections --------------------------------------------------


def _reduction_point(field: FiniteField, u: Vertex, w: Vertex):
    """Point of u's component where neighbor w's component meets it."""
    moved = act_on_vertex(vertex_transporter(u).inv(), w)
    if moved.m == -1 and moved.b == 0:
        return field.zero()
    if moved.m == 1:
        c = moved.b
        if c == 0:
            return INFINITY_POINT
        c_int = int(c)
        return field.elem(pow(c_int, -1, field.p))
    raise InternalInvariantError(f"{w} did not normalize to a base neighbor")


def _evaluation_row(field: FiniteField, point, dim: int, k: int) -> list:
    """Value functional of a degree < dim polynomial at a reduction point, in
    the normalization where the finite points carry the sign (-1)^(k/2)."""
    if point == INFINITY_POINT:
        return [field.one() if j == dim - 1 else field.zero() for j in range(dim)]
    sign = field.from_int((-1) ** (k // 2))
    return [sign * point**j for j in range(dim)]


def global_sections_truncated(
    q: int, k: int, radius: int, unit_constants=None
) -> dict:
    """Dimension of the reduced weight-k sections over the radius-r ball, both
    by the component-count formula and by direct assembly of the edge matching
    conditions (one per edge for even k, none for odd k)."""
    if k < 0:
        raise InvalidParameters("k must be nonnegative")
    field = Fq(q)
    if field.f != 1:
        raise InvalidParameters("truncated sections require a prime q")
    tree = truncated_tree(q, radius)
    n_vertices = len(tree.vertices)
    n_edges = len(tree.edges)
    deg = component_degree(q, k)
    per_component = max(0, deg + 1)
    ncols = n_vertices * per_component
    if k % 2 == 1:
        basis = [
            [field.one() if t == s else field.zero() for t in range(ncols)]
            for s in range(ncols)
        ]
        return {
            "dimension": ncols,
            "direct_dimension": ncols,
            "matching_rank": 0,
            "edge_count": n_edges,
            "vertex_count": n_vertices,
            "per_component_dimension": per_component,
            "basis": basis,
            "pass": True,
        }
    index = {v: n for n, v in enumerate(tree.vertices)}
    rows = []
    for e in tree.edges:
        u, w = parent_endpoint(e), child_endpoint(e)
        row = [field.zero()] * ncols
        cu, cw = (field.one(), field.one())
        if unit_constants is not None:
            cu, cw = unit_constants(e)
        for j, val in enumerate(_evaluation_row(field, _reduction_point(field, u, w), per_component, k)):
            row[index[u] * per_component + j] = cu * val
        for j, val in enumerate(_evaluation_row(field, _reduction_point(field, w, u), per_component, k)):
            row[index[w] * per_component + j] = row[index[w] * per_component + j] - cw * val
        rows.append(row)
    if rows:
        basis = kernel_basis(rows, field.zero(), field.one())
    else:
        basis = [
            [field.one() if t == s else field.zero() for t in range(ncols)]
            for s in range(ncols)
        ]
    direct = len(basis)
    matching_rank = ncols - direct
    formula = ncols - n_edges
    return {
        "dimension": formula,
        "direct_dimension": direct,
        "matching_rank": matching_rank,
        "edge_count": n_edges,
        "vertex_count": n_vertices,
        "per_component_dimension": per_component,
        "basis": basis,
        "pass": formula == direct,
    }


# -- quotient representation and stable lines ----------------------------------------


def _quotient_structure(q: int, k: int, i: int) -> dict:
    field = Fq(q)
    t, shift, _ = symgeom_parameters(q, k, i)
    if t < q + 1:
        raise InvalidParameters("the relation set is empty below degree q+1")
    relations = []
    for j in range(1, t - q + 1):
        row = [field.zero()] * (t + 1)
        row[j] = field.one()
        row[q + j - 1] = row[q + j - 1] - field.one()
        relations.append(row)
    reduced, pivots = rref(relations, field.zero())
    pivot_set = set(pivots)
    free = [c for c in range(t + 1) if c not in pivot_set]

    def reduce_vector(vec: list) -> tuple:
        work = list(vec)
        for row, pc in zip(reduced, pivots):
            coef = work[pc]
            if coef != field.zero():
                work = [w - coef * r for w, r in zip(work, row)]
        return tuple(work[c] for c in free)

    return {
        "field": field,
        "t": t,
        "shift": shift,
        "free": free,
        "reduce": reduce_vector,
    }


def quotient_reduce(q: int, k: int, i: int, coeffs: dict) -> tuple:
    """Class of sum coeffs[r] * X^r Y^(t-r) in the quotient, as coordinates
    against the free monomial classes."""
    s = _quotient_structure(q, k, i)
    field, t = s["field"], s["t"]
    vec = [field.zero()] * (t + 1)
    for r, c in coeffs.items():
        vec[r] = vec[r] + field.elem(c)
    return s["reduce"](vec)


def quotient_rep_and_stable_lines(q: int, k: int, i: int) -> dict:
    """The induced representation on the quotient by the exponent-shift
    relations, plus every line fixed by the full invertible group."""
    s = _quotient_structure(q, k, i)
    field, t, shift, free, reduce_vector = (
        s["field"],
        s["t"],
        s["shift"],
        s["free"],
        s["reduce"],
    )
    dim = len(free)
    group = all_invertible_matrices(field)
    matrices = []
    for g in group:
        cols = []
        for c in free:
            coords = [field.one() if j == c else field.zero() for j in range(t + 1)]
            image = sym_act_fq(field, g, coords, t, shift)
            cols.append(reduce_vector(image))
        matrices.append([[cols[j][r] for j in range(dim)] for r in range(dim)])

    def normalize(vec: tuple) -> tuple:
        for x in vec:
            if x != field.zero():
                inv = x.inverse()
                return tuple(inv * y for y in vec)
        return vec

    lines = set()
    elems = list(field.elements())

    def all_vectors(n: int):
        if n == 0:
            yield ()
            return
        for rest in all_vectors(n - 1):
            for x in elems:
                yield rest + (x,)

    for vec in all_vectors(dim):
        if all(x == field.zero() for x in vec):
            continue
        lines.add(normalize(vec))
    stable = []
    for line in sorted(lines, key=lambda v: tuple(x.coeffs for x in v)):
        ok = True
        for m in matrices:
            image = tuple(
                sum((m[r][j] * line[j] for j in range(dim)), field.zero())
                for r in range(dim)
            )
            if normalize(image) != line:
                ok = False
                break
        if ok:
            stable.append(line)
    return {
        "dimension": dim,
        "t": t,
        "shift": shift,
        "free_monomials": free,
        "stable_lines": stable,
        "group_order": len(group),
    }


# -- parity-swapping forms ------------------------------------------------------------


def b_forms_check(q: int) -> bool:
    """Component-level content of the parity pair: the weight-(q+1) window
    function is invariant under the determinant-one subgroup, and the
    uniformizer involution swaps the two vertex parities with trivial square."""
    field = Fq(q)
    zq_minus = [field.zero()] * (q + 1)
    zq_minus[1] = field.one()
    zq_minus[q] = -field.one()
    window = FqRatFunc.make(field, tuple(zq_minus)).inverse()
    for g in sl2_generators(field):
        if not (weight_action_p1(g, window, q + 1) - window).is_zero():
            return False
    p = field.p
    iota = Mat2(0, 1, Fraction(p), 0)
    tree = truncated_tree(p, 2)
    for v in tree.vertices:
        w = act_on_vertex(iota, v)
        if vertex_parity(w) != -vertex_parity(v):
            return False
        if act_on_vertex(iota, w) != v:
            return False
    return True


# -- integer-valuation profiles for the even subgroup ---------------------------------


def geven_lattice_profile(k: int, n: int) -> tuple:
    """Uniformizer exponents of the integer-valuation submodule along the
    level-n to level-(n+1) edge, for odd k."""
    if k % 2 == 0:
        raise InvalidParameters("the integer-valuation profile is for odd k")
    return (k * n // 2, k * (n + 1) // 2)


def geven_section_membership(f: FactoredRational, k: int, v: Vertex) -> tuple:
    """Membership in the integer-valuation submodule over the vertex open: the
    transported valuation must reach floor(k*m/2) - k*m/2 (0 or -1/2)."""
    if f.is_zero():
        raise ZeroFunction("membership is only defined for nonzero sections")
    moved = automorphic_act(vertex_transporter(v).inv(), f, k)
    val = raw_gauss_valuation(moved)
    threshold = Fraction(k * v.m // 2) - Fraction(k * v.m, 2)
    return val >= threshold, val, threshold
