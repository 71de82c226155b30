"""Finite free A-algebras presented by monic triangular systems.

A ``TriangularSystem`` holds polynomials P_1..P_n (each a MultiPoly of a
common arity), P_i monic in y_i with all other exponents below the earlier
degrees.  The quotient A[y_1..y_n]/(P_1..P_n) is a free A-module on the
monomials y^e with e_i < d_i; ``normal_form`` computes the canonical
representative on that basis.

Unit tests happen in the residue algebra at t = 0 (an element of a finite
free algebra over the local ring A is invertible exactly when its residue
is), while actual inverses and minimal polynomials run linear algebra over
the fraction field k(t) and then verify that every denominator is a unit
at t = 0.
"""

from dataclasses import dataclass
from itertools import product

from .errors import (DenominatorNotUnit, MilnorCyclesError, NonUnit,
                     NonUnitCoordinate, ParseError, ReducibleExtension)
from .fields import ExtField, poly_irreducible, solve_linear
from .multipoly import MultiPoly
from .scalars import LocalScalar, Poly


class TriangularSystem:
    """Monic triangular presentation; ``nvars`` is the ambient arity and
    ``len(polys)`` <= nvars polynomials are bound."""

    __slots__ = ("field", "nvars", "polys")

    def __init__(self, field, nvars, polys, validate=True):
        self.field = field
        self.nvars = nvars
        self.polys = tuple(polys)
        if validate:
            self._validate()

    def _validate(self):
        degs = []
        for i, p in enumerate(self.polys):
            if p.nvars != self.nvars:
                raise ParseError("arity mismatch in triangular system")
            d = p.degree_in(i)
            if d < 1:
                raise ParseError(f"P_{i + 1} is not of positive degree in y{i + 1}")
            lead = p.lead_coeff_in(i)
            if not (lead.is_constant() and lead.as_scalar().is_one()):
                raise ParseError(f"P_{i + 1} is not monic in y{i + 1}")
            used = p.vars_used()
            if any(j > i for j in used):
                raise ParseError(f"P_{i + 1} uses a variable beyond y{i + 1}")
            for j in range(i):
                limit = degs[j]
                for exp in p.terms:
                    if exp[j] >= limit and exp[i] < d:
                        raise ParseError(
                            f"coefficient of P_{i + 1} violates the degree "
                            f"bound in y{j + 1}")
            for exp, c in p.terms.items():
                if not c.is_local():
                    raise ParseError("coefficient outside k[t]_(t)")
            degs.append(d)

    @property
    def n(self):
        return len(self.polys)

    def degrees(self):
        return tuple(p.degree_in(i) for i, p in enumerate(self.polys))

    def rank(self):
        r = 1
        for d in self.degrees():
            r *= d
        return r

    def extend(self, poly):
        return TriangularSystem(self.field, self.nvars, self.polys + (poly,))

    def prefix(self, k):
        return TriangularSystem(self.field, self.nvars, self.polys[:k],
                                validate=False)

    def basis_exponents(self):
        degs = self.degrees()
        ranges = [range(d) for d in degs]
        pad = (0,) * (self.nvars - self.n)
        return [tuple(e) + pad for e in product(*ranges)]

    def __eq__(self, other):
        return (isinstance(other, TriangularSystem)
                and self.field == other.field and self.nvars == other.nvars
                and self.polys == other.polys)

    def render(self):
        return [p.render() for p in self.polys]

    def __repr__(self):
        return f"TriangularSystem({self.render()})"


def normal_form(owner, poly):
    """Canonical representative: all y_i-degrees below d_i."""
    if poly.nvars != owner.nvars:
        raise ParseError("arity mismatch")
    r = poly
    for i in range(owner.n - 1, -1, -1):
        if r.degree_in(i) >= owner.polys[i].degree_in(i):
            _, r = r.divmod_in(i, owner.polys[i])
    return r


@dataclass(frozen=True)
class AlgebraElem:
    owner: TriangularSystem
    value: MultiPoly

    @classmethod
    def make(cls, owner, poly):
        return cls(owner, normal_form(owner, poly))

    def __mul__(self, other):
        if isinstance(other, AlgebraElem):
            other = other.value
        return AlgebraElem.make(self.owner, self.value * other)

    def __add__(self, other):
        if isinstance(other, AlgebraElem):
            other = other.value
        return AlgebraElem.make(self.owner, self.value + other)

    def __sub__(self, other):
        if isinstance(other, AlgebraElem):
            other = other.value
        return AlgebraElem.make(self.owner, self.value - other)

    def is_zero(self):
        return self.value.is_zero()


def _coords_on_basis(sys, poly, basis):
    """Coordinates of a normal-form polynomial on the monomial basis."""
    coords = {exp: LocalScalar.zero(sys.field) for exp in basis}
    for exp, c in poly.terms.items():
        if exp not in coords:
            raise MilnorCyclesError("polynomial not in normal form")
        coords[exp] = c
    return [coords[exp] for exp in basis]


def _solve_frac(matrix, rhs, field):
    """Gaussian elimination over k(t).  Returns (solution, full_column_rank)
    or (None, rank_ok) when inconsistent."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    m = [list(matrix[r]) + [rhs[r]] for r in range(rows)]
    piv_of_col = {}
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if not m[rr][c].is_zero():
                piv = rr
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for rr in range(rows):
            if rr != r and not m[rr][c].is_zero():
                f = m[rr][c]
                m[rr] = [v - f * w for v, w in zip(m[rr], m[r])]
        piv_of_col[c] = r
        r += 1
        if r == rows:
            break
    full_rank = len(piv_of_col) == cols
    for rr in range(r, rows):
        if not m[rr][cols].is_zero():
            return None, full_rank
    x = [LocalScalar.zero(field) for _ in range(cols)]
    for c, rr in piv_of_col.items():
        x[c] = m[rr][cols]
    return x, full_rank


def mult_matrix(sys, elem_value):
    """Multiplication-by-element matrix on the monomial basis, over k(t)."""
    basis = sys.basis_exponents()
    cols = []
    for exp in basis:
        mono = MultiPoly(sys.field, sys.nvars,
                         {exp: LocalScalar.one(sys.field)})
        prod_nf = normal_form(sys, elem_value * mono)
        cols.append(_coords_on_basis(sys, prod_nf, basis))
    # cols[j][i]: transpose into rows
    n = len(basis)
    return [[cols[j][i] for j in range(n)] for i in range(n)], basis


def residue_mult_matrix(sys, elem_value):
    """The same matrix with every entry evaluated at t = 0 (over k)."""
    mat, basis = mult_matrix(sys, elem_value)
    return [[c.at_zero() for c in row] for row in mat], basis


def is_unit(sys, elem_value):
    """Invertibility in the A-algebra == invertibility of the residue."""
    if sys.n == 0:
        c = elem_value.as_scalar()
        return c.is_local_unit()
    mat, basis = residue_mult_matrix(sys, elem_value)
    one = [sys.field.one() if all(e == 0 for e in exp) else sys.field.zero()
           for exp in basis]
    return solve_linear(sys.field, mat, one) is not None


def alg_inv(elem):
    """Inverse in the algebra; linear solve over k(t), then the solution
    must be integral at t = 0."""
    sys = elem.owner
    field = sys.field
    if sys.n == 0:
        c = elem.value.as_scalar()
        if not c.is_local_unit():
            raise NonUnit("scalar is not a unit of k[t]_(t)")
        return AlgebraElem(sys, MultiPoly.const(field, sys.nvars,
                                                LocalScalar.one(field) / c))
    mat, basis = mult_matrix(sys, elem.value)
    one = [LocalScalar.one(field) if all(e == 0 for e in exp)
           else LocalScalar.zero(field) for exp in basis]
    sol, _ = _solve_frac(mat, one, field)
    if sol is None:
        raise NonUnit("multiplication matrix is singular over k(t)")
    if not all(c.is_local() for c in sol):
        raise NonUnit("inverse has a denominator vanishing at t = 0")
    terms = {exp: c for exp, c in zip(basis, sol)}
    result = AlgebraElem(sys, MultiPoly(field, sys.nvars, terms))
    check = (elem * result).value - MultiPoly.const(field, sys.nvars, 1)
    if not normal_form(sys, check).is_zero():
        raise MilnorCyclesError("inverse verification failed")
    return result


@dataclass(frozen=True)
class PointRep:
    """A closed point: finite algebra, unit coordinates, a multiplicity."""
    algebra: TriangularSystem
    coords: tuple
    mult: int = 1


def min_poly_tower(point, i, prefix):
    """Monic minimal polynomial of coordinate i over the subalgebra
    presented by ``prefix`` (polynomials in y_1..y_{i-1}).

    Returns a MultiPoly of the prefix arity, monic in y_i, coefficients in
    normal form with respect to the prefix.  Raises DenominatorNotUnit when
    clearing denominators fails or no unique monic relation exists.
    """
    S = point.algebra
    field = S.field
    beta = point.coords[i - 1]
    basis_S = S.basis_exponents()
    dim_S = len(basis_S)

    prefix_degs = prefix.degrees()[: i - 1]
    prefix_exps = list(product(*[range(d) for d in prefix_degs])) or [()]

    # products prod_j beta_j^{e_j} in S
    mu = {}
    for e in prefix_exps:
        acc = AlgebraElem.make(S, MultiPoly.const(field, S.nvars, 1))
        for j, ej in enumerate(e):
            for _ in range(ej):
                acc = acc * point.coords[j]
        mu[e] = acc

    powers = [AlgebraElem.make(S, MultiPoly.const(field, S.nvars, 1))]
    dim_prefix = len(prefix_exps)
    max_d = dim_S // dim_prefix if dim_prefix else dim_S
    for d in range(1, max_d + 1):
        powers.append(powers[-1] * beta)
        # columns mu_e * beta^f for f < d, ordered (f, e)
        cols = []
        order = []
        for f in range(d):
            for e in prefix_exps:
                w = mu[e] * powers[f]
                cols.append(_coords_on_basis(S, w.value, basis_S))
                order.append((f, e))
        target = _coords_on_basis(S, powers[d].value, basis_S)
        matrix = [[cols[j][r] for j in range(len(cols))]
                  for r in range(dim_S)]
        sol, full_rank = _solve_frac(matrix, target, field)
        if sol is None:
            continue
        if not full_rank:
            raise DenominatorNotUnit(
                "no unique monic relation over the subalgebra")
        if not all(c.is_local() for c in sol):
            raise DenominatorNotUnit(
                "minimal-polynomial coefficient has a denominator "
                "vanishing at t = 0")
        out = MultiPoly.var(field, prefix.nvars, i - 1) ** d
        for (f, e), lam in zip(order, sol):
            if lam.is_zero():
                continue
            exp = list((0,) * prefix.nvars)
            for j, ej in enumerate(e):
                exp[j] = ej
            exp[i - 1] = f
            mono = MultiPoly(field, prefix.nvars,
                             {tuple(exp): LocalScalar.one(field)})
            out = out - mono.scale(lam)
        return out
    raise DenominatorNotUnit("no monic relation found up to the rank bound")


def triangularize(point):
    """Triangular presentation of the image of the point, with the rank-ratio
    multiplicity.  Coordinates must be units of the algebra."""
    n = len(point.coords)
    field = point.algebra.field
    prefix = TriangularSystem(field, n, ())
    for i in range(1, n + 1):
        poly = min_poly_tower(point, i, prefix)
        prefix = prefix.extend(poly)
    total = point.algebra.rank() * point.mult
    covered = prefix.rank()
    if total % covered:
        raise DenominatorNotUnit("rank accounting failed; degenerate point")
    return prefix, total // covered


def base_change_point(entries, g_coeffs, field, m):
    """Point over A[x]/(g) from truncated symbol entries over the extension.

    ``entries`` are TruncSeries over ExtField(field, g) at precision m+1;
    each must be a unit.  Lifts are the canonical polynomial representatives
    (degree <= m in t, degree < deg g in the generator).
    """
    g = tuple(g_coeffs)
    if not poly_irreducible(field, g):
        raise ReducibleExtension("extension polynomial is reducible")
    deg = len(g) - 1
    for u in entries:
        if not u.is_unit():
            raise NonUnitCoordinate("symbol entry is not a unit")
    if deg == 1:
        # trivial extension: the generator already reduces to -g0 inside the
        # degree-1 ExtField, so coefficient tuples coerce directly into A
        algebra = TriangularSystem(field, 0, ())
        coords = []
        for u in entries:
            cs = []
            for c in u.coeffs:
                cs.append(c[0] if isinstance(c, tuple) else c)
            coords.append(AlgebraElem.make(
                algebra, MultiPoly.const(field, 0, LocalScalar(Poly(field, cs)))))
        return PointRep(algebra=algebra, coords=tuple(coords), mult=1)
    terms = {tuple([deg]): LocalScalar.one(field)}
    for j in range(deg):
        if not field.is_zero(g[j]):
            terms[tuple([j])] = LocalScalar.const(field, g[j])
    gen_poly = MultiPoly(field, 1, terms)
    algebra = TriangularSystem(field, 1, (gen_poly,))
    coords = []
    for u in entries:
        t_terms = {}
        for ti, c in enumerate(u.coeffs):
            vec = c if isinstance(c, tuple) else (c,)
            for xj, comp in enumerate(vec):
                if field.is_zero(comp):
                    continue
                key = (xj,)
                mono_c = LocalScalar(Poly(field, [field.zero()] * ti + [comp]))
                t_terms[key] = t_terms[key] + mono_c if key in t_terms else mono_c
        coords.append(AlgebraElem.make(algebra, MultiPoly(field, 1, t_terms)))
    return PointRep(algebra=algebra, coords=tuple(coords), mult=1)


def ext_field_for(field, g_coeffs):
    """The extension field context used for symbol entries."""
    return ExtField(field, tuple(g_coeffs))
