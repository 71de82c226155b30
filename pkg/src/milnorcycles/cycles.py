"""Admissible cycles presented by monic triangular systems, and formal sums.

A cycle here is a monic triangular system whose constant term at every
level is a unit of the prefix quotient; this decidable criterion is what
acceptance checks, and it is stable under all the operations the package
performs (faces of the supported witness families, prefix projections,
reduction steps).  ``settle_system`` is the single normalization routine
that turns a substituted polynomial system into either the empty cycle or
an admissible triangular presentation, discarding (y - 1)-components,
which are empty in the ambient cube with the point 1 removed.

Formal sums (``CycleSum``) key cycles by a canonical textual form with all
coefficients truncated to a chosen t-precision; precision None means exact
coefficients in k[t]_(t).
"""

from dataclasses import dataclass
from typing import Optional

from .errors import NonUnitEntry, ParseError, UnhandledFaceShape
from .multipoly import MultiPoly, parse_multipoly
from .scalars import LocalScalar
from .talgebra import AlgebraElem, TriangularSystem, alg_inv, is_unit, normal_form


@dataclass(frozen=True)
class TriangularCycle:
    """Cycle cut out by a full triangular system (nvars == number of polys)."""

    sys: TriangularSystem

    def __post_init__(self):
        if self.sys.n != self.sys.nvars:
            raise ParseError("cycle system must bind every variable")

    @property
    def n(self):
        return self.sys.n

    @property
    def field(self):
        return self.sys.field

    def degrees(self):
        return self.sys.degrees()

    def key(self, N=None):
        polys = self.sys.polys
        if N is not None:
            polys = [p.truncate_coeffs(N) for p in polys]
        return "|".join(p.render() for p in polys)

    def render(self):
        return self.sys.render()

    def __repr__(self):
        return f"TriangularCycle({self.render()})"


def graph_cycle(field, entries):
    """The cycle {y_i = a_i} of unit scalars; rejects non-units."""
    n = len(entries)
    polys = []
    for i, a in enumerate(entries):
        if not a.is_local_unit():
            raise NonUnitEntry(f"coordinate {i + 1} is not a unit of k[t]_(t)")
        polys.append(MultiPoly.var(field, n, i)
                     - MultiPoly.const(field, n, a))
    return TriangularCycle(TriangularSystem(field, n, polys))


def graph_entries(cycle):
    """Inverse of graph_cycle for degree-(1,..,1) systems."""
    out = []
    for i, p in enumerate(cycle.sys.polys):
        if p.degree_in(i) != 1:
            raise ParseError("not a graph cycle")
        c = p.coeff_of_power(i, 0)
        if not c.is_constant():
            raise ParseError("not a graph cycle")
        out.append(-c.as_scalar())
    return out


@dataclass(frozen=True)
class AdmissibilityReport:
    accepted: bool
    level: Optional[int] = None
    reason: Optional[str] = None

    def __bool__(self):
        return self.accepted


def check_admissible(sys):
    """Monic + degree-bound + unit-constant-term checks, report-valued."""
    field = sys.field
    degs = []
    for i, p in enumerate(sys.polys):
        d = p.degree_in(i)
        if d < 1:
            return AdmissibilityReport(False, i + 1, "zero degree in its own variable")
        lead = p.lead_coeff_in(i)
        if not (lead.is_constant() and lead.as_scalar().is_one()):
            return AdmissibilityReport(False, i + 1, "not monic")
        if any(j > i for j in p.vars_used()):
            return AdmissibilityReport(False, i + 1, "uses a later variable")
        for j in range(i):
            for exp in p.terms:
                if exp[j] >= degs[j]:
                    return AdmissibilityReport(
                        False, i + 1, f"coefficient degree bound violated in y{j + 1}")
        for c in p.terms.values():
            if not c.is_local():
                return AdmissibilityReport(False, i + 1, "coefficient outside k[t]_(t)")
        prefix = sys.prefix(i)
        const = normal_form(prefix, p.subst(i, MultiPoly.const(field, sys.nvars, 0)))
        if not is_unit(prefix, const):
            return AdmissibilityReport(False, i + 1, "constant term not a unit")
        degs.append(d)
    return AdmissibilityReport(True)


EMPTY_FACE = None


def settle_system(field, nvars, polys):
    """Normalize a substituted system into an admissible triangular one.

    Returns None when the face is empty (the ideal contains a unit, or every
    component lies on some {y_i = 1}); otherwise the triangular system.
    Raises UnhandledFaceShape for anything outside the supported shapes.
    """
    prefix = TriangularSystem(field, nvars, ())
    pool = list(polys)
    for level in range(nvars):
        chosen = None
        for idx in range(len(pool)):
            nf = normal_form(prefix, pool[idx])
            pool[idx] = nf
            hv = max(nf.vars_used(), default=-1)
            if hv < level:
                if nf.is_zero():
                    raise UnhandledFaceShape("redundant generator in face system")
                if is_unit(prefix, nf):
                    return EMPTY_FACE
                raise UnhandledFaceShape(
                    "face ideal contains a nonzero non-unit constant")
            if hv == level and chosen is None:
                chosen = idx
        if chosen is None:
            raise UnhandledFaceShape("no generator matches the next variable")
        g = pool.pop(chosen)
        lead = normal_form(prefix, g.lead_coeff_in(level))
        if not (lead.is_constant() and lead.as_scalar().is_one()):
            if not is_unit(prefix, lead):
                raise UnhandledFaceShape("leading face coefficient is not a unit")
            inv = alg_inv(AlgebraElem(prefix, lead))
            g = normal_form(prefix, g * inv.value)
        # peel off (y - 1) factors; those components are empty in the cube
        extracted = 0
        one_shift = MultiPoly.var(field, nvars, level) - MultiPoly.const(field, nvars, 1)
        while True:
            at_one = normal_form(prefix, g.subst(level, MultiPoly.const(field, nvars, 1)))
            if not at_one.is_zero():
                break
            q, r = g.divmod_in(level, one_shift)
            if not normal_form(prefix, r).is_zero():
                raise UnhandledFaceShape("inexact (y-1) division")
            g = normal_form(prefix, q)
            extracted += 1
            if g.is_zero():
                raise UnhandledFaceShape("face polynomial vanished entirely")
        if g.degree_in(level) == 0:
            if is_unit(prefix, g):
                # extracted > 0: every remaining point had y = 1; otherwise
                # the ideal contains a unit.  Either way the face is empty.
                return EMPTY_FACE
            raise UnhandledFaceShape("residual face factor is not a unit")
        const = normal_form(prefix, g.subst(level, MultiPoly.const(field, nvars, 0)))
        if not is_unit(prefix, const):
            raise UnhandledFaceShape("face constant term is not a unit")
        prefix = prefix.extend(g)
    if pool:
        raise UnhandledFaceShape("excess generators in face system")
    return prefix


class CycleSum:
    """Free abelian group on canonically keyed cycles at one precision."""

    __slots__ = ("field", "n", "N", "terms")

    def __init__(self, field, n, N=None):
        self.field = field
        self.n = n
        self.N = N
        self.terms = {}

    @classmethod
    def of(cls, cycle, mult=1, N=None):
        s = cls(cycle.field, cycle.n, N)
        s.add_cycle(cycle, mult)
        return s

    def add_cycle(self, cycle, mult):
        if mult == 0:
            return
        key = cycle.key(self.N)
        if key in self.terms:
            cyc, m = self.terms[key]
            m += mult
            if m == 0:
                del self.terms[key]
            else:
                self.terms[key] = (cyc, m)
        else:
            self.terms[key] = (cycle, mult)

    def _compat(self, other):
        if self.n != other.n or self.N != other.N or self.field != other.field:
            raise ParseError("cycle sums with different shape")

    def __add__(self, other):
        self._compat(other)
        out = CycleSum(self.field, self.n, self.N)
        out.terms = dict(self.terms)
        for key, (cyc, m) in other.terms.items():
            out.add_cycle(cyc, m)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        out = CycleSum(self.field, self.n, self.N)
        if c != 0:
            out.terms = {k: (cyc, m * c) for k, (cyc, m) in self.terms.items()}
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, CycleSum):
            return NotImplemented
        if self.n != other.n or self.N != other.N:
            return False
        return {k: m for k, (_, m) in self.terms.items()} == \
            {k: m for k, (_, m) in other.terms.items()}

    def items(self):
        return [(cyc, m) for _, (cyc, m) in sorted(self.terms.items())]

    def render(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{m}*[{key}]" for key, (_, m) in sorted(self.terms.items()))

    def __repr__(self):
        return f"CycleSum({self.render()})"


def cycle_sum_ops(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "eq":
        return a == b
    raise ParseError(f"unknown op {op!r}")


def mod_equiv(z1, z2, N):
    """Coefficientwise agreement of the two presentations mod t^N."""
    if z1.n != z2.n:
        raise ParseError("cycles of different codimension")
    return z1.key(N) == z2.key(N)


def compact_project(z, i):
    """The prefix cycle (P_1..P_i) in the first i coordinates."""
    if not (1 <= i <= z.n):
        raise ParseError("projection index out of range")
    polys = [p.restrict_arity(i) for p in z.sys.polys[:i]]
    return TriangularCycle(TriangularSystem(z.field, i, polys))


def specialize(z):
    """Set t = 0 and drop components supported on {y_i = 1}; a sum at
    precision 1 over the residue field."""
    field = z.field
    polys = [p.specialize_t() for p in z.sys.polys]
    settled = settle_system(field, z.n, polys)
    out = CycleSum(field, z.n, N=1)
    if settled is not None:
        out.add_cycle(TriangularCycle(settled), 1)
    return out


def vanishing_order(z, m):
    """Largest r <= m+1 such that the fiber mod t^r is empty in the cube.

    Pre-vanishing (r = 1) is the honest topological test: the product of
    all (y_i - 1) is nilpotent in the special-fiber algebra, with the
    squaring loop bounded by its dimension.  Higher orders test each
    coordinate separately: (y_i - 1) raised to the rank bound (rounded to
    the next power of two) must vanish mod t^r.  On graph cycles this
    reduces exactly to "some entry is congruent to 1 mod t^r".
    """
    field = z.field
    sys = z.sys
    rank = sys.rank()

    # r = 1: nilpotency of prod (y_i - 1) at the special fiber
    pi = MultiPoly.const(field, z.n, 1)
    for i in range(z.n):
        pi = pi * (MultiPoly.var(field, z.n, i) - MultiPoly.const(field, z.n, 1))
    x = normal_form(sys, pi).truncate_coeffs(1)
    steps = 1
    while steps < rank and not x.is_zero():
        x = normal_form(sys, x * x).truncate_coeffs(1)
        steps *= 2
    if not x.is_zero():
        return 0
    if m == 0:
        return 1

    # r >= 2: per-coordinate vanishing at the rank bound
    hi = 1
    for i in range(z.n):
        xi = normal_form(
            sys, MultiPoly.var(field, z.n, i) - MultiPoly.const(field, z.n, 1))
        steps = 1
        while steps < rank:
            xi = normal_form(sys, xi * xi)
            steps *= 2
        for r in range(hi + 1, m + 2):
            if xi.truncate_coeffs(r).is_zero():
                hi = r
            else:
                break
        if hi == m + 1:
            break
    return hi


def cycle_to_record(z, field_tag, m=None):
    rec = {"field": field_tag, "n": z.n, "polys": [p.render() for p in z.sys.polys]}
    if m is not None:
        rec["m"] = m
    return rec


def cycle_from_record(rec, field):
    n = int(rec["n"])
    polys = [parse_multipoly(s, field, n) for s in rec["polys"]]
    return TriangularCycle(TriangularSystem(field, n, polys))


def sum_to_record(s):
    return {"terms": [{"mult": m, "polys": [p.render() for p in cyc.sys.polys]}
                      for cyc, m in s.items()]}
