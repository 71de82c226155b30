"""Milnor symbols, the graph map, degree reduction, norms and traces.

The norm of a symbol over a finite extension k' = k[x]/(g) of the base
field is computed by the cycle pipeline: lift the entries to the finite
algebra A[x]/(g), present the pushed-forward point as a monic triangular
system, then reduce the degree vector step by step, each step certified by
a verified witness, until only graph cycles remain.  Reading off the graph
entries yields the output symbols; every intermediate identity is an exact
polynomial computation.

For single-entry symbols the whole pipeline is cross-checked against the
determinant of the multiplication map, which is the classical norm.
"""

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .cycles import (CycleSum, TriangularCycle, check_admissible, graph_cycle,
                     graph_entries, mod_equiv, vanishing_order)
from .errors import (MilnorCyclesError, NonUnitEntry, NotRelative,
                     PairDiverged, ParseError)
from .fields import ExtField
from .scalars import LocalScalar, TruncSeries, truncate
from .talgebra import base_change_point, triangularize
from .witness import degree_step, verify


@dataclass(frozen=True)
class MilnorSymbol:
    """Formal symbol {a_1, ..., a_n}; entries are unit truncated series."""

    entries: tuple

    def __post_init__(self):
        for i, e in enumerate(self.entries):
            if not e.is_unit():
                raise NonUnitEntry(f"entry {i + 1} is not a unit")

    @property
    def n(self):
        return len(self.entries)

    def render(self):
        return "{" + ", ".join(e.render() for e in self.entries) + "}"


class SymbolSum:
    """Integer combination of symbols over a fixed base (field, ext, m)."""

    __slots__ = ("base", "terms")

    def __init__(self, base):
        self.base = base          # (field_tag, ext_tag_or_None, m)
        self.terms = {}

    def add(self, entries, mult):
        if mult == 0:
            return
        key = tuple(e.render() for e in entries)
        if key in self.terms:
            ent, m2 = self.terms[key]
            m2 += mult
            if m2 == 0:
                del self.terms[key]
            else:
                self.terms[key] = (ent, m2)
        else:
            self.terms[key] = (tuple(entries), mult)

    def scale(self, c):
        out = SymbolSum(self.base)
        if c != 0:
            out.terms = {k: (e, m * c) for k, (e, m) in self.terms.items()}
        return out

    def __add__(self, other):
        if self.base != other.base:
            raise ParseError("symbol sums over different bases")
        out = SymbolSum(self.base)
        out.terms = dict(self.terms)
        for _, (e, m) in other.terms.items():
            out.add(e, m)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, SymbolSum):
            return NotImplemented
        return self.base == other.base and \
            {k: m for k, (_, m) in self.terms.items()} == \
            {k: m for k, (_, m) in other.terms.items()}

    def is_zero(self):
        return not self.terms

    def items(self):
        return [(e, m) for _, (e, m) in sorted(self.terms.items())]

    def render(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{m}*{{{', '.join(k)}}}"
                          for k, (_, m) in sorted(self.terms.items()))

    def __repr__(self):
        return f"SymbolSum({self.render()})"


def graph(symbol, field, lift=None):
    """Graph cycle of a symbol over the base truncation k_{m+1}.

    The default lift takes the canonical polynomial representative of each
    entry; any two lifts differ by multiples of t^(m+1)."""
    if lift is None:
        lift = TruncSeries.to_local
    entries = [lift(e) for e in symbol.entries]
    return graph_cycle(field, entries)


@dataclass
class ReductionResult:
    graphs: SymbolSum
    witnesses: list
    input_echo: TriangularCycle
    final: CycleSum
    schedule: list = dc_field(default_factory=list)


def _pick_index(degs):
    for i in range(len(degs), 0, -1):
        if degs[i - 1] > 1:
            return i
    return None


def reduce_to_graphs(z, m):
    """Reduce an admissible cycle to a graph, one verified witness per step.

    Degree vectors decrease strictly lexicographically, so the loop
    terminates.  Degenerate intermediate states raise UnhandledFaceShape or
    DenominatorNotUnit; no silent repair is attempted."""
    rep = check_admissible(z.sys)
    if not rep:
        raise ParseError(f"input cycle inadmissible: {rep.reason}")
    field = z.field
    current: Optional[TriangularCycle] = z
    witnesses = []
    schedule = [z.degrees()]
    while True:
        degs = current.degrees()
        i = _pick_index(degs)
        if i is None:
            final = CycleSum.of(current, 1, N=None)
            break
        w, nxt = degree_step(current.sys, i)
        outcome = verify(w)
        if not outcome:
            raise MilnorCyclesError(f"witness verification failed: {outcome.diff}")
        witnesses.append(w)
        if nxt is None:
            final = CycleSum(field, z.n, N=None)
            break
        current = nxt
        schedule.append(current.degrees())
    graphs = SymbolSum((field.tag(), None, m))
    for cyc, mult in final.items():
        entries = [truncate(a, m + 1) for a in graph_entries(cyc)]
        graphs.add(entries, mult)
    return ReductionResult(graphs=graphs, witnesses=witnesses, input_echo=z,
                           final=final, schedule=schedule)


def telescope_holds(result):
    """input - sum(graph cycles) == sum of witness boundaries, exactly."""
    from .witness import boundary
    field = result.input_echo.field
    n = result.input_echo.n
    lhs = CycleSum.of(result.input_echo, 1, N=None) - result.final
    rhs = CycleSum(field, n, N=None)
    for w in result.witnesses:
        rhs = rhs + boundary(w)
    return lhs == rhs


def reduced_sum_mod(s, N):
    """Truncate a cycle sum to precision N, dropping terms whose fiber mod
    t^N is already empty (they are equivalent to the empty cycle)."""
    out = CycleSum(s.field, s.n, N)
    for cyc, mult in s.items():
        if vanishing_order(cyc, N - 1) >= N:
            continue
        out.add_cycle(cyc, mult)
    return out


def reduce_pair(z1, z2, m):
    """Lock-step reduction of a naively mod t^(m+1)-equivalent pair."""
    if not mod_equiv(z1, z2, m + 1):
        raise ParseError("pair is not mod t^(m+1)-equivalent")
    for z in (z1, z2):
        rep = check_admissible(z.sys)
        if not rep:
            raise ParseError(f"input cycle inadmissible: {rep.reason}")
    field = z1.field
    n = z1.n
    cur1, cur2 = z1, z2
    wit1, wit2 = [], []
    sched = [(z1.degrees(), z2.degrees())]
    final1 = final2 = None
    while True:
        d1, d2 = cur1.degrees(), cur2.degrees()
        if d1 != d2:
            raise PairDiverged(f"degree vectors differ: {d1} vs {d2}")
        i = _pick_index(d1)
        if i is None:
            final1 = CycleSum.of(cur1, 1, N=None)
            final2 = CycleSum.of(cur2, 1, N=None)
            break
        w1, nxt1 = degree_step(cur1.sys, i)
        w2, nxt2 = degree_step(cur2.sys, i)
        for w in (w1, w2):
            if not verify(w):
                raise MilnorCyclesError("witness verification failed")
        wit1.append(w1)
        wit2.append(w2)
        if nxt1 is None or nxt2 is None:
            # a reduced coordinate hit 1 exactly on one side; the other side
            # must be equivalent to the empty cycle mod t^(m+1)
            final1 = CycleSum(field, n, N=None)
            final2 = CycleSum(field, n, N=None)
            if nxt1 is not None:
                final1.add_cycle(nxt1, 1)
            if nxt2 is not None:
                final2.add_cycle(nxt2, 1)
            if reduced_sum_mod(final1, m + 1) != reduced_sum_mod(final2, m + 1):
                raise PairDiverged("one side vanished, the other did not")
            break
        if not mod_equiv(nxt1, nxt2, m + 1):
            raise PairDiverged("reduction lost mod t^(m+1) equivalence")
        cur1, cur2 = nxt1, nxt2
        sched.append((d1, d2))
    res1 = _result_from(z1, final1, wit1, m)
    res2 = _result_from(z2, final2, wit2, m)
    res1.schedule = [a for a, _ in sched]
    res2.schedule = [b for _, b in sched]
    return res1, res2


def _result_from(z, final, witnesses, m):
    field = z.field
    graphs = SymbolSum((field.tag(), None, m))
    for cyc, mult in final.items():
        entries = [truncate(a, m + 1) for a in graph_entries(cyc)]
        graphs.add(entries, mult)
    return ReductionResult(graphs=graphs, witnesses=witnesses, input_echo=z,
                           final=final)


def phi_n1(z):
    """Constant-term read-off for one-variable cycles: (-1)^d P(0)."""
    if z.n != 1:
        raise ParseError("phi_n1 needs a one-variable cycle")
    p = z.sys.polys[0]
    d = p.degree_in(0)
    c = p.coeff_of_power(0, 0).as_scalar()
    return -c if d % 2 else c


def _det(mat):
    """Determinant over a commutative ring by cofactor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = None
    for j in range(n):
        minor = [[mat[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = mat[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def norm_n1_oracle(u, ext, m):
    """Determinant of multiplication by u on k'_{m+1} over k_{m+1}."""
    base = ext.base
    deg = ext.deg
    if not u.is_unit():
        raise NonUnitEntry("oracle input is not a unit")
    cols = []
    for j in range(deg):
        xj = TruncSeries.const(ext, m + 1, ext.make([base.zero()] * j + [base.one()]))
        w = u * xj
        col = []
        for b in range(deg):
            col.append(TruncSeries(base, m + 1, [coef[b] for coef in w.coeffs]))
        cols.append(col)
    mat = [[cols[j][b] for j in range(deg)] for b in range(deg)]
    return _det(mat)


def _coerce_entries_to_base(entries, ext):
    base = ext.base
    out = []
    for e in entries:
        out.append(TruncSeries(base, e.N, [c[0] for c in e.coeffs]))
    return out


def fold_units(symbol_sum, field, m):
    """Product of first entries with multiplicities; the n = 1 collapse."""
    acc = TruncSeries.one(field, m + 1)
    for entries, mult in symbol_sum.items():
        acc = acc * entries[0] ** mult
    return acc


def norm(symbol, ext, m):
    """Bass-Tate-Kato norm via the cycle pipeline.

    Returns (SymbolSum over the base truncation, witnesses)."""
    base = ext.base
    for e in symbol.entries:
        if e.N != m + 1:
            raise ParseError("entry precision does not match m")
    if ext.deg == 1:
        out = SymbolSum((base.tag(), None, m))
        out.add(_coerce_entries_to_base(symbol.entries, ext), 1)
        return out, []
    point = base_change_point(symbol.entries, ext.modulus, base, m)
    sys, mult = triangularize(point)
    cyc = TriangularCycle(sys)
    result = reduce_to_graphs(cyc, m)
    out = result.graphs.scale(mult)
    if symbol.n == 1:
        oracle = norm_n1_oracle(symbol.entries[0], ext, m)
        folded = fold_units(out, base, m)
        if folded != oracle:
            raise MilnorCyclesError(
                "norm pipeline disagrees with the determinant oracle")
    return out, result.witnesses


def field_norm(symbol, ext):
    """Classical norm of field symbols: the pipeline at precision 1."""
    return norm(symbol, ext, 0)


def _series_level(u):
    """Largest r <= N with u = 1 mod t^r (N when u == 1 exactly)."""
    f = u.field
    if not f.is_zero(f.sub(u.coeffs[0], f.one())):
        return 0
    for r in range(1, u.N):
        if not f.is_zero(u.coeffs[r]):
            return r
    return u.N


def trace_relative(symbol, ext, m, r):
    """Norm restricted to relative symbols: some entry = 1 mod t^r; every
    output graph is again vanishing to order >= r."""
    if not (1 <= r <= m + 1):
        raise ParseError("relative order out of range")
    if not any(_series_level(e) >= r for e in symbol.entries):
        raise NotRelative(f"no entry is congruent to 1 mod t^{r}")
    out, wits = norm(symbol, ext, m)
    for entries, _ in out.items():
        if max((_series_level(e) for e in entries), default=0) < r:
            raise MilnorCyclesError(
                "trace output lost the relative vanishing order")
    return out, wits
