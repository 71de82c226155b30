"""Boundary witnesses: parametric cycles one dimension up whose faces
certify an equality of cycle sums.

Four families are supported; each witness stores its defining polynomial
system in n+1 variables together with a claimed boundary.

  * bilinear     -- curve (f1 y1 - f1 f2) - (y1 - f1 f2) y2 times a graph
    tail; certifies G(f1 f2, tail) = G(f1, tail) + G(f2, tail) up to
    boundary.
  * steinberg    -- closure of x -> (x, 1-x, (a-x)/(1-x)) with a graph
    tail, the pair placed at a chosen position; certifies that symbols
    containing (a, 1-a) die.
  * norm_reduce  -- for monic f in one variable with unit constant term:
    f(y1) - (y1-1)^(d-1) (y1 - a0) y2, a0 the signed constant term;
    certifies Z_f = G(a0) up to boundary.
  * degree_step  -- one step of the degree reduction of a triangular cycle
    at level i; certifies Z = Z' up to boundary where Z' replaces P_i by
    y_i - c for the signed constant term c of P_i in the prefix quotient.

The face of a system at y_j = 0 substitutes 0; the face at y_j = infinity
takes leading coefficients in y_j (projective substitution).  Components
supported on {y = 1} are empty in the ambient cube and are discarded by
``settle_system``; everything else must settle to an admissible cycle, or
the witness is outside the supported families (UnhandledFaceShape).
"""

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .cycles import (CycleSum, TriangularCycle, check_admissible, settle_system)
from .errors import (NonUnitParameter, ParseError, SteinbergDegenerate,
                     UnhandledFaceShape)
from .multipoly import MultiPoly
from .scalars import LocalScalar
from .talgebra import TriangularSystem, normal_form


@dataclass(frozen=True)
class Witness:
    kind: str
    field_ctx: object
    n: int                      # ambient symbol length; system lives in n+1 vars
    system: tuple               # MultiPoly tuple, arity n+1
    sign: int                   # global multiplier on the raw face sum
    claimed: CycleSum
    params: dict = dc_field(default_factory=dict)

    def render_system(self):
        return [p.render() for p in self.system]


def _settled_sum(field, n, systems_with_mults):
    """Cycle sum out of (polys, mult) face systems, via settle_system."""
    acc = CycleSum(field, n, N=None)
    for polys, mult in systems_with_mults:
        settled = settle_system(field, n, polys)
        if settled is not None:
            acc.add_cycle(TriangularCycle(settled), mult)
    return acc


def _graph_polys(field, n, entries):
    return [MultiPoly.var(field, n, i) - MultiPoly.const(field, n, a)
            for i, a in enumerate(entries)]


def _require_unit(a, what):
    if not a.is_local_unit():
        raise NonUnitParameter(f"{what} must be a unit of k[t]_(t)")


def make_bilinear(field, f1, f2, tail=()):
    """Witness for the product relation in the first coordinate."""
    _require_unit(f1, "f1")
    _require_unit(f2, "f2")
    for j, a in enumerate(tail):
        _require_unit(a, f"tail[{j}]")
    tail = tuple(tail)
    n = 1 + len(tail)
    nv = n + 1
    y1 = MultiPoly.var(field, nv, 0)
    y2 = MultiPoly.var(field, nv, 1)
    c_f1 = MultiPoly.const(field, nv, f1)
    c_ff = MultiPoly.const(field, nv, f1 * f2)
    q = (c_f1 * y1 - c_ff) - (y1 - c_ff) * y2
    system = [q]
    for j, a in enumerate(tail):
        system.append(MultiPoly.var(field, nv, 2 + j)
                      - MultiPoly.const(field, nv, a))
    claimed = _settled_sum(field, n, [
        (_graph_polys(field, n, (f1,) + tail), -1),
        (_graph_polys(field, n, (f2,) + tail), -1),
        (_graph_polys(field, n, (f1 * f2,) + tail), +1),
    ])
    return Witness("bilinear", field, n, tuple(system), +1, claimed,
                   params={"f1": f1, "f2": f2, "tail": tail})


def make_steinberg(field, a, tail=(), pos=1):
    """Witness killing a symbol with the pair (a, 1-a) at position pos."""
    _require_unit(a, "a")
    one_minus = LocalScalar.one(field) - a
    if not one_minus.is_local_unit():
        raise SteinbergDegenerate("1 - a is not a unit")
    for j, c in enumerate(tail):
        _require_unit(c, f"tail[{j}]")
    tail = tuple(tail)
    n = 2 + len(tail)
    if not (1 <= pos <= n - 1):
        raise ParseError("steinberg position out of range")
    nv = n + 1
    p0, p1, p2 = pos - 1, pos, pos + 1   # 0-based slots of x, 1-x, aux
    yp0 = MultiPoly.var(field, nv, p0)
    yp1 = MultiPoly.var(field, nv, p1)
    yp2 = MultiPoly.var(field, nv, p2)
    one = MultiPoly.const(field, nv, 1)
    ca = MultiPoly.const(field, nv, a)
    system = [yp1 - (one - yp0), (one - yp0) * yp2 - (ca - yp0)]
    slots = [s for s in range(nv) if s not in (p0, p1, p2)]
    for s, c in zip(slots, tail):
        system.append(MultiPoly.var(field, nv, s) - MultiPoly.const(field, nv, c))
    entries = tail[: pos - 1] + (a, one_minus) + tail[pos - 1:]
    claimed = _settled_sum(field, n, [
        (_graph_polys(field, n, entries), (-1) ** (pos + 1)),
    ])
    return Witness("steinberg", field, n, tuple(system),
                   +1, claimed, params={"a": a, "tail": tail, "pos": pos})


def _signed_constant(field, prefix, poly, i_idx):
    """(-1)^d times the constant term of the polynomial at level i_idx,
    as a normal form with respect to the prefix."""
    d = poly.degree_in(i_idx)
    const = normal_form(prefix, poly.subst(i_idx, MultiPoly.const(field, poly.nvars, 0)))
    if d % 2:
        const = -const
    return const


def make_norm_reduce(field, f_poly):
    """Witness reducing a one-variable cycle to its norm graph.

    ``f_poly``: MultiPoly of arity 1, monic in y1 with unit constant term.
    """
    sys1 = TriangularSystem(field, 1, (f_poly,))
    rep = check_admissible(sys1)
    if not rep:
        raise NonUnitParameter(f"inadmissible polynomial: {rep.reason}")
    d = f_poly.degree_in(0)
    a0 = _signed_constant(field, TriangularSystem(field, 1, ()), f_poly, 0).as_scalar()
    nv = 2
    fe = f_poly.extend_arity(nv)
    y1 = MultiPoly.var(field, nv, 0)
    y2 = MultiPoly.var(field, nv, 1)
    one = MultiPoly.const(field, nv, 1)
    q = fe - ((y1 - one) ** (d - 1)) * (y1 - MultiPoly.const(field, nv, a0)) * y2
    claimed = _settled_sum(field, 1, [
        (_graph_polys(field, 1, (a0,)), +1),
        ([f_poly], -1),
    ])
    return Witness("norm_reduce", field, 1, (q,), +1, claimed,
                   params={"f": f_poly, "a0": a0})


def degree_step(sys, i):
    """One reduction step at level i (1-based, d_i > 1) of a full system.

    Returns (witness, next_cycle) where next_cycle is None when the reduced
    coordinate equals 1 exactly (the replacement cycle is empty).
    """
    field = sys.field
    n = sys.n
    if sys.nvars != n:
        raise ParseError("degree step needs a fully bound system")
    rep = check_admissible(sys)
    if not rep:
        raise NonUnitParameter(f"inadmissible system: {rep.reason}")
    degs = sys.degrees()
    if not (1 <= i <= n) or degs[i - 1] < 2:
        raise ParseError("degree step requires d_i > 1")
    i_idx = i - 1
    prefix = sys.prefix(i_idx)
    c_val = _signed_constant(field, prefix, sys.polys[i_idx], i_idx)

    nv = n + 1

    def embed(p):
        # variable j stays at j for j < i, moves to j+1 for j >= i
        out = {}
        for exp, coef in p.terms.items():
            nexp = exp[:i] + (0,) + exp[i:]
            out[nexp] = coef
        return MultiPoly(field, nv, out)

    pi = embed(sys.polys[i_idx])
    ci = embed(c_val)
    yi = MultiPoly.var(field, nv, i_idx)
    yaux = MultiPoly.var(field, nv, i)
    one = MultiPoly.const(field, nv, 1)
    q = pi - ((yi - one) ** (degs[i_idx] - 1)) * (yi - ci) * yaux
    system = [embed(p) for p in sys.polys[:i_idx]] + [q] \
        + [embed(p) for p in sys.polys[i_idx + 1:]]

    next_polys = list(sys.polys[:i_idx]) \
        + [MultiPoly.var(field, n, i_idx) - c_val.extend_arity(n)
           if c_val.nvars < n else MultiPoly.var(field, n, i_idx) - c_val] \
        + list(sys.polys[i_idx + 1:])
    settled = settle_system(field, n, next_polys)
    claimed = CycleSum(field, n, N=None)
    claimed.add_cycle(TriangularCycle(TriangularSystem(field, n, sys.polys)), 1)
    next_cycle = None
    if settled is not None:
        next_cycle = TriangularCycle(settled)
        claimed.add_cycle(next_cycle, -1)
    w = Witness("degree_step", field, n, tuple(system), (-1) ** i, claimed,
                params={"polys": sys.polys, "i": i})
    return w, next_cycle


def make_witness(kind, field, **params):
    """Uniform constructor over the four families."""
    if kind == "bilinear":
        return make_bilinear(field, params["f1"], params["f2"],
                             params.get("tail", ()))
    if kind == "steinberg":
        return make_steinberg(field, params["a"], params.get("tail", ()),
                              params.get("pos", 1))
    if kind == "norm_reduce":
        return make_norm_reduce(field, params["f"])
    if kind == "degree_step":
        w, _ = degree_step(params["sys"], params["i"])
        return w
    raise ParseError(f"unknown witness kind {kind!r}")


def boundary(w):
    """Signed sum of the 2(n+1) codimension-1 faces of the witness."""
    field = w.field_ctx
    n = w.n
    nv = n + 1
    total = CycleSum(field, n, N=None)
    for slot in range(nv):
        for eps in ("zero", "inf"):
            faces = []
            for p in w.system:
                if eps == "zero":
                    q = p.subst(slot, MultiPoly.const(field, nv, 0))
                else:
                    q = p.lead_coeff_in(slot)
                faces.append(q.drop_var(slot))
            settled = settle_system(field, n, faces)
            if settled is None:
                continue
            face_sign = (-1) ** (slot + 1) * (1 if eps == "inf" else -1)
            total.add_cycle(TriangularCycle(settled), w.sign * face_sign)
    return total


@dataclass(frozen=True)
class VerifyOutcome:
    ok: bool
    diff: Optional[str] = None

    def __bool__(self):
        return self.ok


def verify(w):
    """Exact comparison of the computed boundary with the claim."""
    try:
        b = boundary(w)
    except UnhandledFaceShape as exc:
        return VerifyOutcome(False, f"face error: {exc}")
    if b == w.claimed:
        return VerifyOutcome(True)
    return VerifyOutcome(
        False, f"boundary {b.render()} != claimed {w.claimed.render()}")
