"""Big Witt vectors of length m over a field k, as unit series.

A Witt vector is a unit series in (1 + t*k[t]/(t^(m+1)))^x.  The group law
(written +) is series multiplication; the product (written *) is determined
by factoring both operands into (1 - a t^i) pieces and multiplying pairs via

    (1 - a t^i) * (1 - b t^j) = (1 - a^(j/r) b^(i/r) t^(ij/r))^r,
    r = gcd(i, j).

Ghost coordinates w_n = sum_{d | n} d a_d^(n/d) exist over Q and over F_p
with p > m; over small characteristic they degenerate, so the operation is
gated and the ring axioms are checked directly on series instead.
"""

from math import gcd

from .errors import GhostUndefined, ParseError
from .scalars import TruncSeries


class WittVector:
    """Unit series 1 + c_1 t + ... + c_m t^m representing a Witt vector."""

    __slots__ = ("m", "series")

    def __init__(self, series):
        if not series.is_unit() or not series.field.is_zero(
                series.field.sub(series.coeffs[0], series.field.one())):
            raise ParseError("Witt vector series must have constant term 1")
        self.series = series
        self.m = series.N - 1

    @property
    def field(self):
        return self.series.field

    @classmethod
    def zero(cls, field, m):
        return cls(TruncSeries.one(field, m + 1))

    @classmethod
    def one(cls, field, m):
        """Multiplicative identity 1 - t."""
        return cls.line(field, m, 1, field.one())

    @classmethod
    def line(cls, field, m, i, a):
        """The vector 1 - a t^i."""
        coeffs = [field.zero()] * (m + 1)
        coeffs[0] = field.one()
        if i <= m:
            coeffs[i] = field.neg(a)
        return cls(TruncSeries(field, m + 1, coeffs))

    @classmethod
    def from_series(cls, series):
        return cls(series)

    def __eq__(self, other):
        return isinstance(other, WittVector) and self.series == other.series

    def __hash__(self):
        return hash(self.series)

    def render(self):
        return self.series.render()

    def __repr__(self):
        return f"WittVector({self.render()})"


def witt_add(x, y):
    if x.m != y.m:
        raise ParseError("length mismatch")
    return WittVector(x.series * y.series)


def witt_neg(x):
    return WittVector(x.series.inv())


def witt_factor(x):
    """Coefficients a_1..a_m with x = prod (1 - a_i t^i) mod t^(m+1).

    Iterative peeling: a_i is minus the t^i coefficient of the running
    quotient, which is then divided by (1 - a_i t^i).
    """
    field = x.field
    m = x.m
    rest = x.series
    out = []
    for i in range(1, m + 1):
        a = field.neg(rest.coeffs[i])
        out.append(a)
        if not field.is_zero(a):
            rest = rest * WittVector.line(field, m, i, a).series.inv()
    return out


def witt_unfactor(field, m, alphas):
    """Product of (1 - a_i t^i), inverse of witt_factor."""
    acc = TruncSeries.one(field, m + 1)
    for i, a in enumerate(alphas, start=1):
        if not field.is_zero(a):
            acc = acc * WittVector.line(field, m, i, a).series
    return WittVector(acc)


def witt_star(x, y):
    """The Witt product via factorization and the pairwise rule."""
    if x.m != y.m:
        raise ParseError("length mismatch")
    field = x.field
    m = x.m
    xs = witt_factor(x)
    ys = witt_factor(y)
    acc = TruncSeries.one(field, m + 1)
    for i, a in enumerate(xs, start=1):
        if field.is_zero(a):
            continue
        for j, b in enumerate(ys, start=1):
            if field.is_zero(b):
                continue
            r = gcd(i, j)
            k = i * j // r
            if k > m:
                continue
            c = field.mul(pow_elem(field, a, j // r), pow_elem(field, b, i // r))
            acc = acc * (WittVector.line(field, m, k, c).series ** r)
    return WittVector(acc)


def pow_elem(field, a, e):
    out = field.one()
    base = a
    while e:
        if e & 1:
            out = field.mul(out, base)
        base = field.mul(base, base)
        e >>= 1
    return out


def ghost(x):
    """Ghost coordinates (w_1, ..., w_m); defined over Q or for p > m.

    Computed from the factorization and cross-checked against the
    logarithmic-derivative identity -t s'(t)/s(t) = sum w_n t^n, which is an
    exact polynomial identity over any coefficient field.
    """
    field = x.field
    m = x.m
    p = field.char()
    if p != 0 and p <= m:
        raise GhostUndefined(f"characteristic {p} <= length {m}")
    alphas = witt_factor(x)
    w = []
    for n in range(1, m + 1):
        acc = field.zero()
        for d in range(1, n + 1):
            if n % d:
                continue
            term = pow_elem(field, alphas[d - 1], n // d)
            acc = field.add(acc, field.mul(field.from_int(d), term))
        w.append(acc)
    # log-derivative cross-check
    s = x.series
    ds = TruncSeries(field, m + 1,
                     [field.zero()] +
                     [field.mul(field.from_int(i), s.coeffs[i])
                      for i in range(1, m + 1)])
    lhs = -(ds * s.inv())
    for n in range(1, m + 1):
        if not field.is_zero(field.sub(lhs.coeffs[n], w[n - 1])):
            raise AssertionError("ghost cross-check failed")
    return w


def vanishing_level(x):
    """Largest r with x = 1 mod t^r; m+1 when x is the zero vector."""
    field = x.field
    for r in range(1, x.m + 1):
        if not field.is_zero(x.series.coeffs[r]):
            return r
    return x.m + 1
