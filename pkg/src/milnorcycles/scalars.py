"""Exact scalars: k[t], the local ring A = k[t]_(t), and truncations k[t]/(t^N).

Representation conventions:

  * ``Poly``        -- dense univariate polynomial in t over a field context,
    coefficients ascending, leading coefficient nonzero (empty = zero).
  * ``LocalScalar`` -- fraction num/den of ``Poly`` in canonical form
    (gcd(num, den) = 1, den monic).  The same class doubles as an element of
    the fraction field k(t) for internal linear algebra; membership in the
    local ring A means den(0) != 0 and is checked where the contract needs it.
  * ``TruncSeries`` -- element of k[t]/(t^N): exactly N coefficients.

The textual grammar accepted by :func:`parse_expr` covers integer and
rational literals, the variables t, x, y1..y9 (z1..z9 as synonyms),
operators + - * ^ and parentheses.
"""

from fractions import Fraction

from .errors import DivisionByNonUnit, NonUnit, ParseError
from .fields import fp_add, fp_divmod, fp_gcd, fp_mul, fp_norm, fp_sub


class Poly:
    """Univariate polynomial in t over a field context."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = fp_norm(field, tuple(coeffs))

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.one(),))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def t(cls, field):
        return cls(field, (field.zero(), field.one()))

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def at_zero(self):
        return self.coeffs[0] if self.coeffs else self.field.zero()

    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def monic(self):
        if self.is_zero():
            return self
        inv = self.field.inv(self.leading())
        return Poly(self.field, tuple(self.field.mul(c, inv) for c in self.coeffs))

    def __add__(self, other):
        return Poly(self.field, fp_add(self.field, self.coeffs, other.coeffs))

    def __sub__(self, other):
        return Poly(self.field, fp_sub(self.field, self.coeffs, other.coeffs))

    def __mul__(self, other):
        return Poly(self.field, fp_mul(self.field, self.coeffs, other.coeffs))

    def __neg__(self):
        return Poly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def divmod(self, other):
        q, r = fp_divmod(self.field, self.coeffs, other.coeffs)
        return Poly(self.field, q), Poly(self.field, r)

    def gcd(self, other):
        return Poly(self.field, fp_gcd(self.field, self.coeffs, other.coeffs))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs \
            and self.field == other.field

    def __hash__(self):
        return hash((self.field.tag(), self.coeffs))

    def render(self, var="t"):
        field = self.field
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if field.is_zero(c):
                continue
            cs = field.render(c)
            if i == 0:
                parts.append(cs)
            elif cs == "1":
                parts.append(var if i == 1 else f"{var}^{i}")
            else:
                if ("+" in cs[1:]) or ("-" in cs[1:]) or ("/" in cs and "x" in cs):
                    cs = f"({cs})"
                parts.append(f"{cs}*{var}" if i == 1 else f"{cs}*{var}^{i}")
        s = "+".join(parts)
        return s.replace("+-", "-")

    def __repr__(self):
        return f"Poly({self.render()})"


class LocalScalar:
    """Canonical fraction of polynomials in t.

    Arithmetic is that of the full fraction field k(t); the local-ring view
    (den(0) != 0) is what the public scalar API checks.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce=True):
        if den is None:
            den = Poly.one(num.field)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            g = num.gcd(den)
            if g.degree() > 0:
                num, _ = num.divmod(g)
                den, _ = den.divmod(g)
            lead_inv = num.field.inv(den.leading())
            if not num.field.is_zero(num.field.sub(den.leading(), num.field.one())):
                scale = Poly.const(num.field, lead_inv)
                num = num * scale
                den = den * scale
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @classmethod
    def zero(cls, field):
        return cls(Poly.zero(field))

    @classmethod
    def one(cls, field):
        return cls(Poly.one(field))

    @classmethod
    def const(cls, field, c):
        return cls(Poly.const(field, c))

    @classmethod
    def t(cls, field):
        return cls(Poly.t(field))

    @classmethod
    def from_fraction(cls, field, q):
        num = field.from_int(q.numerator)
        den_int = field.from_int(q.denominator)
        return cls(Poly.const(field, field.mul(num, field.inv(den_int))))

    def is_zero(self):
        return self.num.is_zero()

    def is_local(self):
        return not self.field.is_zero(self.den.at_zero())

    def is_local_unit(self):
        return self.is_local() and not self.field.is_zero(self.num.at_zero())

    def is_one(self):
        return self.num == Poly.one(self.field) and self.den == Poly.one(self.field)

    def at_zero(self):
        if not self.is_local():
            raise DivisionByNonUnit("evaluation at t=0 with vanishing denominator")
        return self.field.mul(self.num.at_zero(), self.field.inv(self.den.at_zero()))

    def __add__(self, other):
        other = self._coerce(other)
        return LocalScalar(self.num * other.den + other.num * self.den,
                           self.den * other.den)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self._coerce(other)
        return LocalScalar(self.num * other.den - other.num * self.den,
                           self.den * other.den)

    def __mul__(self, other):
        other = self._coerce(other)
        return LocalScalar(self.num * other.num, self.den * other.den)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return LocalScalar(-self.num, self.den, reduce=False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in k(t)")
        return LocalScalar(self.num * other.den, self.den * other.num)

    def __pow__(self, e):
        if e < 0:
            return LocalScalar.one(self.field) / self ** (-e)
        out = LocalScalar.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, LocalScalar):
            return other
        if isinstance(other, int):
            return LocalScalar.const(self.field, self.field.from_int(other))
        raise TypeError(f"cannot coerce {other!r}")

    def __eq__(self, other):
        if not isinstance(other, LocalScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def render(self):
        if self.den == Poly.one(self.field):
            return self.num.render()
        ns = self.num.render()
        if "+" in ns[1:] or "-" in ns[1:] or "*" in ns:
            ns = f"({ns})"
        ds = self.den.render()
        if "+" in ds[1:] or "-" in ds[1:] or "*" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"LocalScalar({self.render()})"


def local_arith(a, b, op):
    """Field-style arithmetic on A = k[t]_(t) with the unit check on div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b.is_local_unit():
            raise DivisionByNonUnit("division by a non-unit of k[t]_(t)")
        return a / b
    raise ParseError(f"unknown op {op!r}")


class TruncSeries:
    """Element of k[t]/(t^N), exactly N stored coefficients."""

    __slots__ = ("field", "N", "coeffs")

    def __init__(self, field, N, coeffs):
        if N < 1:
            raise ParseError("precision must be >= 1")
        c = list(coeffs)[:N]
        while len(c) < N:
            c.append(field.zero())
        self.field = field
        self.N = N
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field, N):
        return cls(field, N, ())

    @classmethod
    def one(cls, field, N):
        return cls(field, N, (field.one(),))

    @classmethod
    def const(cls, field, N, c):
        return cls(field, N, (c,))

    @classmethod
    def t_power(cls, field, N, k, c=None):
        coeffs = [field.zero()] * N
        if k < N:
            coeffs[k] = field.one() if c is None else c
        return cls(field, N, coeffs)

    def is_unit(self):
        return not self.field.is_zero(self.coeffs[0])

    def is_zero(self):
        return all(self.field.is_zero(c) for c in self.coeffs)

    def is_one(self):
        return self == TruncSeries.one(self.field, self.N)

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            if isinstance(other, int):
                return TruncSeries.const(self.field, self.N,
                                         self.field.from_int(other))
            raise TypeError(f"cannot coerce {other!r}")
        if other.N != self.N or other.field != self.field:
            raise ParseError("mixed precisions or fields in series arithmetic")
        return other

    def __add__(self, other):
        other = self._check(other)
        f = self.field
        return TruncSeries(f, self.N,
                           [f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self._check(other)
        f = self.field
        return TruncSeries(f, self.N,
                           [f.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        f = self.field
        return TruncSeries(f, self.N, [f.neg(a) for a in self.coeffs])

    def __mul__(self, other):
        other = self._check(other)
        f = self.field
        out = [f.zero()] * self.N
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j in range(self.N - i):
                b = other.coeffs[j]
                if not f.is_zero(b):
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return TruncSeries(f, self.N, out)

    def inv(self):
        f = self.field
        if not self.is_unit():
            raise NonUnit("series with zero constant term has no inverse")
        b = [f.zero()] * self.N
        b[0] = f.inv(self.coeffs[0])
        for n in range(1, self.N):
            acc = f.zero()
            for i in range(1, n + 1):
                acc = f.add(acc, f.mul(self.coeffs[i], b[n - i]))
            b[n] = f.neg(f.mul(b[0], acc))
        return TruncSeries(f, self.N, b)

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        out = TruncSeries.one(self.field, self.N)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def truncate(self, N2):
        if N2 > self.N:
            raise ParseError("cannot extend precision")
        return TruncSeries(self.field, N2, self.coeffs[:N2])

    def to_local(self):
        """Canonical polynomial representative of degree < N, as a scalar."""
        return LocalScalar(Poly(self.field, self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.field != other.field or self.N != other.N:
            return False
        f = self.field
        return all(f.is_zero(f.sub(a, b))
                   for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field.tag(), self.N, self.coeffs))

    def render(self):
        return Poly(self.field, self.coeffs).render()

    def __repr__(self):
        return f"TruncSeries(N={self.N}, {self.render()})"


def truncate(a, N):
    """Image of a local scalar in k[t]/(t^N) via series inversion of den."""
    if N < 1:
        raise ParseError("precision must be >= 1")
    if not a.is_local():
        raise DivisionByNonUnit("scalar is not in k[t]_(t)")
    f = a.field
    num = TruncSeries(f, N, a.num.coeffs)
    den = TruncSeries(f, N, a.den.coeffs)
    return num * den.inv()


def ts_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv_of_a":
        return a.inv()
    raise ParseError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# polynomial grammar


_VAR_NAMES = {"t", "x"} | {f"y{i}" for i in range(1, 10)} \
    | {f"z{i}" for i in range(1, 10)}


def _tokenize(s):
    tokens = []
    i, n = 0, len(s)
    while i < n:
        c = s[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and s[j].isdigit():
                j += 1
            if j < n and s[j] == "/" and j + 1 < n and s[j + 1].isdigit():
                k = j + 1
                while k < n and s[k].isdigit():
                    k += 1
                tokens.append(("num", Fraction(int(s[i:j]), int(s[j + 1:k]))))
                i = k
            else:
                tokens.append(("num", Fraction(int(s[i:j]))))
                i = j
            continue
        if c.isalpha():
            j = i + 1
            while j < n and (s[j].isalnum()):
                j += 1
            name = s[i:j]
            if name not in _VAR_NAMES:
                raise ParseError(f"unknown variable {name!r}")
            tokens.append(("var", name))
            i = j
            continue
        if c in "+-*^()":
            tokens.append((c, c))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}")
    tokens.append(("end", None))
    return tokens


def parse_expr(s):
    """Parse into an AST of tuples; see eval_expr for the node kinds."""
    tokens = _tokenize(s)
    pos = [0]

    def peek():
        return tokens[pos[0]][0]

    def take(kind=None):
        tk = tokens[pos[0]]
        if kind is not None and tk[0] != kind:
            raise ParseError(f"expected {kind}, found {tk[0]}")
        pos[0] += 1
        return tk

    def atom():
        kind = peek()
        if kind == "num":
            return ("num", take()[1])
        if kind == "var":
            return ("var", take()[1])
        if kind == "(":
            take("(")
            node = expr()
            take(")")
            return node
        if kind == "-":
            take("-")
            return ("neg", atom())
        raise ParseError(f"unexpected token {kind}")

    def factor():
        node = atom()
        while peek() == "^":
            take("^")
            tk = take("num")
            e = tk[1]
            if e.denominator != 1 or e < 0:
                raise ParseError("exponent must be a nonnegative integer")
            node = ("pow", node, int(e))
        return node

    def term():
        node = factor()
        while peek() == "*":
            take("*")
            node = ("mul", node, factor())
        return node

    def expr():
        if peek() == "-":
            take("-")
            node = ("neg", term())
        else:
            node = term()
        while peek() in "+-":
            op = take()[0]
            rhs = term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    node = expr()
    take("end")
    return node


def eval_expr(ast, env, const):
    """Evaluate an AST; env maps variable names to ring elements and
    ``const`` maps a Fraction literal into the ring."""
    kind = ast[0]
    if kind == "num":
        return const(ast[1])
    if kind == "var":
        name = ast[1]
        if name not in env:
            raise ParseError(f"variable {name!r} not allowed here")
        return env[name]
    if kind == "neg":
        return -eval_expr(ast[1], env, const)
    if kind == "add":
        return eval_expr(ast[1], env, const) + eval_expr(ast[2], env, const)
    if kind == "sub":
        return eval_expr(ast[1], env, const) - eval_expr(ast[2], env, const)
    if kind == "mul":
        return eval_expr(ast[1], env, const) * eval_expr(ast[2], env, const)
    if kind == "pow":
        return eval_expr(ast[1], env, const) ** ast[2]
    raise ParseError(f"bad AST node {kind}")


def parse_local_scalar(s, field):
    """Parse an expression in t only into a local scalar."""
    env = {"t": LocalScalar.t(field)}

    def const(q):
        return LocalScalar.from_fraction(field, q)

    val = eval_expr(parse_expr(s), env, const)
    if isinstance(val, LocalScalar):
        return val
    raise ParseError("expected a scalar expression")


def parse_series(s, field, N):
    """Parse an expression in t into k[t]/(t^N)."""
    env = {"t": TruncSeries.t_power(field, N, 1)}

    def const(q):
        num = field.from_int(q.numerator)
        den = field.from_int(q.denominator)
        return TruncSeries.const(field, N, field.mul(num, field.inv(den)))

    return eval_expr(parse_expr(s), env, const)
