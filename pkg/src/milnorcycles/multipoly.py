"""Sparse multivariate polynomials in y_1..y_n over the scalar fractions.

Terms map exponent tuples (fixed length nvars) to nonzero LocalScalar
coefficients.  Everything is immutable in practice; operations return new
objects.  Rendering uses the shared textual grammar with variables named
y1..yn by default.
"""

from .errors import ParseError
from .scalars import LocalScalar, eval_expr, parse_expr, truncate


class MultiPoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms):
        clean = {}
        for exp, c in terms.items():
            if len(exp) != nvars:
                raise ParseError("exponent arity mismatch")
            if not c.is_zero():
                clean[exp] = c
        self.field = field
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {})

    @classmethod
    def const(cls, field, nvars, c):
        if isinstance(c, int):
            c = LocalScalar.const(field, field.from_int(c))
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, field, nvars, i):
        """The variable y_{i+1} (0-based index i)."""
        exp = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(field, nvars, {exp: LocalScalar.one(field)})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def as_scalar(self):
        if not self.terms:
            return LocalScalar.zero(self.field)
        if not self.is_constant():
            raise ParseError("not a constant polynomial")
        return self.terms[(0,) * self.nvars]

    def degree_in(self, i):
        return max((exp[i] for exp in self.terms), default=-1)

    def vars_used(self):
        used = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(i)
        return used

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            if exp in out:
                s = out[exp] + c
                if s.is_zero():
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = c
        return MultiPoly(self.field, self.nvars, out)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return MultiPoly(self.field, self.nvars,
                         {exp: -c for exp, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if exp in out:
                    c = out[exp] + c
                if c.is_zero():
                    out.pop(exp, None)
                else:
                    out[exp] = c
        return MultiPoly(self.field, self.nvars, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e):
        out = MultiPoly.const(self.field, self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c):
        return MultiPoly(self.field, self.nvars,
                         {exp: v * c for exp, v in self.terms.items()})

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ParseError("variable-count mismatch")
            return other
        if isinstance(other, (int, LocalScalar)):
            return MultiPoly.const(self.field, self.nvars, other)
        raise TypeError(f"cannot coerce {other!r}")

    def coeff_of_power(self, i, e):
        """Coefficient of y_i^e, a polynomial in the remaining variables
        (arity preserved, degree 0 in y_i)."""
        out = {}
        for exp, c in self.terms.items():
            if exp[i] == e:
                nexp = tuple(0 if j == i else v for j, v in enumerate(exp))
                out[nexp] = out[nexp] + c if nexp in out else c
        return MultiPoly(self.field, self.nvars, out)

    def lead_coeff_in(self, i):
        d = self.degree_in(i)
        if d < 0:
            return MultiPoly.zero(self.field, self.nvars)
        return self.coeff_of_power(i, d)

    def subst(self, i, value):
        """Substitute y_i := value (MultiPoly or scalar)."""
        value = self._coerce(value) if not isinstance(value, MultiPoly) else value
        out = MultiPoly.zero(self.field, self.nvars)
        d = self.degree_in(i)
        # Horner in y_i
        for e in range(d, -1, -1):
            out = out * value + self.coeff_of_power(i, e)
        return out

    def divmod_in(self, i, divisor):
        """Division by a divisor monic in y_i; returns (quotient, remainder).

        The divisor's leading y_i coefficient must be the constant 1."""
        d = divisor.degree_in(i)
        lead = divisor.lead_coeff_in(i)
        if not (lead.is_constant() and lead.as_scalar().is_one()):
            raise ParseError("divisor is not monic in the division variable")
        q = MultiPoly.zero(self.field, self.nvars)
        r = self
        yi = MultiPoly.var(self.field, self.nvars, i)
        while r.degree_in(i) >= d:
            e = r.degree_in(i)
            c = r.coeff_of_power(i, e) * yi ** (e - d)
            q = q + c
            r = r - c * divisor
        return q, r

    def map_coeffs(self, fn):
        return MultiPoly(self.field, self.nvars,
                         {exp: fn(c) for exp, c in self.terms.items()})

    def restrict_arity(self, k):
        """Reindex into k variables; all used variables must be below k."""
        out = {}
        for exp, c in self.terms.items():
            if any(exp[j] for j in range(k, self.nvars)):
                raise ParseError("polynomial uses a variable beyond the target arity")
            out[exp[:k]] = c
        return MultiPoly(self.field, k, out)

    def extend_arity(self, k):
        """Embed into k >= nvars variables."""
        pad = (0,) * (k - self.nvars)
        return MultiPoly(self.field, k,
                         {exp + pad: c for exp, c in self.terms.items()})

    def drop_var(self, i):
        """Remove variable i (degree in i must be zero) and renumber."""
        out = {}
        for exp, c in self.terms.items():
            if exp[i]:
                raise ParseError("cannot drop a variable still in use")
            out[exp[:i] + exp[i + 1:]] = c
        return MultiPoly(self.field, self.nvars - 1, out)

    def truncate_coeffs(self, N):
        """Reduce every coefficient to its canonical degree < N representative."""
        def red(c):
            return truncate(c, N).to_local()
        return self.map_coeffs(red)

    def specialize_t(self):
        """Set t = 0 in every coefficient."""
        def ev(c):
            return LocalScalar.const(self.field, c.at_zero())
        return self.map_coeffs(ev)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.field.tag(), self.nvars,
                     tuple(sorted((e, hash(c)) for e, c in self.terms.items()))))

    def render(self, names=None):
        if not self.terms:
            return "0"
        if names is None:
            names = [f"y{i + 1}" for i in range(self.nvars)]
        parts = []
        for exp in sorted(self.terms):
            c = self.terms[exp]
            mono = []
            for i, e in enumerate(exp):
                if e == 1:
                    mono.append(names[i])
                elif e > 1:
                    mono.append(f"{names[i]}^{e}")
            cs = c.render()
            if not mono:
                if "+" in cs[1:] or "-" in cs[1:]:
                    cs = f"({cs})"
                parts.append(cs)
                continue
            if cs == "1":
                parts.append("*".join(mono))
            elif cs == "-1":
                parts.append("-" + "*".join(mono))
            else:
                if "+" in cs[1:] or "-" in cs[1:] or "*" in cs or "/" in cs:
                    cs = f"({cs})"
                parts.append(cs + "*" + "*".join(mono))
        s = "+".join(parts)
        return s.replace("+-", "-")

    def __repr__(self):
        return f"MultiPoly({self.render()})"


def parse_multipoly(s, field, nvars):
    """Parse an expression in t, y1..y{nvars} (z-names as synonyms)."""
    env = {"t": MultiPoly.const(field, nvars, LocalScalar.t(field))}
    for i in range(nvars):
        v = MultiPoly.var(field, nvars, i)
        env[f"y{i + 1}"] = v
        env[f"z{i + 1}"] = v

    def const(q):
        return MultiPoly.const(field, nvars, LocalScalar.from_fraction(field, q))

    return eval_expr(parse_expr(s), env, const)
