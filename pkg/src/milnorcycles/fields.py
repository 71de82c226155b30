"""Exact field contexts: prime fields F_p, the rationals, and simple
algebraic extensions.

A field context is a small object holding the arithmetic; elements are plain
immutable Python values so they hash and compare structurally:

  * ``PrimeField(p)``  -- ints in {0, ..., p-1}, p prime, p <= 2**61
  * ``Rationals()``    -- ``fractions.Fraction``
  * ``ExtField(k, g)`` -- tuples of length deg(g) of elements of k, i.e.
    residues modulo the monic irreducible g; the generator is ``gen()``.

Extensions of extensions are allowed, which is how towers such as
F_p < F_{p^2} < F_{p^4} are realized.  ``flatten_tower`` rewrites a two-step
tower as a simple extension of the bottom field when the top generator is
primitive.
"""

from fractions import Fraction

from .errors import MilnorCyclesError, ParseError, ReducibleExtension

MAX_PRIME = 1 << 61

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, valid far beyond 2**61."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldCtx:
    """Common interface; concrete contexts override everything."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a):
        raise NotImplementedError

    def char(self):
        raise NotImplementedError

    def size(self):
        """Cardinality, or None when infinite."""
        raise NotImplementedError

    def render(self, a):
        raise NotImplementedError

    def random(self, rng):
        """Uniform element; rng is a SplitMix64-style source."""
        raise NotImplementedError

    def tag(self):
        raise NotImplementedError

    def __repr__(self):
        return self.tag()

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.tag() == other.tag()

    def __hash__(self):
        return hash(self.tag())


class PrimeField(FieldCtx):
    def __init__(self, p):
        if not (2 <= p <= MAX_PRIME):
            raise ParseError(f"prime out of range: {p}")
        if not is_prime(p):
            raise ParseError(f"not a prime: {p}")
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def char(self):
        return self.p

    def size(self):
        return self.p

    def render(self, a):
        return str(a % self.p)

    def random(self, rng):
        return rng.randrange(self.p)

    def tag(self):
        return f"Fp:{self.p}"


class Rationals(FieldCtx):
    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def char(self):
        return 0

    def size(self):
        return None

    def render(self, a):
        return str(a)

    def random(self, rng):
        # small numerators/denominators keep downstream arithmetic small
        num = rng.randrange(21) - 10
        den = rng.randrange(4) + 1
        return Fraction(num, den)

    def tag(self):
        return "Q"


# ---------------------------------------------------------------------------
# dense univariate polynomials over a field context, as coefficient tuples
# (c0, c1, ..., cd) with cd nonzero; () is the zero polynomial.  These are
# the raw helpers used for extension moduli and irreducibility testing.

def fp_norm(field, coeffs):
    c = list(coeffs)
    while c and field.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def fp_add(field, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero()
        y = b[i] if i < len(b) else field.zero()
        out.append(field.add(x, y))
    return fp_norm(field, out)


def fp_neg(field, a):
    return tuple(field.neg(x) for x in a)


def fp_sub(field, a, b):
    return fp_add(field, a, fp_neg(field, b))


def fp_mul(field, a, b):
    if not a or not b:
        return ()
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return fp_norm(field, out)


def fp_divmod(field, a, b):
    """Division with remainder; b must have a unit leading coefficient."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = field.inv(b[-1])
    q = [field.zero()] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and r:
        if field.is_zero(r[-1]):
            r.pop()
            continue
        k = len(r) - len(b)
        c = field.mul(r[-1], lead_inv)
        q[k] = c
        for j, y in enumerate(b):
            r[k + j] = field.sub(r[k + j], field.mul(c, y))
        r.pop()
    return fp_norm(field, q), fp_norm(field, r)


def fp_mod(field, a, b):
    return fp_divmod(field, a, b)[1]


def fp_gcd(field, a, b):
    while b:
        a, b = b, fp_mod(field, a, b)
    if a:
        inv = field.inv(a[-1])
        a = tuple(field.mul(c, inv) for c in a)
    return a


def fp_powmod(field, a, e, mod):
    result = (field.one(),)
    base = fp_mod(field, a, mod)
    while e > 0:
        if e & 1:
            result = fp_mod(field, fp_mul(field, result, base), mod)
        base = fp_mod(field, fp_mul(field, base, base), mod)
        e >>= 1
    return result


def fp_eval(field, a, x):
    acc = field.zero()
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def _divisors(n):
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _q_irreducible(coeffs):
    """Irreducibility over Q for monic degree 2..4 (Fraction coefficients).

    Substituting x -> x/L for L the lcm of denominators turns the input
    into a monic *integer* polynomial with the same irreducibility; by the
    Gauss lemma its monic rational factors are integral, so root and
    quadratic-factor searches run over integer divisors only.
    """
    deg = len(coeffs) - 1
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]
    lcm = 1
    for c in monic:
        lcm = lcm * c.denominator // _gcd_int(lcm, c.denominator)
    ints = [int(monic[i] * lcm ** (deg - i)) for i in range(deg)] + [1]

    e0 = ints[0]
    if e0 == 0:
        return False
    for d in _divisors(e0):
        for root in (d, -d):
            if sum(c * root ** i for i, c in enumerate(ints)) == 0:
                return False
    if deg <= 3:
        return True
    # degree 4: x^4+e3 x^3+e2 x^2+e1 x+e0 = (x^2+ax+b)(x^2+cx+d) over Z?
    e1, e2, e3 = ints[1], ints[2], ints[3]
    for babs in _divisors(e0):
        for b in (babs, -babs):
            if e0 % b:
                continue
            d = e0 // b
            # a + c = e3, ad + bc = e1, b + d + ac = e2
            if b != d:
                num = e1 - e3 * b
                if num % (d - b):
                    continue
                a = num // (d - b)
                c = e3 - a
                if b + d + a * c == e2:
                    return False
            else:
                if b * e3 != e1:
                    continue
                # a + c = e3 and ac = e2 - 2b must have an integer solution
                disc = e3 * e3 - 4 * (e2 - 2 * b)
                if disc >= 0 and _isqrt(disc) ** 2 == disc:
                    return False
    return True


def _gcd_int(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _isqrt(n):
    if n < 0:
        raise ValueError
    x = int(n ** 0.5)
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


def poly_irreducible(field, coeffs):
    """Irreducibility of a monic polynomial of degree 1..4 over the field.

    Over a finite field of size q: irreducible iff no factor of degree
    <= deg/2, tested with gcd(g, x^(q^i) - x).  Over Q: rational-root and
    quadratic-pair tests (degree <= 4 only).
    """
    coeffs = fp_norm(field, tuple(coeffs))
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if deg > 4:
        raise MilnorCyclesError("irreducibility test limited to degree <= 4")
    q = field.size()
    if q is None:
        return _q_irreducible(list(coeffs))
    x = (field.zero(), field.one())
    xq = x
    for _ in range(deg // 2):
        xq = fp_powmod(field, xq, q, coeffs)
        diff = fp_sub(field, xq, x)
        if len(fp_gcd(field, coeffs, diff)) > 1:
            return False
    return True


class ExtField(FieldCtx):
    """Simple extension base[x]/(g), g monic irreducible over base.

    Elements are tuples of base elements of length deg(g) (ascending
    powers of the generator).
    """

    def __init__(self, base, modulus, check_irreducible=True):
        modulus = fp_norm(base, tuple(modulus))
        if len(modulus) < 2:
            raise ParseError("extension modulus must have degree >= 1")
        lead = modulus[-1]
        if not base.is_zero(base.sub(lead, base.one())):
            inv = base.inv(lead)
            modulus = tuple(base.mul(c, inv) for c in modulus)
        if check_irreducible and not poly_irreducible(base, modulus):
            raise ReducibleExtension(
                "modulus factors over " + base.tag())
        self.base = base
        self.modulus = modulus
        self.deg = len(modulus) - 1

    def _pad(self, coeffs):
        c = list(coeffs)[: self.deg]
        while len(c) < self.deg:
            c.append(self.base.zero())
        return tuple(c)

    def make(self, coeffs):
        """Element from base coefficients (reduced mod the modulus)."""
        c = fp_mod(self.base, fp_norm(self.base, tuple(coeffs)), self.modulus)
        return self._pad(c)

    def gen(self):
        return self.make((self.base.zero(), self.base.one()))

    def lift(self, a):
        """Element of the base as an element of the extension."""
        return self._pad((a,))

    def zero(self):
        return self._pad(())

    def one(self):
        return self._pad((self.base.one(),))

    def from_int(self, n):
        return self._pad((self.base.from_int(n),))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = fp_mul(self.base, fp_norm(self.base, a), fp_norm(self.base, b))
        return self._pad(fp_mod(self.base, prod, self.modulus))

    def inv(self, a):
        an = fp_norm(self.base, a)
        if not an:
            raise ZeroDivisionError("inverse of 0 in extension field")
        # extended Euclid against the modulus
        r0, r1 = self.modulus, an
        s0, s1 = (), (self.base.one(),)
        while r1:
            q, r = fp_divmod(self.base, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, fp_sub(self.base, s0, fp_mul(self.base, q, s1))
        # r0 = gcd (a unit since the modulus is irreducible)
        c = self.base.inv(r0[0]) if len(r0) == 1 else None
        if c is None:
            raise ZeroDivisionError("modulus not irreducible?")
        return self._pad(tuple(self.base.mul(x, c) for x in s0))

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def char(self):
        return self.base.char()

    def size(self):
        s = self.base.size()
        return None if s is None else s ** self.deg

    def render(self, a, var="x"):
        parts = []
        for i, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            cs = self.base.render(c)
            if i == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else cs + "*"
                parts.append(head + (var if i == 1 else f"{var}^{i}"))
        return "+".join(parts).replace("+-", "-") if parts else "0"

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.deg))

    def tag(self):
        mod = ",".join(self.base.render(c) for c in self.modulus)
        return f"{self.base.tag()}[x]/({mod})"


def parse_field_tag(tag):
    tag = tag.strip()
    if tag == "Q":
        return Rationals()
    if tag.startswith("Fp:"):
        try:
            p = int(tag[3:])
        except ValueError:
            raise ParseError(f"bad field tag: {tag}") from None
        return PrimeField(p)
    raise ParseError(f"bad field tag: {tag}")


def solve_linear(field, matrix, rhs):
    """Solve M x = b over the field; returns x or None when unsolvable.

    Gaussian elimination with exact arithmetic; matrix is a list of rows.
    Free variables, if any, are set to zero.
    """
    m = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows = len(m)
    cols = len(matrix[0]) if rows else 0
    piv_of_col = {}
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if not field.is_zero(m[rr][c]):
                piv = rr
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(v, inv) for v in m[r]]
        for rr in range(rows):
            if rr != r and not field.is_zero(m[rr][c]):
                f = m[rr][c]
                m[rr] = [field.sub(v, field.mul(f, w))
                         for v, w in zip(m[rr], m[r])]
        piv_of_col[c] = r
        r += 1
        if r == rows:
            break
    for rr in range(r, rows):
        if not field.is_zero(m[rr][cols]):
            return None
    x = [field.zero()] * cols
    for c, rr in piv_of_col.items():
        x[c] = m[rr][cols]
    return x


def flatten_tower(top):
    """Rewrite ExtField(ExtField(k, g), h) as a simple ExtField(k, f).

    Requires the top generator to be primitive over the bottom field (true
    for the quadratic-over-quadratic towers used in the test suites).
    Returns (flat_field, convert) where convert maps elements of ``top`` to
    elements of ``flat_field``.
    """
    mid = top.base
    if not isinstance(mid, ExtField):
        raise MilnorCyclesError("flatten_tower expects a two-step tower")
    bottom = mid.base
    d_total = mid.deg * top.deg

    def to_vec(elem):
        out = []
        for c in elem:
            out.extend(c)
        return out

    one = top.one()
    gen = top.gen()
    powers = [one]
    for _ in range(d_total):
        powers.append(top.mul(powers[-1], gen))
    vecs = [to_vec(p) for p in powers]
    # first dependency must occur exactly at z^d_total
    matrix = [[vecs[j][i] for j in range(d_total)] for i in range(d_total)]
    rhs = [vecs[d_total][i] for i in range(d_total)]
    sol = solve_linear(bottom, matrix, rhs)
    if sol is None:
        raise MilnorCyclesError("tower generator is not primitive")
    for dd in range(1, d_total):
        sub = [[vecs[j][i] for j in range(dd)] for i in range(d_total)]
        if solve_linear(bottom, sub, [vecs[dd][i] for i in range(d_total)]) is not None:
            raise MilnorCyclesError("tower generator is not primitive")
    modulus = tuple(bottom.neg(c) for c in sol) + (bottom.one(),)
    flat = ExtField(bottom, modulus, check_irreducible=False)

    def convert(elem):
        target = to_vec(elem)
        coords = solve_linear(bottom, matrix, target)
        if coords is None:
            raise MilnorCyclesError("tower conversion failed")
        return flat._pad(tuple(coords))

    return flat, convert
