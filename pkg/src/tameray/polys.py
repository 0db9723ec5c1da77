"""Dense univariate polynomials over Z, Q and F_ell.

Polynomials are coefficient lists, constant term first, without trailing
zeros (the zero polynomial is ``[]``).
"""

from fractions import Fraction
import random

__all__ = [
    "PolyZ",
    "parse_poly",
    "fp_factor",
    "fp_is_irreducible",
    "resultant",
    "discriminant",
]


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f):
    return len(f) - 1


def add(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def sub(f, g):
    return add(f, [-c for c in g])


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def scale(f, c):
    return trim([c * a for a in f])


def derivative(f):
    return trim([i * f[i] for i in range(1, len(f))])


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def compose_shift(f, a):
    """f(x + a)."""
    out = []
    for c in reversed(f):
        out = add(mul(out, [a, 1]), [c])
    return out


def q_divmod(f, g):
    """Division over Q."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = f[-1] / g[-1]
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] -= c * b
        f = trim(f)
    return trim(q), f


def q_gcd(f, g):
    f, g = trim([Fraction(c) for c in f]), trim([Fraction(c) for c in g])
    while g:
        f, g = g, q_divmod(f, g)[1]
    if not f:
        return []
    return [c / f[-1] for c in f]


def resultant(f, g):
    """Res(f, g) over Q by the Euclidean algorithm (exact)."""
    f, g = trim(f), trim(g)
    if not f or not g:
        return 0
    res = Fraction(1)
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while True:
        m, n = degree(f), degree(g)
        if n == 0:
            return res * g[0] ** m
        r = q_divmod(f, g)[1]
        if not r:
            return 0
        # Res(f,g) = (-1)^(mn) lc(g)^(m - deg r) Res(g, r)
        res *= (-1) ** (m * n) * g[-1] ** (m - degree(r))
        f, g = g, r


def discriminant(f):
    n = degree(f)
    r = resultant(f, derivative(f))
    d = Fraction((-1) ** (n * (n - 1) // 2)) * r / f[-1]
    assert d.denominator == 1
    return int(d)


# ---------------------------------------------------------------------------
# F_ell[x]


def fp_reduce(f, p):
    return trim([c % p for c in f])


def fp_monic(f, p):
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def fp_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return fp_reduce(out, p)


def fp_sub(f, g, p):
    n = max(len(f), len(g))
    return fp_reduce([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], p)


def fp_divmod(f, g, p):
    f = fp_reduce(f, p)
    g = fp_reduce(g, p)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    f = list(f)
    dg = len(g) - 1
    while len(f) >= len(g):
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        if c:
            for i in range(dg + 1):
                f[i + k] = (f[i + k] - c * g[i]) % p
        f = trim(f)
    return trim(q), f


def fp_rem(f, g, p):
    return fp_divmod(f, g, p)[1]


def fp_gcd(f, g, p):
    f, g = fp_reduce(f, p), fp_reduce(g, p)
    while g:
        f, g = g, fp_rem(f, g, p)
    return fp_monic(f, p)


def fp_powmod(f, e, m, p):
    result = [1]
    base = fp_rem(f, m, p)
    while e:
        if e & 1:
            result = fp_rem(fp_mul(result, base, p), m, p)
        base = fp_rem(fp_mul(base, base, p), m, p)
        e >>= 1
    return result


def fp_derivative(f, p):
    return fp_reduce([i * f[i] for i in range(1, len(f))], p)


def _pth_root(f, p):
    # f(x) = g(x^p) over F_p, coefficients are their own p-th roots
    return trim([f[i] for i in range(0, len(f), p)])


def fp_squarefree(f, p):
    """Squarefree decomposition: list of (g, multiplicity) with f = prod g^m (f monic)."""
    out = []

    def rec(f, mult):
        i = 1
        fp = fp_derivative(f, p)
        if not fp:
            if len(f) > 1:
                rec(_pth_root(f, p), mult * p)
            return
        c = fp_gcd(f, fp, p)
        w = fp_divmod(f, c, p)[0]
        while len(w) > 1:
            y = fp_gcd(w, c, p)
            z = fp_divmod(w, y, p)[0]
            if len(z) > 1:
                out.append((fp_monic(z, p), i * mult))
            i += 1
            w = y
            c = fp_divmod(c, y, p)[0]
        if len(c) > 1:
            rec(_pth_root(c, p), mult * p)

    rec(fp_monic(fp_reduce(f, p), p), 1)
    return out


def fp_distinct_degree(f, p):
    """Distinct-degree factorisation of a monic squarefree f: list of (product, degree)."""
    out = []
    h = [0, 1]
    f = list(f)
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = fp_powmod(h, p, f, p)
        g = fp_gcd(fp_sub(h, [0, 1], p), f, p)
        if len(g) > 1:
            out.append((g, d))
            f = fp_divmod(f, g, p)[0]
            h = fp_rem(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def fp_equal_degree(f, d, p, rng):
    """Split a monic squarefree f whose irreducible factors all have degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = fp_reduce([rng.randrange(p) for _ in range(n)], p)
        if len(a) < 2:
            continue
        if p == 2:
            # trace a + a^2 + ... + a^(2^(d-1)) lies in F_2 on each factor
            b, t = a, a
            for _ in range(d - 1):
                t = fp_rem(fp_mul(t, t, 2), f, 2)
                b = fp_reduce([u + v for u, v in zip(b + [0] * len(t), t + [0] * len(b))], 2)
            g = fp_gcd(b, f, p)
        else:
            b = fp_powmod(a, (p**d - 1) // 2, f, p)
            g = fp_gcd(fp_sub(b, [1], p), f, p)
        if 1 < len(g) < len(f):
            h = fp_divmod(f, g, p)[0]
            return fp_equal_degree(g, d, p, rng) + fp_equal_degree(fp_monic(h, p), d, p, rng)


def fp_factor(f, p, seed=0):
    """Irreducible factorisation of f over F_p.

    Returns a sorted list of (monic factor, multiplicity).  The leading
    coefficient must be a unit mod p.
    """
    f = trim(f)
    if not f or f[-1] % p == 0:
        raise ValueError(f"leading coefficient vanishes modulo {p}")
    rng = random.Random(seed)
    out = []
    for g, m in fp_squarefree(f, p):
        for h, d in fp_distinct_degree(g, p):
            for k in fp_equal_degree(h, d, p, rng):
                out.append((tuple(k), m))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return [(list(g), m) for g, m in out]


def fp_is_irreducible(f, p):
    f = fp_monic(fp_reduce(f, p), p)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    sf = fp_squarefree(f, p)
    if len(sf) != 1 or sf[0][1] != 1:
        return False
    dd = fp_distinct_degree(f, p)
    return len(dd) == 1 and dd[0][1] == n


# ---------------------------------------------------------------------------


class PolyZ:
    """Integer polynomial, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = trim(int(x) for x in coeffs)
        if not c:
            raise ValueError("the zero polynomial is not a valid PolyZ")
        self.coeffs = tuple(c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def monic(self):
        return self.coeffs[-1] == 1

    def __eq__(self, other):
        return isinstance(other, PolyZ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyZ({list(self.coeffs)})"

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mon = "x" if i == 1 else f"x^{i}"
                body = mon if a == 1 else f"{a}*{mon}"
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    def __call__(self, x):
        return evaluate(self.coeffs, x)

    def discriminant(self):
        return discriminant(list(self.coeffs))


def parse_poly(text):
    """Parse an integer polynomial in x such as ``x^3 + x^2 - 2*x - 1``."""
    import re

    s = text.replace(" ", "").replace("**", "^").replace("{", "").replace("}", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs = {}
    for m in re.finditer(r"([+-])([^+-]+)", s):
        sign, body = m.groups()
        mt = re.fullmatch(r"(\d*)\*?(x(?:\^(\d+))?)?", body)
        if not mt or (not mt.group(1) and not mt.group(2)):
            raise ValueError(f"cannot parse term {sign}{body!r}")
        c = int(mt.group(1)) if mt.group(1) else 1
        deg = int(mt.group(3)) if mt.group(3) else (1 if mt.group(2) else 0)
        coeffs[deg] = coeffs.get(deg, 0) + (-c if sign == "-" else c)
    n = max(coeffs)
    return PolyZ([coeffs.get(i, 0) for i in range(n + 1)])
