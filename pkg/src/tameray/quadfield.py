"""Imaginary quadratic fields: ideals, binary quadratic forms, class groups.

Elements of O_K are pairs ``(x, y)`` standing for ``x + y*omega`` where
``omega`` is ``(1 + sqrt(d))/2`` when ``d = 1 mod 4`` and ``sqrt(d)``
otherwise.  Ideals are kept as Z-bases ``{a, b + c*omega}`` in Hermite form.
"""

from dataclasses import dataclass
from fractions import Fraction
import functools
import math

from .arith import factorize, hnf, is_prime, kronecker_symbol
from .abelian import FinAbGroup, from_generators

__all__ = [
    "FieldK",
    "IdealRep",
    "BinQuadForm",
    "FieldElem",
    "make_field",
    "split_prime",
    "ideal_from_gens",
    "ideal_mul",
    "ideal_norm",
    "ideal_pow",
    "ideal_contains",
    "ideal_conj",
    "unit_ideal",
    "principal_ideal",
    "ideal_to_form",
    "form_to_ideal",
    "reduce_form",
    "reduced_forms",
    "class_group",
    "ideal_class",
    "principal_generator",
    "primes_of_norm_up_to",
    "prime_ideal_factorization",
]


@dataclass(frozen=True)
class FieldK:
    d: int
    disc: int
    trace: int  # omega^2 = trace*omega - norm
    norm_w: int
    unit_torsion: int

    # element arithmetic on (x, y) = x + y*omega

    def mul(self, u, v):
        x1, y1 = u
        x2, y2 = v
        yy = y1 * y2
        return (x1 * x2 - self.norm_w * yy, x1 * y2 + x2 * y1 + self.trace * yy)

    def norm(self, u):
        x, y = u
        return x * x + self.trace * x * y + self.norm_w * y * y

    def conj(self, u):
        x, y = u
        return (x + self.trace * y, -y)

    def power(self, u, e):
        result, base = (1, 0), u
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    @property
    def omega(self):
        return "(1+sqrt(%d))/2" % self.d if self.trace else "sqrt(%d)" % self.d

    def torsion_generator(self):
        """A generator of mu_K as an element (x, y)."""
        if self.unit_torsion == 2:
            return (-1, 0)
        if self.unit_torsion == 4:
            return (0, 1)  # i
        return (0, 1)  # omega = (1+sqrt(-3))/2 is a primitive 6th root of unity

    def units(self):
        z = self.torsion_generator()
        out, u = [], (1, 0)
        for _ in range(self.unit_torsion):
            out.append(u)
            u = self.mul(u, z)
        return out

    def contains_zeta(self, p):
        """Whether the p-th roots of unity lie in K (p prime)."""
        return self.unit_torsion % p == 0 if p != 2 else True

    def __str__(self):
        return f"Q(sqrt({self.d}))"


def _squarefree(n):
    return all(e == 1 for e in factorize(abs(n)).values())


def make_field(d):
    """The imaginary quadratic field Q(sqrt(d)) for squarefree d < 0."""
    if d >= 0:
        raise ValueError(f"make_field: d = {d} must be negative")
    if not _squarefree(d):
        raise ValueError(f"make_field: d = {d} is not squarefree")
    if d % 4 == 1:
        disc, t, n = d, 1, (1 - d) // 4
    else:
        disc, t, n = 4 * d, 0, -d
    w = {-1: 4, -3: 6}.get(d, 2)
    return FieldK(d, disc, t, n, w)


@dataclass(frozen=True)
class FieldElem:
    """Element x + y*omega of K with rational coordinates."""

    x: Fraction
    y: Fraction

    @property
    def pair(self):
        return (int(self.x), int(self.y))

    def is_integral(self):
        return self.x.denominator == 1 and self.y.denominator == 1


@dataclass(frozen=True, order=True)
class IdealRep:
    """Integral ideal with Z-basis {a, b + c*omega}, c | a, c | b, 0 <= b < a."""

    a: int
    b: int
    c: int

    @property
    def norm(self):
        return self.a * self.c

    def basis(self):
        return ((self.a, 0), (self.b, self.c))

    def __str__(self):
        if self.c == 1:
            return f"({self.a}, {self.b}+w)"
        if self.b == 0 and self.c == self.a:
            return f"({self.a})"
        return f"[{self.a}, {self.b}+{self.c}w]"


@dataclass(frozen=True, order=True)
class BinQuadForm:
    A: int
    B: int
    C: int

    def disc(self):
        return self.B * self.B - 4 * self.A * self.C

    def __call__(self, x, y):
        return self.A * x * x + self.B * x * y + self.C * y * y

    def __str__(self):
        return f"({self.A},{self.B},{self.C})"


def _lattice(vectors):
    """HNF basis {a, b + c w} of the Z-lattice spanned by (x, y) vectors."""
    rows = [[y, x] for x, y in vectors]
    H, _ = hnf(rows)
    nz = [r for r in H if any(r)]
    if len(nz) != 2 or nz[0][0] == 0:
        raise ValueError("vectors do not span a full-rank lattice")
    c, b = nz[0]
    a = nz[1][1]
    return IdealRep(a, b % a, c)


def ideal_from_gens(K, gens):
    """Ideal generated over O_K by the given elements."""
    vecs = []
    for g in gens:
        g = (g, 0) if isinstance(g, int) else tuple(g)
        vecs.append(g)
        vecs.append(K.mul(g, (0, 1)))
    return _lattice(vecs)


def unit_ideal(K):
    return IdealRep(1, 0, 1)


def principal_ideal(K, alpha):
    return ideal_from_gens(K, [alpha])


def ideal_mul(K, I, J):
    vecs = [K.mul(u, v) for u in I.basis() for v in J.basis()]
    return _lattice(vecs)


def ideal_pow(K, I, e):
    result = unit_ideal(K)
    for _ in range(e):
        result = ideal_mul(K, result, I)
    return result


def ideal_norm(K, I):
    return I.norm


def ideal_conj(K, I):
    return _lattice([K.conj(u) for u in I.basis()] + [K.mul(K.conj(u), (0, 1)) for u in I.basis()])


def reduce_mod(I, u):
    """Canonical representative of u modulo the ideal I: x in [0, a), y in [0, c)."""
    x, y = u
    k = y // I.c
    x -= k * I.b
    y -= k * I.c
    return (x % I.a, y)


def ideal_contains(I, u):
    return reduce_mod(I, u) == (0, 0)


def split_prime(K, ell):
    """Decomposition of the rational prime ell in O_K.

    Returns ``(kind, ideals)`` with kind in {"split", "inert", "ramified"};
    split primes come back sorted by their b-coordinate.
    """
    if not is_prime(ell):
        raise ValueError(f"split_prime: {ell} is not prime")
    k = kronecker_symbol(K.disc, ell)
    if k == -1:
        return "inert", [IdealRep(ell, 0, ell)]
    roots = [r for r in range(ell) if (r * r - K.trace * r + K.norm_w) % ell == 0]
    ideals = sorted({IdealRep(ell, (-r) % ell, 1) for r in roots})
    return ("ramified" if k == 0 else "split"), ideals


def primes_of_norm_up_to(K, bound):
    """All prime ideals of norm <= bound as (norm, ideal, kind), sorted."""
    from .arith import primes_up_to

    out = []
    for ell in primes_up_to(bound):
        kind, ideals = split_prime(K, ell)
        if kind == "inert":
            if ell * ell <= bound:
                out.append((ell * ell, ideals[0], kind))
        else:
            out += [(ell, I, kind) for I in ideals]
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def prime_ideal_factorization(K, I):
    """Factor an integral ideal as a list of (prime ideal, exponent)."""
    out = []
    rest = I
    for ell in factorize(I.norm):
        kind, ideals = split_prime(K, ell)
        for P in ideals:
            e = 0
            while True:
                Q = _divide_exact(K, rest, P)
                if Q is None:
                    break
                rest = Q
                e += 1
            if e:
                out.append((P, e))
    if rest != unit_ideal(K):
        raise ArithmeticError("incomplete ideal factorisation")
    return out


def _divide_exact(K, I, P):
    """I * P^-1 if P divides I, else None (P prime)."""
    if I.norm % P.norm:
        return None
    # P^-1 = conj(P) / N(P)
    J = ideal_mul(K, I, ideal_conj(K, P))
    n = P.norm
    if J.a % n or J.b % n or J.c % n:
        return None
    return IdealRep(J.a // n, J.b // n, J.c // n)


# ---------------------------------------------------------------------------
# forms


def _primitive(I):
    """I = c * J with J primitive; returns (c, J)."""
    c = I.c
    return c, IdealRep(I.a // c, I.b // c, 1)


def ideal_to_form(K, I):
    """Norm form N(x*a + y*(b + omega)) / N(J) of the primitive part J of I."""
    _, J = _primitive(I)
    a, b = J.a, J.b
    return BinQuadForm(a, 2 * b + K.trace, (b * b + K.trace * b + K.norm_w) // a)


def form_to_ideal(K, f):
    b = (f.B - K.trace) // 2
    return IdealRep(f.A, b % f.A, 1)


def reduce_form(f):
    """Reduce a positive definite form; returns (reduced, M) with reduced(v) = f(M v)."""
    A, B, C = f.A, f.B, f.C
    if A <= 0 or B * B - 4 * A * C >= 0:
        raise ValueError(f"form {f} is not positive definite")
    m = [[1, 0], [0, 1]]
    while True:
        k = (A - B) // (2 * A)
        if k:
            # x -> x + k y
            B, C = B + 2 * A * k, A * k * k + B * k + C
            m = [[m[0][0], m[0][0] * k + m[0][1]], [m[1][0], m[1][0] * k + m[1][1]]]
        if A > C or (A == C and B < 0):
            # (x, y) -> (-y, x)
            A, B, C = C, -B, A
            m = [[m[0][1], -m[0][0]], [m[1][1], -m[1][0]]]
            continue
        return BinQuadForm(A, B, C), m


def reduced_forms(disc):
    """All primitive reduced positive definite forms of discriminant disc."""
    out = []
    amax = math.isqrt(-disc // 3)
    for A in range(1, amax + 1):
        for B in range(-A + 1, A + 1):
            if (B - disc) % 2:
                continue
            num = B * B - disc
            if num % (4 * A):
                continue
            C = num // (4 * A)
            if C < A or (C == A and B < 0):
                continue
            if math.gcd(math.gcd(A, B), C) != 1:
                continue
            out.append(BinQuadForm(A, B, C))
    return out


def compose(K, f, g):
    I = ideal_mul(K, form_to_ideal(K, f), form_to_ideal(K, g))
    return reduce_form(ideal_to_form(K, I))[0]


def principal_form(K):
    return reduce_form(ideal_to_form(K, unit_ideal(K)))[0]


@dataclass(frozen=True)
class ClassGroup:
    K: FieldK
    group: FinAbGroup
    coords_of: dict  # reduced form -> invariant coordinates
    basis_forms: tuple  # reduced forms whose coordinates are unit vectors

    @property
    def order(self):
        return self.group.order

    def __hash__(self):
        return hash((self.K, self.group.invariants))


@functools.lru_cache(maxsize=256)
def class_group(K):
    """Cl_K from reduced forms under composition, generated by small prime forms."""
    forms = reduced_forms(K.disc)
    h = len(forms)
    ident = principal_form(K)
    gens = []
    mul = functools.partial(compose, K)
    group, table = from_generators([], mul, ident)
    bound = 2
    while len(table) < h:
        for norm, P, kind in primes_of_norm_up_to(K, bound):
            if kind == "inert" or len(table) == h:
                continue
            f = reduce_form(ideal_to_form(K, P))[0]
            if f in table or f in gens:
                continue
            gens.append(f)
            group, table = from_generators(gens, mul, ident)
        bound *= 2
        if bound > 4 * abs(K.disc) + 8 and len(table) < h:
            raise ArithmeticError("prime forms failed to generate the class group")
    labels = tuple(str(f) for f in gens)
    group, table = from_generators(gens, mul, ident, labels=labels)
    coords_of = {f: group.coords(v) for f, v in table.items()}
    basis = []
    for j in range(group.rank):
        target = tuple(int(i == j) for i in range(group.rank))
        basis.append(min(f for f, c in coords_of.items() if c == target))
    return ClassGroup(K, group, coords_of, tuple(basis))


def ideal_class(K, I):
    """Coordinates of the class of I on the invariant basis of Cl_K."""
    cg = class_group(K)
    f = reduce_form(ideal_to_form(K, I))[0]
    return cg.coords_of[f]


def principal_generator(K, I):
    """A generator of I as an element (x, y), or None when I is not principal."""
    c, J = _primitive(I)
    f = ideal_to_form(K, J)
    red, m = reduce_form(f)
    if red.A != 1:
        return None
    x, y = m[0][0], m[1][0]
    alpha = (c * (x * J.a + y * J.b), c * y)
    assert K.norm(alpha) == I.norm
    return alpha
