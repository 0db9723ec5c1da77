"""Unit groups of residue rings O_K/m and of finite fields.

``(O_K/m)^x`` is handled one prime-power component at a time; each
component ``(O_K/q^n)^x`` splits as a cyclic part of order ``N(q) - 1``
times a q-group of order ``N(q)^(n-1)``.
"""

from dataclasses import dataclass, field
import math
import random

from .arith import factorize, hnf, valuation
from .abelian import from_generators
from .quadfield import (
    IdealRep,
    ideal_mul,
    ideal_pow,
    reduce_mod,
    split_prime,
    unit_ideal,
)
from . import polys

__all__ = [
    "ResidueComponent",
    "ResidueUnitGroup",
    "FiniteFieldHandle",
    "residue_unit_structure",
    "residue_unit_group",
    "p_primary_order",
    "unit_image_index",
    "finite_field_order_decompose",
    "crt_lift",
    "discrete_log",
]


def _pow(mul, x, e, one):
    result = one
    while e:
        if e & 1:
            result = mul(result, x)
        x = mul(x, x)
        e >>= 1
    return result


def discrete_log(mul, g, h, order, one, order_factors=None):
    """k with g^k = h in the cyclic group <g> of the given order (Pohlig-Hellman + BSGS)."""
    fac = order_factors or (factorize(order) if order > 1 else {})
    residues = []
    for r, e in fac.items():
        re_ = r**e
        cof = order // re_
        g0 = _pow(mul, g, cof, one)  # order r^e
        h0 = _pow(mul, h, cof, one)
        gr = _pow(mul, g0, r ** (e - 1), one)  # order r
        k = 0
        for i in range(e):
            # strip known digits: (h0 * g0^-k)^(r^(e-1-i))
            t = mul(h0, _pow(mul, g0, re_ - k, one)) if k else h0
            t = _pow(mul, t, r ** (e - 1 - i), one)
            digit = _bsgs(mul, gr, t, r, one)
            k += digit * r**i
        residues.append((k, re_))
    k, m = 0, 1
    for ri, mi in residues:
        t = (ri - k) * pow(m, -1, mi) % mi
        k, m = k + m * t, m * mi
    return k % order if order > 1 else 0


def _bsgs(mul, g, h, n, one):
    m = math.isqrt(n) + 1
    baby = {}
    x = one
    for j in range(m):
        baby.setdefault(x, j)
        x = mul(x, g)
    giant = _pow(mul, g, (n - m % n) % n, one)  # g^-m
    y = h
    for i in range(m + 1):
        if y in baby:
            return (i * m + baby[y]) % n
        y = mul(y, giant)
    raise ValueError("discrete log does not exist")


def p_primary_order(mul, x, order, p, one):
    """Order p^k of the p-primary component of x, for x in a group whose exponent divides ``order``."""
    v = valuation(order, p) if order else 0
    y = _pow(mul, x, order // p**v, one)
    k = 0
    while y != one:
        y = _pow(mul, y, p, one)
        k += 1
        if k > v:
            raise ValueError("p_primary_order: order does not annihilate x")
    return p**k


@dataclass
class ResidueComponent:
    """(O_K/q^n)^x with q prime."""

    K: object
    prime: IdealRep
    exponent: int
    ideal: IdealRep  # q^n
    residue_degree: int
    ramified: bool
    g1_order: int  # N(q) - 1
    g2_order: int  # N(q)^(n-1)
    g1_gen: tuple = None
    _g2: tuple = field(default=None, repr=False)

    @property
    def order(self):
        return self.g1_order * self.g2_order

    def mul(self, u, v):
        return reduce_mod(self.ideal, self.K.mul(u, v))

    def reduce(self, u):
        return reduce_mod(self.ideal, u)

    def is_unit(self, u):
        return reduce_mod(self.prime, u) != (0, 0)

    def power(self, u, e):
        return _pow(self.mul, self.reduce(u), e, self.reduce((1, 0)))

    def units(self):
        """Brute-force enumeration of the unit residues (for testing)."""
        a, c = self.ideal.a, self.ideal.c
        return [(x, y) for y in range(c) for x in range(a) if self.is_unit((x, y))]

    def _ensure(self, seed=0):
        if self.g1_gen is not None:
            return
        one = self.reduce((1, 0))
        n1 = self.g1_order
        fac = factorize(n1) if n1 > 1 else {}
        rng = random.Random(seed)
        P = self.prime
        while True:
            cand = (rng.randrange(P.a), rng.randrange(P.c)) if P.c > 1 else (rng.randrange(P.a), 0)
            if reduce_mod(P, cand) == (0, 0):
                continue
            g = self.reduce(cand)
            g = self.power(g, self.g2_order)
            if all(self.power(g, n1 // r) != one for r in fac):
                break
        self.g1_gen = g
        # q-part from 1 + (Z-basis of q^k), k < n
        gens = []
        if self.exponent > 1:
            for k in range(1, self.exponent):
                qk = ideal_pow(self.K, self.prime, k)
                for beta in qk.basis():
                    gens.append(self.reduce((1 + beta[0], beta[1])))
        grp, table = from_generators(gens, self.mul, one)
        assert grp.order == self.g2_order, (grp.order, self.g2_order)
        self._g2 = (grp, table)

    @property
    def invariants(self):
        self._ensure()
        return (self.g1_order,) + self._g2[0].invariants

    def dlog(self, u):
        """Coordinates of u on (cyclic generator, q-part invariant basis)."""
        self._ensure()
        if not self.is_unit(u):
            raise ValueError(f"{u} is not a unit modulo {self.prime}")
        one = self.reduce((1, 0))
        A, B = self.g2_order, self.g1_order
        x = self.reduce(u)
        xa = self.power(x, A)
        k = discrete_log(self.mul, self.g1_gen, xa, B, one) if B > 1 else 0
        s = pow(A, -1, B) if B > 1 else 0
        out = [k * s % B if B > 1 else 0]
        grp, table = self._g2
        if grp.transform:
            t = pow(B, -1, A)
            y = self.power(x, B * t)
            out += list(grp.coords(table[y]))
        return tuple(out)


def residue_unit_structure(K, q, n, seed=0):
    """The component (O_K/q^n)^x for a prime ideal q of K."""
    if n < 1:
        raise ValueError("exponent must be >= 1")
    ell = q.norm if q.c == 1 else q.a
    kind, ideals = split_prime(K, ell)
    if q not in ideals:
        raise ValueError(f"{q} is not a prime ideal of {K}")
    f = 2 if kind == "inert" else 1
    ramified = kind == "ramified"
    if ramified and ell == 2 and n > 1:
        raise ValueError("powers of a ramified prime above 2 are not supported")
    N = q.norm
    comp = ResidueComponent(
        K, q, n, ideal_pow(K, q, n), f, ramified, N - 1, N ** (n - 1)
    )
    comp._ensure(seed)
    return comp


@dataclass
class ResidueUnitGroup:
    """(O_K/m)^x as the product of its prime-power components."""

    K: object
    modulus: tuple  # ((prime, exponent), ...)
    components: list

    @property
    def order(self):
        return math.prod(c.order for c in self.components)

    @property
    def invariants(self):
        """Per-generator orders (not yet in Smith form)."""
        out = []
        for c in self.components:
            out += c.invariants
        return out

    def dlog(self, u):
        out = []
        for c in self.components:
            out += c.dlog(u)
        return tuple(out)

    def is_unit(self, u):
        return all(c.is_unit(u) for c in self.components)

    def structure(self):
        inv = self.invariants
        rows = [[d if i == j else 0 for j in range(len(inv))] for i, d in enumerate(inv)]
        from .abelian import from_relations

        return from_relations(rows, len(inv))


def residue_unit_group(K, modulus, seed=0):
    primes = [P for P, _ in modulus]
    if len(set(primes)) != len(primes):
        raise ValueError("modulus repeats a prime ideal")
    comps = [residue_unit_structure(K, P, e, seed) for P, e in modulus]
    return ResidueUnitGroup(K, tuple(modulus), comps)


def modulus_ideal(K, modulus):
    m = unit_ideal(K)
    for P, e in modulus:
        m = ideal_mul(K, m, ideal_pow(K, P, e))
    return m


def unit_image_index(K, modulus):
    """[E_K : E_K(m)]: the order of the image of mu_K in (O_K/m)^x."""
    m = modulus_ideal(K, modulus)
    if m == unit_ideal(K):
        return 1
    z = K.torsion_generator()
    w = K.unit_torsion
    for k in sorted(d for d in range(1, w + 1) if w % d == 0):
        if reduce_mod(m, K.power(z, k)) == reduce_mod(m, (1, 0)):
            return k
    raise AssertionError("unreachable")


def crt_lift(K, parts):
    """Element congruent to each residue modulo its (pairwise coprime) ideal.

    ``parts`` is a list of (element, ideal).
    """
    x = (0, 0)
    M = unit_ideal(K)
    for u, I in parts:
        # find a in M, b in I with a + b = 1
        rows = [[v[1], v[0]] for v in M.basis() + I.basis()]
        H, U = hnf(rows)
        if H[0] != [1, 0] or H[1] != [0, 1]:
            raise ValueError("crt_lift: ideals are not coprime")
        coeff = U[1]  # row producing (y=0, x=1), i.e. the element 1
        basis = M.basis() + I.basis()
        a = (sum(coeff[k] * basis[k][0] for k in range(2)), sum(coeff[k] * basis[k][1] for k in range(2)))
        b = (1 - a[0], -a[1])
        # a = 0 mod M, a = 1 mod I; b the other way round
        t1 = K.mul(x, b)
        t2 = K.mul(u, a)
        M = ideal_mul(K, M, I)
        x = reduce_mod(M, (t1[0] + t2[0], t1[1] + t2[1]))
    return x


# ---------------------------------------------------------------------------
# finite fields F_ell[x]/(g)


@dataclass(frozen=True)
class FiniteFieldHandle:
    ell: int
    degree: int
    modulus: tuple  # monic irreducible polynomial over F_ell, low degree first

    @classmethod
    def make(cls, ell, g):
        g = polys.fp_monic(polys.fp_reduce(g, ell), ell)
        if not polys.fp_is_irreducible(g, ell):
            raise ValueError(f"polynomial {g} is reducible mod {ell}")
        return cls(ell, len(g) - 1, tuple(g))

    @property
    def unit_order(self):
        return self.ell**self.degree - 1

    def reduce(self, poly):
        return tuple(polys.fp_rem(polys.fp_reduce(list(poly), self.ell), list(self.modulus), self.ell))

    def mul(self, a, b):
        return tuple(polys.fp_rem(polys.fp_mul(list(a), list(b), self.ell), list(self.modulus), self.ell))

    def one(self):
        return (1,)

    def power(self, a, e):
        return _pow(self.mul, self.reduce(a), e, self.one())


def finite_field_order_decompose(F, x, order_factors=None):
    """Multiplicative order of x != 0 in F, via the factorisation of ell^f - 1."""
    x = F.reduce(x)
    if not x or all(c == 0 for c in x):
        raise ValueError("zero has no multiplicative order")
    n = F.unit_order
    fac = order_factors or factorize(n)
    order = n
    for r in fac:
        while order % r == 0 and F.power(x, order // r) == F.one():
            order //= r
    return order
