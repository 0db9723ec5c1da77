"""Small finite p-groups by explicit realisation, plus the rank bookkeeping
that decides finiteness of tame p-extension groups.

Groups are given by a multiplication on hashable elements; every invariant
below is computed by enumeration, which is fine at the sizes used here
(a few thousand elements at most).
"""

from dataclasses import dataclass
import itertools
import json
import math

from .abelian import from_generators

__all__ = [
    "FiniteGroup",
    "PGroupPresentation",
    "modular_group",
    "heisenberg_group",
    "cyclic_group",
    "abelian_group",
    "group_invariants",
    "is_powerful",
    "schur_multiplier_abelian",
    "schur_multiplier_wedge",
    "golod_shafarevich_infinite",
    "generator_rank",
]


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by generators, a law and an identity."""

    mul: object
    inv: object
    identity: object
    generators: tuple

    def elements(self):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def power(self, x, e):
        if e < 0:
            x, e = self.inv(x), -e
        r = self.identity
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def order_of(self, x):
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def commutator(self, x, y):
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def closure(self, gens):
        """Subgroup generated by ``gens``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = [g for g in gens if g != self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen


@dataclass(frozen=True)
class PGroupPresentation:
    """<a, b | a^(p^(n-1)), b^p, b^-1 a b = a^(1 + p^(n-2))> of order p^n."""

    p: int
    n: int

    @property
    def order(self):
        return self.p**self.n

    @property
    def m(self):
        return 1 + self.p ** (self.n - 2)

    def text(self):
        p, n = self.p, self.n
        return f"<a,b | a^{p ** (n - 1)}, b^{p}, b^-1ab = a^{self.m}>"

    def relator_text(self):
        p, n = self.p, self.n
        return f"<a,b | a^{{p^{n - 1}}}, b^p, [a,b]=a^{{p^{n - 2}}}> with p = {p}"

    def to_json(self):
        return {
            "p": self.p,
            "n": self.n,
            "order": self.order,
            "relators": {"a": self.p ** (self.n - 1), "b": self.p, "conjugation": self.m},
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        pres = cls(int(data["p"]), int(data["n"]))
        r = data.get("relators")
        if r and (r["a"] != pres.p ** (pres.n - 1) or r["b"] != pres.p or r["conjugation"] != pres.m):
            raise ValueError("relator exponents do not match (p, n)")
        return pres

    def realization(self):
        """Pairs (i mod p^(n-1), j mod p) standing for a^i b^j."""
        p, n = self.p, self.n
        A = p ** (n - 1)
        # With the law (i1 + i2*m^j1, j1 + j2) one has b a b^-1 = a^m, so the
        # presented b (with b^-1 a b = a^m) is realised by the pair (0, -1).
        m = self.m

        def mul(x, y):
            return ((x[0] + y[0] * pow(m, x[1], A)) % A, (x[1] + y[1]) % p)

        def inv(x):
            j = (-x[1]) % p
            return ((-x[0] * pow(m, j, A)) % A, j)

        a = (1, 0)
        b = (0, p - 1)
        G = FiniteGroup(mul, inv, (0, 0), (a, b))
        return G, a, b

    def verify(self):
        """Check the relations on the realisation and that it has order p^n."""
        G, a, b = self.realization()
        p, n = self.p, self.n
        ok = (
            G.power(a, p ** (n - 1)) == G.identity
            and G.power(b, p) == G.identity
            and G.mul(G.mul(G.inv(b), a), b) == G.power(a, self.m)
            and len(G.elements()) == p**n
        )
        return ok


def modular_group(p, n):
    if n < 3:
        raise ValueError("n must be at least 3")
    if p < 3 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"p = {p} must be an odd prime")
    pres = PGroupPresentation(p, n)
    if not pres.verify():
        raise AssertionError(f"realisation of the order-{p}^{n} group fails its relations")
    return pres


def heisenberg_group(p):
    """Unitriangular 3x3 matrices over F_p: (x, y, z) with z picking up x1*y2."""

    def mul(u, v):
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p, (u[2] + v[2] + u[0] * v[1]) % p)

    def inv(u):
        return ((-u[0]) % p, (-u[1]) % p, (-u[2] + u[0] * u[1]) % p)

    return FiniteGroup(mul, inv, (0, 0, 0), ((1, 0, 0), (0, 1, 0)))


def abelian_group(invariants):
    invariants = tuple(invariants)

    def mul(u, v):
        return tuple((a + b) % d for a, b, d in zip(u, v, invariants))

    def inv(u):
        return tuple((-a) % d for a, d in zip(u, invariants))

    gens = tuple(tuple(int(i == j) for j in range(len(invariants))) for i in range(len(invariants)))
    return FiniteGroup(mul, inv, tuple(0 for _ in invariants), gens)


def cyclic_group(n):
    return abelian_group((n,))


def _quotient_shape(G, N):
    """Invariant factors (descending) of G/N for a normal N with abelian quotient."""
    N = sorted(N)

    def rep(x):
        return min(G.mul(x, y) for y in N)

    one = rep(G.identity)
    gens = [rep(g) for g in G.generators]
    grp, _ = from_generators(gens, lambda x, y: rep(G.mul(x, y)), one)
    return tuple(sorted(grp.invariants, reverse=True))


def group_invariants(G):
    """Order, exponent, centre order, derived subgroup order and abelianisation (descending chain)."""
    elems = G.elements()
    order = len(elems)
    exponent = 1
    for x in elems:
        exponent = math.lcm(exponent, G.order_of(x))
    gens = list(G.generators)
    centre = [x for x in elems if all(G.mul(x, g) == G.mul(g, x) for g in gens)]
    derived = _normal_closure(G, elems, {G.commutator(x, y) for x in gens for y in gens})
    ab = _quotient_shape(G, derived)
    return {
        "order": order,
        "exponent": exponent,
        "center_order": len(centre),
        "derived_order": len(derived),
        "abelianization": ab,
    }


def _normal_closure(G, elems, H):
    H = G.closure(H)
    while True:
        new = {G.mul(G.mul(G.inv(g), h), g) for h in H for g in G.generators} - H
        if not new:
            return H
        H = G.closure(H | new)


def is_powerful(G, p):
    """G/G^p abelian (G/G^4 for p = 2), i.e. the derived subgroup lies in G^p."""
    elems = G.elements()
    k = 4 if p == 2 else p
    powers = G.closure({G.power(x, k) for x in elems})
    powers = _normal_closure(G, elems, powers)
    return all(G.commutator(x, y) in powers for x in G.generators for y in G.generators)


def _check_chain(shape):
    shape = tuple(int(n) for n in shape)
    if any(n < 1 for n in shape):
        raise ValueError("invariant factors must be positive")
    for a, b in zip(shape, shape[1:]):
        if a % b:
            raise ValueError(f"{list(shape)} is not a divisibility chain n_(i+1) | n_i")
    return tuple(n for n in shape if n > 1)


def schur_multiplier_abelian(shape):
    """Schur multiplier of Z/n1 x ... x Z/nk (n_(i+1) | n_i): Z/n2 + (Z/n3)^2 + ... + (Z/nk)^(k-1)."""
    shape = _check_chain(shape)
    out = []
    for i, n in enumerate(shape):
        out += [n] * i
    return tuple(sorted(out, reverse=True))


def schur_multiplier_wedge(shape):
    """Exterior square of the group, sum over i < j of Z/gcd(n_i, n_j), as a sorted multiset."""
    shape = _check_chain(shape)
    out = [math.gcd(a, b) for a, b in itertools.combinations(shape, 2)]
    return tuple(sorted((n for n in out if n > 1), reverse=True))


def golod_shafarevich_infinite(d, r):
    """True when d^2/4 >= r, which forces a pro-p group to be infinite."""
    if d < 0 or r < 0:
        raise ValueError("ranks must be non-negative")
    return d * d >= 4 * r


def generator_rank(K, S, p, structure=None):
    """(exact, bound) for the generator rank of the maximal pro-p extension unramified outside S.

    The exact value is the p-rank of Cl_K(prod S); the bound adds the
    contributions of the primes with p | N(q) - 1, the p-rank of Cl_K and
    the p-th roots of unity in K.
    """
    from .quadfield import class_group
    from .rayclass import ray_class_structure

    for q in S:
        if q.norm % p == 0:
            raise ValueError(f"{q} lies above p = {p}")
    G = structure or ray_class_structure(K, [(q, 1) for q in S])
    exact = G.p_rank(p)
    tame = sum(1 for q in S if (q.norm - 1) % p == 0)
    delta = 1 if K.contains_zeta(p) else 0
    clr = class_group(K).group.p_rank(p)
    bound = tame - delta + clr + (1 if K.unit_torsion % p == 0 else 0)
    if exact > bound:
        raise AssertionError(f"generator rank {exact} exceeds its bound {bound}")
    return exact, bound
