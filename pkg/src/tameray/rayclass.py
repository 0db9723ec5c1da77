"""Ray class groups Cl_K(m) of imaginary quadratic fields for finite moduli.

A modulus is a sequence of ``(prime IdealRep, exponent)`` pairs.  The main
path resolves the exact sequence

    1 -> (O_K/m)^x / image(E_K) -> Cl_K(m) -> Cl_K -> 1

with explicit generators; :func:`oracle_ray_class` recomputes the group from
prime-ideal classes and principal ideals with generators = 1 mod m, and
shares nothing with the main path beyond ideal arithmetic.
"""

from dataclasses import dataclass
import math

from .abelian import FinAbGroup, from_relations
from .quadfield import (
    class_group,
    ideal_class,
    ideal_mul,
    ideal_pow,
    primes_of_norm_up_to,
    principal_generator,
    reduce_mod,
    split_prime,
    _divide_exact,
)
from .resring import modulus_ideal, residue_unit_group, unit_image_index

__all__ = [
    "Modulus",
    "RayClassGroup",
    "OracleBoundError",
    "make_modulus",
    "ray_class_number",
    "ray_class_structure",
    "ray_p_data",
    "artin_class",
    "oracle_ray_class",
]


class OracleBoundError(ArithmeticError):
    """The oracle's search bounds did not reach the expected group order."""


def make_modulus(parts):
    """Normalise [(P, e), ...]: drop zero exponents, sort, reject repeats."""
    mod = tuple(sorted((P, int(e)) for P, e in parts if e))
    primes = [P for P, _ in mod]
    if len(set(primes)) != len(primes):
        raise ValueError("modulus lists a prime ideal twice")
    if any(e < 0 for _, e in mod):
        raise ValueError("modulus exponents must be positive")
    return mod


Modulus = tuple


def _coprime_to_modulus(K, I, modulus):
    return all(_divide_exact(K, I, P) is None for P, _ in modulus)


def ray_class_number(K, modulus):
    """|Cl_K(m)| = h_K * prod |(O/q^v)^x| / [E_K : E_K(m)]."""
    modulus = make_modulus(modulus)
    h = class_group(K).order
    units = 1
    for P, e in modulus:
        N = P.norm
        units *= N ** (e - 1) * (N - 1)
    idx = unit_image_index(K, modulus)
    num = h * units
    assert num % idx == 0
    return num // idx


@dataclass
class RayClassGroup:
    K: object
    modulus: tuple
    group: FinAbGroup
    residues: object  # ResidueUnitGroup
    lifts: tuple  # ideals coprime to m representing the Cl_K basis
    lift_orders: tuple
    unit_index: int

    @property
    def order(self):
        return self.group.order

    @property
    def invariants(self):
        return self.group.invariants

    def p_rank(self, p):
        return self.group.p_rank(p)

    def ord_p(self, p):
        return self.group.ord_p(p)

    def residue_class(self, alpha):
        """Invariant coordinates of the principal ideal (alpha), alpha coprime to m."""
        vec = list(self.residues.dlog(alpha)) + [0] * len(self.lifts)
        return self.group.coords(vec)

    def residue_generator_classes(self):
        """Images of the residue-unit generators (one per component generator)."""
        n = len(self.residues.invariants)
        out = []
        for i in range(n):
            vec = [int(i == j) for j in range(n)] + [0] * len(self.lifts)
            out.append(self.group.coords(vec))
        return out

    def __str__(self):
        return str(self.group)


def _class_lifts(K, modulus, cg):
    """Smallest-norm prime ideals coprime to m in each basis class of Cl_K."""
    targets = {}
    for j in range(cg.group.rank):
        targets[j] = tuple(int(i == j) for i in range(cg.group.rank))
    found = {}
    bound = 8
    bad = {P for P, _ in modulus}
    while len(found) < len(targets):
        for norm, P, kind in primes_of_norm_up_to(K, bound):
            if P in bad:
                continue
            c = ideal_class(K, P)
            for j, t in targets.items():
                if j not in found and c == t:
                    found[j] = P
        bound *= 2
        if bound > 10**7:
            raise ArithmeticError("could not find class representatives coprime to the modulus")
    return tuple(found[j] for j in sorted(targets))


def ray_class_structure(K, modulus, seed=0):
    """Cl_K(m) with generator bookkeeping (see module docstring)."""
    modulus = make_modulus(modulus)
    cg = class_group(K)
    R = residue_unit_group(K, modulus, seed)
    rinv = R.invariants
    r = len(rinv)
    lifts = _class_lifts(K, modulus, cg)
    orders = cg.group.invariants
    g = len(lifts)
    n = r + g
    rows = []
    for i, d in enumerate(rinv):
        rows.append([d if j == i else 0 for j in range(n)])
    if modulus:
        rows.append(list(R.dlog(K.torsion_generator())) + [0] * g)
    for j, (A, h) in enumerate(zip(lifts, orders)):
        alpha = principal_generator(K, ideal_pow(K, A, h))
        row = [-v for v in R.dlog(alpha)] if modulus else []
        row += [h if k == j else 0 for k in range(g)]
        rows.append(row)
    labels = tuple(f"u{i}" for i in range(r)) + tuple(str(A) for A in lifts)
    G = from_relations(rows, n, labels)
    return RayClassGroup(K, modulus, G, R, lifts, orders, unit_image_index(K, modulus))


def ray_p_data(K, modulus, p, structure=None):
    """(ord_p |Cl_K(m)|, p-rank of Cl_K(m)) for m coprime to p."""
    modulus = make_modulus(modulus)
    for P, _ in modulus:
        if P.norm % p == 0:
            raise ValueError(f"modulus prime {P} lies above p = {p}")
    G = structure or ray_class_structure(K, modulus)
    return G.ord_p(p), G.p_rank(p)


def artin_class(K, modulus, I, structure=None):
    """Class of the ideal I (coprime to m) in Cl_K(m), as invariant coordinates."""
    modulus = make_modulus(modulus)
    if not _coprime_to_modulus(K, I, modulus):
        raise ValueError(f"ideal {I} is not coprime to the modulus")
    G = structure or ray_class_structure(K, modulus)
    x = ideal_class(K, I)
    J = I
    ys = []
    for A, h, xj in zip(G.lifts, G.lift_orders, x):
        y = (-xj) % h
        ys.append(y)
        if y:
            J = ideal_mul(K, J, ideal_pow(K, A, y))
    beta = principal_generator(K, J)
    assert beta is not None
    vec = (list(G.residues.dlog(beta)) if modulus else []) + [-y for y in ys]
    return G.group.coords(vec)


# ---------------------------------------------------------------------------
# oracle


class _Lattice:
    """Incremental row-echelon basis of an integer lattice."""

    def __init__(self, n):
        self.n = n
        self.rows = {}  # pivot column -> row with positive pivot

    def add(self, v):
        v = list(v)
        for c in range(self.n):
            if v[c] == 0:
                continue
            if c not in self.rows:
                if v[c] < 0:
                    v = [-x for x in v]
                self.rows[c] = v
                return True
            w = self.rows[c]
            if v[c] % w[c] == 0:
                q = v[c] // w[c]
                v = [a - q * b for a, b in zip(v, w)]
                continue
            # extended gcd combination
            g, s, t = _xgcd(w[c], v[c])
            new = [s * a + t * b for a, b in zip(w, v)]
            wa, va = w[c] // g, v[c] // g
            v = [va * a - wa * b for a, b in zip(w, v)]
            self.rows[c] = new
            self._reduce_above(c)
        return False

    def _reduce_above(self, c):
        piv = self.rows[c]
        for c2, row in list(self.rows.items()):
            if c2 < c and row[c] and abs(row[c]) >= piv[c]:
                q = row[c] // piv[c]
                self.rows[c2] = [a - q * b for a, b in zip(row, piv)]

    def full_rank(self):
        return len(self.rows) == self.n

    def index(self):
        if not self.full_rank():
            return 0
        return math.prod(self.rows[c][c] for c in range(self.n))

    def basis(self):
        return [self.rows[c] for c in sorted(self.rows)]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _elements_in_coset(K, start, m, X):
    """Elements alpha = start + mu, mu in m, with N(alpha) <= X."""
    a, b, c = m.a, m.b, m.c
    ex, ey = start
    absD = -K.disc
    t = K.trace
    ymax = math.isqrt(4 * X // absD) + 1
    # y = ey + j c
    jlo = -((ymax + ey) // c) - 1
    jhi = (ymax - ey) // c + 1
    for j in range(jlo, jhi + 1):
        y = ey + j * c
        rem4 = 4 * X - absD * y * y  # (2x + t y)^2 <= rem4
        if rem4 < 0:
            continue
        s = math.isqrt(rem4)
        xlo = (-s - t * y + 1) // 2 - 1
        xhi = (s - t * y) // 2 + 1
        x0 = ex + j * b
        ilo = -((x0 - xlo) // a)
        ihi = (xhi - x0) // a
        for i in range(ilo, ihi + 1):
            x = x0 + i * a
            alpha = (x, y)
            if 0 < K.norm(alpha) <= X:
                yield alpha


def oracle_ray_class(K, modulus, norm_bound=None, relation_bound=None, max_relation_bound=None):
    """Independent computation of Cl_K(m) from prime classes and 1-mod-m relations.

    Generators are the classes of the prime ideals of norm <= ``norm_bound``
    coprime to m.  Relations come from every alpha in zeta + m (zeta in
    mu_K, so that some unit multiple of alpha is 1 mod m) of norm at most the
    relation bound whose ideal factors over the generators.  The relation
    bound starts at max(64, N(m) |disc|) (or ``relation_bound``) and doubles until
    the lattice index matches the order formula, up to ``max_relation_bound``.
    """
    modulus = make_modulus(modulus)
    m = modulus_ideal(K, modulus)
    Nm = m.norm
    absD = -K.disc
    expected = ray_class_number(K, modulus)
    if norm_bound is None:
        norm_bound = max(30, 2 * Nm, absD // 2)
    if relation_bound is None:
        relation_bound = max(64, Nm * absD)
    if max_relation_bound is None:
        max_relation_bound = max(relation_bound * 2**12, 10**7)
    bad = {P for P, _ in modulus}
    fb = [P for _, P, _ in primes_of_norm_up_to(K, norm_bound) if P not in bad]
    index_of = {P: i for i, P in enumerate(fb)}
    n = len(fb)
    ells = sorted({P.a if P.c == 1 else P.a for P in fb})
    kinds = {ell: split_prime(K, ell) for ell in ells}
    lat = _Lattice(n)
    seen = set()
    units = K.units()
    X = relation_bound
    while True:
        for zeta in units:
            for alpha in _elements_in_coset(K, zeta, m, X):
                if alpha in seen:
                    continue
                seen.add(alpha)
                vec = _smooth_vector(K, alpha, kinds, index_of, n)
                if vec is not None:
                    lat.add(vec)
        idx = lat.index()
        if idx == expected:
            break
        if X >= max_relation_bound:
            raise OracleBoundError(
                f"oracle for m = {[(str(P), e) for P, e in modulus]}: lattice index "
                f"{idx} != expected {expected} with norm_bound={norm_bound}, relation bound {X}"
            )
        X *= 2
    G = from_relations(lat.basis(), n, tuple(str(P) for P in fb))
    return G


def _smooth_vector(K, alpha, kinds, index_of, n):
    N = K.norm(alpha)
    vec = [0] * n
    for ell, (kind, ideals) in kinds.items():
        if N % ell:
            continue
        e = 0
        while N % ell == 0:
            N //= ell
            e += 1
        if kind == "inert":
            P = ideals[0]
            if P not in index_of:
                return None
            vec[index_of[P]] += e // 2
        elif kind == "ramified":
            P = ideals[0]
            if P not in index_of:
                return None
            vec[index_of[P]] += e
        else:
            x, y = alpha
            k = 0
            while x % ell == 0 and y % ell == 0:
                x //= ell
                y //= ell
                k += 1
            rest = e - 2 * k
            P, Q = ideals
            vp = vq = k
            if rest:
                if reduce_mod(P, (x, y)) == (0, 0):
                    vp += rest
                else:
                    vq += rest
            for R, v in ((P, vp), (Q, vq)):
                if v:
                    if R not in index_of:
                        return None
                    vec[index_of[R]] += v
    if N != 1:
        return None
    return vec
