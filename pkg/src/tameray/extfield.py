"""Auxiliary number fields given by a defining polynomial.

Prime splitting is read off factorisations modulo ell (with a Dedekind
criterion check for index divisibility), degree-p subfields of Q(zeta_ell)
come from Gaussian periods, and composita from resultants.  Tame ray class
p-parts over such a field use ingested class numbers and units.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math
import random

from .arith import factorize, is_prime, smith_normal_form, valuation
from . import polys
from .polys import PolyZ
from .resring import FiniteFieldHandle, discrete_log

__all__ = [
    "NumberFieldProfile",
    "SplittingData",
    "PrimeSpec",
    "CompositumError",
    "ResidueDataError",
    "poly_factor_mod",
    "splitting_data",
    "gaussian_period_subfield",
    "compositum",
    "match_profile",
    "inert_in_cyclotomic_M",
    "ord_p_power_minus_one",
    "tame_ray_p_part",
    "tame_ray_p_data",
]


class CompositumError(ValueError):
    """The resultant has no factor of the expected degree."""

    def __init__(self, message, factors):
        super().__init__(message)
        self.factors = factors


class ResidueDataError(ValueError):
    """A residue field cannot be realised from the defining polynomial."""


@dataclass
class NumberFieldProfile:
    label: str
    defining: PolyZ
    r1: int
    r2: int
    class_number: int
    class_group: tuple = ()
    torsion_order: int = 2
    torsion_generator: list = None  # rational power-basis coordinates
    fundamental_units: list = None  # list of coordinate lists (Fractions)
    field_discriminant: int = None
    name: str = ""
    provenance: str = ""

    @property
    def degree(self):
        return self.defining.degree

    @property
    def signature(self):
        return (self.r1, self.r2)

    @property
    def unit_rank(self):
        return self.r1 + self.r2 - 1


@dataclass
class SplittingData:
    ell: int
    primes: list  # (e, f, factor mod ell)
    caveat: bool = False  # ell may divide the index of Z[theta]

    @property
    def signature(self):
        return sorted((e, f) for e, f, _ in self.primes)

    def is_inert(self):
        return len(self.primes) == 1 and self.primes[0][0] == 1


@dataclass(frozen=True)
class PrimeSpec:
    """A prime of F above ell with inertia degree f and ramification index e.

    ``factor`` optionally pins the irreducible factor of the defining
    polynomial mod ell that cuts out the prime.
    """

    ell: int
    f: int
    e: int = 1
    factor: tuple = None


def _coeffs(f):
    return list(f.coeffs) if isinstance(f, PolyZ) else list(f)


def poly_factor_mod(f, ell, seed=0):
    """Irreducible factors of f modulo ell as (monic coefficient list, multiplicity)."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    return polys.fp_factor(_coeffs(f), ell, seed)


def dedekind_regular(f, ell, factors):
    """Per factor: True when ell does not divide the index at that prime (Dedekind criterion)."""
    f = _coeffs(f)
    prod = [1]
    for g, m in factors:
        for _ in range(m):
            prod = polys.mul(prod, g)
    lead = f[-1]
    diff = polys.sub(f, polys.scale(prod, lead))
    assert all(c % ell == 0 for c in diff)
    F = polys.fp_reduce([c // ell for c in diff], ell)
    out = []
    for g, m in factors:
        if m == 1 or not F:
            out.append(m == 1)
            continue
        out.append(len(polys.fp_gcd(F, g, ell)) == 1)
    return out


def splitting_data(F, ell, seed=0):
    """Decomposition of ell in the field defined by F (profile or polynomial)."""
    poly = F.defining if isinstance(F, NumberFieldProfile) else F
    factors = poly_factor_mod(poly, ell, seed)
    ok = dedekind_regular(poly, ell, factors)
    primes = [(m, len(g) - 1, tuple(g)) for g, m in factors]
    return SplittingData(ell, primes, caveat=not all(ok))


# ---------------------------------------------------------------------------
# Gaussian periods


def _cyc_mul(a, b, ell):
    out = [0] * ell
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % ell] += x * y
    return out


def _cyc_to_int(a):
    # element of Z[zeta] written on 1, zeta, ..., zeta^(ell-1); rational iff the
    # non-constant coordinates agree, since 1 + zeta + ... + zeta^(ell-1) = 0
    c = a[1]
    if any(x != c for x in a[1:]):
        raise ArithmeticError("period polynomial coefficient is not rational")
    return a[0] - c


def _primitive_root(ell):
    fac = factorize(ell - 1)
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // r, ell) != 1 for r in fac):
            return g
    return 1


def gaussian_period_subfield(ell, p):
    """Minimal polynomial of a Gaussian period generating the degree-p subfield of Q(zeta_ell)."""
    if not (is_prime(ell) and is_prime(p)):
        raise ValueError("ell and p must be prime")
    if (ell - 1) % p:
        raise ValueError(f"{p} does not divide {ell} - 1")
    g = _primitive_root(ell)
    H = sorted({pow(x, p, ell) for x in range(1, ell)})
    periods = []
    for i in range(p):
        s = pow(g, i, ell)
        eta = [0] * ell
        for h in H:
            eta[s * h % ell] += 1
        periods.append(eta)
    # prod (x - eta_i) with coefficients in Z[zeta]
    one = [1] + [0] * (ell - 1)
    poly = [one]
    for eta in periods:
        neg = [-x for x in eta]
        new = [[0] * ell for _ in range(len(poly) + 1)]
        for k, c in enumerate(poly):
            new[k + 1] = [u + v for u, v in zip(new[k + 1], c)]
            prod = _cyc_mul(c, neg, ell)
            new[k] = [u + v for u, v in zip(new[k], prod)]
        poly = new
    return PolyZ([_cyc_to_int(c) for c in poly])


# ---------------------------------------------------------------------------
# composita

def _to_sympy(f, var):
    import sympy

    return sum(sympy.Integer(c) * var**i for i, c in enumerate(_coeffs(f)))


def compositum(f, g, max_shift=20):
    """Defining polynomial of the compositum of Q[x]/f and Q[x]/g.

    Uses Res_y(f(y), g(x - k*y)) for the first k >= 1 giving a squarefree
    resultant, and returns its factor of degree deg f * deg g.  If no factor
    has that degree the fields are not linearly disjoint and
    :class:`CompositumError` lists every factor.
    """
    import sympy

    _x, _y = sympy.symbols("x y")
    f, g = PolyZ(_coeffs(f)), PolyZ(_coeffs(g))
    target = f.degree * g.degree
    fy = _to_sympy(f, _y)
    for k in range(1, max_shift + 1):
        gs = _to_sympy(g, _x - k * _y)
        R = sympy.Poly(sympy.resultant(fy, gs, _y), _x)
        if sympy.degree(sympy.gcd(R, R.diff(_x)), _x) > 0:
            continue
        _, facs = sympy.factor_list(R)
        factors = []
        for h, _m in facs:
            c = [int(a) for a in reversed(sympy.Poly(h, _x).all_coeffs())]
            if c[-1] < 0:
                c = [-a for a in c]
            factors.append(PolyZ(c))
        for h in factors:
            if h.degree == target:
                return h
        raise CompositumError(
            f"fields not linearly disjoint: factors of degrees {[h.degree for h in factors]}", factors
        )
    raise CompositumError("no squarefree resultant found", [])


def _is_square(n):
    return n >= 0 and math.isqrt(n) ** 2 == n


def match_profile(poly, profile, test_primes=None):
    """Check that ``poly`` is compatible with defining the field of ``profile``.

    Two necessary conditions are tested: disc(poly) / disc(field) is a
    square integer, and the splitting signatures agree at small primes not
    dividing either discriminant.  Returns (ok, reasons).
    """
    reasons = []
    poly = PolyZ(_coeffs(poly))
    if poly.degree != profile.degree:
        return False, [f"degree {poly.degree} != {profile.degree}"]
    dp = poly.discriminant()
    dF = profile.field_discriminant
    if dF is None or dF == 0 or dp % dF or not _is_square(dp // dF):
        reasons.append(f"disc(poly) = {dp} is not disc(field) = {dF} times a square")
    if test_primes is None:
        test_primes = [q for q in range(3, 400) if is_prime(q) and dp % q and profile.defining.discriminant() % q]
    for q in test_primes:
        a = splitting_data(poly, q).signature
        b = splitting_data(profile.defining, q).signature
        if a != b:
            reasons.append(f"splitting at {q}: {a} != {b}")
            break
    return not reasons, reasons


# ---------------------------------------------------------------------------
# tame ray class p-parts


def inert_in_cyclotomic_M(ell, p, ell2, f=1):
    """True iff ell2^f is not a p-th power residue mod ell.

    For q = ell*O_K this decides whether a prime of norm ell2^f is inert in
    the degree-p layer M(q, p) of the cyclotomic field.
    """
    if (ell - 1) % p:
        raise ValueError(f"{p} does not divide {ell} - 1")
    if ell2 in (ell, p):
        raise ValueError("ell2 must differ from ell and p")
    return pow(ell2, f * (ell - 1) // p, ell) != 1


def ord_p_power_minus_one(ell, f, p):
    """ord_p(ell^f - 1)."""
    return valuation(ell**f - 1, p)


def _element_image(coords, FF):
    """Reduce a rational power-basis vector into the residue field FF."""
    ell = FF.ell
    out = []
    for c in coords:
        c = Fraction(c)
        if c.denominator % ell == 0:
            raise ResidueDataError(f"coordinate {c} has denominator divisible by {ell}")
        out.append(c.numerator * pow(c.denominator, -1, ell) % ell)
    return FF.reduce(out)


def _residue_field(F, spec, seed):
    factors = poly_factor_mod(F.defining, spec.ell, seed)
    regular = dedekind_regular(F.defining, spec.ell, factors)
    cands = []
    for (g, m), ok in zip(factors, regular):
        if len(g) - 1 != spec.f or m != spec.e:
            continue
        if spec.factor is not None and tuple(g) != tuple(spec.factor):
            continue
        if not ok:
            raise ResidueDataError(
                f"{spec.ell} divides the index at the factor {g}; residue data must be supplied"
            )
        cands.append(g)
    if not cands:
        raise ResidueDataError(
            f"no prime above {spec.ell} with e = {spec.e}, f = {spec.f} in {F.label}"
        )
    return FiniteFieldHandle.make(spec.ell, cands[0])


@dataclass
class TameRayPData:
    p: int
    ord_class_number: int
    residue_ords: list  # ord_p(N(Q) - 1) per prime
    unit_index_ord: int
    unit_dlogs: list = field(default_factory=list)

    @property
    def value(self):
        return self.ord_class_number + sum(self.residue_ords) - self.unit_index_ord


def tame_ray_p_data(F, primes, p, seed=0):
    """Ingredients of ord_p |Cl_F(m)| for a squarefree m coprime to p."""
    if F.fundamental_units is None and F.unit_rank > 0:
        raise ValueError(f"profile {F.label} carries no fundamental units")
    specs = [s if isinstance(s, PrimeSpec) else PrimeSpec(*s) for s in primes]
    hp = valuation(F.class_number, p) if F.class_number else 0
    ks, handles = [], []
    for s in specs:
        if s.ell == p:
            raise ValueError(f"prime above {p} in a tame modulus")
        k = ord_p_power_minus_one(s.ell, s.f, p)
        ks.append(k)
        handles.append(_residue_field(F, s, seed) if k else None)
    units = []
    if F.torsion_order % p == 0:
        if F.torsion_generator is None:
            raise ValueError(f"profile {F.label} carries no torsion generator")
        units.append(F.torsion_generator)
    units += list(F.fundamental_units or [])
    cols = [i for i, k in enumerate(ks) if k]
    rows = []
    rng = random.Random(seed)
    gen_cache = {}
    for u in units:
        row = []
        for i in cols:
            FF, k = handles[i], ks[i]
            N = FF.unit_order
            pk = p**k
            if i not in gen_cache:
                gen_cache[i] = _p_part_generator(FF, p, k, rng)
            gpk = gen_cache[i]
            x = FF.power(_element_image(u, FF), N // pk)
            row.append(discrete_log(FF.mul, gpk, x, pk, FF.one(), {p: k}))
        rows.append(row)
    if cols and rows:
        mods = [p ** ks[i] for i in cols]
        full = rows + [[mods[j] if j == c else 0 for j in range(len(cols))] for c in range(len(cols))]
        invs, _, _ = smith_normal_form(full)
        quotient = math.prod(d for d in invs if d)
        sub = math.prod(mods) // quotient
        ui = valuation(sub, p)
    else:
        ui = 0
    return TameRayPData(p, hp, ks, ui, rows)


def _p_part_generator(FF, p, k, rng):
    N = FF.unit_order
    pk = p**k
    while True:
        a = tuple(rng.randrange(FF.ell) for _ in range(FF.degree))
        if not any(a):
            continue
        g = FF.power(a, N // pk)
        if FF.power(g, pk // p) != FF.one():
            return g


def tame_ray_p_part(F, primes, p, seed=0):
    """ord_p |Cl_F(m)| = ord_p(h_F) + sum ord_p(N(Q) - 1) - ord_p [E_F : E_F(m)]."""
    return tame_ray_p_data(F, primes, p, seed).value
