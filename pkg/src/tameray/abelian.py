"""Finite abelian groups in Smith normal form.

A :class:`FinAbGroup` is Z^k modulo a relation lattice, reduced to invariant
factors.  Elements given as exponent vectors over the k original generators
are mapped to invariant coordinates with :meth:`FinAbGroup.coords`.
"""

from dataclasses import dataclass, field
import math

from .arith import smith_normal_form, valuation

__all__ = ["FinAbGroup", "from_relations", "from_generators", "shape_p_part", "p_rank"]


@dataclass(frozen=True)
class FinAbGroup:
    invariants: tuple  # nontrivial invariant factors, d_1 | d_2 | ...
    transform: tuple = ()  # k x len(invariants): original vector -> invariant coords
    labels: tuple = ()  # names of the k original generators
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def order(self):
        return math.prod(self.invariants)

    @property
    def rank(self):
        return len(self.invariants)

    def coords(self, vec):
        """Invariant coordinates of the element with exponent vector ``vec``."""
        if len(vec) != len(self.transform):
            raise ValueError(f"expected {len(self.transform)} exponents, got {len(vec)}")
        out = []
        for j, d in enumerate(self.invariants):
            s = sum(v * row[j] for v, row in zip(vec, self.transform))
            out.append(s % d)
        return tuple(out)

    def element_order(self, coords):
        o = 1
        for c, d in zip(coords, self.invariants):
            o = math.lcm(o, d // math.gcd(c, d))
        return o

    def p_rank(self, p):
        return p_rank(self.invariants, p)

    def ord_p(self, p):
        return valuation(self.order, p) if self.order else 0

    def p_part(self, p):
        return shape_p_part(self.invariants, p)

    def p_coords(self, coords, p):
        """Project invariant coordinates onto the p-primary part (ascending shape)."""
        out = []
        for c, d in zip(coords, self.invariants):
            pe = p ** valuation(d, p)
            if pe > 1:
                # d = pe * m; p-part of c in Z/d lands in Z/pe via c mod pe
                out.append(c % pe)
        return tuple(out)

    def __str__(self):
        if not self.invariants:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariants)


def p_rank(invariants, p):
    return sum(1 for d in invariants if d % p == 0)


def shape_p_part(invariants, p):
    """p-primary invariant factors in ascending divisibility order."""
    return tuple(sorted(p ** valuation(d, p) for d in invariants if d % p == 0))


def from_relations(rel_rows, ngens, labels=()):
    """Structure of Z^ngens / <rel_rows>; the quotient must be finite."""
    rows = [list(r) for r in rel_rows] or [[0] * ngens]
    if ngens == 0:
        return FinAbGroup((), (), tuple(labels))
    invs, _, V = smith_normal_form(rows)
    invs = invs + [0] * (ngens - len(invs))
    if any(d == 0 for d in invs):
        raise ValueError("relation lattice is not of full rank: group is infinite")
    keep = [j for j, d in enumerate(invs) if d != 1]
    transform = tuple(tuple(V[i][j] for j in keep) for i in range(ngens))
    return FinAbGroup(tuple(invs[j] for j in keep), transform, tuple(labels))


def from_generators(gens, mul, identity, labels=(), limit=10**7):
    """Structure of the subgroup generated by explicit elements.

    ``mul`` must be the (commutative) group law on hashable elements.
    Returns ``(group, table)`` where ``table`` maps every element of the
    subgroup to an exponent vector over ``gens``.
    """
    k = len(gens)
    table = {identity: (0,) * k}
    relations = []
    for i, g in enumerate(gens):
        # smallest e > 0 with g^e in the current subgroup
        e, x = 1, g
        while x not in table:
            e += 1
            x = mul(x, g)
            if e * len(table) > limit:
                raise ValueError("from_generators: subgroup exceeds size limit")
        rel = [-v for v in table[x]]
        rel[i] += e
        relations.append(rel)
        if e > 1:
            old = list(table.items())
            power = identity
            for j in range(1, e):
                power = mul(power, g)
                for elt, vec in old:
                    y = mul(elt, power)
                    v = list(vec)
                    v[i] = j
                    table[y] = tuple(v)
    return from_relations(relations, k, labels), table

