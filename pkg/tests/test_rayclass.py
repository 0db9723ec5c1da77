import itertools
import math

import pytest

from tameray.quadfield import (
    class_group,
    ideal_mul,
    make_field,
    primes_of_norm_up_to,
    principal_ideal,
    split_prime,
)
from tameray.rayclass import (
    OracleBoundError,
    artin_class,
    make_modulus,
    oracle_ray_class,
    ray_class_number,
    ray_class_structure,
    ray_p_data,
)
from tameray.resring import unit_image_index


def pr(K, ell, i=0):
    return split_prime(K, ell)[1][i]


def test_known_groups():
    K = make_field(-1)
    assert ray_class_structure(K, [(pr(K, 7), 1)]).invariants == (12,)
    G = ray_class_structure(K, [(pr(K, 7), 1), (pr(K, 31), 1)])
    assert G.invariants == (12, 960)
    assert G.group.p_part(3) == (3, 3)
    assert ray_p_data(K, [(pr(K, 7), 1), (pr(K, 31), 1)], 3) == (2, 2)
    assert ray_p_data(K, [(pr(K, 7), 2), (pr(K, 31), 1)], 3) == (2, 2)
    K = make_field(-23)
    G = ray_class_structure(K, [(pr(K, 151), 1)])
    assert G.invariants == (3, 75)
    assert G.p_rank(3) == 2
    assert ray_class_structure(make_field(-5), []).invariants == (2,)


def _moduli(K, bound=60):
    ps = [P for _, P, _ in primes_of_norm_up_to(K, 40)]
    out = []
    for P in ps:
        for e in (1, 2):
            if P.norm**e <= bound * 4 and not (P.a == 2 and P.c == 1 and e > 1 and K.disc % 2 == 0):
                out.append([(P, e)])
    for P, Q in itertools.combinations(ps[:6], 2):
        out.append([(P, 1), (Q, 1)])
    return out


@pytest.mark.parametrize("d", [-1, -3, -5, -23, -47, -65])
def test_exactness_and_order_formula(d):
    K = make_field(d)
    h = class_group(K).order
    for mod in _moduli(K):
        G = ray_class_structure(K, mod)
        phi = math.prod(P.norm ** (e - 1) * (P.norm - 1) for P, e in mod)
        assert G.order * unit_image_index(K, mod) == h * phi
        assert G.order == ray_class_number(K, mod)


@pytest.mark.parametrize("d, p", [(-5, 3), (-23, 3), (-47, 5), (-71, 7), (-2, 5)])
def test_p_part_stable_in_exponent(d, p):
    K = make_field(d)
    qs = [P for N, P, _ in primes_of_norm_up_to(K, 80) if N % p and N % 2]
    for q in qs[:5]:
        vals = {ray_p_data(K, [(q, n)], p)[0] for n in (1, 2, 3)}
        assert len(vals) == 1


@pytest.mark.parametrize("d, p", [(-1, 5), (-2, 3), (-7, 3), (-11, 5), (-19, 3), (-43, 7)])
def test_p_part_cyclic_nontrivial_for_trivial_p_class_group(d, p):
    K = make_field(d)
    assert class_group(K).group.ord_p(p) == 0
    qs = [P for N, P, _ in primes_of_norm_up_to(K, 400) if (N - 1) % p == 0 and K.unit_torsion % p]
    assert qs
    for q in qs[:6]:
        for n in (1, 2):
            G = ray_class_structure(K, [(q, n)])
            assert G.p_rank(p) == 1


def test_artin_class_is_a_homomorphism_and_kills_one_mod_m():
    K = make_field(-23)
    mod = [(pr(K, 151), 1), (pr(K, 13), 1)]
    G = ray_class_structure(K, mod)
    invs = G.invariants
    primes = [P for _, P, _ in primes_of_norm_up_to(K, 60) if P.a not in (151, 13)]
    for P, Q in itertools.product(primes[:6], repeat=2):
        lhs = artin_class(K, mod, ideal_mul(K, P, Q), G)
        rhs = tuple((a + b) % n for a, b, n in zip(artin_class(K, mod, P, G), artin_class(K, mod, Q, G), invs))
        assert lhs == rhs
    m = 151 * 13
    for k in (1, 2, 5):
        alpha = (1 + k * m, 0)
        assert all(c == 0 for c in artin_class(K, mod, principal_ideal(K, alpha), G))
        alpha = (1 + m, k * m)
        assert all(c == 0 for c in artin_class(K, mod, principal_ideal(K, alpha), G))


def test_artin_class_of_31_in_Q_i_mod_7():
    K = make_field(-1)
    assert artin_class(K, [(pr(K, 7), 1)], pr(K, 31)) == (8,)


def test_errors():
    K = make_field(-1)
    P = pr(K, 5)
    with pytest.raises(ValueError):
        make_modulus([(P, 1), (P, 2)])
    with pytest.raises(ValueError):
        ray_p_data(K, [(pr(K, 3), 1)], 3)
    with pytest.raises(ValueError):
        artin_class(K, [(P, 1)], P)


def test_oracle_small_and_bound_error():
    K = make_field(-23)
    mod = [(pr(K, 151), 1)]
    assert oracle_ray_class(K, mod).invariants == (3, 75)
    with pytest.raises(OracleBoundError):
        oracle_ray_class(K, mod, relation_bound=4, max_relation_bound=4)


@pytest.mark.parametrize("d", [-3, -7, -15, -21])
def test_oracle_agrees_including_prime_powers(d):
    K = make_field(d)
    for mod in _moduli(K, 40):
        assert ray_class_structure(K, mod).invariants == oracle_ray_class(K, mod).invariants
