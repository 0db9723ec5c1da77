import math
import random

from hypothesis import given, settings, strategies as st
import pytest

from tameray.arith import multiplicative_order, primes_up_to, valuation
from tameray.extfield import (
    CompositumError,
    NumberFieldProfile,
    PrimeSpec,
    ResidueDataError,
    compositum,
    gaussian_period_subfield,
    inert_in_cyclotomic_M,
    match_profile,
    ord_p_power_minus_one,
    splitting_data,
    tame_ray_p_data,
    tame_ray_p_part,
)
from tameray.lmfdbio import bundled_fixture
from tameray.polys import PolyZ
from tameray.quadfield import class_group, make_field, primes_of_norm_up_to, split_prime
from tameray.rayclass import ray_p_data


def test_lte_on_random_cases():
    rng = random.Random(50)
    odd = [p for p in primes_up_to(30) if p > 2]
    for _ in range(50):
        p = rng.choice(odd)
        ell = rng.choice([q for q in primes_up_to(300) if q != p])
        f = rng.randint(1, 12)
        r = multiplicative_order(ell, p)
        want = 0 if f % r else valuation(ell**r - 1, p) + valuation(f // r, p)
        assert ord_p_power_minus_one(ell, f, p) == want, (ell, f, p)


@pytest.mark.parametrize("ell, p, poly", [(7, 3, [-1, -2, 1, 1]), (7, 2, [2, 1, 1]), (13, 3, [1, -4, 1, 1])])
def test_gaussian_periods_known(ell, p, poly):
    assert list(gaussian_period_subfield(ell, p).coeffs) == poly


@pytest.mark.parametrize("ell, p", [(7, 3), (13, 3), (31, 3), (11, 5), (31, 5), (29, 7), (5, 2), (13, 2)])
def test_period_discriminant_and_splitting(ell, p):
    f = gaussian_period_subfield(ell, p)
    assert f.degree == p
    # field discriminant ell^(p-1); Z[eta] may have an index, contributing a square
    D = f.discriminant()
    assert D > 0 or p == 2
    ratio, rem = divmod(abs(D), ell ** (p - 1))
    assert rem == 0 and math.isqrt(ratio) ** 2 == ratio
    for q in primes_up_to(150):
        if q in (ell, p):
            continue
        sd = splitting_data(f, q)
        if ratio % q == 0:
            # q divides the index of Z[eta]: factoring mod q is not conclusive
            assert sd.caveat
            continue
        assert not sd.caveat
        sig = sd.signature
        if pow(q, (ell - 1) // p, ell) == 1:
            assert sig == [(1, 1)] * p
        else:
            assert sig == [(1, p)]
        if p > 2:
            assert inert_in_cyclotomic_M(ell, p, q) == (sig == [(1, p)])


def test_period_errors():
    with pytest.raises(ValueError):
        gaussian_period_subfield(7, 5)
    with pytest.raises(ValueError):
        gaussian_period_subfield(9, 2)


@pytest.mark.parametrize(
    "f, g",
    [([1, 0, 1], [-1, -2, 1, 1]), ([2, 0, 1], [-2, 0, 0, 1]), ([1, 0, 1], [-3, 0, 1]), ([5, 0, 1], [2, 1, 1])],
)
def test_compositum_degree_and_complete_splitting(f, g):
    h = compositum(f, g)
    assert h.degree == (len(f) - 1) * (len(g) - 1)
    bad = abs(PolyZ(f).discriminant() * PolyZ(g).discriminant() * h.discriminant())
    for q in primes_up_to(200):
        if bad % q == 0:
            continue
        both = splitting_data(f, q).signature == [(1, 1)] * (len(f) - 1) and splitting_data(g, q).signature == [(1, 1)] * (len(g) - 1)
        assert both == (splitting_data(h, q).signature == [(1, 1)] * h.degree)


def test_compositum_not_disjoint():
    with pytest.raises(CompositumError) as exc:
        compositum([1, 0, 1], [1, 0, 1])
    assert sorted(h.degree for h in exc.value.factors) == [2, 2]


def test_dedekind_caveat():
    assert splitting_data([3, 0, 1], 2).caveat  # Z[sqrt(-3)] has index 2
    assert not splitting_data([1, 1, 1], 2).caveat


def test_example_sextic_matches_M_not_table_label():
    fx = bundled_fixture()
    h = compositum([1, 0, 1], gaussian_period_subfield(7, 3))
    assert list(h.coeffs) == [13, 8, 7, -2, 0, 2, 1]
    assert match_profile(h, fx["6.0.153664.1"])[0]
    assert not match_profile(h, fx["6.0.141911930944.3"])[0]
    assert splitting_data(h, 7).signature == [(3, 2)]
    assert splitting_data(h, 31).signature == [(1, 6)]


def test_tame_p_part_for_M():
    M = bundled_fixture()["6.0.153664.1"]
    data = tame_ray_p_data(M, [PrimeSpec(7, 2, 3), PrimeSpec(31, 6, 1)], 3)
    assert (data.ord_class_number, data.residue_ords, data.unit_index_ord) == (0, [1, 2], 1)
    assert data.value == 2
    with pytest.raises(ResidueDataError):
        tame_ray_p_part(M, [PrimeSpec(31, 3, 1)], 3)
    with pytest.raises(ValueError):
        tame_ray_p_part(M, [PrimeSpec(3, 1, 1)], 3)


def _quadratic_profile(K):
    cg = class_group(K)
    return NumberFieldProfile(
        label=f"2.0.{-K.disc}.1",
        defining=PolyZ([K.norm_w, -K.trace, 1]),
        r1=0,
        r2=1,
        class_number=cg.order,
        class_group=cg.group.invariants,
        torsion_order=K.unit_torsion,
        torsion_generator=list(K.torsion_generator()),
        fundamental_units=[],
        field_discriminant=K.disc,
    )


def _spec(K, P):
    ell = P.a
    kind, _ = split_prime(K, ell)
    if kind == "inert":
        return PrimeSpec(ell, 2, 1)
    if kind == "ramified":
        return PrimeSpec(ell, 1, 2)
    # omega = -b modulo (ell, b + omega)
    return PrimeSpec(ell, 1, 1, (P.b % ell, 1))


INSTANCES = [(-1, 3), (-1, 5), (-3, 3), (-3, 7), (-23, 3), (-5, 3), (-47, 5), (-14, 3), (-7, 7), (-2, 5)]


@pytest.mark.parametrize("d, p", INSTANCES)
def test_tame_formula_matches_ray_class_p_part(d, p):
    K = make_field(d)
    F = _quadratic_profile(K)
    primes = [P for N, P, k in primes_of_norm_up_to(K, 200) if N % p and not (k == "ramified" and P.a == 2)]
    rng = random.Random(d * 100 + p)
    for _ in range(6):
        mod = rng.sample(primes, rng.choice([1, 2]))
        tame = tame_ray_p_part(F, [_spec(K, P) for P in mod], p)
        assert tame == ray_p_data(K, [(P, 1) for P in mod], p)[0], (d, p, [str(P) for P in mod])


@given(st.sampled_from([3, 5, 7]), st.integers(1, 8))
@settings(max_examples=40, deadline=None)
def test_inert_test_matches_residue_symbol(p, f):
    ell = next(q for q in primes_up_to(200) if q % p == 1)
    for q in primes_up_to(100):
        if q in (ell, p):
            continue
        want = pow(q, f * (ell - 1) // p, ell) != 1
        assert inert_in_cyclotomic_M(ell, p, q, f) == want
