import itertools

from hypothesis import given, strategies as st
import pytest

from tameray.pgroups import (
    PGroupPresentation,
    abelian_group,
    cyclic_group,
    generator_rank,
    golod_shafarevich_infinite,
    group_invariants,
    heisenberg_group,
    is_powerful,
    modular_group,
    schur_multiplier_abelian,
    schur_multiplier_wedge,
)
from tameray.quadfield import make_field, split_prime


@pytest.mark.parametrize("p, n", list(itertools.product((3, 5), (3, 4))) + [(7, 3)])
def test_modular_group_invariants(p, n):
    pres = modular_group(p, n)
    G, a, b = pres.realization()
    inv = group_invariants(G)
    assert inv == {
        "order": p**n,
        "exponent": p ** (n - 1),
        "center_order": p ** (n - 2),
        "derived_order": p,
        "abelianization": (p ** (n - 2), p),
    }
    assert is_powerful(G, p)
    assert G.order_of(a) == p ** (n - 1) and G.order_of(b) == p


def test_presentation_text_and_json():
    pres = modular_group(3, 3)
    assert pres.text() == "<a,b | a^9, b^3, b^-1ab = a^4>"
    assert PGroupPresentation.from_json(pres.dumps()) == pres
    bad = pres.to_json()
    bad["relators"]["conjugation"] = 7
    with pytest.raises(ValueError):
        PGroupPresentation.from_json(bad)
    assert modular_group(5, 4).text() == "<a,b | a^125, b^5, b^-1ab = a^26>"


@pytest.mark.parametrize("p, n", [(2, 3), (9, 3), (3, 2), (1, 4)])
def test_modular_group_rejects(p, n):
    with pytest.raises(ValueError):
        modular_group(p, n)


@pytest.mark.parametrize("p", [3, 5])
def test_heisenberg_is_not_powerful(p):
    G = heisenberg_group(p)
    inv = group_invariants(G)
    assert inv == {"order": p**3, "exponent": p, "center_order": p, "derived_order": p, "abelianization": (p, p)}
    assert not is_powerful(G, p)


def test_abelian_groups():
    G = abelian_group((9, 3))
    inv = group_invariants(G)
    assert inv["derived_order"] == 1 and inv["abelianization"] == (9, 3) and inv["center_order"] == 27
    assert is_powerful(G, 3)
    assert group_invariants(cyclic_group(8))["abelianization"] == (8,)


chains = st.lists(st.sampled_from([1, 2, 3, 4, 5, 6]), min_size=1, max_size=5).map(
    lambda steps: list(reversed(list(itertools.accumulate(steps, lambda acc, s: acc * s))))
)


@given(chains)
def test_schur_formula_matches_wedge_oracle(chain):
    assert schur_multiplier_abelian(chain) == schur_multiplier_wedge(chain)


def test_schur_examples_and_errors():
    assert schur_multiplier_abelian([12]) == ()
    assert schur_multiplier_abelian([3, 3]) == (3,)
    assert schur_multiplier_abelian([12, 6, 2]) == (6, 2, 2)
    with pytest.raises(ValueError):
        schur_multiplier_abelian([4, 6])


def test_golod_shafarevich():
    assert golod_shafarevich_infinite(4, 4)
    assert not golod_shafarevich_infinite(2, 2)
    with pytest.raises(ValueError):
        golod_shafarevich_infinite(-1, 0)


def test_generator_rank_examples():
    K = make_field(-23)
    for q in split_prime(K, 151)[1]:
        assert generator_rank(K, [q], 3) == (2, 2)
    K = make_field(-1)
    S = [split_prime(K, 7)[1][0], split_prime(K, 31)[1][0]]
    assert generator_rank(K, S, 3) == (2, 2)
    with pytest.raises(ValueError):
        generator_rank(K, [split_prime(K, 3)[1][0]], 3)
