import math

from hypothesis import given, settings, strategies as st
import pytest

from tameray.quadfield import (
    make_field,
    reduce_mod,
    split_prime,
)
from tameray.resring import (
    FiniteFieldHandle,
    crt_lift,
    discrete_log,
    finite_field_order_decompose,
    p_primary_order,
    residue_unit_group,
    residue_unit_structure,
    unit_image_index,
)

CASES = [(-1, 5, 0, 2), (-1, 7, 0, 2), (-23, 151, 0, 1), (-23, 3, 0, 3), (-5, 3, 1, 2), (-5, 5, 0, 3), (-7, 2, 0, 3), (-47, 17, 1, 2)]


@pytest.mark.parametrize("d, ell, i, n", CASES)
def test_component_order_and_invariants(d, ell, i, n):
    K = make_field(d)
    q = split_prime(K, ell)[1][i]
    comp = residue_unit_structure(K, q, n)
    N = q.norm
    assert comp.order == (N - 1) * N ** (n - 1)
    assert math.prod(comp.invariants) == comp.order
    if N**n <= 20000:
        assert len(comp.units()) == comp.order


@pytest.mark.parametrize("d, ell, i, n", CASES)
def test_dlog_is_a_homomorphism(d, ell, i, n):
    K = make_field(d)
    q = split_prime(K, ell)[1][i]
    comp = residue_unit_structure(K, q, n)
    invs = comp.invariants
    units = comp.units()[:: max(1, len(comp.units()) // 40)]
    for u in units:
        for v in units[:10]:
            lhs = comp.dlog(comp.mul(u, v))
            rhs = tuple((a + b) % m for a, b, m in zip(comp.dlog(u), comp.dlog(v), invs))
            assert lhs == rhs


def test_dlog_separates_units():
    K = make_field(-1)
    comp = residue_unit_structure(K, split_prime(K, 3)[1][0], 2)  # (O/9)^x, order 8 * 9
    seen = {comp.dlog(u) for u in comp.units()}
    assert len(seen) == comp.order


def test_dlog_rejects_nonunit_and_bad_input():
    K = make_field(-1)
    q = split_prime(K, 5)[1][0]
    comp = residue_unit_structure(K, q, 1)
    with pytest.raises(ValueError):
        comp.dlog((0, 0))
    with pytest.raises(ValueError):
        residue_unit_structure(K, q, 0)
    with pytest.raises(ValueError):
        residue_unit_structure(K, split_prime(K, 2)[1][0], 2)


def test_unit_image_index():
    K = make_field(-1)
    assert unit_image_index(K, [(split_prime(K, 7)[1][0], 1)]) == 4
    assert unit_image_index(K, [(split_prime(K, 2)[1][0], 1)]) == 1
    assert unit_image_index(K, []) == 1
    K = make_field(-3)
    assert unit_image_index(K, [(split_prime(K, 7)[1][0], 1)]) == 6
    assert unit_image_index(K, [(split_prime(K, 2)[1][0], 1)]) == 3


def test_product_group_order_is_phi():
    K = make_field(-23)
    qs = split_prime(K, 151)[1]
    R = residue_unit_group(K, [(qs[0], 1), (split_prime(K, 5)[1][0], 2)])
    assert R.order == 150 * 24 * 25
    with pytest.raises(ValueError):
        residue_unit_group(K, [(qs[0], 1), (qs[0], 2)])


@given(st.integers(0, 200), st.integers(0, 200))
@settings(max_examples=60, deadline=None)
def test_crt_lift(a, b):
    K = make_field(-23)
    P, Q = split_prime(K, 151)[1]
    R = split_prime(K, 5)[1][0]
    x = crt_lift(K, [((a, 1), P), ((b, 0), Q), ((1, 0), R)])
    assert reduce_mod(P, x) == reduce_mod(P, (a, 1))
    assert reduce_mod(Q, x) == reduce_mod(Q, (b, 0))
    assert reduce_mod(R, x) == reduce_mod(R, (1, 0))


def test_crt_lift_rejects_common_factor():
    K = make_field(-1)
    P = split_prime(K, 5)[1][0]
    with pytest.raises(ValueError):
        crt_lift(K, [((1, 0), P), ((2, 0), P)])


@given(st.integers(1, 1018))
def test_discrete_log_mod_prime(k):
    mul = lambda x, y: x * y % 1019  # noqa: E731
    assert discrete_log(mul, 2, pow(2, k, 1019), 1018, 1) == k % 1018


def test_finite_field_handle():
    F = FiniteFieldHandle.make(7, [3, 0, 0, 1])  # x^3 + 3: 4 is not a cube mod 7
    assert F.unit_order == 342
    orders = {finite_field_order_decompose(F, (a, b, c)) for a in range(7) for b in range(7) for c in range(7) if (a, b, c) != (0, 0, 0)}
    assert max(orders) == 342 and all(342 % o == 0 for o in orders)
    with pytest.raises(ValueError):
        FiniteFieldHandle.make(7, [0, 0, 1])
    g = next(x for x in ((0, 1), (1, 1), (2, 1)) if finite_field_order_decompose(F, x) == 342)
    assert p_primary_order(F.mul, g, 342, 3, F.one()) == 9
