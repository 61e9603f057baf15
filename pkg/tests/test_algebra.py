import cmath
import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mubforge.algebra import (
    cyclic,
    direct_product,
    field_additive,
    gf_construct,
    group_construct,
    prime_power,
    root_of_unity,
    roots_of_unity,
)

from oracles import decode

PRIME_POWERS_UP_TO_16 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_prime_field_is_modular_arithmetic():
    F = gf_construct(5)
    assert (F.p, F.n, F.q) == (5, 1, 5)
    for a, b in product(range(5), repeat=2):
        assert F.add(a, b) == (a + b) % 5
        assert F.mul(a, b) == (a * b) % 5


def test_gf4_modulus_and_product():
    F = gf_construct(4)
    assert F.modulus == (1, 1, 1)  # x^2 + x + 1
    x, x1 = 2, 3  # coefficient vectors (0,1) and (1,1)
    assert F.mul(x, x1) == 1


@pytest.mark.parametrize("q, modulus", [(8, (1, 1, 0, 1)), (9, (1, 0, 1)), (16, (1, 1, 0, 0, 1))])
def test_smallest_irreducible_modulus(q, modulus):
    assert gf_construct(q).modulus == modulus


@pytest.mark.parametrize("q", [6, 10, 12, 1, 0])
def test_non_prime_power_rejected(q):
    with pytest.raises(ValueError, match="not a prime power"):
        gf_construct(q)


def test_prime_power_detection():
    assert prime_power(49) == (7, 2)
    assert prime_power(27) == (3, 3)
    assert prime_power(12) is None


@pytest.mark.parametrize("q", PRIME_POWERS_UP_TO_16)
def test_field_axioms_exhaustive(q):
    F = gf_construct(q)
    A, M = F.add_table, F.mul_table
    idx = np.arange(q)
    assert F.coefficients(0) == (0,) * F.n and F.coefficients(1) == (1,) + (0,) * (F.n - 1)
    assert np.array_equal(A[0], idx) and np.array_equal(M[1], idx)
    assert np.array_equal(A, A.T) and np.array_equal(M, M.T)
    # associativity and distributivity over every triple
    assert np.array_equal(A[A[:, :, None], idx[None, None, :]], A[idx[:, None, None], A[None, :, :]])
    assert np.array_equal(M[M[:, :, None], idx[None, None, :]], M[idx[:, None, None], M[None, :, :]])
    left = M[idx[:, None, None], A[None, :, :]]
    right = A[M[:, :, None], M[:, None, :]]
    assert np.array_equal(left, right)
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
    # characteristic p addition is digitwise
    for a, b in product(range(q), repeat=2):
        ca, cb = F.coefficients(a), F.coefficients(b)
        assert F.coefficients(F.add(a, b)) == tuple((x + y) % F.p for x, y in zip(ca, cb))


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        gf_construct(7).inv(0)


def test_product_group_index_matches_6i_plus_j():
    G = group_construct({"kind": "product", "factors": [2, 6]})
    assert G.index((1, 3)) == 9
    assert G.element(9) == (1, 3)
    assert G.element(int(G.op(G.index((1, 3)), G.index((1, 4))))) == (0, 1)


def test_trivial_group():
    G = cyclic(1)
    assert G.order == 1
    assert G.op(0, 0) == 0 and G.inv(0) == 0


@pytest.mark.parametrize("spec", [{"kind": "cyclic", "d": 0}, {"kind": "cyclic", "d": -3},
                                  {"kind": "product", "factors": [2, 0]}, {"kind": "field", "q": 6},
                                  {"kind": "dihedral", "d": 8}, {"d": 3}])
def test_bad_group_specs(spec):
    with pytest.raises(ValueError):
        group_construct(spec)


@pytest.mark.parametrize("spec", [{"kind": "cyclic", "d": 12}, {"kind": "product", "factors": [2, 6]},
                                  {"kind": "field", "q": 9}])
def test_group_spec_roundtrip(spec):
    assert group_construct(spec).to_spec() == spec


def _groups_up_to_100():
    for d in range(1, 101):
        yield cyclic(d)
    for factors in [(2, 2), (2, 6), (3, 3), (2, 2, 2), (4, 5), (2, 3, 5), (5, 5), (3, 3, 3), (2, 2, 5, 5)]:
        yield direct_product(factors)
    for q in (4, 8, 9, 16, 25, 27, 32, 49, 64, 81):
        yield field_additive(q)


def test_group_axioms_exhaustive():
    for G in _groups_up_to_100():
        d, T, inv = G.order, G.op_table, G.inverse_table
        idx = np.arange(d)
        assert T.min() >= 0 and T.max() < d
        assert np.array_equal(T[0], idx)
        assert np.all(T[idx, inv] == 0)
        assert np.array_equal(T[T[:, :, None], idx[None, None, :]], T[idx[:, None, None], T[None, :, :]])
        assert G.index(G.element(0)) == 0
        for a in range(d):
            assert G.index(G.element(a)) == a
            assert G.element(a) == decode(a, G.factors)


def test_field_additive_group_matches_field_addition():
    for q in (4, 8, 9, 16):
        assert np.array_equal(field_additive(q).op_table, gf_construct(q).add_table)


@given(st.lists(st.integers(1, 7), min_size=1, max_size=3), st.data())
def test_index_roundtrip_and_componentwise_op(factors, data):
    G = direct_product(factors)
    a = data.draw(st.integers(0, G.order - 1))
    b = data.draw(st.integers(0, G.order - 1))
    ea, eb = G.element(a), G.element(b)
    expect = tuple((x + y) % f for x, y, f in zip(ea, eb, factors))
    assert G.element(int(G.op(a, b))) == expect


def test_root_of_unity_values():
    assert root_of_unity(4, 1) == 1j
    assert root_of_unity(12, 6) == -1
    z = root_of_unity(3, 1)
    assert abs(z - complex(-0.5, math.sqrt(3) / 2)) < 1e-15


def test_root_of_unity_rejects_zero_order():
    with pytest.raises(ValueError):
        root_of_unity(0, 1)


@given(st.integers(1, 64), st.integers(-1000, 1000))
def test_root_reduction_and_unit_modulus(n, k):
    z = root_of_unity(n, k)
    assert z == root_of_unity(n, k % n)
    assert abs(abs(z) - 1) < 1e-12
    assert abs(z * root_of_unity(n, n - k) - 1) < 1e-12
    assert abs(z - cmath.exp(2j * math.pi * k / n)) < 1e-12


def test_roots_table_is_cached_and_sums_to_zero():
    assert roots_of_unity(12) is roots_of_unity(12)
    for n in range(2, 65):
        assert abs(roots_of_unity(n).sum()) < 1e-10
