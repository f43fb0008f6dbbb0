from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tik.errors import InputError, SingularError
from tik.field import FieldSpec, is_prime


def test_is_prime_small():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("name, kind", [("F3", "Fp"), ("Fp:7", "Fp"), ("Q", "Q"), ("R", "R"), ("C", "C")])
def test_parse_name(name, kind):
    assert FieldSpec.parse_name(name).kind == kind


def test_non_prime_rejected():
    with pytest.raises(InputError):
        FieldSpec.Fp(6)


def test_inverse_roundtrip(field, rng):
    for _ in range(5):
        M = field.random((3, 3), rng)
        if field.rank(M) < 3:
            continue
        assert field.equal(field.matmul(M, field.inv(M)), field.eye(3))


def test_singular_inverse_raises(field):
    M = field.zeros((2, 2))
    with pytest.raises(SingularError):
        field.inv(M)


def test_rational_det_exact():
    Q = FieldSpec.Q()
    M = Q.array([[Fraction(1, 2), 1], [3, Fraction(1, 3)]])
    assert Q.det(M) == Fraction(1, 6) - 3


@given(st.lists(st.integers(0, 6), min_size=8, max_size=8))
def test_det_multiplicative_f7(vals):
    F = FieldSpec.Fp(7)
    A = F.array(np.array(vals[:4]).reshape(2, 2))
    B = F.array(np.array(vals[4:]).reshape(2, 2))
    assert F.det(F.matmul(A, B)) == (F.det(A) * F.det(B)) % 7


@given(st.lists(st.integers(0, 2), min_size=12, max_size=12))
def test_rank_nullity_f3(vals):
    F = FieldSpec.Fp(3)
    M = F.array(np.array(vals).reshape(3, 4))
    N = F.nullspace(M)
    assert F.rank(M) + N.shape[0] == 4
    assert F.is_zero(F.matmul(M, N.T))


def test_render_parse_roundtrip(field, rng):
    for v in field.random((6,), rng):
        assert field.equal(np.array([field.parse(field.render(v))]), np.array([v]))
