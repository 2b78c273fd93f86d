import pytest
from hypothesis import given
from hypothesis import strategies as st

from semitor.errors import InconsistencyError
from semitor.laurent import LaurentScalar, ONE, ZERO, v_power
from semitor.modp import SpecializationStream, generic_evaluate, nullspace_mod, rank_mod, solve_mod

terms = st.dictionaries(st.integers(-5, 5), st.integers(-4, 4), max_size=4).map(LaurentScalar)


@given(terms, terms, terms)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(terms, st.integers(2, 10**6))
def test_evaluation_is_a_homomorphism(a, v):
    p = 1_000_003
    b = v_power(3) - 2
    assert (a * b).evaluate(v, p) == a.evaluate(v, p) * b.evaluate(v, p) % p


def test_unit_inverse():
    assert v_power(3) ** -1 == v_power(-3)
    assert (v_power(2) * (v_power(2) ** -1)) == ONE
    with pytest.raises(ZeroDivisionError):
        (ONE + v_power(1)) ** -1


def test_str():
    assert str(v_power(2) - 3) == "v^2 - 3"
    assert str(ZERO) == "0"


def test_rank_and_nullspace():
    p = 101
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank_mod(rows, p) == 2
    ns = nullspace_mod(rows, 3, p)
    assert len(ns) == 1
    for row in rows:
        assert sum(a * b for a, b in zip(row, ns[0])) % p == 0
    sol = solve_mod([[1, 0, 1], [0, 1, 1]], [2, 3, 5], p)
    assert sol == [2, 3]
    with pytest.raises(InconsistencyError):
        solve_mod([[1, 0, 0]], [0, 1, 0], p)


def test_specialization_stream_deterministic():
    a = [SpecializationStream(7).draw() for _ in range(1)]
    b = [SpecializationStream(7).draw() for _ in range(1)]
    assert a == b
    s = SpecializationStream(7).draw()
    assert 2 <= s.v <= s.p - 2 and s.p < 2**31


def test_generic_evaluate_agreement_and_failure():
    value, used, _ = generic_evaluate(lambda spec: 5, seed=1)
    assert value == 5 and len(used) == 2
    with pytest.raises(InconsistencyError) as exc:
        generic_evaluate(lambda spec: spec.p, seed=1)
    assert "specialization-unstable" in str(exc.value)
