import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from semitor.errors import BudgetError, ValidationError
from semitor.weyl import TranslationVector, WeylGroup


def test_reflection_involution_and_det(a1, a2, c2):
    for b in (a1, a2, c2):
        W = b.W
        for i in range(W.n):
            s = W.s(i)
            assert (s * s).is_identity()
            assert oracles.inverse_matrix(s.matrix) == s.matrix
            assert W.s(i).length == 1


def test_a1_reflection_formula(a1):
    s1 = a1.W.s(1)
    assert s1.apply((1, 0)) == (1, 2)
    assert s1.apply((0, 1)) == (0, -1)


def test_reflections_match_oracle(a1, a2, c2):
    for b in (a1, a2, c2):
        A = oracles.cartan_matrix(b.dot)
        for i in range(b.W.n):
            assert b.W.s(i).matrix == oracles.reflection(A, i)


def test_inverse_and_products(a1):
    W = a1.W
    w = W.parse_word("0,1,0,1,1,0")
    assert (w * w.inverse()).is_identity()
    assert (W.parse_word("0,1") * W.parse_word("1,0")).is_identity()
    assert W.equals(W.parse_word("0,1,1"), W.parse_word("0"))


def test_lengths_examples(a1):
    W = a1.W
    assert W.length_and_word(W.identity) == (0, ())
    assert W.parse_word("0,1,0").length == 3
    theta = W.translation(TranslationVector((1,)))
    assert theta.length == 2


@pytest.mark.parametrize("name,radius", [("A1~", 8), ("A2~", 5), ("C2~", 5)])
def test_length_matches_bfs(name, radius):
    from conftest import bundle

    b = bundle(name)
    bfs = oracles.CayleyBFS(b.dot, radius)
    for m, d in bfs.dist.items():
        w = b.W.from_word(bfs.word[m])
        assert w.matrix == m
        assert w.length == d
        assert oracles.word_matrix(bfs.A, w.word) == m


def test_ball_layers_match_bfs(a2):
    layers = a2.W.ball(5)
    bfs = oracles.CayleyBFS(a2.dot, 5)
    for k, layer in enumerate(layers):
        assert {w.matrix for w in layer} == {m for m, d in bfs.dist.items() if d == k}


def test_ball_budget(a2):
    with pytest.raises(BudgetError):
        a2.W.ball(10, budget=20)


def test_translation_homomorphism(a2, c2):
    for b in (a2, c2):
        W = b.W
        k = len(b.rd.finite)
        vecs = [TranslationVector(t) for t in itertools.product(range(-1, 2), repeat=k)]
        assert W.translation(TranslationVector((0,) * k)).is_identity()
        for z1, z2 in itertools.product(vecs, vecs):
            assert W.translation(z1) * W.translation(z2) == W.translation(z1 + z2)


def test_affine_reflection_product_is_translation(a1):
    W = a1.W
    # s_{alpha,0} = s_1 and s_{alpha,1} = s_0 for A1
    assert W.s(1) * W.s(0) == W.translation(TranslationVector((-1,))) or W.s(0) * W.s(1) == W.translation(
        TranslationVector((1,))
    )
    assert W.s(0) * W.s(1) == W.translation(TranslationVector((1,)))


def test_normal_form_examples(a1, a2):
    W = a1.W
    z, wbar = W.normal_form(W.s(0))
    assert z.coeffs == (1,) and wbar == W.s(1)
    t = W.translation(TranslationVector((3,)))
    assert W.normal_form(t) == (TranslationVector((3,)), W.identity)
    z, wbar = a2.W.normal_form(a2.W.s(1))
    assert z.is_zero() and wbar == a2.W.s(1)


def test_normal_form_reconstructs(a2, c2):
    for b in (a2, c2):
        W = b.W
        for w in W.iter_ball(5):
            z, wbar = W.normal_form(w)
            assert W.translation(z) * wbar == w
            assert b.rd.i0 not in wbar.word


def test_bruhat_examples(a1):
    W = a1.W
    assert W.bruhat_leq(W.s(0), W.parse_word("1,0"))
    assert not W.bruhat_leq(W.s(0), W.s(1))
    assert not W.bruhat_leq(W.s(1), W.s(0))
    for w in W.iter_ball(5):
        assert W.bruhat_leq(W.identity, w)


def test_bruhat_matches_subwords_c2(c2):
    W = c2.W
    A = oracles.cartan_matrix(c2.dot)
    elems = list(W.iter_ball(4))
    for w in elems:
        below = oracles.subword_products(A, w.word)
        for u in elems:
            assert W.bruhat_leq(u, w) == (u.matrix in below)


def test_dot_action(a1, a2):
    for b in (a1, a2):
        W = b.W
        lam = tuple(range(1, W.n + 1))
        assert W.dot_action(W.identity, lam) == lam
        for i in range(W.n):
            expected = tuple(l - (lam[i] + 1) * p for l, p in zip(lam, b.rd.prime(i)))
            assert W.dot_action(W.s(i), lam) == expected
        for w in W.iter_ball(4):
            assert b.rd.level(W.dot_action(w, lam)) == b.rd.level(lam)


def test_word_lift_independent_of_reduced_word(a2):
    W = a2.W
    A = oracles.cartan_matrix(a2.dot)
    lam = (1, 0, 2)
    for w in W.iter_ball(5):
        ref = W.word_lift(w, lam)
        for word in oracles.reduced_words(A, w.word):
            assert W.word_lift(w, lam, word) == ref
        lift, h = ref
        moved = W.dot_action(w, lam)
        assert a2.rd.prime_linear(lift) == tuple(a - b for a, b in zip(lam, moved))


def test_energy_of_reflection(a1):
    lam = (2, 3)
    for i in range(2):
        assert a1.W.word_lift(a1.W.s(i), lam)[1] == lam[i] + 1


def test_parse_errors(a1):
    with pytest.raises(ValidationError):
        a1.W.parse_word("0,5")
    with pytest.raises(ValidationError):
        a1.W.parse_word("0,x")


def test_iteration_cap(a1):
    W = WeylGroup(a1.rd, iteration_cap=3)
    with pytest.raises(BudgetError):
        W.from_word([0, 1] * 5).length


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=12))
def test_length_properties(word):
    from conftest import bundle

    W = bundle("A2~").W
    w = W.from_word(word)
    assert w.length <= len(word)
    assert w.length % 2 == len(word) % 2
    assert w.inverse().length == w.length
    assert W.from_word(w.word) == w
    assert len(w.word) == w.length
