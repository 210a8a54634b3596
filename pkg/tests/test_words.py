"""Word algebra: free reduction, involutive letters, substitutions."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpq.errors import NegativeExponent
from gpq.words import (
    Alphabet,
    Substitution,
    Word,
    apply_substitution,
    free_reduce,
    iterate_substitution,
    words_up_to_length,
)

AB = Alphabet.make("a", "b")
INV_A = Alphabet.make("a!")
ACD = Alphabet.make("a!", "c!", "d!")
ABD = Alphabet.make("a!", "b!", "d!")

sigma_acd = Substitution.from_rules(ACD, {"a": "a c a", "c": "c d", "d": "c"})
sigma_abd = Substitution.from_rules(ABD, {"a": "a b d a", "b": "d", "d": "b d"})


def W(alphabet, text):
    return Word.from_str(alphabet, text)


def test_free_cancellation():
    assert free_reduce(W(AB, "a a' b")) == W(AB, "b")


def test_reduce_empty():
    assert free_reduce(Word.identity(AB)).is_empty()


def test_involutive_square():
    assert free_reduce(W(INV_A, "a a")).is_empty()


def test_already_reduced():
    w = W(AB, "b a b a' b'")
    assert free_reduce(w) == w


def test_involutive_letters_normalized_to_positive():
    w = W(ACD, "a' c d'")
    assert w.is_positive()
    assert w == W(ACD, "a c d")


def random_word(alphabet, rng, max_len=20, positive=False):
    n = rng.randrange(max_len + 1)
    letters = []
    for _ in range(n):
        i = rng.randrange(len(alphabet))
        e = 1 if (positive or alphabet.involutive[i]) else rng.choice((1, -1))
        letters.append((i, e))
    return Word(alphabet, tuple(letters))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_free_reduce_idempotent_and_shrinking(seed):
    rng = random.Random(seed)
    alphabet = rng.choice((AB, ACD))
    w = random_word(alphabet, rng, 30)
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert len(r) <= len(w)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_reduce_kills_inserted_inverse_pair(seed):
    rng = random.Random(seed)
    alphabet = rng.choice((AB, ACD))
    w = random_word(alphabet, rng, 15)
    v = random_word(alphabet, rng, 15)
    assert free_reduce(w * w.inverse() * v) == free_reduce(v)


def test_apply_substitution_examples():
    assert apply_substitution(sigma_acd, W(ACD, "a d")) == W(ACD, "a c a c")
    assert apply_substitution(sigma_acd, Word.identity(ACD)).is_empty()
    assert apply_substitution(sigma_abd, W(ABD, "a d")) == W(ABD, "a b d a b d")


def test_substitution_rejects_inverse_letters():
    with pytest.raises(NegativeExponent):
        apply_substitution(Substitution.from_rules(AB, {"a": "a", "b": "b"}), W(AB, "a'"))


def test_substitution_is_homomorphism_unreduced():
    rng = random.Random(11)
    for _ in range(100):
        u = random_word(ACD, rng, 10, positive=True)
        v = random_word(ACD, rng, 10, positive=True)
        assert (
            apply_substitution(sigma_acd, u * v).letters
            == (apply_substitution(sigma_acd, u) * apply_substitution(sigma_acd, v)).letters
        )


def test_iterate_examples():
    seed = W(ACD, "(a d)^4")
    assert iterate_substitution(sigma_acd, seed, 0) == seed
    w1 = iterate_substitution(sigma_acd, seed, 1)
    assert w1 == W(ACD, "(a c a c)^4")
    assert len(w1) == 16
    w1_abd = iterate_substitution(sigma_abd, W(ABD, "(a d)^4"), 1)
    assert w1_abd == W(ABD, "(a b d a b d)^4")
    assert len(w1_abd) == 24


def test_iterate_semigroup_law():
    rng = random.Random(23)
    for _ in range(40):
        w = random_word(ACD, rng, 20, positive=True)
        m, n = rng.randrange(7), rng.randrange(7)
        assert iterate_substitution(sigma_acd, w, m + n) == iterate_substitution(
            sigma_acd, iterate_substitution(sigma_acd, w, n), m
        )


def test_sigma_expansive_on_w_family():
    lengths = [
        len(iterate_substitution(sigma_acd, W(ACD, "(a d)^4"), n)) for n in range(6)
    ]
    assert lengths == sorted(lengths) and len(set(lengths)) == len(lengths)


def test_word_enumeration_counts():
    assert sum(1 for _ in words_up_to_length(ACD, 3)) == 1 + 3 + 9 + 27
    # two involutive + inverse-bearing letters: 'a!','b' gives 3 symbols
    mixed = Alphabet.make("a!", "b")
    assert sum(1 for _ in words_up_to_length(mixed, 2)) == 1 + 3 + 9


def test_from_str_parses_powers_and_inverses():
    assert W(AB, "(a b)^2 a'") == Word(AB, ((0, 1), (1, 1), (0, 1), (1, 1), (0, -1)))
    assert str(W(AB, "a b' a")) == "a b' a"


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_inverse_is_an_involution_and_antihomomorphism(seed):
    rng = random.Random(seed)
    alphabet = rng.choice((AB, ACD))
    u = random_word(alphabet, rng, 12)
    v = random_word(alphabet, rng, 12)
    assert u.inverse().inverse() == u
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert free_reduce(u * u.inverse()).is_empty()


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_substitution_commutes_with_concatenation_under_iteration(seed):
    rng = random.Random(seed)
    u = random_word(ABD, rng, 8, positive=True)
    v = random_word(ABD, rng, 8, positive=True)
    n = rng.randrange(4)
    assert iterate_substitution(sigma_abd, u * v, n) == iterate_substitution(
        sigma_abd, u, n
    ) * iterate_substitution(sigma_abd, v, n)


def test_cyclic_reduction():
    from gpq.words import cyclically_reduce

    w = W(AB, "b' a b a' b' a a' b")
    r = cyclically_reduce(w)
    assert cyclically_reduce(r) == r  # idempotent
    assert str(cyclically_reduce(W(AB, "b' a b"))) == "a"
    assert cyclically_reduce(W(INV_A, "a a")).is_empty()
