"""Endomorphic presentations, HNN extensions, decoding, pinch reduction."""

from __future__ import annotations

import random

import pytest

from gpq.endo import (
    EndomorphicPresentation,
    britton_pinch_reduce,
    expand_relators,
    expand_relators_annotated,
    hnn_presentation,
    is_positive,
    order_less,
    replay_pinch_trace,
    sigma_decode,
    stable_projection,
)
from gpq.errors import BrittonStuck, NotInImage
from gpq.words import Alphabet, Substitution, Word, apply_substitution, free_reduce


@pytest.fixture(scope="module")
def lysenok(grig):
    return EndomorphicPresentation(
        alphabet=grig.acd,
        q_relators=(),
        substitutions=(grig.sigma_acd,),
        r_relators=(
            Word.from_str(grig.acd, "a a"),
            Word.from_str(grig.acd, "(a d)^4"),
            Word.from_str(grig.acd, "(a d a c a c)^4"),
        ),
        stable_names=("t",),
        name="lysenok",
    )


def test_expand_depth_zero(lysenok):
    rels = expand_relators(lysenok, 0)
    assert [str(r) for r in rels] == [
        "a a",
        "a d a d a d a d",
        "a d a c a c a d a c a c a d a c a c a d a c a c",
    ]


def test_expand_depth_one_adds_images(lysenok, grig):
    rels = expand_relators(lysenok, 1)
    w1 = grig.relator_family("acd", "w", 1)
    assert w1 in rels
    assert len(rels) == 6  # 3 seeds + 3 distinct images


def test_expand_r_empty():
    ab = Alphabet.make("a", "b")
    ep = EndomorphicPresentation(
        alphabet=ab,
        q_relators=(Word.from_str(ab, "a b"),),
        substitutions=(Substitution.from_rules(ab, {"a": "a", "b": "b a"}),),
        r_relators=(),
    )
    assert [str(r) for r in expand_relators(ep, 3)] == ["a b"]


def test_expand_monotone_and_counts(lysenok):
    prev = set()
    for d in range(5):
        current = {w.letters for w in expand_relators(lysenok, d)}
        assert prev <= current
        prev = current
    # single substitution, all composites distinct: |R| * (d+1) members
    for d in range(5):
        assert len(expand_relators(lysenok, d)) == 3 * (d + 1)

def test_hnn_presentation_grigorchuk(lysenok):
    hp = hnn_presentation(lysenok)
    assert hp.alphabet.letters == ("a", "c", "d", "t")
    assert hp.alphabet.involutive == (True, True, True, False)
    rels = [str(r) for r in hp.relators]
    assert rels[:3] == [
        "a a",
        "a d a d a d a d",
        "a d a c a c a d a c a c a d a c a c a d a c a c",
    ]
    # conjugacy orientation t s t^-1 = image(s); note the d c spelling for (cd)^-1
    assert rels[3:] == ["t a t' a c a", "t c t' d c", "t d t' c"]


def test_hnn_without_substitutions():
    ab = Alphabet.make("a!", "b!")
    ep = EndomorphicPresentation(
        alphabet=ab,
        q_relators=(Word.from_str(ab, "(a b)^2"),),
        substitutions=(),
        r_relators=(Word.from_str(ab, "a a"),),
    )
    hp = hnn_presentation(ep)
    assert hp.alphabet == ab
    assert [str(r) for r in hp.relators] == ["a b a b", "a a"]


def test_hnn_of_doubling_map_is_baumslag_solitar():
    # <a | - | a -> a^2 | -> gives <a, t | t a t' a' a'>, the B(1,2) relator
    # a b a' b' b' after renaming a -> t, b -> a
    alpha = Alphabet.make("a")
    ep = EndomorphicPresentation(
        alphabet=alpha,
        q_relators=(),
        substitutions=(Substitution.from_rules(alpha, {"a": "a a"}, "t"),),
        r_relators=(),
    )
    hp = hnn_presentation(ep)
    assert len(hp.relators) == 1
    from gpq.words import rename_word

    bs_alpha = Alphabet.make("a", "b")
    renamed = rename_word(hp.relators[0], bs_alpha, {"t": "a", "a": "b"})
    assert str(renamed) == "a b a' b' b'"


def test_stable_projection(lysenok):
    comb = lysenok.combined_alphabet()
    W = lambda t: Word.from_str(comb, t)
    assert stable_projection(lysenok, W("t a t' c")).is_empty()
    assert str(stable_projection(lysenok, W("t a t c"))) == "t t"
    assert stable_projection(lysenok, W("a c a")).is_empty()


def test_stable_projection_is_monoid_map(lysenok):
    comb = lysenok.combined_alphabet()
    rng = random.Random(3)
    for _ in range(100):
        letters_u = tuple(
            (rng.randrange(4), 1 if rng.random() < 0.7 else -1) for _ in range(rng.randrange(10))
        )
        letters_v = tuple(
            (rng.randrange(4), 1 if rng.random() < 0.7 else -1) for _ in range(rng.randrange(10))
        )
        u, v = Word(comb, letters_u), Word(comb, letters_v)
        lhs = stable_projection(lysenok, u * v)
        rhs = free_reduce(stable_projection(lysenok, u) * stable_projection(lysenok, v))
        assert lhs == rhs


def test_positivity_and_order():
    L = Alphabet.make("s", "t")
    W = lambda t: Word.from_str(L, t)
    assert is_positive(W("t"))
    assert not is_positive(Word.identity(L))
    assert not is_positive(W("t s'"))
    assert order_less(W("t"), W("t t"))
    assert not order_less(W("t t"), W("t"))
    assert not order_less(W("t"), W("s"))


def test_order_less_is_strict_partial_order():
    from gpq.words import words_up_to_length

    L = Alphabet.make("s", "t")
    reduced = [w for w in words_up_to_length(L, 4) if free_reduce(w) == w]
    for u in reduced:
        assert not order_less(u, u)
    rng = random.Random(4)
    sample = rng.sample(reduced, 40)
    for u in sample:
        for v in sample:
            for w in sample:
                if order_less(u, v) and order_less(v, w):
                    assert order_less(u, w)


def test_sigma_decode_examples(grig):
    W = lambda t: Word.from_str(grig.acd, t)
    assert str(sigma_decode(grig.sigma_acd, W("a c a c"))) == "a d"
    assert str(sigma_decode(grig.sigma_acd, W("a c a"))) == "a"
    with pytest.raises(NotInImage):
        sigma_decode(grig.sigma_acd, W("a"))


def test_sigma_decode_round_trip_both_substitutions(grig):
    rng = random.Random(41)
    for sub in (grig.sigma_acd, grig.sigma_abd):
        for _ in range(250):
            n = rng.randrange(101)
            word = Word(sub.alphabet, tuple((rng.randrange(3), 1) for _ in range(n)))
            image = apply_substitution(sub, word)
            assert sigma_decode(sub, image) == word


def test_sigma_decode_flags_ambiguity():
    # images {a -> ab, b -> abab}: "abab" parses as b and as aa
    ab = Alphabet.make("a", "b")
    sub = Substitution.from_rules(ab, {"a": "a b", "b": "a b a b"})
    result = sigma_decode(sub, Word.from_str(ab, "a b a b"), with_flags=True)
    assert result.ambiguous
    assert str(result.source) == "b"  # shortlex-least parse


def _brute_force_in_image(sub, word):
    images = [img.letters for img in sub.images]
    target = word.letters

    memo = {}

    def rec(pos):
        if pos == len(target):
            return True
        if pos in memo:
            return memo[pos]
        ok = any(
            target[pos : pos + len(img)] == img and rec(pos + len(img))
            for img in images
        )
        memo[pos] = ok
        return ok

    return rec(0)


def test_sigma_decode_rejects_non_images(grig):
    rng = random.Random(43)
    rejected = 0
    for _ in range(400):
        n = rng.randrange(1, 13)
        word = Word(grig.acd, tuple((rng.randrange(3), 1) for _ in range(n)))
        in_image = _brute_force_in_image(grig.sigma_acd, word)
        try:
            sigma_decode(grig.sigma_acd, word)
            assert in_image
        except NotInImage:
            assert not in_image
            rejected += 1
    assert rejected >= 100


def test_britton_examples(lysenok):
    comb = lysenok.combined_alphabet()
    W = lambda t: Word.from_str(comb, t)
    word, steps = britton_pinch_reduce(lysenok, W("t' a c a t"))
    assert str(word) == "a" and len(steps) == 1 and steps[0].kind == "decode"
    word2, steps2 = britton_pinch_reduce(lysenok, W("t a t'"))
    assert str(word2) == "a c a" and steps2[0].kind == "expand"
    word3, steps3 = britton_pinch_reduce(lysenok, W("a c"))
    assert str(word3) == "a c" and steps3 == ()


def test_britton_stuck_is_explicit(lysenok):
    comb = lysenok.combined_alphabet()
    with pytest.raises(BrittonStuck):
        britton_pinch_reduce(lysenok, Word.from_str(comb, "t' a t"))


def test_britton_decreases_stable_letters_and_replays(lysenok):
    comb = lysenok.combined_alphabet()
    t_idx = comb.index("t")
    rng = random.Random(13)

    def t_count(w):
        return sum(1 for i, _ in w.letters if i == t_idx)

    reduced_words = 0
    for _ in range(200):
        letters = []
        for _ in range(rng.randrange(12)):
            i = rng.randrange(4)
            e = 1 if comb.involutive[i] else rng.choice((1, -1))
            letters.append((i, e))
        w = Word(comb, tuple(letters))
        try:
            out, steps = britton_pinch_reduce(lysenok, w)
        except BrittonStuck:
            continue
        reduced_words += 1
        counts = [t_count(s.before) for s in steps] + [t_count(out)]
        assert all(c1 > c2 for c1, c2 in zip(counts, counts[1:]))
        assert replay_pinch_trace(w, steps) == out
    assert reduced_words > 50


def test_expand_relators_annotated_provenance(lysenok):
    annotated = expand_relators_annotated(lysenok, 2)
    assert [w for _, _, w in annotated] == expand_relators(lysenok, 2)
    for seq, ri, w in annotated:
        if ri >= 0:
            expected = lysenok.r_relators[ri]
            for i in reversed(seq):
                expected = apply_substitution(lysenok.substitutions[i], expected)
            assert w == expected
