"""Endomorphic presentations, their HNN extensions, and pinch reduction.

An endomorphic presentation < S | Q | Phi | R > presents the quotient of F(S)
by Q together with every image of R under the monoid generated by Phi.  Adding
one stable letter per member of Phi, with conjugacy relations t s t^-1 =
phi(s), yields a finitely presented generalized HNN extension.  Killing the
original generators leaves the free group L on the stable letters; its
positive monoid orders the extension's "horizontal" levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import BrittonStuck, NegativeExponent, NotInImage
from .presentations import Presentation
from .words import Alphabet, Substitution, Word, apply_substitution, free_reduce


@dataclass(frozen=True)
class EndomorphicPresentation:
    """< S | Q | Phi | R >: base relators Q, iterated relators R, substitutions Phi.

    Each substitution is assumed to induce an injective endomorphism of the
    presented group; that hypothesis is recorded, not decided.  Ascending
    means Q is empty.
    """

    alphabet: Alphabet
    q_relators: tuple[Word, ...]
    substitutions: tuple[Substitution, ...]
    r_relators: tuple[Word, ...]
    stable_names: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        for w in self.q_relators + self.r_relators:
            if w.alphabet != self.alphabet:
                raise ValueError("relator over a different alphabet")
        for sub in self.substitutions:
            if sub.alphabet != self.alphabet:
                raise ValueError("substitution over a different alphabet")
        if not self.stable_names:
            names = []
            for i, sub in enumerate(self.substitutions):
                names.append(sub.name or f"t{i}")
            # stable letters must avoid the base alphabet
            fixed = []
            for n in names:
                candidate = n if n not in self.alphabet.letters else n + "_t"
                while candidate in self.alphabet.letters or candidate in fixed:
                    candidate += "_"
                fixed.append(candidate)
            object.__setattr__(self, "stable_names", tuple(fixed))
        if len(self.stable_names) != len(self.substitutions):
            raise ValueError("one stable name per substitution required")

    @property
    def is_ascending(self) -> bool:
        return not self.q_relators

    @property
    def is_finite(self) -> bool:
        return True  # all four sets are finite by construction

    def combined_alphabet(self) -> Alphabet:
        return Alphabet(
            self.alphabet.letters + self.stable_names,
            self.alphabet.involutive + (False,) * len(self.stable_names),
        )


def expand_relators_annotated(
    ep: EndomorphicPresentation, depth: int
) -> list[tuple[tuple[int, ...], int, Word]]:
    """Like expand_relators, with (composition sequence, relator index) provenance.

    Q entries carry the sentinel provenance ((), -1-q_index).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    out = []
    seen = set()

    def emit(seq, ri, w: Word):
        if w.letters not in seen:
            seen.add(w.letters)
            out.append((seq, ri, w))

    for qi, q in enumerate(ep.q_relators):
        emit((), -1 - qi, q)
    k_indices = range(len(ep.substitutions))
    for k in range(depth + 1):
        for seq in product(k_indices, repeat=k):
            for ri, r in enumerate(ep.r_relators):
                w = r
                for i in reversed(seq):  # phi_{i1} applied last
                    w = apply_substitution(ep.substitutions[i], w)
                emit(seq, ri, w)
    return out


def expand_relators(ep: EndomorphicPresentation, depth: int) -> list[Word]:
    """Q together with every composite phi_{i1}(...phi_{ik}(r)) for k <= depth.

    Images are unreduced words, deduplicated by exact letter sequence, in
    deterministic order: Q first, then by (k, composition sequence, relator
    index).
    """
    return [w for _, _, w in expand_relators_annotated(ep, depth)]


def hnn_presentation(ep: EndomorphicPresentation) -> Presentation:
    """The finitely presented HNN extension over S plus the stable letters.

    Relators: Q, R, and one conjugacy relator  t s t^-1 phi(s)^-1  per stable
    letter t and base letter s (orientation t s t^-1 = phi(s)).
    """
    combined = ep.combined_alphabet()
    lift = lambda w: Word(combined, w.letters)  # noqa: E731  (base indices unchanged)
    relators = [lift(w) for w in ep.q_relators]
    relators += [lift(w) for w in ep.r_relators]
    for ti, sub in enumerate(ep.substitutions):
        t = Word.letter(combined, ep.stable_names[ti])
        for si in range(len(ep.alphabet)):
            s = Word(combined, ((si, 1),))
            image = lift(sub.images[si])
            relators.append(t * s * t.inverse() * image.inverse())
    name = ep.name + "_hnn" if ep.name else "hnn"
    return Presentation(combined, tuple(relators), name)


def stable_projection(ep: EndomorphicPresentation, word: Word) -> Word:
    """Project to the free group on the stable letters: delete base letters, reduce."""
    combined = ep.combined_alphabet()
    if word.alphabet != combined:
        raise ValueError("word must be over the combined alphabet")
    base = len(ep.alphabet)
    stable_alpha = Alphabet(ep.stable_names, (False,) * len(ep.stable_names))
    kept = tuple((idx - base, exp) for idx, exp in word.letters if idx >= base)
    return free_reduce(Word(stable_alpha, kept))


def is_positive(word: Word) -> bool:
    """Positive elements of L: nonempty products of stable letters, no inverses."""
    return not word.is_empty() and word.is_positive()


def order_less(y: Word, x: Word) -> bool:
    """y < x iff y^-1 x is positive.  A strict partial order on reduced words."""
    return is_positive(free_reduce(y.inverse() * x))


# --- decoding substitution images --------------------------------------------------


@dataclass(frozen=True)
class DecodeResult:
    source: Word
    ambiguous: bool


def sigma_decode(sub: Substitution, word: Word, with_flags: bool = False):
    """Invert the free-monoid map: find v with sub(v) letter-identical to word.

    Dynamic programming over suffix positions; among multiple parses the
    shortlex-least source is returned (`with_flags=True` also reports
    ambiguity).  Raises NotInImage when no parse exists.
    """
    if not word.is_positive():
        raise NegativeExponent("decoding applies to positive words only")
    n = len(word)
    letters = word.letters
    images = [img.letters for img in sub.images]
    # best[pos] = shortlex-least source decoding word[pos:], parses[pos] = count (capped)
    best: list[tuple | None] = [None] * (n + 1)
    counts = [0] * (n + 1)
    best[n] = ()
    counts[n] = 1
    for pos in range(n - 1, -1, -1):
        options = []
        total = 0
        for li, img in enumerate(images):
            L = len(img)
            if pos + L <= n and letters[pos : pos + L] == img and best[pos + L] is not None:
                options.append(((li, 1),) + best[pos + L])
                total += counts[pos + L]
        if options:
            best[pos] = min(options, key=lambda s: (len(s), s))
            counts[pos] = min(total, 2)
    if best[0] is None:
        raise NotInImage(f"'{word}' is not a product of images of {sub.name or 'the substitution'}")
    source = Word(sub.alphabet, best[0])
    assert apply_substitution(sub, source).letters == word.letters
    if with_flags:
        return DecodeResult(source, counts[0] > 1)
    return source


# --- Britton pinch reduction ---------------------------------------------------------


@dataclass(frozen=True)
class PinchStep:
    before: Word
    position: int
    length: int
    replacement: Word
    kind: str  # "expand" (t u t^-1 -> phi(u)) or "decode" (t^-1 u t -> sigma^-1(u))


def britton_pinch_reduce(
    ep: EndomorphicPresentation, word: Word, step_cap: int = 10_000
) -> tuple[Word, tuple[PinchStep, ...]]:
    """Remove innermost stable-letter pinches until none is left.

    t u t^-1 with u over S becomes the substitution image of u; t^-1 u t
    becomes the decoded source when u is letter-identical decodable (after
    free reduction), else the reduction is Stuck: membership of u in the image
    subgroup is only tested up to free-monoid decoding, so the operation is
    sound but not complete.  Each step strictly decreases the number of
    stable letters.
    """
    if len(ep.substitutions) != 1:
        raise ValueError("pinch reduction implemented for a single stable letter")
    combined = ep.combined_alphabet()
    if word.alphabet != combined:
        raise ValueError("word must be over the combined alphabet")
    sub = ep.substitutions[0]
    t_idx = len(ep.alphabet)
    steps: list[PinchStep] = []
    current = word

    def find_pinch(letters):
        # innermost: a t^e ... t^-e pair with only base letters between
        last_t = None
        for k, (idx, exp) in enumerate(letters):
            if idx != t_idx:
                continue
            if last_t is not None:
                k0, e0 = last_t
                if e0 == -exp:
                    return k0, k, e0
            last_t = (k, exp)
        return None

    while True:
        if len(steps) >= step_cap:
            raise BrittonStuck("step cap reached", word=current, trace=tuple(steps))
        pinch = find_pinch(current.letters)
        if pinch is None:
            return current, tuple(steps)
        k0, k1, e0 = pinch
        middle = Word(ep.alphabet, tuple(current.letters[k0 + 1 : k1]))
        if e0 == 1:
            # t u t^-1 = phi(u); extend phi to inverses via phi(s^-1) = phi(s)^-1
            replacement = _apply_to_signed(sub, middle)
            kind = "expand"
        else:
            reduced = free_reduce(middle)
            if not reduced.is_positive():
                raise BrittonStuck(
                    f"pinch middle '{middle}' is not positive after reduction",
                    word=current,
                    trace=tuple(steps),
                )
            try:
                replacement = sigma_decode(sub, reduced)
            except NotInImage:
                raise BrittonStuck(
                    f"pinch middle '{reduced}' is not letter-identical decodable",
                    word=current,
                    trace=tuple(steps),
                ) from None
            kind = "decode"
        lifted = Word(combined, replacement.letters)
        steps.append(PinchStep(current, k0, k1 - k0 + 1, lifted, kind))
        current = Word(
            combined,
            current.letters[:k0] + lifted.letters + current.letters[k1 + 1 :],
        )


def _apply_to_signed(sub: Substitution, word: Word) -> Word:
    out: list[tuple[int, int]] = []
    for idx, exp in word.letters:
        img = sub.images[idx]
        if exp == 1:
            out.extend(img.letters)
        else:
            out.extend(img.inverse().letters)
    return Word(sub.alphabet, tuple(out))


def replay_pinch_trace(word: Word, steps: tuple[PinchStep, ...]) -> Word:
    current = word
    for st in steps:
        assert current == st.before
        current = Word(
            current.alphabet,
            current.letters[: st.position]
            + st.replacement.letters
            + current.letters[st.position + st.length :],
        )
    return current
