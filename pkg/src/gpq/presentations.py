"""Group presentations and the four elementary Tietze moves.

Relators are stored verbatim (possibly unreduced); two presentations are
equal only if alphabets and relator letter sequences coincide exactly.
Tietze moves return a new presentation together with the move that undoes
them, so a finite trace of moves can be replayed and inverted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DerivationDoesNotReduce, InvalidMove
from .words import Alphabet, Word, free_reduce


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        for rel in self.relators:
            if rel.alphabet != self.alphabet:
                raise ValueError("relator over a different alphabet")

    @staticmethod
    def make(gens: str, relator_texts: list[str] | tuple[str, ...] = (), name: str = "") -> "Presentation":
        """Convenience:  Presentation.make("a!, d!", ["a a", "(a d)^4"])."""
        alphabet = Alphabet.make(*[g.strip() for g in gens.split(",")])
        rels = tuple(Word.from_str(alphabet, t) for t in relator_texts)
        return Presentation(alphabet, rels, name)

    def with_name(self, name: str) -> "Presentation":
        return Presentation(self.alphabet, self.relators, name)

    def relator_words(self) -> list[str]:
        return [str(r) for r in self.relators]

    def __str__(self):
        gens = ", ".join(self.alphabet.spec(i) for i in range(len(self.alphabet)))
        rels = ", ".join(str(r) or "e" for r in self.relators)
        return f"< {gens} | {rels} >"


# --- Tietze moves -------------------------------------------------------------
#
# A derivation certificate is a product of conjugates of existing relators:
# a tuple of (conjugator word, relator index, exponent) triples.  It is
# verified by free reduction only; no search is performed.

Certificate = tuple[tuple[Word, int, int], ...]


@dataclass(frozen=True)
class T1:
    """Introduce generator `new_letter` defined by `defining_word` (adds relator y s^-1)."""

    new_letter: str
    defining_word: Word
    involutive: bool = False


@dataclass(frozen=True)
class T2:
    """Cancel a generator; requires a unique defining relator y s^-1."""

    letter: str


@dataclass(frozen=True)
class T3:
    """Introduce `relator`, justified by a derivation certificate."""

    relator: Word
    derivation: Certificate


@dataclass(frozen=True)
class T4:
    """Cancel the relator at `index`; the certificate re-derives it from the others
    (indices refer to the relator list with the removed one excluded)."""

    index: int
    derivation: Certificate


TietzeMove = T1 | T2 | T3 | T4


def _evaluate_certificate(alphabet: Alphabet, relators: tuple[Word, ...], cert: Certificate) -> Word:
    prod = Word.identity(alphabet)
    for conj, idx, exp in cert:
        if not 0 <= idx < len(relators):
            raise InvalidMove(f"certificate references relator {idx}, have {len(relators)}")
        base = relators[idx] if exp == 1 else relators[idx].inverse()
        prod = prod * conj * base * conj.inverse()
    return free_reduce(prod)


def _check_derivation(alphabet, relators, cert, target: Word, what: str):
    derived = _evaluate_certificate(alphabet, relators, cert)
    if derived.letters != free_reduce(target).letters:
        raise DerivationDoesNotReduce(
            f"{what}: certificate reduces to '{derived}', not to '{free_reduce(target)}'"
        )


def apply_move(p: Presentation, move: TietzeMove) -> tuple[Presentation, TietzeMove]:
    """Apply one Tietze move; returns (new presentation, inverse move).

    Applying the inverse move to the result restores `p` verbatim whenever the
    forward move appended material (T1/T3 always append at the end).
    """
    if isinstance(move, T1):
        if move.new_letter in p.alphabet.letters:
            raise InvalidMove(f"generator {move.new_letter!r} already present")
        if move.defining_word.alphabet != p.alphabet:
            raise InvalidMove("defining word must be over the old alphabet")
        new_alpha = Alphabet(
            p.alphabet.letters + (move.new_letter,),
            p.alphabet.involutive + (move.involutive,),
        )
        lift = lambda w: Word(new_alpha, w.letters)  # noqa: E731  (indices unchanged)
        y = Word.letter(new_alpha, move.new_letter)
        defining = y * lift(move.defining_word).inverse()
        new_rels = tuple(lift(r) for r in p.relators) + (defining,)
        return Presentation(new_alpha, new_rels, p.name), T2(move.new_letter)

    if isinstance(move, T2):
        try:
            li = p.alphabet.index(move.letter)
        except KeyError:
            raise InvalidMove(f"no generator {move.letter!r}") from None
        hits = [
            (ri, rel)
            for ri, rel in enumerate(p.relators)
            if any(idx == li for idx, _ in rel.letters)
        ]
        if len(hits) != 1:
            raise InvalidMove(
                f"generator {move.letter!r} occurs in {len(hits)} relators; need exactly one"
            )
        ri, rel = hits[0]
        # The defining relator must be literally  y s^-1  with s free of y.
        if not rel.letters or rel.letters[0] != (li, 1):
            raise InvalidMove(f"relator '{rel}' does not start with {move.letter}")
        if any(idx == li for idx, _ in rel.letters[1:]):
            raise InvalidMove(f"{move.letter!r} reoccurs inside its defining relator")
        s_inv = Word(p.alphabet, rel.letters[1:])
        defining_word = s_inv.inverse()
        new_alpha = Alphabet(
            p.alphabet.letters[:li] + p.alphabet.letters[li + 1 :],
            p.alphabet.involutive[:li] + p.alphabet.involutive[li + 1 :],
        )

        def drop(w: Word) -> Word:
            out = []
            for idx, exp in w.letters:
                out.append((idx - 1 if idx > li else idx, exp))
            return Word(new_alpha, tuple(out))

        new_rels = tuple(drop(r) for ri2, r in enumerate(p.relators) if ri2 != ri)
        inverse = T1(move.letter, drop(defining_word), p.alphabet.involutive[li])
        return Presentation(new_alpha, new_rels, p.name), inverse

    if isinstance(move, T3):
        if move.relator.alphabet != p.alphabet:
            raise InvalidMove("new relator must be over the presentation's alphabet")
        _check_derivation(p.alphabet, p.relators, move.derivation, move.relator, "T3")
        new_rels = p.relators + (move.relator,)
        return Presentation(p.alphabet, new_rels, p.name), T4(len(p.relators), move.derivation)

    if isinstance(move, T4):
        if not 0 <= move.index < len(p.relators):
            raise InvalidMove(f"no relator at index {move.index}")
        remaining = tuple(r for i, r in enumerate(p.relators) if i != move.index)
        _check_derivation(p.alphabet, remaining, move.derivation, p.relators[move.index], "T4")
        inverse = T3(p.relators[move.index], move.derivation)
        return Presentation(p.alphabet, remaining, p.name), inverse

    raise InvalidMove(f"unknown move {move!r}")


def tietze(p: Presentation, move: TietzeMove) -> Presentation:
    """Apply a move, discarding the inverse record."""
    return apply_move(p, move)[0]


@dataclass
class FiniteEquivalenceTrace:
    """A replayable, invertible sequence of Tietze moves from a start presentation."""

    start: Presentation
    steps: list[tuple[TietzeMove, TietzeMove]] = field(default_factory=list)

    @property
    def current(self) -> Presentation:
        return self._replay()[-1]

    def apply(self, move: TietzeMove) -> Presentation:
        result, inverse = apply_move(self.current, move)
        self.steps.append((move, inverse))
        return result

    def _replay(self) -> list[Presentation]:
        states = [self.start]
        for move, _ in self.steps:
            states.append(apply_move(states[-1], move)[0])
        return states

    def replay(self) -> Presentation:
        return self._replay()[-1]

    def invert(self) -> Presentation:
        """Undo every move; returns (and checks) the start presentation."""
        p = self.current
        for _, inverse in reversed(self.steps):
            p = apply_move(p, inverse)[0]
        if p != self.start:
            raise InvalidMove("trace inversion did not restore the start presentation")
        return p
