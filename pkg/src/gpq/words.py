"""Words over signed alphabets with involutive letters, and substitutions.

A word is a sequence of (letter index, exponent) pairs with exponent +1 or -1.
Letters flagged involutive satisfy g^2 = 1, so g and g^-1 are identified and
such letters are always stored with exponent +1.  Words are kept verbatim
(possibly unreduced); ``free_reduce`` computes the unique reduced form in the
free product of the letter groups (Z for ordinary letters, Z/2 for involutive
ones).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import NegativeExponent, ParseError


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]
    involutive: tuple[bool, ...]

    def __post_init__(self):
        if len(self.letters) != len(self.involutive):
            raise ValueError("letters and involutive flags differ in length")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError(f"duplicate letter names in {self.letters}")
        for name in self.letters:
            if not name or any(ch.isspace() for ch in name):
                raise ValueError(f"bad letter name {name!r}")

    @staticmethod
    def make(*specs: str) -> "Alphabet":
        """Build from specs like  Alphabet.make("a!", "c!", "d", "t").

        A trailing ``!`` marks the letter involutive.
        """
        letters, invol = [], []
        for spec in specs:
            if spec.endswith("!"):
                letters.append(spec[:-1])
                invol.append(True)
            else:
                letters.append(spec)
                invol.append(False)
        return Alphabet(tuple(letters), tuple(invol))

    def __len__(self):
        return len(self.letters)

    def index(self, name: str) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise KeyError(f"letter {name!r} not in alphabet {self.letters}") from None

    def is_involutive(self, i: int) -> bool:
        return self.involutive[i]

    def spec(self, i: int) -> str:
        return self.letters[i] + ("!" if self.involutive[i] else "")


@dataclass(frozen=True)
class Word:
    """A (possibly unreduced) word; letters are (index, exponent) pairs."""

    alphabet: Alphabet
    letters: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        n = len(self.alphabet)
        invol = self.alphabet.involutive
        clean = True
        for idx, exp in self.letters:
            if not 0 <= idx < n:
                raise ValueError(f"letter index {idx} out of range")
            if exp == -1:
                if invol[idx]:
                    clean = False
            elif exp != 1:
                raise ValueError(f"exponent must be +1 or -1, got {exp}")
        if clean:
            if not isinstance(self.letters, tuple):
                object.__setattr__(self, "letters", tuple(self.letters))
            return
        norm = tuple((idx, 1 if invol[idx] else exp) for idx, exp in self.letters)
        object.__setattr__(self, "letters", norm)

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def from_str(alphabet: Alphabet, text: str) -> "Word":
        """Parse space-separated letters; ``x'`` is the inverse of x and
        ``( ... )^k`` repeats a factor k times."""
        return Word(alphabet, tuple(_parse_word_tokens(alphabet, _tokenize_word(text))))

    @staticmethod
    def identity(alphabet: Alphabet) -> "Word":
        return Word(alphabet, ())

    @staticmethod
    def letter(alphabet: Alphabet, name: str, exp: int = 1) -> "Word":
        return Word(alphabet, ((alphabet.index(name), exp),))

    # -- monoid structure (verbatim concatenation, no reduction) --------------

    def __mul__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.alphabet, self.letters * n)

    def inverse(self) -> "Word":
        return Word(
            self.alphabet,
            tuple((idx, -exp) for idx, exp in reversed(self.letters)),
        )

    # -- queries ---------------------------------------------------------------

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.letters)

    def is_positive(self) -> bool:
        return all(exp == 1 for _, exp in self.letters)

    def is_empty(self) -> bool:
        return not self.letters

    def shortlex_key(self):
        return (len(self.letters), tuple((i, 0 if e > 0 else 1) for i, e in self.letters))

    def __str__(self):
        parts = []
        for idx, exp in self.letters:
            name = self.alphabet.letters[idx]
            parts.append(name if exp == 1 else name + "'")
        return " ".join(parts)

    def __repr__(self):
        return f"Word({str(self) or 'e'})"


def _tokenize_word(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()^'":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i:
                raise ParseError(f"unexpected character {ch!r} in word {text!r}")
            tokens.append(text[i:j])
            i = j
    return tokens


def _parse_word_tokens(alphabet: Alphabet, tokens: list[str]) -> list[tuple[int, int]]:
    pos = 0

    def parse_seq(stop_at_close: bool) -> list[tuple[int, int]]:
        nonlocal pos
        out: list[tuple[int, int]] = []
        while pos < len(tokens):
            tok = tokens[pos]
            if tok == ")":
                if not stop_at_close:
                    raise ParseError("unbalanced ')' in word")
                return out
            if tok == "(":
                pos += 1
                inner = parse_seq(True)
                if pos >= len(tokens) or tokens[pos] != ")":
                    raise ParseError("unbalanced '(' in word")
                pos += 1
                if pos < len(tokens) and tokens[pos] == "^":
                    pos += 1
                    if pos >= len(tokens) or not tokens[pos].isdigit():
                        raise ParseError("expected integer after '^'")
                    k = int(tokens[pos])
                    pos += 1
                else:
                    k = 1
                out.extend(inner * k)
                continue
            if tok in ("^", "'"):
                raise ParseError(f"unexpected {tok!r} in word")
            idx = alphabet.index(tok)
            exp = 1
            pos += 1
            if pos < len(tokens) and tokens[pos] == "'":
                exp = -1
                pos += 1
            out.append((idx, exp))
        if stop_at_close:
            raise ParseError("unbalanced '(' in word")
        return out

    result = parse_seq(False)
    if pos != len(tokens):
        raise ParseError("trailing tokens in word")
    return result


def free_reduce(word: Word) -> Word:
    """Unique reduced form in the free product of the letter groups.

    Cancels x x^-1 / x^-1 x for ordinary letters and x x for involutive ones.
    Idempotent and length-non-increasing.
    """
    stack: list[tuple[int, int]] = []
    invol = word.alphabet.involutive
    for idx, exp in word.letters:
        if stack:
            pidx, pexp = stack[-1]
            if pidx == idx and (invol[idx] or pexp == -exp):
                stack.pop()
                continue
        stack.append((idx, exp))
    return Word(word.alphabet, tuple(stack))


def cyclically_reduce(word: Word) -> Word:
    w = free_reduce(word)
    letters = list(w.letters)
    invol = word.alphabet.involutive
    while len(letters) >= 2:
        (i0, e0), (i1, e1) = letters[0], letters[-1]
        if i0 == i1 and (invol[i0] or e0 == -e1):
            letters = letters[1:-1]
        else:
            break
    return Word(word.alphabet, tuple(letters))


def rotations_and_inverses(word: Word) -> list[Word]:
    """All cyclic rotations of the word and of its inverse, deduplicated."""
    seen = {}
    for base in (word, word.inverse()):
        n = len(base)
        for k in range(max(n, 1)):
            rot = Word(word.alphabet, base.letters[k:] + base.letters[:k])
            seen.setdefault(rot.letters, rot)
    return list(seen.values())


def rename_word(word: Word, target: Alphabet, name_map: dict[str, str] | None = None) -> Word:
    """Re-read a word over another alphabet, optionally renaming letters."""
    out = []
    for idx, exp in word.letters:
        name = word.alphabet.letters[idx]
        if name_map:
            name = name_map.get(name, name)
        out.append((target.index(name), exp))
    return Word(target, tuple(out))


@dataclass(frozen=True)
class Substitution:
    """A monoid endomorphism of the positive words over an alphabet."""

    alphabet: Alphabet
    images: tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.images) != len(self.alphabet):
            raise ValueError("substitution must define an image for every letter")
        for img in self.images:
            if img.alphabet != self.alphabet:
                raise ValueError("image over a different alphabet")
            if img.is_empty():
                raise ValueError("substitution images must be nonempty")
            if not img.is_positive():
                raise ValueError("substitution images must be positive words")

    @staticmethod
    def from_rules(alphabet: Alphabet, rules: dict[str, str], name: str = "") -> "Substitution":
        images = []
        for letter in alphabet.letters:
            if letter not in rules:
                raise ValueError(f"no image for letter {letter!r}")
            images.append(Word.from_str(alphabet, rules[letter]))
        return Substitution(alphabet, tuple(images), name)

    def image_of(self, name: str) -> Word:
        return self.images[self.alphabet.index(name)]


def apply_substitution(sub: Substitution, word: Word) -> Word:
    """Concatenation of letter images; unreduced. Requires a positive word."""
    if word.alphabet != sub.alphabet:
        raise ValueError("word over a different alphabet")
    out: list[tuple[int, int]] = []
    for idx, exp in word.letters:
        if exp != 1:
            raise NegativeExponent(
                f"substitution applied to inverse letter {word.alphabet.letters[idx]}'"
            )
        out.extend(sub.images[idx].letters)
    return Word(sub.alphabet, tuple(out))


def iterate_substitution(sub: Substitution, word: Word, n: int) -> Word:
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    for _ in range(n):
        word = apply_substitution(sub, word)
    return word


def words_of_length(alphabet: Alphabet, length: int) -> Iterable[Word]:
    """All words of exactly the given length.

    Involutive letters contribute one symbol, ordinary letters two (x and x').
    """
    symbols: list[tuple[int, int]] = []
    for i in range(len(alphabet)):
        symbols.append((i, 1))
        if not alphabet.involutive[i]:
            symbols.append((i, -1))

    def rec(prefix: list[tuple[int, int]]):
        if len(prefix) == length:
            yield Word(alphabet, tuple(prefix))
            return
        for sym in symbols:
            prefix.append(sym)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def words_up_to_length(alphabet: Alphabet, max_length: int) -> Iterable[Word]:
    for n in range(max_length + 1):
        yield from words_of_length(alphabet, n)
