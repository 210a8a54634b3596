"""Word-problem oracles: finite tables, free / free-abelian groups, B(1,n).

Every oracle maps words over its alphabet to canonical normal-form words;
`is_identity(w)` iff the normal form is empty.  Oracles are immutable after
construction and safe for concurrent queries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadOrder, Unsupported
from .words import Alphabet, Word, free_reduce


class WordOracle:
    """Interface: normal_form / is_identity, plus a descriptor string."""

    alphabet: Alphabet

    def normal_form(self, word: Word) -> Word:
        raise NotImplementedError

    def is_identity(self, word: Word) -> bool:
        return self.normal_form(word).is_empty()

    def describe(self) -> str:
        raise NotImplementedError


# --- finite groups by multiplication table --------------------------------------


@dataclass(frozen=True)
class FiniteGroupTable(WordOracle):
    """A finite group given by its full multiplication table.

    Index 0 is the identity; element_names[i] is the canonical word for
    element i (shortlex-first over the generating alphabet); generator_map
    sends alphabet letters to element indices.
    """

    alphabet: Alphabet
    element_names: tuple[Word, ...]
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    generator_map: tuple[int, ...]

    def __post_init__(self):
        n = len(self.element_names)
        assert self.element_names[0].is_empty(), "index 0 must be the identity"
        for i in range(n):
            assert self.mul[0][i] == i and self.mul[i][0] == i
            assert self.mul[i][self.inv[i]] == 0 and self.mul[self.inv[i]][i] == 0

    @property
    def order(self) -> int:
        return len(self.element_names)

    def check_associative(self) -> bool:
        n = self.order
        return all(
            self.mul[self.mul[i][j]][k] == self.mul[i][self.mul[j][k]]
            for i in range(n)
            for j in range(n)
            for k in range(n)
        )

    def evaluate(self, word: Word) -> int:
        acc = 0
        for idx, exp in word.letters:
            g = self.generator_map[idx]
            acc = self.mul[acc][g if exp == 1 else self.inv[g]]
        return acc

    def multiply_indices(self, *indices: int) -> int:
        acc = 0
        for i in indices:
            acc = self.mul[acc][i]
        return acc

    def normal_form(self, word: Word) -> Word:
        return self.element_names[self.evaluate(word)]

    def is_identity(self, word: Word) -> bool:
        return self.evaluate(word) == 0

    def describe(self) -> str:
        gens = ",".join(self.alphabet.letters)
        return f"finite group of order {self.order} on <{gens}>"

    @staticmethod
    def from_generators(alphabet: Alphabet, values, compose, identity) -> "FiniteGroupTable":
        """Closure of abstract generator values under `compose`.

        Elements are discovered by shortlex BFS over positive letters (and
        inverses for non-involutive ones); the first word reaching an element
        becomes its canonical name.
        """
        gen_syms: list[tuple[int, int]] = []
        for i in range(len(alphabet)):
            gen_syms.append((i, 1))
            if not alphabet.involutive[i]:
                gen_syms.append((i, -1))
        # values for the symbols; inverse value found by power search later
        elems = {identity: 0}
        names = [Word.identity(alphabet)]
        value_list = [identity]
        frontier = [(Word.identity(alphabet), identity)]
        sym_values = {}
        for idx, exp in gen_syms:
            v = values[idx]
            if exp == -1:
                # finite order: invert by repeated composition
                w = v
                prev = identity
                while w != identity:
                    prev = w
                    w = compose(w, v)
                v = prev if v != identity else identity
            sym_values[(idx, exp)] = v
        while frontier:
            new_frontier = []
            for word, val in frontier:
                for sym in gen_syms:
                    nval = compose(val, sym_values[sym])
                    if nval not in elems:
                        elems[nval] = len(value_list)
                        nword = Word(alphabet, word.letters + (sym,))
                        names.append(nword)
                        value_list.append(nval)
                        new_frontier.append((nword, nval))
            frontier = new_frontier
        n = len(value_list)
        mul = tuple(
            tuple(elems[compose(value_list[i], value_list[j])] for j in range(n))
            for i in range(n)
        )
        inv = []
        for i in range(n):
            inv.append(next(j for j in range(n) if mul[i][j] == 0))
        gmap = tuple(elems[values[i]] for i in range(len(alphabet)))
        table = FiniteGroupTable(alphabet, tuple(names), mul, tuple(inv), gmap)
        # generator images must generate everything (closure did exactly that)
        assert len(set(range(n))) == n
        return table


def dihedral_group(order: int, names: tuple[str, str] = ("x", "y")) -> FiniteGroupTable:
    """Dihedral group of the given (even) order as a table over two involutions.

    Presented by x^2 = y^2 = (xy)^m = 1 with order = 2m; canonical element
    names are the alternating words discovered shortlex-first.
    """
    if order < 2 or order % 2 != 0:
        raise BadOrder(f"dihedral order must be even and >= 2, got {order}")
    m = order // 2
    alphabet = Alphabet.make(names[0] + "!", names[1] + "!")

    # elements (r, f): x -> n x? no: composition in the semidirect product Z/m x Z/2
    def compose(p, q):
        r1, f1 = p
        r2, f2 = q
        return ((r1 + (r2 if f1 == 0 else -r2)) % m, (f1 + f2) % 2)

    x = (0, 1)
    y = (1 % m, 1)
    return FiniteGroupTable.from_generators(alphabet, [x, y], compose, (0, 0))


def klein_group(names: tuple[str, str] = ("c", "d")) -> FiniteGroupTable:
    """The Klein four-group on two commuting involutions."""

    def compose(p, q):
        return ((p[0] + q[0]) % 2, (p[1] + q[1]) % 2)

    alphabet = Alphabet.make(names[0] + "!", names[1] + "!")
    return FiniteGroupTable.from_generators(alphabet, [(1, 0), (0, 1)], compose, (0, 0))


def cyclic_group(n: int, name: str = "x") -> FiniteGroupTable:
    alphabet = Alphabet.make(name + ("!" if n == 2 else ""))
    return FiniteGroupTable.from_generators(
        alphabet, [1 % n], lambda p, q: (p + q) % n, 0
    )


# --- free and free-abelian groups ------------------------------------------------

_DEFAULT_NAMES = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class FreeGroupOracle(WordOracle):
    alphabet: Alphabet

    def normal_form(self, word: Word) -> Word:
        return free_reduce(word)

    def describe(self) -> str:
        return f"free group of rank {len(self.alphabet)}"


@dataclass(frozen=True)
class FreeAbelianOracle(WordOracle):
    alphabet: Alphabet

    def normal_form(self, word: Word) -> Word:
        exps = [0] * len(self.alphabet)
        for idx, exp in word.letters:
            exps[idx] += exp
        letters = []
        for i, e in enumerate(exps):
            sign = 1 if e > 0 else -1
            letters.extend([(i, sign)] * abs(e))
        return Word(self.alphabet, tuple(letters))

    def describe(self) -> str:
        return f"free abelian group of rank {len(self.alphabet)}"


def free_oracle(k: int, alphabet: Alphabet | None = None) -> FreeGroupOracle:
    if alphabet is None:
        alphabet = Alphabet.make(*_DEFAULT_NAMES[:k])
    return FreeGroupOracle(alphabet)


def free_abelian_oracle(k: int, alphabet: Alphabet | None = None) -> FreeAbelianOracle:
    if alphabet is None:
        alphabet = Alphabet.make(*_DEFAULT_NAMES[:k])
    return FreeAbelianOracle(alphabet)


# --- Baumslag-Solitar B(1, n) ----------------------------------------------------


@dataclass(frozen=True)
class BaumslagSolitarOracle(WordOracle):
    """B(1,n) = < a, b | a b a^-1 b^-n >, normal form a^-p b^q a^r.

    Here p, r >= 0 and n does not divide q when both p and r are positive.
    Computed by confluent syllable rewriting: positive a-syllables migrate
    right across b-blocks (a b^q -> b^(nq) a), negative ones migrate left,
    and a^-1 b^(nq) a collapses to b^q.
    """

    alphabet: Alphabet
    n: int

    def _syllables(self, word: Word) -> list[list[int]]:
        syls: list[list[int]] = []
        for idx, exp in word.letters:
            if syls and syls[-1][0] == idx:
                syls[-1][1] += exp
                if syls[-1][1] == 0:
                    syls.pop()
            else:
                syls.append([idx, exp])
        return syls

    def _rewrite(self, syls: list[list[int]]) -> list[list[int]]:
        n = self.n
        A, B = 0, 1
        changed = True
        while changed:
            changed = False
            # merge adjacent same-generator syllables, drop zeros
            i = 0
            while i < len(syls) - 1:
                if syls[i][0] == syls[i + 1][0]:
                    syls[i][1] += syls[i + 1][1]
                    del syls[i + 1]
                    if syls[i][1] == 0:
                        del syls[i]
                        i = max(i - 1, 0)
                    changed = True
                else:
                    i += 1
            for i in range(len(syls) - 1):
                g1, e1 = syls[i]
                g2, e2 = syls[i + 1]
                if g1 == A and e1 > 0 and g2 == B:
                    # a^e b^q = b^(q n^e) a^e
                    syls[i], syls[i + 1] = [B, e2 * n**e1], [A, e1]
                    changed = True
                    break
                if g1 == B and g2 == A and e2 < 0:
                    # b^q a^-e = a^-e b^(q n^e)
                    syls[i], syls[i + 1] = [A, e2], [B, e1 * n**-e2]
                    changed = True
                    break
            if changed:
                continue
            # a^-1 b^(nq) a -> b^q  (canonicality: minimal middle block)
            for i in range(len(syls) - 2):
                if (
                    syls[i][0] == A
                    and syls[i][1] < 0
                    and syls[i + 1][0] == B
                    and syls[i + 2][0] == A
                    and syls[i + 2][1] > 0
                    and syls[i + 1][1] % n == 0
                ):
                    syls[i][1] += 1
                    syls[i + 1][1] //= n
                    syls[i + 2][1] -= 1
                    changed = True
                    break
        return [s for s in syls if s[1] != 0]

    def normal_form(self, word: Word) -> Word:
        syls = self._rewrite(self._syllables(word))
        letters = []
        for gen, exp in syls:
            sign = 1 if exp > 0 else -1
            letters.extend([(gen, sign)] * abs(exp))
        return Word(self.alphabet, tuple(letters))

    def evaluate_affine(self, word: Word) -> tuple[int, Fraction]:
        """Faithful affine model (a: x -> n x, b: x -> x + 1) for cross-checks.

        The word maps to x -> n^k x + q; appending a letter composes on the
        right, so b contributes n^k at the current scale k.
        """
        k = 0
        q = Fraction(0)
        for idx, exp in word.letters:
            if idx == 0:
                k += exp
            else:
                q += exp * Fraction(self.n) ** k
        return k, q

    def describe(self) -> str:
        return f"Baumslag-Solitar group B(1,{self.n})"


def bs_oracle(m: int, n: int, names: tuple[str, str] = ("a", "b")) -> BaumslagSolitarOracle:
    """Oracle for B(m,n); only the solvable case m = 1 is implemented."""
    if m != 1:
        raise Unsupported(f"only B(1,n) has a built-in oracle, got m={m}")
    if n < 1:
        raise Unsupported(f"need n >= 1, got n={n}")
    alphabet = Alphabet.make(names[0], names[1])
    return BaumslagSolitarOracle(alphabet, n)
