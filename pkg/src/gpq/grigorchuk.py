"""Machine verification of the self-similar induction identities for the
Grigorchuk group's recursive presentations.

Three presentation variants are carried: the four-generator one on a,b,c,d
and the three-generator ones on a,c,d (substitution a->aca, c->cd, d->c) and
a,b,d (substitution a->abda, b->d, d->bd).  The pipeline induces relators of
the normal subgroup generated by b (quotient D_8 = <a,d>) from the a,b,d
variant, transports them through the tree isomorphism into conjugated
d-relators (quotient D_16 = <a,c>), and checks that each transported relator
is the next member of the relator family, conjugated accordingly.

Equality of the transported and expected words is reported at three levels:

* free      - letter-exact after involutive free reduction;
* klein     - in <a> * V, V the Klein group on c,d (relators c2, d2, (cd)2);
* dihedral  - in D_16 * <d>, i.e. also modulo (acac)^4, itself the first
              iterated relator of the family.

The identities close at the dihedral level: expanding the conjugated
d-letters multiplies neighbouring conjugator words inside the finite quotient
<a,c>, which free reduction alone cannot see.  Each report states the first
level at which its case closes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .backends import FiniteGroupTable, dihedral_group, klein_group
from .errors import DegenerateCase
from .induction import SplitExtensionData, YLetter, basic_relation, conjugate_relation
from .presentations import Presentation
from .words import (
    Alphabet,
    Substitution,
    Word,
    free_reduce,
    iterate_substitution,
    rename_word,
)

@dataclass(frozen=True)
class GrigorchukData:
    """All fixed data of the computation: variants, quotients, transport maps."""

    abcd: Alphabet
    acd: Alphabet
    abd: Alphabet
    sigma_abcd: Substitution
    sigma_acd: Substitution
    sigma_abd: Substitution
    seeds: dict
    d8: FiniteGroupTable
    d16: FiniteGroupTable
    klein_cd: FiniteGroupTable
    b_extension: SplitExtensionData
    a_extension: SplitExtensionData
    phi0_table: tuple[int, ...]  # D8 element -> D16 element
    phi1_table: tuple[int, ...]
    psi_formulas: dict = field(default_factory=dict)
    b_generators: tuple[str, ...] = ()

    # -- presentations ---------------------------------------------------------

    def presentation(self, variant: str, depth: int = 0) -> Presentation:
        """Seed presentation of the requested variant with families up to depth."""
        alphabet, sigma = self._variant(variant)
        relators = []
        if variant == "abcd":
            relators.append(Word.from_str(alphabet, "b c d"))
        for n in range(depth + 1):
            for fam in ("w", "z"):
                relators.append(self.relator_family(variant, fam, n))
        return Presentation(alphabet, tuple(relators), f"grigorchuk_{variant}")

    def _variant(self, variant: str):
        try:
            return {
                "abcd": (self.abcd, self.sigma_abcd),
                "acd": (self.acd, self.sigma_acd),
                "abd": (self.abd, self.sigma_abd),
            }[variant]
        except KeyError:
            raise ValueError(f"unknown variant {variant!r}") from None

    def relator_family(self, variant: str, family: str, n: int) -> Word:
        """w_n or z_n: the n-th iterate of the family seed, unreduced."""
        if n < 0:
            raise ValueError("n must be >= 0")
        alphabet, sigma = self._variant(variant)
        seed = Word.from_str(alphabet, self.seeds[(variant, family)])
        return iterate_substitution(sigma, seed, n)

    # -- transport maps ----------------------------------------------------------

    def phi0_word(self, x: int) -> Word:
        """Canonical <a,c>-word of the image of the D8 element x."""
        return rename_word(self.d16.element_names[self.phi0_table[x]], self.acd)

    def phi1_word(self, x: int) -> Word:
        return rename_word(self.d16.element_names[self.phi1_table[x]], self.acd)

    def phi0_hat(self, word: Word) -> Word:
        """Letterwise a -> aca, b -> d, d -> c on positive a,b,d-words, reduced.

        Extends the quotient isomorphism to the monoid; coincides with the
        composite translate(sigma_abd(.)) on every positive word.
        """
        if word.alphabet != self.abd:
            raise ValueError("phi0_hat expects a word over the a,b,d alphabet")
        images = {
            "a": Word.from_str(self.acd, "a c a"),
            "b": Word.from_str(self.acd, "d"),
            "d": Word.from_str(self.acd, "c"),
        }
        return _letterwise(word, self.acd, images)

    def translate_bd_to_cd(self, word: Word) -> Word:
        """Substitute b -> cd (the Klein relation bcd = 1), involutively reduce."""
        if word.alphabet != self.abd:
            raise ValueError("translate expects a word over the a,b,d alphabet")
        images = {
            "a": Word.from_str(self.acd, "a"),
            "b": Word.from_str(self.acd, "c d"),
            "d": Word.from_str(self.acd, "d"),
        }
        return _letterwise(word, self.acd, images)

    # -- normal forms for the equality levels -------------------------------------

    def klein_nf(self, word: Word):
        """Normal form in <a> * V, V the Klein four-group on c, d."""
        return _free_product_nf(word, self.klein_cd, {"c": 0, "d": 1}, ("a",))

    def dihedral_nf(self, word: Word):
        """Normal form in D_16 * <d>: maximal a,c-blocks evaluated in D_16."""
        return _free_product_nf(word, self.d16, {"a": 0, "c": 1}, ("d",))


def _letterwise(word: Word, target: Alphabet, images: dict) -> Word:
    out: list[tuple[int, int]] = []
    for idx, exp in word.letters:
        if exp != 1:
            raise ValueError("letterwise maps apply to positive words")
        out.extend(images[word.alphabet.letters[idx]].letters)
    return free_reduce(Word(target, tuple(out)))


def _free_product_nf(word: Word, table: FiniteGroupTable, embed: dict, passthrough):
    """Syllable normal form in (group of `table`) * (free product of passthrough
    involutions).  Returns a tuple of ('t', element) and ('p', letter) syllables.

    Passthrough letters must be involutive; cancelling an incoming letter with
    the stack top never creates new adjacencies, so one pass suffices.
    """
    stack: list = []

    def push_table(elem: int):
        if stack and stack[-1][0] == "t":
            merged = table.mul[stack.pop()[1]][elem]
            if merged != 0:
                stack.append(("t", merged))
            return
        if elem != 0:
            stack.append(("t", elem))

    for idx, exp in word.letters:
        name = word.alphabet.letters[idx]
        if name in embed:
            g = table.generator_map[embed[name]]
            push_table(g if exp == 1 else table.inv[g])
        elif name in passthrough:
            assert word.alphabet.involutive[idx], "passthrough letters must be involutive"
            if stack and stack[-1] == ("p", name):
                stack.pop()
            else:
                stack.append(("p", name))
        else:
            raise ValueError(f"letter {name!r} is neither embedded nor passthrough")
    return tuple(stack)


def make_grigorchuk_data() -> GrigorchukData:
    abcd = Alphabet.make("a!", "b!", "c!", "d!")
    acd = Alphabet.make("a!", "c!", "d!")
    abd = Alphabet.make("a!", "b!", "d!")
    sigma_abcd = Substitution.from_rules(
        abcd, {"a": "a c a", "b": "d", "c": "b", "d": "c"}, "sigma"
    )
    sigma_acd = Substitution.from_rules(acd, {"a": "a c a", "c": "c d", "d": "c"}, "sigma")
    sigma_abd = Substitution.from_rules(abd, {"a": "a b d a", "b": "d", "d": "b d"}, "sigma")
    seeds = {
        ("abcd", "w"): "(a d)^4",
        ("abcd", "z"): "(a d a c a c)^4",
        ("acd", "w"): "(a d)^4",
        ("acd", "z"): "(a d a c a c)^4",
        ("abd", "w"): "(a d)^4",
        ("abd", "z"): "(a d a b d a b d)^4",
    }
    d8 = dihedral_group(8, names=("a", "d"))
    d16 = dihedral_group(16, names=("a", "c"))
    klein_cd = klein_group(names=("c", "d"))

    # split extension 1 -> B -> G -> D8 = <a, d> -> 1 over the a,b,d variant
    p_abd = Presentation(
        abd,
        (
            Word.from_str(abd, seeds[("abd", "w")]),
            Word.from_str(abd, seeds[("abd", "z")]),
        ),
        "grigorchuk_abd",
    )
    b_ext = SplitExtensionData(
        presentation=p_abd,
        quotient=d8,
        p_map=(d8.generator_map[0], 0, d8.generator_map[1]),  # a -> a, b -> e, d -> d
        lifts=tuple(rename_word(nm, abd) for nm in d8.element_names),
    )

    # split extension 1 -> A -> G -> D16 = <a, c> -> 1 over the a,c,d variant
    p_acd = Presentation(
        acd,
        (
            Word.from_str(acd, seeds[("acd", "w")]),
            Word.from_str(acd, seeds[("acd", "z")]),
        ),
        "grigorchuk_acd",
    )
    a_ext = SplitExtensionData(
        presentation=p_acd,
        quotient=d16,
        p_map=(d16.generator_map[0], d16.generator_map[1], 0),  # a -> a, c -> c, d -> e
        lifts=tuple(rename_word(nm, acd) for nm in d16.element_names),
    )

    # phi0: D8 = <a,d>  ~->  <c, aca> <= D16,  a -> aca, d -> c
    sub_word = {"a": Word.from_str(acd, "a c a"), "d": Word.from_str(acd, "c")}
    phi0 = []
    for nm in d8.element_names:
        img: list[tuple[int, int]] = []
        for idx, _ in nm.letters:
            img.extend(sub_word[d8.alphabet.letters[idx]].letters)
        phi0.append(a_ext._image_of(Word(acd, tuple(img))))
    a_elem = d16.generator_map[0]
    phi1 = [d16.multiply_indices(a_elem, g, a_elem) for g in phi0]

    psi = {
        "b": ("a", "c"),
        "c": ("a", "d"),
        "d": ("1", "b"),
        "aba": ("c", "a"),
        "aca": ("d", "a"),
        "ada": ("b", "1"),
    }
    return GrigorchukData(
        abcd=abcd,
        acd=acd,
        abd=abd,
        sigma_abcd=sigma_abcd,
        sigma_acd=sigma_acd,
        sigma_abd=sigma_abd,
        seeds=seeds,
        d8=d8,
        d16=d16,
        klein_cd=klein_cd,
        b_extension=b_ext,
        a_extension=a_ext,
        phi0_table=tuple(phi0),
        phi1_table=tuple(phi1),
        psi_formulas=psi,
        b_generators=("b", "aba", "(bada)^2", "(abad)^2"),
    )


# --- transport and verification ------------------------------------------------------


def transport_induced_relation(
    data: GrigorchukData, relation: tuple[YLetter, ...], factor: str
) -> Word:
    """Expand a conjugated-b relator into a word over a,c,d.

    Each ^x b becomes u d u^-1 with u = phi0(x) for the second direct factor
    and u = a phi0(x) for the first (the a-conjugated embedding); the
    concatenation is involutively reduced.
    """
    if factor not in ("first", "second"):
        raise ValueError("factor must be 'first' or 'second'")
    out: list[tuple[int, int]] = []
    a_letter = (data.acd.index("a"), 1)
    d_letter = (data.acd.index("d"), 1)
    for yl in relation:
        u = list(data.phi0_word(yl.conjugator).letters)
        if factor == "first":
            u = [a_letter] + u
        out.extend(u)
        out.append(d_letter)
        out.extend(reversed(u))  # involutive inverse
    return free_reduce(Word(data.acd, tuple(out)))


@dataclass(frozen=True)
class VerificationReport:
    n: int
    family: str
    factor: str
    x: int
    x_name: str
    expected: Word
    computed: Word
    equal_free: bool
    equal_klein: bool
    equal_dihedral: bool
    level: str | None
    y_letters: int

    @property
    def equal(self) -> bool:
        return self.level is not None

    def case_id(self) -> str:
        return f"n={self.n} {self.family} {self.factor} x={self.x_name or 'e'}"

    def to_dict(self) -> dict:
        return {
            "case": self.case_id(),
            "n": self.n,
            "family": self.family,
            "factor": self.factor,
            "x": self.x_name or "e",
            "equal": self.equal,
            "level": self.level,
            "equal_free": self.equal_free,
            "equal_klein": self.equal_klein,
            "equal_dihedral": self.equal_dihedral,
            "expected_length": len(self.expected),
            "computed_length": len(self.computed),
            "y_letters": self.y_letters,
        }


def verify_sigma_identity(
    data: GrigorchukData, n: int, family: str, factor: str, x: int
) -> VerificationReport:
    """Check one induced-relator identity.

    The induced relator ^x T(w_n) (built over D_8), transported into
    conjugated d-letters, must equal  C sigma(w_n) C^-1  with C = phi0(x)
    (second factor) or a phi0(x) (first factor), where sigma(w_n) = w_{n+1}
    is read over a,c,d through b -> cd.  Equality is reported at the free,
    Klein, and dihedral levels; inequality is reported, never raised.
    """
    wn = data.relator_family("abd", family, n)
    basic = basic_relation(wn, data.b_extension)
    if not basic:
        raise DegenerateCase(f"{family}_{n} has no inducible letters (b-free)")
    relation = conjugate_relation(basic, x, data.b_extension)
    computed = transport_induced_relation(data, relation, factor)

    w_next = data.relator_family("abd", family, n + 1)
    core = data.translate_bd_to_cd(w_next)
    conj = data.phi0_word(x)
    if factor == "first":
        conj = Word.from_str(data.acd, "a") * conj
    expected = free_reduce(conj * core * conj.inverse())

    equal_free = computed.letters == expected.letters
    equal_klein = data.klein_nf(computed) == data.klein_nf(expected)
    equal_dihedral = data.dihedral_nf(computed) == data.dihedral_nf(expected)
    level = (
        "free"
        if equal_free
        else "klein" if equal_klein else "dihedral" if equal_dihedral else None
    )
    return VerificationReport(
        n=n,
        family=family,
        factor=factor,
        x=x,
        x_name=str(data.d8.element_names[x]),
        expected=expected,
        computed=computed,
        equal_free=equal_free,
        equal_klein=equal_klein,
        equal_dihedral=equal_dihedral,
        level=level,
        y_letters=len(relation),
    )


@dataclass(frozen=True)
class VerificationSummary:
    total: int
    equal: int
    by_level: dict
    skipped: tuple[str, ...]

    @property
    def all_equal(self) -> bool:
        return self.total == self.equal

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "equal": self.equal,
            "all_equal": self.all_equal,
            "by_level": dict(sorted(self.by_level.items())),
            "skipped": list(self.skipped),
        }


def run_full_verification(
    data: GrigorchukData, max_n: int
) -> tuple[list[VerificationReport], VerificationSummary]:
    """All cases n in [1, max_n] x {w, z} x {first, second} x D_8.

    n = 0 is skipped (w_0 is b-free, so its basic relation is degenerate);
    the skip is recorded in the summary.
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    reports = []
    skipped = ("n=0 skipped: w_0 = (ad)^4 is b-free, its basic relation is empty",)
    for n in range(1, max_n + 1):
        for family in ("w", "z"):
            for factor in ("first", "second"):
                for x in range(data.d8.order):
                    reports.append(verify_sigma_identity(data, n, family, factor, x))
    by_level: dict = {}
    for rep in reports:
        key = rep.level or "unequal"
        by_level[key] = by_level.get(key, 0) + 1
    summary = VerificationSummary(
        total=len(reports),
        equal=sum(1 for r in reports if r.equal),
        by_level=by_level,
        skipped=skipped,
    )
    return reports, summary
