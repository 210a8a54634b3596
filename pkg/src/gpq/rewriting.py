"""String rewriting with traces, critical pairs, and confluence certificates.

A rewriting system replaces subwords according to finitely many rules
lhs -> rhs.  Reduction records a full trace; geodesic systems never increase
length, which is what lets a reduction sequence of an identity word double as
a null-homotopy staying inside a metric ball (see `ball_null_homotopy_witness`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import CombinatorialExplosion, GpqError, LimitExceeded
from .presentations import Presentation
from .words import Alphabet, Word, words_up_to_length


@dataclass(frozen=True)
class RewritingSystem:
    alphabet: Alphabet
    rules: tuple[tuple[Word, Word], ...]

    def __post_init__(self):
        for lhs, rhs in self.rules:
            if lhs.alphabet != self.alphabet or rhs.alphabet != self.alphabet:
                raise ValueError("rule over a different alphabet")
            if lhs.is_empty():
                raise ValueError("rule left-hand sides must be nonempty")

    @staticmethod
    def make(gens: str, rules: list[tuple[str, str]]) -> "RewritingSystem":
        alphabet = Alphabet.make(*[g.strip() for g in gens.split(",")])
        built = tuple(
            (Word.from_str(alphabet, l), Word.from_str(alphabet, r)) for l, r in rules
        )
        return RewritingSystem(alphabet, built)


@dataclass(frozen=True)
class ReductionStep:
    before: Word
    rule: int
    position: int
    after: Word


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]

    def verify(self, rs: RewritingSystem) -> bool:
        """Each step replaces the rule's lhs at the stated position; steps chain."""
        for i, step in enumerate(self.steps):
            lhs, rhs = rs.rules[step.rule]
            p = step.position
            if step.before.letters[p : p + len(lhs)] != lhs.letters:
                return False
            expected = (
                step.before.letters[:p] + rhs.letters + step.before.letters[p + len(lhs) :]
            )
            if step.after.letters != expected:
                return False
            if i + 1 < len(self.steps) and self.steps[i + 1].before != step.after:
                return False
        return True

    def to_json(self) -> str:
        return json.dumps(
            {
                "steps": [
                    {
                        "before": str(s.before),
                        "rule": s.rule,
                        "pos": s.position,
                        "after": str(s.after),
                    }
                    for s in self.steps
                ]
            },
            sort_keys=True,
        )


def _find_leftmost(rs: RewritingSystem, letters) -> tuple[int, int] | None:
    """Leftmost match position; ties broken by lowest rule index."""
    n = len(letters)
    for pos in range(n):
        for ri, (lhs, _) in enumerate(rs.rules):
            L = len(lhs)
            if pos + L <= n and letters[pos : pos + L] == lhs.letters:
                return pos, ri
    return None


def reduce(
    rs: RewritingSystem, word: Word, strategy: str = "leftmost", step_limit: int = 10_000
) -> tuple[Word, ReductionTrace]:
    """Reduce to an irreducible word, returning it with the full trace.

    Raises LimitExceeded (with partial trace) if the limit is hit; completeness
    of a system is never assumed, only evidenced.
    """
    if strategy != "leftmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    if step_limit <= 0:
        raise ValueError("step_limit must be positive")
    steps = []
    current = word
    while True:
        hit = _find_leftmost(rs, current.letters)
        if hit is None:
            return current, ReductionTrace(tuple(steps))
        if len(steps) >= step_limit:
            raise LimitExceeded(
                f"no irreducible word within {step_limit} steps",
                word=current,
                trace=ReductionTrace(tuple(steps)),
            )
        pos, ri = hit
        lhs, rhs = rs.rules[ri]
        after = Word(
            rs.alphabet,
            current.letters[:pos] + rhs.letters + current.letters[pos + len(lhs) :],
        )
        steps.append(ReductionStep(current, ri, pos, after))
        current = after


def is_geodesic(rs: RewritingSystem) -> bool:
    """True iff no rule increases length."""
    return all(len(lhs) >= len(rhs) for lhs, rhs in rs.rules)


@dataclass(frozen=True)
class CriticalPair:
    peak: Word
    left: Word
    right: Word
    rule_left: int
    rule_right: int


def critical_pairs(rs: RewritingSystem) -> list[CriticalPair]:
    """All overlap and containment ambiguities between rule left-hand sides."""
    pairs = []
    for i, (l1, r1) in enumerate(rs.rules):
        for j, (l2, r2) in enumerate(rs.rules):
            # overlap: proper suffix of l1 equals proper prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1.letters[len(l1) - k :] == l2.letters[:k]:
                    peak = Word(rs.alphabet, l1.letters + l2.letters[k:])
                    left = Word(rs.alphabet, r1.letters + l2.letters[k:])
                    right = Word(rs.alphabet, l1.letters[: len(l1) - k] + r2.letters)
                    pairs.append(CriticalPair(peak, left, right, i, j))
            # containment: l2 occurs inside l1 (proper, or equal lhs of distinct rules)
            if i == j:
                continue
            for p in range(len(l1) - len(l2) + 1):
                if l1.letters[p : p + len(l2)] != l2.letters:
                    continue
                if len(l2) == len(l1) and j < i:
                    continue  # equal lhs pair already emitted for (j, i)
                right = Word(
                    rs.alphabet,
                    l1.letters[:p] + r2.letters + l1.letters[p + len(l2) :],
                )
                pairs.append(CriticalPair(l1, r1, right, i, j))
    return pairs


@dataclass(frozen=True)
class Certified:
    pairs_checked: int
    evidence: str


@dataclass(frozen=True)
class Counterexample:
    peak: Word
    left: Word
    right: Word


@dataclass(frozen=True)
class Inconclusive:
    reason: str


def certify_local_confluence(rs: RewritingSystem, step_limit: int = 1_000):
    """Join every critical pair within the step limit.

    Returns Certified, Counterexample, or Inconclusive (when some reduction
    does not terminate within the limit; e.g. an expanding rule).  Certified
    plus termination evidence yields confluence by Newman's lemma; termination
    is probed here by reducing every rule side.
    """
    try:
        for lhs, rhs in rs.rules:
            reduce(rs, lhs, step_limit=step_limit)
            reduce(rs, rhs, step_limit=step_limit)
    except LimitExceeded:
        return Inconclusive("a rule side does not reduce within the step limit")
    pairs = critical_pairs(rs)
    for pair in pairs:
        try:
            nf_left, _ = reduce(rs, pair.left, step_limit=step_limit)
            nf_right, _ = reduce(rs, pair.right, step_limit=step_limit)
        except LimitExceeded:
            return Inconclusive(f"peak '{pair.peak}' does not join within the step limit")
        if nf_left != nf_right:
            return Counterexample(pair.peak, nf_left, nf_right)
    return Certified(len(pairs), f"all {len(pairs)} critical pairs join")


class NotGeodesic(GpqError):
    pass


def _plain_reduce(letters) -> tuple:
    # cancel only explicit x x^-1 pairs (involutive squares survive, both +1)
    stack = []
    for idx, exp in letters:
        if stack and stack[-1][0] == idx and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((idx, exp))
    return tuple(stack)


def _rule_matches_presentation(rs: RewritingSystem, p: Presentation, rule) -> bool:
    """The relation lhs = rhs must appear among the relators up to rotation/inversion.

    Inverses follow the involutive convention, but involutive squares like a^2
    are not cancelled away before matching; rules expressing free cancellations
    (lhs rhs^-1 trivially reduced) need no 2-cell and always match.
    """
    lhs, rhs = rule
    target = _plain_reduce((lhs * rhs.inverse()).letters)
    if not target:
        return True
    for rel in p.relators:
        base = _plain_reduce(rel.letters)
        for source in (base, _plain_reduce(Word(rs.alphabet, base).inverse().letters)):
            if len(source) != len(target):
                continue
            for k in range(len(source)):
                if source[k:] + source[:k] == target:
                    return True
    return False


@dataclass(frozen=True)
class NullHomotopyCertificate:
    radius: int
    words_checked: int
    witnesses: tuple[tuple[Word, ReductionTrace], ...]


@dataclass(frozen=True)
class WitnessFailure:
    word: Word
    reason: str


def ball_null_homotopy_witness(
    rs: RewritingSystem,
    p: Presentation,
    r: int,
    step_limit: int = 10_000,
    word_cap: int = 200_000,
):
    """Certify that identity words of length <= 2r+1 reduce inside the ball B(r).

    For a geodesic system whose rules all correspond to relators of p, every
    reduction sequence w -> w1 -> ... -> e is a null-homotopy whose stages all
    have length <= 2r+1, hence stay within B(r).  Returns a certificate with
    one (word, trace) witness per identity word, or a WitnessFailure carrying
    the first violating word.
    """
    if not is_geodesic(rs):
        raise NotGeodesic("witness construction requires a geodesic system")
    for rule in rs.rules:
        if not _rule_matches_presentation(rs, p, rule):
            raise ValueError(
                f"rule '{rule[0]} -> {rule[1]}' has no associated relator in {p}"
            )
    bound = 2 * r + 1
    count = 0
    witnesses = []
    for w in words_up_to_length(rs.alphabet, bound):
        count += 1
        if count > word_cap:
            raise CombinatorialExplosion(
                f"more than {word_cap} candidate words at radius {r}"
            )
        try:
            nf, trace = reduce(rs, w, step_limit=step_limit)
        except LimitExceeded:
            return WitnessFailure(w, "reduction did not terminate")
        if not nf.is_empty():
            continue
        for step in trace.steps:
            if len(step.after) > bound or len(step.before) > bound:
                return WitnessFailure(w, f"intermediate loop longer than {bound}")
        witnesses.append((w, trace))
    return NullHomotopyCertificate(r, count, tuple(witnesses))


# --- ready-made systems ----------------------------------------------------------


def free_reduction_system(alphabet: Alphabet) -> RewritingSystem:
    """Rules cancelling x x^-1 / x^-1 x (x x for involutive letters)."""
    rules = []
    eps = Word.identity(alphabet)
    for i in range(len(alphabet)):
        if alphabet.involutive[i]:
            rules.append((Word(alphabet, ((i, 1), (i, 1))), eps))
        else:
            rules.append((Word(alphabet, ((i, 1), (i, -1))), eps))
            rules.append((Word(alphabet, ((i, -1), (i, 1))), eps))
    return RewritingSystem(alphabet, tuple(rules))


def dihedral_rewriting_system(order: int, names: tuple[str, str] = ("a", "d")) -> RewritingSystem:
    """Geodesic confluent system for the dihedral group of order 2m (m even).

    Irreducible words are the canonical alternating normal forms; the rule
    (yx)^(m/2) -> (xy)^(m/2) orients the single length-m collision.
    """
    m = order // 2
    if order < 4 or order % 2 != 0 or m % 2 != 0:
        raise ValueError("needs order = 2m with m even")
    x, y = names
    alphabet = Alphabet.make(x + "!", y + "!")
    eps = Word.identity(alphabet)
    half = m // 2
    lhs = Word.from_str(alphabet, f"({y} {x})^{half}")
    rhs = Word.from_str(alphabet, f"({x} {y})^{half}")
    rules = (
        (Word.from_str(alphabet, f"{x} {x}"), eps),
        (Word.from_str(alphabet, f"{y} {y}"), eps),
        (lhs, rhs),
    )
    return RewritingSystem(alphabet, rules)


def abelian_plane_system() -> RewritingSystem:
    """Geodesic confluent system for Z^2 with normal forms a^p b^q."""
    alphabet = Alphabet.make("a", "b")
    W = lambda t: Word.from_str(alphabet, t)  # noqa: E731
    eps = Word.identity(alphabet)
    rules = [
        (W("a a'"), eps),
        (W("a' a"), eps),
        (W("b b'"), eps),
        (W("b' b"), eps),
        (W("b a"), W("a b")),
        (W("b a'"), W("a' b")),
        (W("b' a"), W("a b'")),
        (W("b' a'"), W("a' b'")),
    ]
    return RewritingSystem(alphabet, tuple(rules))
