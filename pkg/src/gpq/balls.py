"""Metric balls and spheres in Cayley 2-complexes, and bounded searches on them.

Vertices are the oracle's canonical normal forms at distance <= r from the
basepoint; an edge or 2-cell belongs to the ball exactly when all its boundary
vertices do.  On top of the complex: loop generators for the fundamental group
from a spanning tree (each of length <= 2r+1), breadth-first null-homotopy
search with replayable witnesses, bounded connectivity-radius and isodiametric
estimates, and geodesic combings with a mechanically checked tameness
certificate.  All searches carry explicit caps: incompleteness is a visible
value, never a silent timeout.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .backends import WordOracle
from .errors import (
    CombinatorialExplosion,
    Disconnected,
    Exhausted,
    NotNullHomotopic,
    OracleMismatch,
)
from .presentations import Presentation
from .words import Word, free_reduce, rotations_and_inverses


def _check_oracle(oracle: WordOracle, p: Presentation):
    if oracle.alphabet != p.alphabet:
        raise OracleMismatch(
            f"oracle alphabet {oracle.alphabet.letters} != presentation alphabet {p.alphabet.letters}"
        )
    for rel in p.relators:
        if not oracle.is_identity(rel):
            raise OracleMismatch(f"relator '{rel}' is not trivial under {oracle.describe()}")


def _directions(alphabet):
    dirs = []
    for i in range(len(alphabet)):
        dirs.append((i, 1))
        if not alphabet.involutive[i]:
            dirs.append((i, -1))
    return dirs


@dataclass(frozen=True)
class Ball:
    """A metric ball (or sphere) in the Cayley complex of (oracle, presentation)."""

    presentation: Presentation
    oracle: WordOracle
    basepoint: Word
    radius: int
    vertices: tuple[Word, ...]             # canonical normal forms, shortlex order
    edges: tuple[tuple[int, int, int], ...]  # (vertex, letter, vertex), positive direction
    cells: tuple[tuple[int, int], ...]     # (base vertex, relator index)
    distances: tuple[int, ...]
    is_sphere: bool = False

    @cached_property
    def _index(self) -> dict:
        return {w.letters: i for i, w in enumerate(self.vertices)}

    @cached_property
    def _transitions(self) -> dict:
        """(vertex key, direction) -> vertex key or None, for fast loop tracing."""
        table = {}
        for v in self.vertices:
            for d in _directions(self.presentation.alphabet):
                w = self.oracle.normal_form(v * Word(self.presentation.alphabet, (d,)))
                table[(v.letters, d)] = w.letters if w.letters in self._index else None
        return table

    def vertex_index(self) -> dict:
        return self._index

    def contains_vertex(self, word: Word) -> bool:
        nf = self.oracle.normal_form(word)
        return nf.letters in self._index

    def summary(self) -> str:
        kind = "S" if self.is_sphere else "B"
        return (
            f"{kind}({self.radius}): V={len(self.vertices)} "
            f"E={len(self.edges)} C={len(self.cells)}"
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "radius": self.radius,
                "vertices": [str(v) for v in self.vertices],
                "edges": [
                    [i, self.presentation.alphabet.letters[l], j] for i, l, j in self.edges
                ],
                "cells": [[base, rel] for base, rel in self.cells],
            },
            sort_keys=True,
        )


def _bfs_normal_forms(oracle: WordOracle, basepoint: Word, r: int):
    """Distances (from the basepoint) of all normal forms within radius r."""
    base_nf = oracle.normal_form(basepoint)
    dist = {base_nf.letters: 0}
    forms = {base_nf.letters: base_nf}
    frontier = [base_nf]
    dirs = _directions(oracle.alphabet)
    for d in range(r):
        nxt = []
        for v in sorted(frontier, key=Word.shortlex_key):
            for idx, exp in dirs:
                w = oracle.normal_form(v * Word(oracle.alphabet, ((idx, exp),)))
                if w.letters not in dist:
                    dist[w.letters] = d + 1
                    forms[w.letters] = w
                    nxt.append(w)
        frontier = nxt
    return dist, forms


def build_ball(oracle: WordOracle, p: Presentation, r: int, basepoint: Word | None = None) -> Ball:
    """The metric ball of radius r, built by BFS over oracle normal forms."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    _check_oracle(oracle, p)
    if basepoint is None:
        basepoint = Word.identity(p.alphabet)
    dist, forms = _bfs_normal_forms(oracle, basepoint, r)
    vertices = sorted(forms.values(), key=Word.shortlex_key)
    index = {w.letters: i for i, w in enumerate(vertices)}
    distances = tuple(dist[w.letters] for w in vertices)
    edges = _collect_edges(oracle, vertices, index, index)
    cells = _collect_cells(oracle, p, vertices, index)
    return Ball(p, oracle, basepoint, r, tuple(vertices), edges, cells, distances)


def build_sphere(oracle: WordOracle, p: Presentation, r: int, basepoint: Word | None = None) -> Ball:
    """The metric sphere: vertices at distance exactly r, edges/cells with all
    boundary vertices at distance exactly r."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    _check_oracle(oracle, p)
    if basepoint is None:
        basepoint = Word.identity(p.alphabet)
    dist, forms = _bfs_normal_forms(oracle, basepoint, r)
    shell = sorted(
        (forms[k] for k, d in dist.items() if d == r), key=Word.shortlex_key
    )
    index = {w.letters: i for i, w in enumerate(shell)}
    edges = _collect_edges(oracle, shell, index, index)
    cells = _collect_cells(oracle, p, shell, index)
    distances = tuple(r for _ in shell)
    return Ball(p, oracle, basepoint, r, tuple(shell), edges, cells, distances, is_sphere=True)


def _collect_edges(oracle, vertices, index, allowed):
    alphabet = oracle.alphabet
    edges = set()
    for i, v in enumerate(vertices):
        for li in range(len(alphabet)):
            w = oracle.normal_form(v * Word.letter(alphabet, alphabet.letters[li]))
            j = allowed.get(w.letters)
            if j is None:
                continue
            if alphabet.involutive[li]:
                edges.add((min(i, j), li, max(i, j)))
            else:
                edges.add((i, li, j))
    return tuple(sorted(edges))


def _collect_cells(oracle, p, vertices, index):
    cells = []
    for i, v in enumerate(vertices):
        for ri, rel in enumerate(p.relators):
            if rel.is_empty():
                continue
            ok = True
            cur = v
            for idx, exp in rel.letters[:-1]:
                cur = oracle.normal_form(cur * Word(p.alphabet, ((idx, exp),)))
                if cur.letters not in index:
                    ok = False
                    break
            if ok:
                cells.append((i, ri))
    return tuple(cells)


# --- fundamental group generators (spanning tree) --------------------------------


@dataclass(frozen=True)
class LoopClassSet:
    ball: Ball
    tree_parent: tuple[int, ...]        # parent vertex per vertex (-1 at the basepoint)
    tree_edge: tuple[int, ...]          # index into ball.edges per non-root vertex
    tree_paths: tuple[Word, ...]        # geodesic word from the basepoint per vertex
    generators: tuple[Word, ...]        # one loop per non-tree edge

    @property
    def rank(self) -> int:
        return len(self.generators)


def pi1_generators(ball: Ball) -> LoopClassSet:
    """Spanning-tree loop generators; each has length <= 2r+1.

    A loop through vertex p factors through geodesics to the basepoint, so a
    generator is tree-path * edge * reverse tree-path.
    """
    nv = len(ball.vertices)
    index = ball.vertex_index()
    base_nf = ball.oracle.normal_form(ball.basepoint)
    root = index[base_nf.letters]

    adj: list[list[tuple[int, int, int, int]]] = [[] for _ in range(nv)]
    for ei, (i, li, j) in enumerate(ball.edges):
        adj[i].append((j, li, 1, ei))
        involutive = ball.presentation.alphabet.involutive[li]
        if i != j:
            adj[j].append((i, li, 1 if involutive else -1, ei))

    parent = [-2] * nv
    parent_edge = [-1] * nv
    parent_letter: list[tuple[int, int] | None] = [None] * nv
    parent[root] = -1
    order = deque([root])
    tree_edges = set()
    visit = [root]
    while order:
        u = order.popleft()
        for v, li, exp, ei in sorted(adj[u]):
            if parent[v] == -2:
                parent[v] = u
                parent_edge[v] = ei
                parent_letter[v] = (li, exp)
                tree_edges.add(ei)
                order.append(v)
                visit.append(v)
    if len(visit) != nv:
        raise Disconnected(f"ball has {nv - len(visit)} unreachable vertices")

    alphabet = ball.presentation.alphabet

    def path_to(v: int) -> Word:
        letters = []
        while parent[v] != -1:
            letters.append(parent_letter[v])
            v = parent[v]
        return Word(alphabet, tuple(reversed(letters)))

    paths = [path_to(v) for v in range(nv)]
    generators = []
    for ei, (i, li, j) in enumerate(ball.edges):
        if ei in tree_edges:
            continue
        loop = paths[i] * Word(alphabet, ((li, 1),)) * paths[j].inverse()
        assert len(loop) <= 2 * ball.radius + 1, "generator exceeds the 2r+1 bound"
        generators.append(loop)
    lcs = LoopClassSet(
        ball,
        tuple(parent),
        tuple(parent_edge),
        tuple(paths),
        tuple(generators),
    )
    assert lcs.rank == len(ball.edges) - nv + 1
    return lcs


# --- null-homotopy search ---------------------------------------------------------


@dataclass(frozen=True)
class HomotopyMove:
    position: int
    removed: tuple[tuple[int, int], ...]
    inserted: tuple[tuple[int, int], ...]
    kind: str  # "free" or "relator"


@dataclass(frozen=True)
class Witness:
    start: Word
    moves: tuple[HomotopyMove, ...]
    region: Ball
    states_explored: int

    def replay(self) -> bool:
        """Re-apply every move; True iff the loop dies inside the region."""
        current = self.start
        if not _loop_inside(self.region, current):
            return False
        for mv in self.moves:
            letters = current.letters
            if letters[mv.position : mv.position + len(mv.removed)] != mv.removed:
                return False
            current = Word(
                current.alphabet,
                letters[: mv.position] + mv.inserted + letters[mv.position + len(mv.removed) :],
            )
            if not _loop_inside(self.region, current):
                return False
        return free_reduce(current).is_empty()


def _loop_inside(region: Ball, loop: Word) -> bool:
    table = region._transitions
    key = region.oracle.normal_form(region.basepoint).letters
    if key not in region._index:
        return False
    invol = region.presentation.alphabet.involutive
    for idx, exp in loop.letters:
        if invol[idx]:
            exp = 1
        key = table.get((key, (idx, exp)))
        if key is None:
            return False
    return True


def _reduce_recording(word: Word):
    """Free-reduce while recording each cancellation as a HomotopyMove."""
    moves = []
    current = word
    invol = word.alphabet.involutive
    changed = True
    while changed:
        changed = False
        letters = current.letters
        for k in range(len(letters) - 1):
            (i1, e1), (i2, e2) = letters[k], letters[k + 1]
            if i1 == i2 and (invol[i1] or e1 == -e2):
                moves.append(HomotopyMove(k, (letters[k], letters[k + 1]), (), "free"))
                current = Word(word.alphabet, letters[:k] + letters[k + 2 :])
                changed = True
                break
    return current, moves


def _relator_rewrites(p: Presentation, extra_relators=()):
    """(remove, insert) patterns from every rotation/inversion and split of
    every relator: an occurrence of u may become v^-1 whenever uv is a relator."""
    rewrites = []
    seen = set()
    all_rels = [r for r in p.relators if not free_reduce(r).is_empty()]
    all_rels += [r for r in extra_relators if not free_reduce(r).is_empty()]
    for rel in all_rels:
        for variant in rotations_and_inverses(rel):
            for cut in range(len(variant) + 1):
                u = variant.letters[:cut]
                v = Word(p.alphabet, variant.letters[cut:])
                ins = v.inverse().letters
                key = (u, ins)
                if key not in seen:
                    seen.add(key)
                    rewrites.append((u, ins))
    return rewrites


def null_homotopy_search(
    oracle: WordOracle,
    p: Presentation,
    loop: Word,
    region: Ball,
    step_cap: int = 20_000,
    extra_relators=(),
) -> Witness:
    """Breadth-first search for a null-homotopy of `loop` inside `region`.

    States are free-reduced loops based at the region's basepoint; moves are
    free cancellations/insertions and relator-subword replacements, and every
    intermediate loop must trace inside the region.  Raises Exhausted after
    `step_cap` states; incompleteness is explicit.
    """
    if not oracle.is_identity(loop):
        raise NotNullHomotopic(f"'{loop}' is not trivial under {oracle.describe()}")
    if not _loop_inside(region, loop):
        raise ValueError(f"loop '{loop}' does not stay inside the region")

    start, norm_moves = _reduce_recording(loop)
    if start.is_empty():
        return Witness(loop, tuple(norm_moves), region, 0)

    rewrites = _relator_rewrites(p, extra_relators)
    seen = {start.letters: (None, None)}  # state -> (previous state, move)
    queue = deque([start.letters])
    explored = 0
    while queue:
        if explored >= step_cap:
            raise Exhausted(
                f"no null-homotopy within {step_cap} states", states_explored=explored
            )
        state = queue.popleft()
        explored += 1
        n = len(state)
        for u, ins in rewrites:
            lu = len(u)
            for pos in range(n - lu + 1):
                if state[pos : pos + lu] != u:
                    continue
                raw = Word(p.alphabet, state[:pos] + ins + state[pos + lu :])
                reduced = free_reduce(raw)
                key = reduced.letters
                if key in seen:
                    continue
                # the unreduced intermediate must stay inside too: the slide
                # across the cell happens before the spurs cancel
                if not _loop_inside(region, raw):
                    continue
                move = HomotopyMove(pos, u, ins, "relator")
                seen[key] = (state, move)
                if not key:
                    return _assemble_witness(
                        loop, norm_moves, seen, key, region, explored
                    )
                queue.append(key)
    raise Exhausted(
        f"state space exhausted after {explored} states without a null-homotopy",
        states_explored=explored,
    )


def _assemble_witness(loop, norm_moves, seen, final_key, region, explored) -> Witness:
    # walk parents back to the start state, re-recording reductions as free moves
    chain = []
    key = final_key
    while True:
        prev, move = seen[key]
        if prev is None:
            break
        chain.append((prev, move))
        key = prev
    moves = list(norm_moves)
    for prev, move in reversed(chain):
        moves.append(move)
        raw = Word(
            region.presentation.alphabet,
            prev[: move.position] + move.inserted + prev[move.position + len(move.removed) :],
        )
        _, reds = _reduce_recording(raw)
        moves.extend(reds)
    witness = Witness(loop, tuple(moves), region, explored)
    assert witness.replay(), "constructed witness failed to replay"
    return witness


# --- bounded invariants ------------------------------------------------------------


def pi1_kill_radius(
    oracle: WordOracle,
    p: Presentation,
    r: int,
    r_max: int,
    step_cap: int = 20_000,
) -> int:
    """Least R in [r, r_max] such that every loop generator of B(r) dies in B(R).

    Bounded analogue of the connectivity radius; monotone in step_cap.  Raises
    Exhausted when no R up to r_max certifies.
    """
    if r > r_max:
        raise ValueError("need r <= r_max")
    generators = pi1_generators(build_ball(oracle, p, r)).generators
    for R in range(r, r_max + 1):
        region = build_ball(oracle, p, R)
        try:
            for g in generators:
                null_homotopy_search(oracle, p, g, region, step_cap=step_cap)
        except Exhausted:
            continue
        return R
    raise Exhausted(f"pi1(B({r})) still survives in B({r_max})")


def _closed_paths_up_to(region: Ball, max_length: int, cap: int = 500_000):
    """All closed paths of length < max_length based anywhere in the region,
    deduplicated as cyclic words up to rotation and inversion."""
    alphabet = region.presentation.alphabet
    dirs = _directions(alphabet)
    index = region.vertex_index()
    oracle = region.oracle
    loops = {}
    budget = 0

    table = region._transitions

    def dfs(start_letters, vertex_key, word):
        nonlocal budget
        budget += 1
        if budget > cap:
            raise CombinatorialExplosion("closed-path enumeration exceeded its cap")
        if word and vertex_key == start_letters:
            w = Word(alphabet, tuple(word))
            if not free_reduce(w).is_empty():
                key = min(v.letters for v in rotations_and_inverses(w))
                loops.setdefault(key, w)
        if len(word) >= max_length - 1:
            return
        for d in dirs:
            nxt = table.get((vertex_key, d))
            if nxt is not None:
                word.append(d)
                dfs(start_letters, nxt, word)
                word.pop()

    for v in region.vertices:
        dfs(v.letters, v.letters, [])
    return list(loops.values())


def check_pi1_bounded_balls(
    oracle: WordOracle,
    p: Presentation,
    r: int,
    c: int,
    step_cap: int = 20_000,
) -> bool:
    """True iff every loop generator of B(r) is found (within bounds) to be a
    product of conjugates of loops of length < c.

    Implemented by gluing a cell along every closed path of length < c in the
    ball and searching for null-homotopies there.  False means not found
    within bounds, never a disproof.
    """
    ball = build_ball(oracle, p, r)
    generators = pi1_generators(ball).generators
    if not generators:
        return True
    short_loops = _closed_paths_up_to(ball, c)
    # the short loops replace the presentation's cells entirely: a generator is
    # normally generated by short loops iff it dies using short-loop cells only
    stripped = Presentation(p.alphabet, (), p.name)
    for g in generators:
        try:
            null_homotopy_search(
                oracle, stripped, g, ball, step_cap=step_cap, extra_relators=tuple(short_loops)
            )
        except Exhausted:
            return False
    return True


def isodiametric_estimate(
    oracle: WordOracle,
    p: Presentation,
    word: Word,
    d_max: int,
    step_cap: int = 20_000,
) -> int:
    """Least D <= d_max such that the identity word fills inside B(D)."""
    if not oracle.is_identity(word):
        raise NotNullHomotopic(f"'{word}' is not trivial under {oracle.describe()}")
    for d in range(d_max + 1):
        region = build_ball(oracle, p, d)
        if not _loop_inside(region, word):
            continue
        try:
            null_homotopy_search(oracle, p, word, region, step_cap=step_cap)
            return d
        except Exhausted:
            continue
    raise Exhausted(f"no filling found within diameter {d_max}")


# --- geodesic 0-combings -------------------------------------------------------------


@dataclass(frozen=True)
class Combing:
    """Per-vertex geodesic paths to the basepoint over the exhaustion by balls."""

    ball: Ball
    paths: tuple[Word, ...]  # path word from basepoint to each vertex

    def path_vertices(self, vi: int) -> list[Word]:
        oracle = self.ball.oracle
        cur = oracle.normal_form(self.ball.basepoint)
        out = [cur]
        for idx, exp in self.paths[vi].letters:
            cur = oracle.normal_form(cur * Word(self.ball.presentation.alphabet, ((idx, exp),)))
            out.append(cur)
        return out

    def verify_tame(self) -> bool:
        """For every vertex and every n <= r: the portion of its combing path
        inside B(n) is a single connected (initial) segment."""
        dist = {
            w.letters: d for w, d in zip(self.ball.vertices, self.ball.distances)
        }
        for vi in range(len(self.ball.vertices)):
            ds = [dist[v.letters] for v in self.path_vertices(vi)]
            for n in range(self.ball.radius + 1):
                inside = [t for t, d in enumerate(ds) if d <= n]
                if inside and inside != list(range(inside[0], inside[-1] + 1)):
                    return False
                if inside and inside[0] != 0:
                    return False
        return True


def geodesic_0_combing(oracle: WordOracle, p: Presentation, r_max: int) -> Combing:
    """Combing by shortlex-first geodesics, built inductively over B(0) c B(1) c ...

    Each vertex of B(n) \\ B(n-1) extends a combing path of a distance-(n-1)
    neighbour by one edge, which is exactly the inductive construction that
    makes the combing tame.  The BFS spanning tree realizes that induction.
    """
    ball = build_ball(oracle, p, max(r_max, 0))
    combing = Combing(ball, pi1_generators(ball).tree_paths)
    assert combing.verify_tame(), "geodesic combing failed its tameness certificate"
    return combing


# --- pi1-resolutions (certificate record only) ----------------------------------------


@dataclass(frozen=True)
class Pi1Resolution:
    """A certificate that a simply connected complex resolves a compact piece.

    Only the trivial case is constructible here: a ball whose loop generators
    vanish resolves itself by the identity map.
    """

    source_description: str
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    cell_map: tuple[int, ...]
    resolved: Ball

    def restriction_is_bijective(self) -> bool:
        return (
            sorted(self.vertex_map) == list(range(len(self.resolved.vertices)))
            and sorted(self.edge_map) == list(range(len(self.resolved.edges)))
            and sorted(self.cell_map) == list(range(len(self.resolved.cells)))
        )

    @staticmethod
    def identity_of(ball: Ball) -> "Pi1Resolution":
        rank = pi1_generators(ball).rank
        if rank != 0:
            raise ValueError(f"ball has pi1 rank {rank}; identity resolution needs 0")
        return Pi1Resolution(
            source_description=f"the ball itself ({ball.summary()})",
            vertex_map=tuple(range(len(ball.vertices))),
            edge_map=tuple(range(len(ball.edges))),
            cell_map=tuple(range(len(ball.cells))),
            resolved=ball,
        )
