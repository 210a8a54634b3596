"""Independent test oracles, kept out of the library on purpose.

`group_order` runs a small HLT-style coset enumeration over the trivial
subgroup: the order of a finitely presented finite group, computed without
touching any library word machinery beyond reading the presentation.
"""

from __future__ import annotations


def _symbols(alphabet):
    """Symbol list: one per letter, plus a distinct inverse for non-involutive
    letters.  Returns (symbols as (letter, exp), inverse-symbol index map)."""
    syms = []
    for i in range(len(alphabet)):
        syms.append((i, 1))
        if not alphabet.involutive[i]:
            syms.append((i, -1))
    inv = {}
    index = {s: k for k, s in enumerate(syms)}
    for k, (i, e) in enumerate(syms):
        if alphabet.involutive[i]:
            inv[k] = k
        else:
            inv[k] = index[(i, -e)]
    return syms, inv, index


def group_order(presentation, limit: int = 50_000) -> int:
    """Order of the presented group by coset enumeration (trivial subgroup).

    Raises RuntimeError when `limit` cosets are exceeded (group too large or
    enumeration diverging); intended for desk-scale groups only.
    """
    alphabet = presentation.alphabet
    syms, inv, index = _symbols(alphabet)
    nsyms = len(syms)

    relator_paths = []
    for rel in presentation.relators:
        path = []
        for i, e in rel.letters:
            path.append(index[(i, e if not alphabet.involutive[i] else 1)])
        if path:
            relator_paths.append(path)
    # involutive letters contribute implicit square relators
    for i in range(len(alphabet)):
        if alphabet.involutive[i]:
            s = index[(i, 1)]
            relator_paths.append([s, s])

    table = [[None] * nsyms]
    rep = [0]

    def find(c):
        while rep[c] != c:
            rep[c] = rep[rep[c]]
            c = rep[c]
        return c

    def define(c, s):
        table.append([None] * nsyms)
        rep.append(len(table) - 1)
        d = len(table) - 1
        table[c][s] = d
        table[d][inv[s]] = c
        if len(table) > limit:
            raise RuntimeError(f"coset enumeration exceeded {limit} cosets")
        return d

    def merge(a, b, queue):
        a, b = find(a), find(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        rep[b] = a
        for s in range(nsyms):
            t = table[b][s]
            if t is None:
                continue
            if table[a][s] is None:
                table[a][s] = t
                tt = find(t)
                if table[tt][inv[s]] is None:
                    table[tt][inv[s]] = a
                else:
                    queue.append((table[tt][inv[s]], a))
            else:
                queue.append((table[a][s], t))

    def process(queue):
        while queue:
            merge(*queue.pop(), queue)

    def scan(c, path):
        # forward
        f, fi = find(c), 0
        while fi < len(path):
            nxt = table[f][path[fi]]
            if nxt is None:
                break
            f, fi = find(nxt), fi + 1
        if fi == len(path):
            if f != find(c):
                q = [(f, find(c))]
                process(q)
            return
        # backward
        b, bi = find(c), len(path)
        while bi > fi:
            prv = table[b][inv[path[bi - 1]]]
            if prv is None:
                break
            b, bi = find(prv), bi - 1
        if bi == fi:
            q = [(b, f)] if b != f else []
            process(q)
        elif bi == fi + 1:
            table[f][path[fi]] = b
            table[b][inv[path[fi]]] = f
        else:
            # fill one gap and rescan
            define(f, path[fi])
            scan(c, path)

    c = 0
    while c < len(table):
        if find(c) != c:
            c += 1
            continue
        for path in relator_paths:
            if find(c) != c:
                break
            scan(c, path)
        if find(c) == c:
            for s in range(nsyms):
                if table[c][s] is None:
                    define(c, s)
        c += 1

    live = {find(i) for i in range(len(table))}
    # closure sanity: every live coset has a fully defined, live row
    for c in live:
        for s in range(nsyms):
            assert table[c][s] is not None
    return len(live)
