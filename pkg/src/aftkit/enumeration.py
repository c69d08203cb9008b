"""Exhaustive generation of small posets, lattices, and approximation tuples.

Generation works up to isomorphism: candidate relations are drawn only from
orders compatible with the numeric order on labels (every finite poset has a
linear extension, so each isomorphism class has such a representative) and
deduplicated by the minimum relation fingerprint over all label permutations.
Output order is deterministic.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .order import Poset, RelationMode, classify, validate_poset


def _closure(n: int, pairs: frozenset) -> frozenset:
    reach = {i: {i} for i in range(n)}
    for a, b in pairs:
        reach[a].add(b)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            extra = set()
            for j in reach[i]:
                extra |= reach[j]
            if not extra <= reach[i]:
                reach[i] |= extra
                changed = True
    return frozenset((i, j) for i in range(n) for j in reach[i] if i != j)


def _canonical(n: int, closed: frozenset) -> frozenset:
    best = None
    for perm in itertools.permutations(range(n)):
        img = frozenset((perm[a], perm[b]) for a, b in closed)
        key = tuple(sorted(img))
        if best is None or key < best:
            best = key
    return frozenset(best)


def posets_upto_iso(n: int) -> list:
    """All posets with exactly n elements, one per isomorphism class."""
    if n == 0:
        return [validate_poset([], [], RelationMode.FULL)]
    strict_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    out = []
    for bits in range(1 << len(strict_pairs)):
        pairs = frozenset(strict_pairs[k] for k in range(len(strict_pairs))
                          if bits >> k & 1)
        closed = _closure(n, pairs)
        key = _canonical(n, closed)
        if key in seen:
            continue
        seen.add(key)
        names = [f"e{i}" for i in range(n)]
        rel = [(names[a], names[b]) for a, b in sorted(key)]
        out.append(validate_poset(names, rel, RelationMode.COVERS))
    return out


def posets_up_to(n: int, include_empty: bool = True) -> list:
    out = []
    for k in range(0 if include_empty else 1, n + 1):
        out.extend(posets_upto_iso(k))
    return out


def lattices_up_to(n: int) -> list:
    """All complete lattices with 1..n elements, one per isomorphism class."""
    out = []
    for p in posets_up_to(n, include_empty=False):
        if classify(p).is_complete_lattice:
            out.append(p)
    return out


def bounded_posets_up_to(n: int) -> list:
    """Posets with 1..n elements having both top and bottom, up to iso.

    Built by capping every poset on n-2 elements with fresh bounds, which
    reaches every bounded poset exactly once.
    """
    out = [validate_poset(["e0"], [], RelationMode.COVERS)]
    if n >= 2:
        out.append(validate_poset(["bot", "top"], [("bot", "top")], RelationMode.COVERS))
    for total in range(3, n + 1):
        for core in posets_upto_iso(total - 2):
            names = ["bot"] + list(core.elements) + ["top"]
            rel = [(a, b) for a, b in core.relation_pairs() if a != b]
            rel += [("bot", e) for e in core.elements]
            rel += [(e, "top") for e in core.elements]
            if not core.elements:
                rel.append(("bot", "top"))
            out.append(validate_poset(names, rel, RelationMode.COVERS))
    return out


def subsets(seq: Sequence) -> Iterator[tuple]:
    for r in range(len(seq) + 1):
        yield from itertools.combinations(seq, r)


def chains_of(p: Poset, max_len: int | None = None) -> Iterator[tuple]:
    """All chains of p (including the empty one), as index tuples.

    A chain is a pairwise-comparable subset; members are listed in canonical
    position order (not necessarily ascending in the poset), each chain
    exactly once.
    """
    n = len(p)
    yield ()

    def comparable(i: int, j: int) -> bool:
        return p.leq_idx(i, j) or p.leq_idx(j, i)

    def extend(members: list) -> Iterator[tuple]:
        for j in range(members[-1] + 1, n):
            if all(comparable(i, j) for i in members):
                nxt = members + [j]
                yield tuple(nxt)
                if max_len is None or len(nxt) < max_len:
                    yield from extend(nxt)

    for i in range(n):
        yield (i,)
        if max_len is None or max_len > 1:
            yield from extend([i])


def chain_subsets(p: Poset) -> Iterator[list]:
    """Chains as element lists sorted ascending in the order, empty included."""
    for idxs in chains_of(p):
        elems = [p.elements[i] for i in idxs]
        elems.sort(key=lambda e: sum(p.leq(x, e) for x in elems))
        yield elems
