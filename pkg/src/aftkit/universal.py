"""Brute-force verification of terminal/product/exponential universal
properties, and order-isomorphism search.

The universal-property check uses the mediating-morphism formulation
directly: a candidate object passes for a test object B exactly when the map
sending each morphism ``h: B -> candidate`` to its induced data (the tuple of
compositions with the projections, or the transpose under evaluation) is a
bijection onto the full set of morphism tuples. Existence of a mediating
morphism for every tuple is surjectivity, uniqueness is injectivity; both
sides are enumerated exhaustively. Counterexamples report the first failure
found in canonical order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .order import (
    MonotoneMap,
    Poset,
    enumerate_monotone_tables,
    product,
    render_element,
)


class UniversalKind(Enum):
    TERMINAL = "terminal"
    PRODUCT = "product"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class Counterexample:
    kind: UniversalKind
    reason: str
    test_object: Optional[Poset] = None

    def __str__(self) -> str:
        where = f" (test object with {len(self.test_object)} elements)" \
            if self.test_object is not None else ""
        return f"{self.kind.value}: {self.reason}{where}"


@dataclass(frozen=True)
class UniversalCheck:
    ok: bool
    counterexample: Optional[Counterexample] = None

    def __bool__(self) -> bool:
        return self.ok


def check_universal(kind: UniversalKind, candidate: Poset,
                    context: Sequence[Poset],
                    factors: Optional[Sequence[Poset]] = None,
                    src: Optional[Poset] = None,
                    tgt: Optional[Poset] = None,
                    cap: Optional[int] = None) -> UniversalCheck:
    """Verify a universal property against every test object in ``context``.

    ``factors`` (product) and ``src``/``tgt`` (exponential) default to the
    candidate's construction metadata. The structure maps are the canonical
    ones for tuple-encoded carriers: coordinate projections, and evaluation
    by table lookup.
    """
    if kind is UniversalKind.TERMINAL:
        return _check_terminal(candidate, context)
    if kind is UniversalKind.PRODUCT:
        if factors is None:
            factors = candidate.info["factors"]
        return _check_product(candidate, tuple(factors), context, cap)
    if factors is not None:
        raise ValueError("factors only apply to PRODUCT checks")
    if src is None:
        src = candidate.info["src"]
    if tgt is None:
        tgt = candidate.info["tgt"]
    return _check_exponential(candidate, src, tgt, context, cap)


def _check_terminal(candidate: Poset, context: Sequence[Poset]) -> UniversalCheck:
    for b in context:
        maps = enumerate_monotone_tables(b, candidate)
        if len(maps) != 1:
            word = "no" if not maps else f"{len(maps)}"
            return UniversalCheck(False, Counterexample(
                UniversalKind.TERMINAL,
                f"{word} morphisms from a test object (expected exactly 1)", b))
    return UniversalCheck(True)


def _projection_violation(candidate: Poset, factors: Sequence[Poset]) -> Optional[str]:
    for e in candidate.elements:
        if len(e) != len(factors):
            return f"element {e!r} has wrong arity"
        for i, f in enumerate(factors):
            if e[i] not in f:
                return f"component {i} of {e!r} not in factor"
    for i, f in enumerate(factors):
        for x in candidate.elements:
            for y in candidate.elements:
                if candidate.leq(x, y) and not f.leq(x[i], y[i]):
                    return (f"projection {i} not monotone at "
                            f"{render_element(candidate, x)} <= {render_element(candidate, y)}")
    return None


def _check_product(candidate: Poset, factors: Sequence[Poset],
                   context: Sequence[Poset], cap: Optional[int]) -> UniversalCheck:
    bad = _projection_violation(candidate, factors)
    if bad is not None:
        return UniversalCheck(False, Counterexample(UniversalKind.PRODUCT, bad))
    for b in context:
        homs = enumerate_monotone_tables(b, candidate, cap)
        expected = 1
        for f in factors:
            expected *= len(enumerate_monotone_tables(b, f, cap))
        seen = {}
        for h in homs:
            induced = tuple(tuple(v[i] for v in h) for i in range(len(factors)))
            if induced in seen:
                return UniversalCheck(False, Counterexample(
                    UniversalKind.PRODUCT,
                    "two distinct mediating morphisms induce the same projections", b))
            seen[induced] = h
        if len(seen) != expected:
            return UniversalCheck(False, Counterexample(
                UniversalKind.PRODUCT,
                f"only {len(seen)} of {expected} morphism tuples have a mediating "
                "morphism", b))
    return UniversalCheck(True)


def _ev_violation(candidate: Poset, src: Poset, tgt: Poset) -> Optional[str]:
    # Evaluation must be a morphism candidate x src -> tgt.
    for f in candidate.elements:
        for i, a in enumerate(src.elements):
            if f[i] not in tgt:
                return f"evaluation leaves the target at {f!r}({a!r})"
    for f in candidate.elements:
        for g in candidate.elements:
            if not candidate.leq(f, g):
                continue
            for i, a in enumerate(src.elements):
                for j, b in enumerate(src.elements):
                    if src.leq_idx(i, j) and not tgt.leq(f[i], g[j]):
                        return ("evaluation not monotone: "
                                f"(f,{render_element(src, a)}) <= (g,{render_element(src, b)}) "
                                f"but {render_element(tgt, f[i])} !<= {render_element(tgt, g[j])}")
    return None


def _check_exponential(candidate: Poset, src: Poset, tgt: Poset,
                       context: Sequence[Poset], cap: Optional[int]) -> UniversalCheck:
    bad = _ev_violation(candidate, src, tgt)
    if bad is not None:
        return UniversalCheck(False, Counterexample(UniversalKind.EXPONENTIAL, bad))
    for b in context:
        prod = product([b, src], cap=cap)
        expected = len(enumerate_monotone_tables(prod, tgt, cap))
        homs = enumerate_monotone_tables(b, candidate, cap)
        seen = set()
        for h in homs:
            # transpose: (x, a) -> h(x)(a), laid out in prod canonical order
            induced = tuple(h[b.index(x)][src.index(a)] for (x, a) in prod.elements)
            if induced in seen:
                return UniversalCheck(False, Counterexample(
                    UniversalKind.EXPONENTIAL,
                    "two distinct mediating morphisms transpose to the same map", b))
            seen.add(induced)
        if len(seen) != expected:
            return UniversalCheck(False, Counterexample(
                UniversalKind.EXPONENTIAL,
                f"only {len(seen)} of {expected} morphisms B x src -> tgt have a "
                "mediating morphism", b))
    return UniversalCheck(True)


# ---------------------------------------------------------------------------
# Order-isomorphism search


def find_isomorphism(p: Poset, q: Poset) -> Optional[MonotoneMap]:
    """First order-isomorphism p -> q in canonical backtracking order, or None.

    Candidates are pruned by iterated degree/level refinement before the
    backtracking search, so antichains and rigid posets both resolve quickly.
    """
    n = len(p)
    if n != len(q):
        return None
    if n == 0:
        return MonotoneMap(p, q, {})
    pc = _stable_colors(p)
    qc = _stable_colors(q)
    if sorted(pc) != sorted(qc):
        return None
    q_by_color: dict = {}
    for j, c in enumerate(qc):
        q_by_color.setdefault(c, []).append(j)
    # assign p-elements in canonical order
    assign = [-1] * n
    used = [False] * n

    def ok(i: int, j: int) -> bool:
        for i2 in range(n):
            j2 = assign[i2]
            if j2 < 0:
                continue
            if p.leq_idx(i, i2) != q.leq_idx(j, j2):
                return False
            if p.leq_idx(i2, i) != q.leq_idx(j2, j):
                return False
        return True

    def rec(i: int) -> bool:
        if i == n:
            return True
        for j in q_by_color.get(pc[i], []):
            if not used[j] and ok(i, j):
                assign[i] = j
                used[j] = True
                if rec(i + 1):
                    return True
                used[j] = False
                assign[i] = -1
        return False

    if not rec(0):
        return None
    table = {p.elements[i]: q.elements[assign[i]] for i in range(n)}
    return MonotoneMap(p, q, table)


def _stable_colors(p: Poset) -> list:
    n = len(p)
    colors = [(bin(p.below_mask(i)).count("1"), bin(p.above_mask(i)).count("1"))
              for i in range(n)]
    for _ in range(n):
        new = []
        for i in range(n):
            down = sorted(colors[j] for j in range(n) if j != i and p.leq_idx(j, i))
            up = sorted(colors[j] for j in range(n) if j != i and p.leq_idx(i, j))
            new.append((colors[i], tuple(down), tuple(up)))
        canon = {c: k for k, c in enumerate(sorted(set(new)))}
        refined = [canon[c] for c in new]
        if len(set(refined)) == len(set(colors)):
            return refined
        colors = refined
    return colors
