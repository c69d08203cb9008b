"""Kleene least fixpoints and the four fixpoint families of approximating
operators: Kripke-Kleene, supported, stable, well-founded.

Operators are explicit tables on finite spaces. An approximator couples a
precision-monotone operator with a pair structure that splits each element of
its space into a lower-lattice and an upper-lattice part; square bilattices
split pairs directly, products split componentwise, and function spaces split
pointwise into a monotone lower map and an antitone upper map. The stable
operator revises the lower part against a fixed upper part; its fixpoints and
the least fixpoint of the pairwise revision operator give the stable and
well-founded semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .errors import (
    InconsistentRevision,
    InternalLawFailure,
    NoBottom,
    NotMonotone,
    UnknownElement,
)
from .order import Poset, product


class Operator:
    """A total endo-map on a finite poset, given by its table."""

    __slots__ = ("space", "table", "_monotone")

    def __init__(self, space: Poset, table: Mapping):
        self.space = space
        self.table = dict(table)
        for e in space.elements:
            if e not in self.table:
                raise UnknownElement(f"operator not total: missing {e!r}")
            space.index(self.table[e])
        self._monotone: Optional[bool] = None

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            raise UnknownElement(f"{x!r} not in operator space") from None

    def is_monotone(self) -> bool:
        if self._monotone is None:
            self._monotone = True
            sp = self.space
            for i, x in enumerate(sp.elements):
                fx = self.table[x]
                for j in _mask_bits(sp.above_mask(i)):
                    if not sp.leq(fx, self.table[sp.elements[j]]):
                        self._monotone = False
                        break
                if not self._monotone:
                    break
        return self._monotone

    @classmethod
    def from_function(cls, space: Poset, fn: Callable) -> "Operator":
        return cls(space, {e: fn(e) for e in space.elements})


def _mask_bits(mask: int) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def lfp(op: Operator) -> object:
    """Least fixpoint by Kleene iteration from bottom.

    Requires a monotone operator on a space with a bottom; finiteness bounds
    the iteration by the space size.
    """
    if not op.space.has_bottom():
        raise NoBottom("least fixpoint needs a bottom element")
    if not op.is_monotone():
        raise NotMonotone("least fixpoint needs a monotone operator")
    x = op.space.bottom()
    for _ in range(len(op.space) + 1):
        nxt = op(x)
        if nxt == x:
            return x
        x = nxt
    raise InternalLawFailure("Kleene iteration failed to stabilize")


# ---------------------------------------------------------------------------
# Pair structures


class PairStructure:
    """Bijection between a pair-structured space and consistent (lower, upper)
    combinations. ``merge`` is partial when the space keeps only consistent
    pairs."""

    def __init__(self, space: Poset, lower: Poset, upper: Poset,
                 split_table: Mapping, name: str = "pairs"):
        self.space = space
        self.lower = lower
        self.upper = upper
        self.name = name
        self._split = dict(split_table)
        self._merge = {}
        for e, (x, y) in self._split.items():
            self._merge[(x, y)] = e

    def split(self, e):
        try:
            return self._split[e]
        except KeyError:
            raise UnknownElement(f"{e!r} not in pair space") from None

    def merge(self, x, y):
        try:
            return self._merge[(x, y)]
        except KeyError:
            raise UnknownElement(
                f"({x!r}, {y!r}) is not a consistent pair of this space") from None

    def has_pair(self, x, y) -> bool:
        return (x, y) in self._merge

    @classmethod
    def square(cls, base: Poset, space: Poset) -> "PairStructure":
        """Structure of a full or consistent square: elements are pairs over
        one base lattice."""
        table = {e: (e[0], e[1]) for e in space.elements}
        return cls(space, base, base, table, name="square")

    @classmethod
    def componentwise(cls, structures: Sequence["PairStructure"],
                      space: Poset) -> "PairStructure":
        """Product structure: split each coordinate and regroup."""
        table = {}
        for e in space.elements:
            lows = tuple(structures[i].split(e[i])[0] for i in range(len(structures)))
            ups = tuple(structures[i].split(e[i])[1] for i in range(len(structures)))
            table[e] = (lows, ups)
        lower = product([s.lower for s in structures])
        upper = product([s.upper for s in structures])
        return cls(space, lower, upper, table, name="product")

    @classmethod
    def pointwise(cls, inner: "PairStructure", space: Poset) -> "PairStructure":
        """Function-space structure: a map of pairs splits into the map of
        lower parts and the map of upper parts."""
        table = {}
        lower_vals = set()
        upper_vals = set()
        for f in space.elements:
            lows = tuple(inner.split(v)[0] for v in f)
            ups = tuple(inner.split(v)[1] for v in f)
            table[f] = (lows, ups)
            lower_vals.add(lows)
            upper_vals.add(ups)

        def lower_key(tup):
            return tuple(inner.lower.index(v) for v in tup)

        def upper_key(tup):
            return tuple(inner.upper.index(v) for v in tup)

        lower = _pointwise_poset(sorted(lower_vals, key=lower_key), inner.lower)
        upper = _pointwise_poset(sorted(upper_vals, key=upper_key), inner.upper)
        return cls(space, lower, upper, table, name="pointwise")


def _pointwise_poset(tables: Sequence[tuple], value_poset: Poset) -> Poset:
    above = []
    n = len(tables)
    for f in tables:
        row = 0
        for j, g in enumerate(tables):
            if all(value_poset.leq(f[i], g[i]) for i in range(len(f))):
                row |= 1 << j
        above.append(row)
    return Poset(tuple(tables), above, kind="plain")


class Approximator:
    """A precision-monotone operator on a pair-structured space."""

    def __init__(self, structure: PairStructure, op: Operator):
        if op.space is not structure.space \
                and op.space.elements != structure.space.elements:
            raise UnknownElement("operator and structure disagree on the carrier")
        if not op.is_monotone():
            raise NotMonotone("approximators must be precision-monotone")
        self.structure = structure
        self.op = op

    def a1(self, x, y):
        return self.structure.split(self.op(self.structure.merge(x, y)))[0]

    def a2(self, x, y):
        return self.structure.split(self.op(self.structure.merge(x, y)))[1]


@dataclass(frozen=True)
class ApproximatorReport:
    monotone: bool
    symmetric: bool
    approximates: Optional[bool]


def check_approximator(structure: PairStructure, op: Operator,
                       approximated: Optional[Operator] = None) -> ApproximatorReport:
    """Exhaustive flags: precision-monotonicity, symmetry (A1(x,y) = A2(y,x)
    wherever both pairs exist), and agreement with an operator on the
    diagonal."""
    monotone = op.is_monotone()
    symmetric = True
    for e in structure.space.elements:
        x, y = structure.split(e)
        if not structure.has_pair(y, x):
            continue
        mirrored = structure.split(op(structure.merge(y, x)))[1]
        if structure.split(op(e))[0] != mirrored:
            symmetric = False
            break
    approximates: Optional[bool] = None
    if approximated is not None:
        approximates = True
        for x in approximated.space.elements:
            if not structure.has_pair(x, x):
                approximates = False
                break
            image = op(structure.merge(x, x))
            ox = approximated(x)
            if not structure.has_pair(ox, ox) \
                    or image != structure.merge(ox, ox):
                approximates = False
                break
    return ApproximatorReport(monotone=monotone, symmetric=symmetric,
                              approximates=approximates)


# ---------------------------------------------------------------------------
# The four fixpoint families


def kripke_kleene(a: Approximator):
    """Least fixpoint of the approximator in the precision order."""
    return lfp(a.op)


def supported_fixpoints(a: Approximator) -> list:
    """All x with A1(x,x) = x, in the lower lattice's canonical order."""
    out = []
    for x in a.structure.lower.elements:
        if a.structure.has_pair(x, x) and a.a1(x, x) == x:
            out.append(x)
    return out


def stable_revision(a: Approximator, y):
    """Least fixpoint of A1(., y) over the lower lattice, for y in the upper
    lattice.

    On spaces that keep only consistent pairs, the revision sequence can
    produce a lower value no longer below y; that case raises
    InconsistentRevision instead of clamping (see the module notes on the
    experimental status of stable constructions beyond full squares).
    """
    a.structure.upper.index(y)
    lower = a.structure.lower
    if not lower.has_bottom():
        raise NoBottom("lower lattice has no bottom")
    x = lower.bottom()
    for _ in range(len(lower) + 1):
        if not a.structure.has_pair(x, y):
            raise InconsistentRevision(
                f"revision value {x!r} is not paired with upper bound {y!r}")
        nxt = a.a1(x, y)
        if nxt == x:
            return x
        if not lower.leq(x, nxt):
            raise NotMonotone("lower revision is not inflationary; "
                              "approximator is not precision-monotone here")
        x = nxt
    raise InternalLawFailure("stable revision failed to stabilize")


def stable_fixpoints(a: Approximator) -> list:
    """All x with S_A(x) = x, in canonical order."""
    out = []
    upper_set = set(a.structure.upper.elements)
    for x in a.structure.lower.elements:
        if x not in upper_set:
            continue
        if stable_revision(a, x) == x:
            out.append(x)
    return out


def well_founded(a: Approximator):
    """Least fixpoint of (x, y) -> (S_A(y), S_A(x)) in the precision order."""
    structure = a.structure
    table = {}
    for e in structure.space.elements:
        x, y = structure.split(e)
        table[e] = structure.merge(stable_revision(a, y), stable_revision(a, x))
    return lfp(Operator(structure.space, table))


# ---------------------------------------------------------------------------
# Interchange


def operator_to_dict(op: Operator) -> dict:
    from .order import poset_to_dict, render_element

    return {
        "space": poset_to_dict(op.space),
        "table": {render_element(op.space, k): render_element(op.space, v)
                  for k, v in op.table.items()},
    }


def operator_from_dict(data: Mapping, space: Optional[Poset] = None) -> Operator:
    """Rebuild an operator; pass ``space`` to attach the table to an existing
    poset instead of the serialized copy (needed when elements are structured
    values rather than plain names)."""
    from .order import poset_from_dict, render_index

    target = space if space is not None else poset_from_dict(data["space"])
    idx = render_index(target)
    table = {idx[k]: idx[v] for k, v in data["table"].items()}
    return Operator(target, table)
