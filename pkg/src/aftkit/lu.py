"""Lower/upper approximation tuples and their consistent-pair spaces.

An approximation tuple is a pair of complete lattices L (lower bounds) and U
(upper bounds) sharing one partial order, with top and bottom in both and the
two interlattice bound properties tying L-joins and U-meets to the shared
order. The associated space is the set of consistent pairs (x, y), x in L,
y in U, x <= y, under the precision order. These spaces are chain-complete
and closed under products and exponentials; `lu_exponential` builds the
function-space tuple and the isomorphism with the plain monotone-map poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    InternalLawFailure,
    NotAChain,
    TupleViolation,
    UnknownElement,
)
from .order import (
    Direction,
    MonotoneMap,
    Poset,
    RelationMode,
    bound,
    classify,
    enumerate_monotone_tables,
    exponential,
    opposite,
    subposet,
    validate_poset,
)


@dataclass(frozen=True, eq=False)
class ApproximationTuple:
    lower: tuple
    upper: tuple
    poset: Poset  # the shared order on lower ∪ upper

    @property
    def lower_poset(self) -> Poset:
        return subposet(self.poset, self.lower)

    @property
    def upper_poset(self) -> Poset:
        return subposet(self.poset, self.upper)


def validate_tuple(lower: Sequence, upper: Sequence,
                   leq: Iterable[tuple] | Poset,
                   mode: RelationMode = RelationMode.COVERS) -> ApproximationTuple:
    """Check all five approximation-tuple clauses exhaustively.

    Raises TupleViolation naming the first broken clause with witnesses:
    bounds (top/bottom existence), bounds-membership (in L ∩ U), lattice-L /
    lattice-U (complete-lattice failure), ilp / igp.
    """
    lower = tuple(dict.fromkeys(lower))
    upper = tuple(dict.fromkeys(upper))
    union = lower + tuple(u for u in upper if u not in set(lower))
    if isinstance(leq, Poset):
        po = leq
        if set(po.elements) != set(union):
            raise UnknownElement("order carrier differs from L ∪ U")
    else:
        po = validate_poset(union, leq, mode)

    n = len(po)
    top = next((e for e in po.elements
                if po.below_mask(po.index(e)) == po.full_mask()), None)
    bot = next((e for e in po.elements
                if po.above_mask(po.index(e)) == po.full_mask()), None)
    if top is None or bot is None:
        raise TupleViolation("bounds", "L ∪ U lacks a top or bottom element",
                             witness=(top, bot))
    low_set, up_set = set(lower), set(upper)
    if top not in low_set or top not in up_set or bot not in low_set or bot not in up_set:
        raise TupleViolation("bounds-membership",
                             "top and bottom must belong to both L and U",
                             witness=(bot, top))
    lp = subposet(po, lower)
    upo = subposet(po, upper)
    if not classify(lp).is_complete_lattice:
        raise TupleViolation("lattice-L", "L is not a complete lattice")
    if not classify(upo).is_complete_lattice:
        raise TupleViolation("lattice-U", "U is not a complete lattice")
    # ILP: every L-join of a set below some b in U stays below b.
    for b in upper:
        for mask in range(1 << len(lower)):
            s = [lower[i] for i in range(len(lower)) if mask >> i & 1]
            if not all(po.leq(x, b) for x in s):
                continue
            join = bound(lp, s, Direction.LUB)
            if join is None or not po.leq(join, b):
                raise TupleViolation("ilp",
                                     f"join of {s!r} in L escapes upper bound {b!r}",
                                     witness=(b, tuple(s)))
    # IGP: every U-meet of a set above some a in L stays above a.
    for a in lower:
        for mask in range(1 << len(upper)):
            s = [upper[i] for i in range(len(upper)) if mask >> i & 1]
            if not all(po.leq(a, x) for x in s):
                continue
            meet = bound(upo, s, Direction.GLB)
            if meet is None or not po.leq(a, meet):
                raise TupleViolation("igp",
                                     f"meet of {s!r} in U escapes lower bound {a!r}",
                                     witness=(a, tuple(s)))
    return ApproximationTuple(lower=lower, upper=upper, poset=po)


@dataclass(frozen=True, eq=False)
class LUSpace:
    tuple: ApproximationTuple
    space: Poset

    def p1(self, elem) -> object:
        return elem[0]

    def p2(self, elem) -> object:
        return elem[1]


def lu_space(t: ApproximationTuple) -> LUSpace:
    """The consistent pairs {(x, y) | x in L, y in U, x <= y} under the
    precision order. Its bottom is (bottom, top)."""
    po = t.poset
    elements = [(x, y) for x in t.lower for y in t.upper if po.leq(x, y)]
    n = len(elements)
    above = []
    for (x1, y1) in elements:
        row = 0
        for j, (x2, y2) in enumerate(elements):
            if po.leq(x1, x2) and po.leq(y2, y1):
                row |= 1 << j
        above.append(row)
    space = Poset(elements, above, kind="lu", info={"tuple": t})
    bot = next(e for e in po.elements if po.above_mask(po.index(e)) == po.full_mask())
    top = next(e for e in po.elements if po.below_mask(po.index(e)) == po.full_mask())
    if space.bottom() != (bot, top):
        raise InternalLawFailure("consistent-pair space bottom is not (bot, top)")
    return LUSpace(tuple=t, space=space)


def chain_sup(s: LUSpace, chain: Sequence) -> tuple:
    """Supremum of a precision-order chain: componentwise (L-join of lower
    parts, U-meet of upper parts). Coincides with the generic least upper
    bound, and for nonempty finite chains is itself a member."""
    elems = list(chain)
    for e in elems:
        s.space.index(e)
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            if not (s.space.leq(a, b) or s.space.leq(b, a)):
                raise NotAChain(f"{a!r} and {b!r} are incomparable")
    lp = s.tuple.lower_poset
    up = s.tuple.upper_poset
    x = bound(lp, [e[0] for e in elems], Direction.LUB)
    y = bound(up, [e[1] for e in elems], Direction.GLB)
    if x is None or y is None:
        raise InternalLawFailure("chain supremum missing in a complete lattice")
    return (x, y)


@dataclass(frozen=True, eq=False)
class LUExponential:
    tuple: ApproximationTuple
    lu: LUSpace
    iso: MonotoneMap       # plain exponential -> consistent-pair space
    iso_inv: MonotoneMap


def lu_exponential(a: LUSpace, b: LUSpace, cap: Optional[int] = None) -> LUExponential:
    """Function-space tuple for two consistent-pair spaces.

    The lower lattice is the monotone maps from the source space into
    (L_B, <=); the upper lattice the monotone maps into (U_B, >=), i.e. the
    precision-antitone picks of upper bounds. Both are ordered pointwise by
    the shared order of B's tuple, and the pairing f -> (p1 o f, p2 o f) is
    an order-isomorphism from the plain exponential onto the resulting
    consistent-pair space.
    """
    bl = subposet(b.tuple.poset, b.tuple.lower)
    bu = subposet(b.tuple.poset, b.tuple.upper)
    na = len(a.space)
    lower_tables = enumerate_monotone_tables(a.space, bl, cap)
    upper_tables_rev = enumerate_monotone_tables(a.space, opposite(bu), cap)
    lower = list(lower_tables)
    lower_set = set(lower)
    upper = sorted(upper_tables_rev,
                   key=lambda t: tuple(bu.index(v) for v in t))
    union = lower + [u for u in upper if u not in lower_set]
    # pointwise extension of B's shared order
    bp = b.tuple.poset
    pairs = []
    for f in union:
        for g in union:
            if f is not g and all(bp.leq(f[i], g[i]) for i in range(na)):
                pairs.append((f, g))
    po = validate_poset(union, [(f, f) for f in union] + pairs, RelationMode.FULL)
    try:
        tup = validate_tuple(lower, upper, po)
    except TupleViolation as exc:
        raise InternalLawFailure(
            f"constructed function-space tuple breaks clause {exc.clause}") from exc
    space = lu_space(tup)
    plain = exponential(a.space, b.space, cap=cap)
    fwd = {}
    bwd = {}
    for f in plain.elements:
        image = (tuple(v[0] for v in f), tuple(v[1] for v in f))
        fwd[f] = image
        bwd[image] = f
    if len(fwd) != len(space.space):
        raise InternalLawFailure(
            "pairing is not a bijection onto the consistent-pair space")
    nu = MonotoneMap(plain, space.space, fwd)
    nu_inv = MonotoneMap(space.space, plain, bwd)
    return LUExponential(tuple=tup, lu=space, iso=nu, iso_inv=nu_inv)


def tuple_to_dict(t: ApproximationTuple) -> dict:
    return {
        "L": list(t.lower),
        "U": list(t.upper),
        "leq": [[x, y] for x, y in t.poset.relation_pairs()],
        "mode": "full",
    }


def tuple_from_dict(data: dict) -> ApproximationTuple:
    mode = RelationMode(data.get("mode", "covers"))
    return validate_tuple(data["L"], data["U"],
                          [tuple(p) for p in data["leq"]], mode)
