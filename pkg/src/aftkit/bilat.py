"""Square bilattices over complete lattices, their Cartesian structure maps,
and approximator classification.

The bilattice over a complete lattice L is the carrier L x L under the
precision order ((x1,y1) <= (x2,y2) iff x1 <=_L x2 and y2 <=_L y1), which is
exactly the product order of L x op(L); the code builds it that way so the
product machinery applies unchanged. Exact pairs are the diagonal, projected
to their common coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InternalLawFailure, NotCompleteLattice
from .order import (
    MonotoneMap,
    Poset,
    classify,
    exponential,
    opposite,
    product,
)


@dataclass(frozen=True, eq=False)
class Bilattice:
    base: Poset
    space: Poset
    exact: tuple
    proj: dict


def make_bilattice(base: Poset) -> Bilattice:
    """The square bilattice over a complete lattice, with exact set and
    projection. Its bottom is (bottom of L, top of L)."""
    c = classify(base)
    if not c.is_complete_lattice:
        raise NotCompleteLattice("bilattice base must be a complete lattice")
    space = product([base, opposite(base)],
                    extra_info={"bilattice_base": base})
    exact = tuple((x, x) for x in base.elements)
    proj = {(x, x): x for x in base.elements}
    if len(base) > 0:
        top_l = [x for x in base.elements
                 if base.below_mask(base.index(x)) == base.full_mask()][0]
        expected_bottom = (base.bottom(), top_l)
        if space.bottom() != expected_bottom:
            raise InternalLawFailure("bilattice bottom is not (bot, top)")
    return Bilattice(base=base, space=space, exact=exact, proj=proj)


@dataclass(frozen=True, eq=False)
class IsoPair:
    forward: MonotoneMap
    backward: MonotoneMap


def product_iso(l1: Poset, l2: Poset) -> IsoPair:
    """Order-isomorphism between the product of two bilattices and the
    bilattice of the product lattice: ((a1,b1),(a2,b2)) -> ((a1,a2),(b1,b2))."""
    b1 = make_bilattice(l1)
    b2 = make_bilattice(l2)
    pair_space = product([b1.space, b2.space])
    combined = make_bilattice(product([l1, l2]))
    fwd = {}
    bwd = {}
    for elem in pair_space.elements:
        (a1, bb1), (a2, bb2) = elem
        image = ((a1, a2), (bb1, bb2))
        fwd[elem] = image
        bwd[image] = elem
    phi = MonotoneMap(pair_space, combined.space, fwd)
    phi_inv = MonotoneMap(combined.space, pair_space, bwd)
    return IsoPair(phi, phi_inv)


def _swap_index(space: Poset):
    """Position map of the precision-flip (x,y) -> (y,x) on a bilattice carrier."""
    return [space.index((y, x)) for (x, y) in space.elements]


def exponential_iso(l1: Poset, l2: Poset, cap: Optional[int] = None) -> IsoPair:
    """Order-isomorphism between the exponential of two bilattices and the
    bilattice over the lattice of monotone maps L1-bar -> L2.

    A morphism f = (f1, f2) goes to (f1, f2 o delta) with delta the
    coordinate swap; the second component becomes monotone into L2 because f2
    was monotone into op(L2).
    """
    b1 = make_bilattice(l1)
    b2 = make_bilattice(l2)
    dom = exponential(b1.space, b2.space, cap=cap)
    hom = exponential(b1.space, l2, cap=cap)
    target = make_bilattice(hom)
    swap = _swap_index(b1.space)
    fwd = {}
    bwd = {}
    for f in dom.elements:
        f1 = tuple(v[0] for v in f)
        f2_delta = tuple(f[swap[i]][1] for i in range(len(f)))
        image = (f1, f2_delta)
        fwd[f] = image
        bwd[image] = f
    psi = MonotoneMap(dom, target.space, fwd)
    psi_inv = MonotoneMap(target.space, dom, bwd)
    return IsoPair(psi, psi_inv)


@dataclass(frozen=True)
class ApproximatorProfile:
    symmetric: bool
    gracefully_degrading: bool
    exact_pair_under_psi: bool
    consistent_pair_under_psi: bool


def classify_approximator(bilattice: Bilattice, op: MonotoneMap) -> ApproximatorProfile:
    """Exhaustively classify a precision-monotone operator on a bilattice.

    symmetric: A1(x,y) = A2(y,x) everywhere; gracefully degrading:
    A1(x,y) <=_L A2(y,x). The psi-side flags compare the two components of
    the image under the exponential isomorphism; they provably coincide with
    the direct flags, and a mismatch is reported as an internal failure.
    """
    space = bilattice.space
    base = bilattice.base
    if op.source is not space or op.target is not space:
        if op.source.elements != space.elements:
            raise InternalLawFailure("operator not defined on the bilattice carrier")
    symmetric = True
    degrading = True
    for (x, y) in space.elements:
        a1 = op((x, y))[0]
        a2_swapped = op((y, x))[1]
        if a1 != a2_swapped:
            symmetric = False
        if not base.leq(a1, a2_swapped):
            degrading = False
    # transport along psi computed directly from its defining formula
    g1 = {e: op(e)[0] for e in space.elements}
    g2 = {(x, y): op((y, x))[1] for (x, y) in space.elements}
    exact_pair = all(g1[e] == g2[e] for e in space.elements)
    consistent_pair = all(base.leq(g1[e], g2[e]) for e in space.elements)
    if exact_pair != symmetric or consistent_pair != degrading:
        raise InternalLawFailure("psi transport disagrees with direct classification")
    return ApproximatorProfile(
        symmetric=symmetric,
        gracefully_degrading=degrading,
        exact_pair_under_psi=exact_pair,
        consistent_pair_under_psi=consistent_pair,
    )
