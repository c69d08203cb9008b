"""Approximation systems: assign approximation spaces to type semantics,
decide exactness and consistency, and project exact elements back.

A system fixes a flavor (square bilattices over each base lattice, or the
consistent-pair spaces of lower/upper tuples), the exact sets and projections
at base types, and a type closure. Everything above the bases is forced:
products go to products, arrows whose argument semantics lies inside the
closure go to exponentials of approximation spaces, and arrows whose argument
semantics lies outside go to products indexed by the argument's semantic
elements. Exactness, consistency, projections and canonical least exact
representatives are computed inductively along the same split.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

from . import lu as lumod
from .bilat import make_bilattice
from .errors import (
    InternalLawFailure,
    JoinAbsent,
    NotExact,
    TypeNotInClosure,
    UnknownBaseType,
)
from .order import (
    Direction,
    Poset,
    RelationMode,
    bound,
    classify,
    exponential,
    poset_from_dict,
    poset_to_dict,
    product,
    render_index,
    validate_poset,
)
from .typesys import (
    Arrow,
    Base,
    Prod,
    TypeClosure,
    TypeExpr,
    closure_S,
    parse_type,
    semantics,
)


class Flavor(Enum):
    BILAT = "bilat"
    LU = "lu"


@dataclass(frozen=True, eq=False)
class ApproxSpace:
    space: Poset
    of_type: TypeExpr
    semantics: Poset


class ApproximationSystem:
    """Flavor, base data, and closure, with memoized derived spaces."""

    def __init__(self, flavor: Flavor, base: Mapping[str, Poset],
                 closure: TypeClosure,
                 base_exact: Optional[Mapping[str, Sequence]] = None,
                 base_proj: Optional[Mapping[str, Mapping]] = None,
                 name: str = "custom"):
        self.flavor = flavor
        self.base = dict(base)
        self.closure = closure
        self.name = name
        self.base_app: dict = {}
        self.base_exact: dict = {}
        self.base_proj: dict = {}
        base_names = {t.name for t in closure.members if isinstance(t, Base)}
        for bname in sorted(base_names):
            if bname not in self.base:
                raise UnknownBaseType(f"closure mentions base {bname} with no semantics")
            space, exact, proj = self._build_base_app(self.base[bname])
            self.base_app[bname] = space
            if base_exact is not None and bname in base_exact:
                exact = tuple(base_exact[bname])
                for e in exact:
                    space.index(e)
            if base_proj is not None and bname in base_proj:
                proj = dict(base_proj[bname])
            self.base_exact[bname] = tuple(
                e for e in space.elements if e in set(exact))
            self.base_proj[bname] = proj
        self._app_cache: dict = {}
        self._exact_cache: dict = {}
        self._sem_cache: dict = {}

    def _build_base_app(self, sem: Poset):
        if self.flavor is Flavor.BILAT:
            b = make_bilattice(sem)
            return b.space, b.exact, dict(b.proj)
        square = lumod.validate_tuple(sem.elements, sem.elements,
                                      sem.relation_pairs(), RelationMode.FULL)
        space = lumod.lu_space(square).space
        exact = tuple((x, x) for x in sem.elements)
        proj = {(x, x): x for x in sem.elements}
        return space, exact, proj

    # -- type-indexed spaces -------------------------------------------------

    def semantics_of(self, t: TypeExpr, cap: Optional[int] = None) -> Poset:
        if t not in self._sem_cache:
            self._sem_cache[t] = semantics(t, self.base, cap=cap)
        return self._sem_cache[t]

    def app(self, t: TypeExpr, cap: Optional[int] = None) -> ApproxSpace:
        """Approximation space of a type in the closure."""
        if t in self._app_cache:
            return self._app_cache[t]
        if t not in self.closure:
            raise TypeNotInClosure(f"type {t} not in the system closure")
        if isinstance(t, Base):
            space = self.base_app[t.name]
        elif isinstance(t, Prod):
            comps = [self.app(ty, cap) for _, ty in t.items]
            labels = [l for l, _ in t.items]
            space = product([c.space for c in comps], labels=labels, cap=cap)
        elif isinstance(t, Arrow):
            tgt = self.app(t.dst, cap)
            if t.src in self.closure:
                src = self.app(t.src, cap)
                space = exponential(src.space, tgt.space, cap=cap)
            else:
                arg_sem = self.semantics_of(t.src, cap)
                space = product([tgt.space] * len(arg_sem), cap=cap,
                                extra_info={"arg_space": arg_sem,
                                            "tgt": tgt.space})
        else:
            raise TypeError(f"not a type expression: {t!r}")
        result = ApproxSpace(space=space, of_type=t,
                             semantics=self.semantics_of(t, cap))
        self._app_cache[t] = result
        return result

    # -- exactness ------------------------------------------------------------

    def exact_elements(self, t: TypeExpr, cap: Optional[int] = None) -> tuple:
        """Exact elements of the approximation space, in canonical order."""
        if t in self._exact_cache:
            return self._exact_cache[t]
        sp = self.app(t, cap)
        if isinstance(t, Base):
            out = self.base_exact[t.name]
        elif isinstance(t, Prod):
            comp_exact = [frozenset(self.exact_elements(ty, cap))
                          for _, ty in t.items]
            out = tuple(e for e in sp.space.elements
                        if all(e[i] in comp_exact[i] for i in range(len(comp_exact))))
        elif isinstance(t, Arrow):
            tgt_exact = frozenset(self.exact_elements(t.dst, cap))
            if t.src in self.closure:
                src_space = self.app(t.src, cap).space
                src_exact_pos = [src_space.index(e)
                                 for e in self.exact_elements(t.src, cap)]
                out = tuple(f for f in sp.space.elements
                            if all(f[i] in tgt_exact for i in src_exact_pos))
            else:
                out = tuple(f for f in sp.space.elements
                            if all(v in tgt_exact for v in f))
        else:
            raise TypeError(f"not a type expression: {t!r}")
        self._exact_cache[t] = out
        return out

    def is_exact(self, t: TypeExpr, e, cap: Optional[int] = None) -> bool:
        return e in set(self.exact_elements(t, cap))

    def is_consistent_element(self, t: TypeExpr, c, cap: Optional[int] = None) -> bool:
        """True iff some exact element sits above c in the precision order."""
        sp = self.app(t, cap)
        sp.space.index(c)
        return any(sp.space.leq(c, e) for e in self.exact_elements(t, cap))

    # -- projection -------------------------------------------------------------

    def project(self, t: TypeExpr, e, cap: Optional[int] = None):
        """Semantic object an exact element stands for."""
        if not self.is_exact(t, e, cap):
            raise NotExact(f"{e!r} is not exact at type {t}")
        return self._project_unchecked(t, e, cap)

    def _project_unchecked(self, t: TypeExpr, e, cap: Optional[int]):
        if isinstance(t, Base):
            return self.base_proj[t.name][e]
        if isinstance(t, Prod):
            return tuple(self._project_unchecked(ty, e[i], cap)
                         for i, (_, ty) in enumerate(t.items))
        if isinstance(t, Arrow):
            if t.src in self.closure:
                src_space = self.app(t.src, cap).space
                arg_sem = self.semantics_of(t.src, cap)
                out = []
                for x in arg_sem.elements:
                    rep = self.least_exact_representative(t.src, x, cap)
                    out.append(self._project_unchecked(
                        t.dst, e[src_space.index(rep)], cap))
                return tuple(out)
            return tuple(self._project_unchecked(t.dst, v, cap) for v in e)
        raise TypeError(f"not a type expression: {t!r}")

    # -- canonical representatives ----------------------------------------------

    def least_exact_representative(self, t: TypeExpr, x, cap: Optional[int] = None):
        """The glb of all exact elements projecting to x; exact, projects to x,
        and sits below every exact element with the same projection."""
        sem = self.semantics_of(t, cap)
        sem.index(x)
        return self._lrep(t, x, cap)

    def _lrep(self, t: TypeExpr, x, cap: Optional[int]):
        sp = self.app(t, cap)
        if isinstance(t, Base):
            pre = [e for e in self.base_exact[t.name]
                   if self.base_proj[t.name][e] == x]
            glb = bound(sp.space, pre, Direction.GLB)
            if glb is None or glb not in set(pre):
                raise InternalLawFailure(
                    f"base projection preimage of {x!r} has no exact glb")
            return glb
        if isinstance(t, Prod):
            return tuple(self._lrep(ty, x[i], cap)
                         for i, (_, ty) in enumerate(t.items))
        if isinstance(t, Arrow):
            if t.src not in self.closure:
                return tuple(self._lrep(t.dst, xi, cap) for xi in x)
            return self._lrep_arrow(t, x, cap)
        raise TypeError(f"not a type expression: {t!r}")

    def _lrep_arrow(self, t: Arrow, x, cap: Optional[int]):
        # Three-case construction: exact arguments go to the canonical
        # representative of their image; consistent non-exact arguments to the
        # join of the representatives below them; everything else to bottom.
        src = self.app(t.src, cap)
        tgt = self.app(t.dst, cap)
        arg_sem = self.semantics_of(t.src, cap)
        exacts_src = self.exact_elements(t.src, cap)
        exact_set = set(exacts_src)
        proj_of = {e: self._project_unchecked(t.src, e, cap) for e in exacts_src}
        rep_for: dict = {}
        for xi_pos, xi in enumerate(arg_sem.elements):
            rep_for[xi] = self._lrep(t.dst, x[xi_pos], cap)
        out = []
        for a in src.space.elements:
            if a in exact_set:
                out.append(rep_for[proj_of[a]])
                continue
            below = [b for b in exacts_src if src.space.leq(b, a)]
            if below:
                join = bound(tgt.space, [rep_for[proj_of[b]] for b in below],
                             Direction.LUB)
                if join is None:
                    raise JoinAbsent(
                        f"join of representatives below {a!r} is missing")
                out.append(join)
            else:
                out.append(tgt.space.bottom())
        result = tuple(out)
        if result not in self.app(t, cap).space:
            raise InternalLawFailure(
                "canonical representative escaped the approximation space")
        return result

    # -- structural checks ---------------------------------------------------

    def bases_all_cjsl(self) -> bool:
        return all(classify(sp).is_complete_join_semilattice
                   for sp in self.base_app.values())

    def check_upward_closure(self, t: TypeExpr, cap: Optional[int] = None):
        """Verify the applicable exactness disjunct at a type: with any
        non-join-complete base space, everything above an exact element must
        be exact."""
        if self.bases_all_cjsl():
            return UpwardClosureCheck(True, None, "all base spaces are "
                                      "complete join semilattices")
        sp = self.app(t, cap)
        exact = set(self.exact_elements(t, cap))
        for e in exact:
            i = sp.space.index(e)
            for b in sp.space.elements_of(sp.space.above_mask(i)):
                if b not in exact:
                    return UpwardClosureCheck(False, (e, b), None)
        return UpwardClosureCheck(True, None, "exact elements are upward closed")


@dataclass(frozen=True)
class UpwardClosureCheck:
    ok: bool
    counterexample: Optional[tuple]
    reason: Optional[str]

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# System-level validation


@dataclass(frozen=True)
class Violation:
    clause: str
    message: str


@dataclass(frozen=True)
class SystemReport:
    ok: bool
    violation: Optional[Violation] = None

    def __bool__(self) -> bool:
        return self.ok


def validate_system(s: ApproximationSystem) -> SystemReport:
    """Check the base-level coherence clauses, reporting the first failure.

    Clauses: every base approximation space is a cpo; either all base spaces
    are complete join semilattices or every base exact set is upward closed;
    projections are total on the exacts and surjective onto the semantics;
    comparable exacts project equally; every semantic element's preimage has
    an exact glb projecting back to it.
    """
    for name, sp in s.base_app.items():
        if not classify(sp).is_cpo:
            return SystemReport(False, Violation(
                "app-cpo", f"base approximation space for {name} is not a cpo"))
    if not s.bases_all_cjsl():
        for name, sp in s.base_app.items():
            exact = set(s.base_exact[name])
            for e in exact:
                for b in sp.elements_of(sp.above_mask(sp.index(e))):
                    if b not in exact:
                        return SystemReport(False, Violation(
                            "exact-disjunct",
                            f"base {name}: {e!r} exact but {b!r} above it is not, "
                            "and some base space lacks arbitrary joins"))
    for name, sp in s.base_app.items():
        sem = s.base[name]
        proj = s.base_proj[name]
        exact = s.base_exact[name]
        for e in exact:
            if e not in proj:
                return SystemReport(False, Violation(
                    "proj-total", f"base {name}: projection undefined on {e!r}"))
            if proj[e] not in sem:
                return SystemReport(False, Violation(
                    "proj-range", f"base {name}: projection of {e!r} leaves the "
                    "semantics"))
        imaged = {proj[e] for e in exact}
        if imaged != set(sem.elements):
            missing = sorted(set(map(str, sem.elements)) - set(map(str, imaged)))
            return SystemReport(False, Violation(
                "proj-surjective", f"base {name}: nothing projects to {missing}"))
        for e1 in exact:
            for e2 in exact:
                if sp.leq(e1, e2) and proj[e1] != proj[e2]:
                    return SystemReport(False, Violation(
                        "comparable-exacts",
                        f"base {name}: {e1!r} <= {e2!r} but projections differ"))
        for x in sem.elements:
            pre = [e for e in exact if proj[e] == x]
            glb = bound(sp, pre, Direction.GLB)
            if glb is None or glb not in set(exact) or proj[glb] != x:
                return SystemReport(False, Violation(
                    "preimage-glb",
                    f"base {name}: preimage of {x!r} lacks an exact glb that "
                    "projects back"))
    return SystemReport(True)


# ---------------------------------------------------------------------------
# Builtins and JSON interchange


def _bool_chain() -> Poset:
    return validate_poset(["f", "t"], [("f", "t")], RelationMode.COVERS)


_BUILTIN_ROOTS = ("o", "o->o", "(o->o)->o")


def builtin_system(name: str) -> ApproximationSystem:
    """Pre-validated boolean systems: ``lu-bool`` and ``bilat-bool``, with the
    boolean type, its self-maps, and second-order self-maps in the closure."""
    roots = [parse_type(r) for r in _BUILTIN_ROOTS]
    if name == "lu-bool":
        return ApproximationSystem(Flavor.LU, {"o": _bool_chain()},
                                   closure_S(roots), name=name)
    if name == "bilat-bool":
        return ApproximationSystem(Flavor.BILAT, {"o": _bool_chain()},
                                   closure_S(roots), name=name)
    raise UnknownBaseType(f"unknown builtin system {name!r}")


def system_from_dict(data: Mapping) -> ApproximationSystem:
    flavor = Flavor(data["flavor"])
    base = {name: poset_from_dict(pd) for name, pd in data["bases"].items()}
    roots = [parse_type(tstr) for tstr in data["closure"]]
    closure = closure_S(roots)
    sys = ApproximationSystem(flavor, base, closure, name=data.get("name", "custom"))
    # optional exact/proj overrides, keyed by rendered approximation elements
    if "exact" in data or "proj" in data:
        exact_map = {}
        proj_map = {}
        for bname, space in sys.base_app.items():
            idx = render_index(space)
            if "exact" in data and bname in data["exact"]:
                exact_map[bname] = tuple(idx[srep] for srep in data["exact"][bname])
            if "proj" in data and bname in data["proj"]:
                proj_map[bname] = {idx[k]: v for k, v in data["proj"][bname].items()}
        sys = ApproximationSystem(flavor, base, closure,
                                  base_exact=exact_map or None,
                                  base_proj=proj_map or None,
                                  name=data.get("name", "custom"))
    return sys


def system_to_dict(s: ApproximationSystem) -> dict:
    from .order import render_element

    return {
        "flavor": s.flavor.value,
        "name": s.name,
        "bases": {name: poset_to_dict(p) for name, p in s.base.items()},
        "exact": {name: [render_element(s.base_app[name], e) for e in exacts]
                  for name, exacts in s.base_exact.items()},
        "proj": {name: {render_element(s.base_app[name], e): str(v)
                        for e, v in proj.items()}
                 for name, proj in s.base_proj.items()},
        "closure": [str(t) for t in s.closure.roots],
    }


def load_system(ref: str) -> ApproximationSystem:
    """Resolve ``builtin:<name>`` or a JSON file path to a system."""
    import json

    if ref.startswith("builtin:"):
        return builtin_system(ref[len("builtin:"):])
    with open(ref, "r", encoding="utf-8") as fh:
        return system_from_dict(json.load(fh))
