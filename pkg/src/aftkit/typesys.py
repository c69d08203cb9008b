"""Type expressions, their poset semantics, closure, and the predicate/
functional type grammar.

Semantics follow the plain Cartesian structure on posets: arrows denote the
full function space (non-monotone maps included), products the componentwise
order. Approximation spaces over these semantics live in
:mod:`aftkit.systems`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ParseError, UnknownBaseType
from .order import Poset, function_space, product


class TypeExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Base(TypeExpr):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Prod(TypeExpr):
    """Labeled finite product; labels default to positional strings."""

    items: tuple  # of (label, TypeExpr)

    def __post_init__(self):
        labels = [l for l, _ in self.items]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate product labels in {labels}")

    def __str__(self) -> str:
        parts = []
        for i, (label, t) in enumerate(self.items):
            if label == str(i):
                parts.append(str(t))
            else:
                parts.append(f"{label}: {t}")
        return "(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class Arrow(TypeExpr):
    src: TypeExpr
    dst: TypeExpr

    def __str__(self) -> str:
        s = str(self.src)
        if isinstance(self.src, Arrow):
            s = f"({s})"
        return f"{s} -> {self.dst}"


def prod(*types: TypeExpr, labels: Optional[Sequence[str]] = None) -> Prod:
    if labels is None:
        labels = [str(i) for i in range(len(types))]
    return Prod(tuple(zip(labels, types)))


def arrows(*types: TypeExpr) -> TypeExpr:
    """Right-associated arrow chain: arrows(a, b, c) == a -> (b -> c)."""
    out = types[-1]
    for t in reversed(types[:-1]):
        out = Arrow(t, out)
    return out


# ---------------------------------------------------------------------------
# Text syntax: `o`, `i`, `t1 -> t2` (right-associative), `(a, b)` products
# with optional labels `name: t`; `(t)` is grouping, `()` the empty product.

_TOKEN = re.compile(r"\s*(->|[(),:]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"bad character {rest[0]!r} in type", 1, pos + 1)
        out.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    return out


def parse_type(text: str) -> TypeExpr:
    tokens = _tokenize(text)
    idx = 0

    def peek():
        return tokens[idx][0] if idx < len(tokens) else None

    def take(expected=None):
        nonlocal idx
        if idx >= len(tokens):
            raise ParseError(f"unexpected end of type (wanted {expected})", 1,
                             len(text) + 1)
        tok, col = tokens[idx]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", 1, col)
        idx += 1
        return tok, col

    def parse_arrow() -> TypeExpr:
        left = parse_atom()
        if peek() == "->":
            take()
            return Arrow(left, parse_arrow())
        return left

    def parse_atom() -> TypeExpr:
        tok, col = take()
        if tok == "(":
            if peek() == ")":
                take()
                return Prod(())
            first_label = None
            entries = []
            t = None
            if peek() and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", peek()) \
                    and idx + 1 < len(tokens) and tokens[idx + 1][0] == ":":
                first_label, _ = take()
                take(":")
            t = parse_arrow()
            entries.append((first_label, t))
            while peek() == ",":
                take()
                label = None
                if peek() and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", peek()) \
                        and idx + 1 < len(tokens) and tokens[idx + 1][0] == ":":
                    label, _ = take()
                    take(":")
                entries.append((label, parse_arrow()))
            take(")")
            if len(entries) == 1 and entries[0][0] is None:
                return entries[0][1]
            labeled = tuple((lab if lab is not None else str(i), ty)
                            for i, (lab, ty) in enumerate(entries))
            return Prod(labeled)
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return Base(tok)
        raise ParseError(f"unexpected token {tok!r} in type", 1, col)

    result = parse_arrow()
    if idx != len(tokens):
        raise ParseError(f"trailing tokens after type: {tokens[idx][0]!r}",
                         1, tokens[idx][1])
    return result


def format_type(t: TypeExpr) -> str:
    return str(t)


# ---------------------------------------------------------------------------
# Semantics


BaseAssignment = Mapping[str, Poset]


def semantics(t: TypeExpr, base: BaseAssignment, cap: Optional[int] = None) -> Poset:
    """The poset a type denotes: assigned base posets, componentwise products,
    full function spaces for arrows."""
    if isinstance(t, Base):
        try:
            return base[t.name]
        except KeyError:
            raise UnknownBaseType(f"no semantics declared for base type {t.name}") \
                from None
    if isinstance(t, Prod):
        factors = [semantics(ty, base, cap) for _, ty in t.items]
        labels = [l for l, _ in t.items]
        return product(factors, labels=labels, cap=cap)
    if isinstance(t, Arrow):
        return function_space(semantics(t.src, base, cap),
                              semantics(t.dst, base, cap), cap=cap)
    raise TypeError(f"not a type expression: {t!r}")


# ---------------------------------------------------------------------------
# Closure


@dataclass(frozen=True)
class TypeClosure:
    roots: tuple
    members: tuple

    def __contains__(self, t: TypeExpr) -> bool:
        return t in self._member_set

    @property
    def _member_set(self):
        return frozenset(self.members)


def closure_S(roots: Iterable[TypeExpr]) -> TypeClosure:
    """Least superset of the roots closed under arrow-codomain and
    product-component membership; member order is discovery order."""
    roots = tuple(dict.fromkeys(roots))
    members: list = []
    seen = set()
    work = list(roots)
    while work:
        t = work.pop(0)
        if t in seen:
            continue
        seen.add(t)
        members.append(t)
        if isinstance(t, Arrow):
            work.append(t.dst)
        elif isinstance(t, Prod):
            work.extend(ty for _, ty in t.items)
    return TypeClosure(roots, tuple(members))


# ---------------------------------------------------------------------------
# The predicate/functional grammar over bases o and i


class TypeClass(Enum):
    FUNCTIONAL = "functional"
    PREDICATE = "predicate"
    PARAMETER_ONLY = "parameter_only"
    OTHER = "other"


def _check_bases(t: TypeExpr) -> None:
    if isinstance(t, Base):
        if t.name not in ("o", "i"):
            raise UnknownBaseType(
                f"type grammar classification only covers bases o and i, got {t.name}")
    elif isinstance(t, Prod):
        for _, ty in t.items:
            _check_bases(ty)
    elif isinstance(t, Arrow):
        _check_bases(t.src)
        _check_bases(t.dst)


def _is_functional(t: TypeExpr) -> bool:
    if isinstance(t, Base):
        return t.name == "i"
    if isinstance(t, Arrow):
        return isinstance(t.src, Base) and t.src.name == "i" and _is_functional(t.dst)
    return False


def _is_predicate(t: TypeExpr) -> bool:
    if isinstance(t, Base):
        return t.name == "o"
    if isinstance(t, Arrow):
        return _is_parameter(t.src) and _is_predicate(t.dst)
    return False


def _is_parameter(t: TypeExpr) -> bool:
    return (isinstance(t, Base) and t.name == "i") or _is_predicate(t)


def classify_type(t: TypeExpr) -> TypeClass:
    """Slot a type into the predicate / functional / parameter grammar.

    Bases: i is functional, o is predicate; parameters are i or predicates.
    PARAMETER_ONLY is unreachable under this grammar (every parameter is
    already functional or predicate) but kept for interface stability.
    """
    _check_bases(t)
    if _is_predicate(t):
        return TypeClass.PREDICATE
    if _is_functional(t):
        return TypeClass.FUNCTIONAL
    if _is_parameter(t):
        return TypeClass.PARAMETER_ONLY
    return TypeClass.OTHER
