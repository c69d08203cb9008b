"""Finite posets, approximation spaces over type hierarchies, and the
fixpoint semantics of non-monotonic definitions, at desk scale."""

__version__ = "0.1.0"
