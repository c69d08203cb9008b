import pytest

from aftkit.errors import ParseError, UnknownBaseType
from aftkit.order import RelationMode, antichain, validate_poset
from aftkit.typesys import (
    Arrow,
    Base,
    Prod,
    TypeClass,
    classify_type,
    closure_S,
    format_type,
    parse_type,
    prod,
    semantics,
)

O = Base("o")
I = Base("i")
BOOL = validate_poset(["f", "t"], [("f", "t")], RelationMode.COVERS)


# ---------------------------------------------------------------------------
# parsing


def test_parse_base_and_arrow():
    assert parse_type("o") == O
    assert parse_type("o -> o") == Arrow(O, O)
    assert parse_type("o->o->o") == Arrow(O, Arrow(O, O))  # right-assoc
    assert parse_type("(o->o)->o") == Arrow(Arrow(O, O), O)


def test_parse_products():
    assert parse_type("()") == Prod(())
    assert parse_type("(o, o->o)") == Prod((("0", O), ("1", Arrow(O, O))))
    assert parse_type("(p: o, q: o)") == Prod((("p", O), ("q", O)))
    assert parse_type("(o)") == O  # grouping, not a 1-tuple


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_type("o ->")
    with pytest.raises(ParseError):
        parse_type("(o, o")
    with pytest.raises(ParseError):
        parse_type("o o")


def test_format_round_trip():
    for text in ["o", "o -> o", "(o -> o) -> o", "(p: o, q: i -> o)", "()"]:
        t = parse_type(text)
        assert parse_type(format_type(t)) == t


# ---------------------------------------------------------------------------
# semantics


def test_semantics_base():
    assert semantics(O, {"o": BOOL}).elements == ("f", "t")


def test_semantics_arrow_is_full_function_space():
    sp = semantics(Arrow(O, O), {"o": BOOL})
    assert len(sp) == 4  # includes the non-monotone swap


def test_semantics_empty_product():
    assert len(semantics(Prod(()), {})) == 1


def test_semantics_unknown_base():
    with pytest.raises(UnknownBaseType):
        semantics(Base("x"), {"o": BOOL})


def test_semantics_iso_product_copies():
    from aftkit.order import product
    from aftkit.universal import find_isomorphism

    for src_base in (BOOL, antichain(["a", "b", "c"])):
        fs = semantics(Arrow(Base("b"), O), {"b": src_base, "o": BOOL})
        pr = product([BOOL] * len(src_base))
        assert find_isomorphism(fs, pr) is not None


# ---------------------------------------------------------------------------
# closure


def test_closure_base_only():
    c = closure_S([O])
    assert c.members == (O,)


def test_closure_arrow_adds_codomain():
    c = closure_S([Arrow(O, O)])
    assert set(c.members) == {Arrow(O, O), O}
    assert Arrow(O, O) in c and O in c


def test_closure_product_adds_components():
    t = prod(O, Arrow(O, O))
    c = closure_S([t])
    assert set(c.members) == {t, O, Arrow(O, O)}


def test_closure_idempotent_and_monotone():
    c1 = closure_S([Arrow(O, O)])
    c2 = closure_S(c1.members)
    assert set(c1.members) == set(c2.members)
    bigger = closure_S([Arrow(O, O), I])
    assert set(c1.members) <= set(bigger.members)


# ---------------------------------------------------------------------------
# grammar classification


def test_classify_examples():
    assert classify_type(O) is TypeClass.PREDICATE
    assert classify_type(Arrow(I, I)) is TypeClass.FUNCTIONAL
    assert classify_type(Arrow(Arrow(O, O), O)) is TypeClass.PREDICATE
    assert classify_type(I) is TypeClass.FUNCTIONAL
    assert classify_type(Arrow(I, O)) is TypeClass.PREDICATE
    assert classify_type(Arrow(O, I)) is TypeClass.OTHER
    assert classify_type(prod(O, O)) is TypeClass.OTHER


def test_classify_unknown_base():
    with pytest.raises(UnknownBaseType):
        classify_type(Base("x"))
