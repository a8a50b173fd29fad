import pytest
from cohpres.core import (
    MorGen, Path, Relation, Step, compose, exchange_relation, identity, join_word, side_of, tensor_ctx,
)
from cohpres.dsl import parse_path
from cohpres.errors import CompositionError, ModeError, PresentationTypeError

M = MorGen("m", ("a", "a"), ("a",))
G = MorGen("g", ("b", "a"), ("a", "b"), equational=True)


def test_join_word():
    assert join_word(()) == "0"
    assert join_word(("b", "a", "a")) == "baa"
    assert join_word(("x'", "y")) == "x' y"


def test_step_endpoints():
    step = Step(("b",), M, ("b",))
    assert step.source == ("b", "a", "a", "b")
    assert step.target == ("b", "a", "b")
    assert (step.start, step.end, step.out_end) == (1, 3, 2)
    assert str(step) == "b[m]b"


def test_side_of():
    assert side_of(1, 3, 0, 1) == "left"
    assert side_of(1, 3, 3, 4) == "right"
    assert side_of(1, 3, 2, 4) is None
    # empty intervals in the same gap overlap
    assert side_of(2, 2, 2, 2) is None
    assert side_of(0, 2, 2, 2) == "right"


def test_compose_checks_endpoints():
    f = Path(("b", "a"), (Step((), G, ()),))
    with pytest.raises(CompositionError):
        compose(f, f)
    assert compose(f, identity(("a", "b"))) == f


def test_tensor_context_whiskers_every_step():
    f = Path(("a", "a"), (Step((), M, ()),))
    assert str(tensor_ctx(("b",), f, ("a",))) == "b[m]a"


def test_path_check_rejects_gaps():
    with pytest.raises(PresentationTypeError):
        Path(("a", "a"), (Step((), M, ()), Step((), M, ()))).check()


def test_exchange_relation_sides():
    chi = exchange_relation(M, ("b",), G)
    assert chi.name == "chi(m,b,g)"
    assert chi.is_exchange
    assert str(chi.lhs) == "[m]bba ; ab[g]"
    assert str(chi.rhs) == "aab[g] ; [m]bab"
    assert exchange_relation(M, (), G).name == "chi(m,g)"


def test_relation_sides_must_be_parallel(ds2):
    lhs = parse_path("[m]a ; [m]", ds2)
    with pytest.raises(PresentationTypeError):
        Relation("broken", lhs, parse_path("id aaa", ds2)).check()


def test_presentation_lookup(ds2):
    assert ds2.equational == frozenset({"g"})
    assert ds2.generator("m").source == ("a", "a")
    with pytest.raises(PresentationTypeError):
        ds2.generator("k")
    with pytest.raises(PresentationTypeError):
        ds2.relation("omega")


def test_path_mode_refuses_whiskering(huet):
    f = parse_path("[f]", huet)
    with pytest.raises(ModeError):
        huet.whisker(("x",), f, ())
