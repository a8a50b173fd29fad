import pytest
from cohpres.cells import (
    EQUAL, UNEQUAL_AT_BUDGET, cells_equal, exchange_canonical, exchange_class, exchange_equal,
    exchange_instance, named_cells, search_cells,
)
from cohpres.dsl import parse_path, parse_presentation
from cohpres.errors import CompositionError, SearchExhaustedError
from cohpres.objects import successors, words_up_to
from cohpres.core import Path


def test_canonical_form_puts_the_leftmost_step_first(ds2):
    left_first = parse_path("[n]aa ; b[m]", ds2)
    right_first = parse_path("bb[m] ; [n]a", ds2)
    assert exchange_canonical(right_first) == left_first
    assert exchange_equal(left_first, right_first)


def test_overlapping_steps_do_not_exchange(ds2):
    path = parse_path("b[m] ; [g]", ds2)
    assert exchange_instance(*path.steps) is None
    assert list(exchange_class(path)) == [path]


def test_exchange_instance_names_the_factors(ds2):
    path = parse_path("[n]aa ; b[m]", ds2)
    assert str(exchange_instance(*path.steps)) == "chi(n,m)"
    assert str(exchange_instance(*parse_path("bb[m] ; [n]a", ds2).steps)) == "chi(n,m)^-1"


def _paths(p, length):
    paths = []
    for word in words_up_to(p.objects, 4):
        layer = [Path(word)]
        for _ in range(length):
            layer = [path.then(Path(path.target, (step,))) for path in layer
                     for step in successors(path.target, p.generators)]
            paths += layer
    return paths


def test_canonical_form_is_idempotent_and_constant_on_classes(ds2):
    for path in _paths(ds2, 4):
        canonical = exchange_canonical(path)
        assert exchange_canonical(canonical) == canonical
        for member, trace in exchange_class(path).items():
            assert exchange_canonical(member) == canonical
            assert trace.check().target == member


def test_named_cells_in_both_directions(ds2):
    lhs = parse_path("[m]a ; [m]", ds2)
    assert [str(cell.instance) for cell in named_cells(lhs, ds2)] == ["alpha"]
    rhs = parse_path("a[m] ; [m]", ds2)
    assert [str(cell.instance) for cell in named_cells(rhs, ds2)] == ["alpha^-1"]


def test_search_finds_a_single_relation(ds2):
    trace = search_cells(parse_path("[m]a ; [m]", ds2), parse_path("a[m] ; [m]", ds2), ds2)
    assert trace.check().target == parse_path("a[m] ; [m]", ds2)
    assert [str(i) for i in trace.instances()] == ["alpha"]


def test_search_modulo_exchange(ds2):
    trace = search_cells(parse_path("[n]aa ; b[m]", ds2), parse_path("bb[m] ; [n]a", ds2), ds2)
    assert trace.length == 1
    assert trace.instances()[0].relation.is_exchange


def test_path_mode_search(huet):
    result = cells_equal(parse_path("[g] ; [g'] ; [f]", huet), parse_path("[f]", huet), huet)
    assert result.verdict == EQUAL
    assert [str(i) for i in result.trace.instances()] == ["phi"]


def test_free_generators_stay_apart():
    p = parse_presentation("objects a\ngen m1 : a a -> a\ngen m2 : a a -> a\n")
    result = cells_equal(parse_path("[m1]", p), parse_path("[m2]", p), p)
    assert result.verdict == UNEQUAL_AT_BUDGET
    assert not result.equal


def test_node_cap(ds2):
    lhs = parse_path("[m]aa ; [m]a ; [m]", ds2)
    rhs = parse_path("aa[m] ; a[m] ; [m]", ds2)
    with pytest.raises(SearchExhaustedError):
        search_cells(lhs, rhs, ds2, node_cap=1)


def test_search_needs_parallel_paths(ds2):
    with pytest.raises(CompositionError):
        search_cells(parse_path("[m]", ds2), parse_path("[g]", ds2), ds2)
