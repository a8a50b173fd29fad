import random

import pytest
from cohpres.cells import cells_equal
from cohpres.core import CellStep, CellTrace, Path, identity
from cohpres.dsl import parse_path, parse_presentation
from cohpres.objects import equational_successors, successors, words_up_to
from cohpres.errors import CompositionError, MissingResidualError, ModeError
from cohpres.residuation import (
    LEFTMOST, RANDOM, RIGHTMOST, cell_residual, derive_residual_table, pasting_residual, path_residual,
    residual_pair, residual_witness, step_residual, zigzag_residual,
)


def step(text, p):
    return parse_path(text, p).steps[0]


def test_ds2_table_has_two_squares(ds2_table):
    squares = {(str(e.f), str(e.g)): e for e in ds2_table.pairs()}
    assert set(squares) == {("[g]a", "b[m]"), ("b[g]", "[n]a")}
    assert ds2_table.diagnostics == []
    assert not ds2_table.ambiguous


def test_ds2_local_residuals(ds2, ds2_table):
    ga, bm = step("[g]a", ds2), step("b[m]", ds2)
    bm_after_ga, ga_after_bm = step_residual(ga, bm, ds2_table)
    assert str(bm_after_ga) == "a[g] ; [m]b"
    assert str(ga_after_bm) == "[g]"

    bg, na = step("b[g]", ds2), step("[n]a", ds2)
    na_after_bg, bg_after_na = step_residual(bg, na, ds2_table)
    assert str(na_after_bg) == "[g]b ; a[n]"
    assert str(bg_after_na) == "[g]"


def test_table_lookup_is_whiskered(ds2, ds2_table):
    g_over_f, f_over_g = step_residual(step("b[g]a", ds2), step("[n]aa", ds2), ds2_table)
    assert str(g_over_f) == "[g]ba ; a[n]a"
    assert str(f_over_g) == "[g]a"


def test_disjoint_steps_exchange(ds2, ds2_table):
    g_over_f, f_over_g = step_residual(step("[g]ba", ds2), step("ba[g]", ds2), ds2_table)
    assert str(g_over_f) == "ab[g]"
    assert str(f_over_g) == "[g]ab"


def test_path_residuals(ds2, ds2_table):
    f = parse_path("b[g]a", ds2)
    g = parse_path("[n]aa ; b[m]", ds2)
    assert str(path_residual(g, f, ds2_table)) == "[g]ba ; a[n]a ; a[g] ; [m]b"
    assert str(path_residual(f, g, ds2_table)) == "[g]"

    h = parse_path("bb[m] ; [n]a", ds2)
    assert str(path_residual(h, f, ds2_table)) == "ba[g] ; b[m]b ; [g]b ; a[n]"


def test_residuals_of_exchanged_paths_are_related(ds2, ds2_table):
    f = parse_path("b[g]a", ds2)
    first = path_residual(parse_path("[n]aa ; b[m]", ds2), f, ds2_table)
    second = path_residual(parse_path("bb[m] ; [n]a", ds2), f, ds2_table)
    assert first.target == second.target
    assert first != second
    assert cells_equal(first, second, ds2).equal


def test_unit_laws(ds2, ds2_table):
    f = parse_path("b[g]a", ds2)
    g = parse_path("[n]aa ; b[m]", ds2)
    unit = identity(f.source)
    assert path_residual(g, unit, ds2_table) == g
    assert path_residual(unit, f, ds2_table) == identity(f.target)
    assert path_residual(f, f, ds2_table) == identity(f.target)


def test_schedules_agree(ds2, ds2_table):
    f = parse_path("b[g]a ; [g]ba ; ab[g] ; a[g]b", ds2)
    g = parse_path("[n]aa ; b[m]", ds2)
    results = {
        zigzag_residual(g, f, ds2_table, strategy)
        for strategy in (LEFTMOST, RIGHTMOST)
    }
    results.add(zigzag_residual(g, f, ds2_table, RANDOM, random.Random(7)))
    assert len(results) == 1


def test_pasting_matches_zigzag(ds2, ds2_table):
    f = parse_path("b[g]a ; [g]ba", ds2)
    for text in ("[n]aa ; b[m]", "bb[m] ; [n]a", "bb[m]"):
        g = parse_path(text, ds2)
        g_over_f, f_over_g, _ = pasting_residual(g, f, ds2_table)
        assert (g_over_f, f_over_g) == residual_pair(g, f, ds2_table)


def test_residual_witness_is_a_two_cell(ds2, ds2_table):
    f = parse_path("b[g]a", ds2)
    g = parse_path("[n]aa ; b[m]", ds2)
    witness = residual_witness(f, g, ds2_table)
    assert witness.trace.check().source == witness.left
    assert witness.trace.target == witness.right
    assert witness.left == f.then(path_residual(g, f, ds2_table))


def test_residuals_of_random_instances_are_cofinal(ds2, ds2_table, fake):
    from cohpres.objects import equational_successors, successors
    from cohpres.core import Path
    for _ in range(25):
        word = tuple(fake.random_elements(elements=("a", "b"), length=fake.random_int(2, 5), unique=False))
        options = equational_successors(word, ds2)
        if not options:
            continue
        f = Path(word, (fake.random_element(elements=options),))
        g = Path(word, (fake.random_element(elements=successors(word, ds2.generators)),))
        g_over_f, f_over_g = residual_pair(g, f, ds2_table)
        assert g_over_f.source == f.target
        assert f_over_g.source == g.target
        assert g_over_f.target == f_over_g.target
        assert f_over_g.equational


def test_not_coinitial(ds2, ds2_table):
    with pytest.raises(CompositionError):
        path_residual(parse_path("[g]a", ds2), parse_path("[g]", ds2), ds2_table)


def test_missing_residual():
    p = parse_presentation("objects a b\ngen m : a a -> a\neqgen g : b a -> a b\n")
    table = derive_residual_table(p)
    f, g = parse_path("[g]a", p), parse_path("b[m]", p)
    with pytest.raises(MissingResidualError):
        path_residual(g, f, table)


def test_ambiguous_squares_keep_the_first_relation(ds2):
    from dataclasses import replace
    from cohpres.core import Relation
    gamma = ds2.relation("gamma")
    twin = Relation("gamma_twin", gamma.lhs, gamma.rhs)
    table = derive_residual_table(replace(ds2, relations=ds2.relations + (twin,)))
    assert table.ambiguous
    assert "gamma and gamma_twin" in table.diagnostics[0]
    assert table.lookup(step("[g]a", ds2), step("b[m]", ds2)).relation.name == "gamma"


def test_cell_residual_shifts_a_disjoint_instance(ds2, ds2_table):
    from cohpres.core import CellStep, CellTrace, RelationInstance
    instance = RelationInstance(ds2.relation("alpha"), (), ("b", "a"))
    alpha = CellTrace.single(CellStep(identity(instance.source_word), instance, identity(instance.after.target)))
    f = parse_path("aaa[g]", ds2)
    moved = cell_residual(alpha, f, ds2_table, ds2)
    assert moved.check().source == path_residual(alpha.source, f, ds2_table)
    assert moved.target == path_residual(alpha.target, f, ds2_table)
    assert [str(i) for i in moved.instances()] == ["alpha·ab"]


def test_residuals_need_an_equational_side(ds2, ds2_table):
    with pytest.raises(ModeError):
        path_residual(parse_path("bb[m]", ds2), parse_path("[n]aa", ds2), ds2_table)
    with pytest.raises(ModeError):
        pasting_residual(parse_path("bb[m]", ds2), parse_path("[n]aa", ds2), ds2_table)


def test_residual_memo_is_bounded(ds2):
    table = derive_residual_table(ds2)
    table.memo_size = 2
    f = parse_path("b[g]a", ds2)
    for text in ("[n]aa ; b[m]", "bb[m] ; [n]a", "bb[m]", "[n]aa"):
        path_residual(parse_path(text, ds2), f, table)
        assert len(table._memo) <= 2
    assert str(path_residual(parse_path("[n]aa ; b[m]", ds2), f, table)) == "[g]ba ; a[n]a ; a[g] ; [m]b"


def _extensions(word, p, length, equational=False):
    """Every path of exactly ``length`` steps out of ``word``."""
    paths = [Path(word)]
    for _ in range(length):
        paths = [Path(word, path.steps + (step,)) for path in paths
                 for step in (equational_successors(path.target, p) if equational
                              else successors(path.target, p.generators))]
    return paths


def test_residuals_are_among_the_tiles_found_by_search(ds2, ds2_table):
    checked = 0
    for word in words_up_to(ds2.objects, 3):
        equational = [f for n in (1, 2) for f in _extensions(word, ds2, n, equational=True)]
        others = [g for n in (1, 2) for g in _extensions(word, ds2, n)]
        for f in equational:
            for g in others:
                found = residual_pair(g, f, ds2_table)
                assert zigzag_residual(g, f, ds2_table, RIGHTMOST) == found
                g_over_f, f_over_g = found
                tiles = [
                    (u, v)
                    for u in _extensions(f.target, ds2, g_over_f.length)
                    for v in _extensions(g.target, ds2, f_over_g.length, equational=True)
                    if u.target == v.target and cells_equal(f.then(u), g.then(v), ds2).equal
                ]
                assert found in tiles, f"{g} after {f}"
                checked += 1
    assert checked >= 20


def test_cell_residual_uses_the_cylinder_top(ds2):
    from cohpres.core import RelationInstance
    from cohpres.critical import check_cylinder, enumerate_critical_cylinders
    table = derive_residual_table(ds2)
    cylinder = next(c for c in enumerate_critical_cylinders(ds2, table) if str(c.alpha) == "b·alpha")
    top = check_cylinder(cylinder, ds2, table).top

    def single(instance):
        return CellTrace.single(CellStep(identity(instance.source_word), instance, identity(instance.after.target)))

    moved = cell_residual(single(cylinder.alpha), cylinder.vertical, table, ds2)
    assert (cylinder.f, cylinder.alpha) in table.tops
    assert moved.instances() == top.instances()

    alpha = cylinder.alpha
    whiskered = RelationInstance(alpha.relation, ("a",) + alpha.left, alpha.right + ("b",))
    moved = cell_residual(single(whiskered), cylinder.vertical.whisker(("a",), ("b",)), table, ds2)
    assert moved.check().source == path_residual(whiskered.before, cylinder.vertical.whisker(("a",), ("b",)), table)
    assert [str(i) for i in moved.instances()] == [str(i.whisker(("a",), ("b",))) for i in top.instances()]


def _walk(word, p, fake, equational=False):
    steps, current = (), word
    for _ in range(fake.random_int(1, 3)):
        options = equational_successors(current, p) if equational else successors(current, p.generators)
        if not options:
            break
        step = fake.random_element(elements=options)
        steps += (step,)
        current = step.target
    return Path(word, steps)


def test_schedules_agree_on_random_instances(ds2, ds2_table, fake):
    checked = 0
    while checked < 100:
        word = tuple(fake.random_elements(elements=("a", "b"), length=fake.random_int(2, 6), unique=False))
        f = _walk(word, ds2, fake, equational=True)
        if f.is_identity:
            continue
        g = _walk(word, ds2, fake)
        expected = zigzag_residual(g, f, ds2_table, LEFTMOST)
        assert zigzag_residual(g, f, ds2_table, RIGHTMOST) == expected
        assert zigzag_residual(g, f, ds2_table, RANDOM, random.Random(fake.random_int(0, 10 ** 6))) == expected
        checked += 1
