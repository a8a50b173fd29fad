from cohpres.cells import EXCHANGE_EQUAL
from cohpres.critical import (
    EQUATIONAL_VERTICAL, check_cylinder, check_cylinders, enumerate_critical_cylinders, enumerate_critical_pairs,
)
from cohpres.core import RelationInstance, Step, exchange_relation, side_of
from cohpres.objects import successors, words_up_to
from cohpres.weights import weight_of_trace


def _labels(cylinders):
    return {(str(c.alpha), str(c.f)) for c in cylinders}


def test_ds2_critical_pairs(ds2, ds2_table):
    pairs = enumerate_critical_pairs(ds2, ds2_table)
    assert [("".join(p.word), str(p.f), str(p.g)) for p in pairs] == [
        ("baa", "[g]a", "b[m]"),
        ("bba", "b[g]", "[n]a"),
    ]
    assert all(pair.resolved for pair in pairs)
    assert [pair.entry.relation.name for pair in pairs] == ["gamma", "delta"]


def test_ds2op_critical_pairs(ds2op, ds2op_table):
    pairs = enumerate_critical_pairs(ds2op, ds2op_table)
    assert {(str(p.f), str(p.g)) for p in pairs} == {("[g]", "[m]b"), ("[g]", "a[n]")}
    assert all(pair.word == ("a", "b") for pair in pairs)


def test_no_equational_generators_no_pairs(deltas):
    assert enumerate_critical_pairs(deltas) == []
    assert enumerate_critical_cylinders(deltas) == []


def test_ds2_cylinders(ds2, ds2_table):
    cylinders = enumerate_critical_cylinders(ds2, ds2_table)
    assert _labels(cylinders) == {
        ("b·alpha", "[g]aa"),
        ("beta·a", "bb[g]"),
        ("chi(n,m)", "b[g]a"),
    }
    assert all(c.flavor == EQUATIONAL_VERTICAL for c in cylinders)


def test_ds2_cylinders_close_strictly(ds2, ds2_table):
    for cylinder in enumerate_critical_cylinders(ds2, ds2_table):
        verdict = check_cylinder(cylinder, ds2, ds2_table)
        assert verdict.residual_targets == "equal"
        assert verdict.top is not None
        assert verdict.top.check().source == verdict.g1_over_f


def test_ds2op_has_one_cylinder_closed_up_to_exchange(ds2op, ds2op_table):
    cylinders = enumerate_critical_cylinders(ds2op, ds2op_table)
    assert _labels(cylinders) == {("chi(m,n)", "[g]")}
    verdict = check_cylinder(cylinders[0], ds2op, ds2op_table)
    assert verdict.residual_targets == EXCHANGE_EQUAL
    assert [str(i) for i in verdict.top.instances()] == ["chi(n,m)^-1"]
    omega2 = ds2op.weight("omega2")
    assert weight_of_trace(omega2, verdict.top) == (0, 0)


def _strip(step, lo, hi, n):
    return Step(step.left[lo:], step.gen, step.right[:len(step.right) - (n - hi)])


def test_critical_pairs_cover_every_overlap(ds2, ds2_table):
    found = set()
    for word in words_up_to(ds2.objects, 5):
        steps = successors(word, ds2.generators)
        for e in steps:
            for h in steps:
                if not e.equational or e == h or side_of(e.start, e.end, h.start, h.end) is not None:
                    continue
                lo, hi = min(e.start, h.start), max(e.end, h.end)
                found.add((_strip(e, lo, hi, len(word)), _strip(h, lo, hi, len(word))))
    assert found == {(pair.f, pair.g) for pair in enumerate_critical_pairs(ds2, ds2_table)}


def _instances_with_cores(word, p):
    """Relation instances on ``word`` with the interval a vertical step must reach into to be critical."""
    found = []
    for relation in p.relations:
        if relation.is_exchange:
            continue
        n = len(relation.source)
        for i in range(len(word) - n + 1):
            if word[i:i + n] == relation.source:
                found.append((RelationInstance(relation, word[:i], word[i + n:]), None))
    steps = successors(word, p.generators)
    for s1 in steps:
        for s2 in steps:
            if s1.end <= s2.start:
                relation = exchange_relation(s1.gen, word[s1.end:s2.start], s2.gen)
                found.append((RelationInstance(relation, word[:s1.start], word[s2.end:]), (s1.end, s2.start)))
    return found


def test_critical_cylinders_cover_every_overlap(ds2, ds2_table):
    found = set()
    for word in words_up_to(ds2.objects, 5):
        for alpha, core in _instances_with_cores(word, ds2):
            w_start, w_end = alpha.window
            for f in successors(word, ds2.generators):
                if not (f.equational or alpha.relation.equational):
                    continue
                if core is None:
                    if side_of(f.start, f.end, w_start, w_end) is not None:
                        continue
                    if f.start <= w_start and w_end <= f.end:
                        continue
                    if f in [side.steps[0] for side in (alpha.before, alpha.after) if side.length]:
                        continue
                elif not (f.start < core[0] and f.end > core[1]):
                    continue
                lo, hi = min(f.start, w_start), max(f.end, w_end)
                n = len(word)
                stripped = RelationInstance(alpha.relation, alpha.left[lo:], alpha.right[:len(alpha.right) - (n - hi)])
                found.add((_strip(f, lo, hi, n), stripped))
    assert found == {(c.f, c.alpha) for c in enumerate_critical_cylinders(ds2, ds2_table)}


def test_checked_cylinders_carry_their_verdict(ds2, ds2_table):
    cylinders = enumerate_critical_cylinders(ds2, ds2_table)
    checked = check_cylinders(cylinders, ds2, ds2_table)
    assert checked == cylinders
    assert all(c.check is not None and c.check.residual_targets == "equal" for c in checked)
    assert {c: c.check.top.length for c in checked} == {
        c: check_cylinder(c, ds2, ds2_table).top.length for c in cylinders}
