import pytest
from cohpres.errors import ExplosionError
from cohpres.oracle import (
    compare_constructions, enumerate_hom_classes, enumerate_paths, monotone_surjections, surjection_count,
)


def test_hom_classes_in_ds2(ds2):
    assert enumerate_hom_classes(tuple("aaa"), tuple("aa"), ds2, 3).count == 2
    assert enumerate_hom_classes(tuple("aaa"), tuple("a"), ds2, 3).count == 1
    assert enumerate_hom_classes(tuple("aabb"), tuple("ab"), ds2, 3).count == 1
    assert enumerate_hom_classes(tuple("a"), tuple("aa"), ds2, 3).count == 0


def test_monotone_surjections():
    assert monotone_surjections(3, 2) == 2
    assert monotone_surjections(4, 2) == 3
    assert monotone_surjections(0, 0) == 1
    assert monotone_surjections(2, 3) == 0


def test_surjection_count():
    assert surjection_count((3, 0), (2, 0)) == 2
    assert surjection_count((2, 2), (1, 1)) == 1
    assert surjection_count((3, 0), (1, 0)) == 1


def test_explosion_cap(ds2):
    with pytest.raises(ExplosionError):
        enumerate_paths(tuple("bababa"), ds2, 6, cap=10)


def test_ds2_normal_forms_count_surjections(ds2):
    report = compare_constructions(ds2, max_word=4, max_steps=5, oracle="ds2")
    assert report.mismatches == []
    assert report.agrees
    row = next(r for r in report.rows if (r["source"], r["target"]) == ("aaa", "aa"))
    assert row["nf"] == row["surjections"] == 2


def test_huet_quotient_and_localization_differ(huet):
    report = compare_constructions(huet, max_steps=8)
    row = next(r for r in report.rows if (r["source"], r["target"]) == ("x", "x"))
    assert row["quotient"] == 1
    assert row["localization"] >= 2
    assert "nf" not in row
    assert any(m.startswith("hom(x, x)") for m in report.mismatches)
