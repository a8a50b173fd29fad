import pytest
from cohpres.core import MONOIDAL_MODE, PATH_MODE
from cohpres.dsl import parse_path, parse_presentation, parse_word, to_text, validate
from cohpres.errors import DslSyntaxError, DuplicateNameError, PresentationTypeError


def test_corpus_shapes(ds2, ds2op, deltas, huet):
    assert ds2.mode == MONOIDAL_MODE
    assert [gen.name for gen in ds2.generators] == ["m", "n", "g"]
    assert [rel.name for rel in ds2.relations] == ["alpha", "beta", "gamma", "delta"]
    assert ds2op.generator("m").target == ("a", "a")
    assert deltas.equational == frozenset()
    assert huet.mode == PATH_MODE
    assert huet.objects == ("x", "x'", "y", "y'")
    assert huet.equational == frozenset({"g", "g'"})


def test_weight_blocks_are_split_by_orientation(ds2, ds2op):
    assert [spec.name for spec in ds2.weights] == ["omega1", "omega2"]
    assert [spec.name for spec in ds2.opposite_weights] == ["omega1", "omega2", "omega2base"]
    assert [spec.name for spec in ds2op.weights] == ["omega1", "omega2", "omega2base"]


def test_parse_word_prefers_longest_names(huet):
    assert parse_word("x'y", huet.objects) == ("x'", "y")
    assert parse_word("x y'", huet.objects) == ("x", "y'")
    assert parse_word("0", huet.objects) == ()
    with pytest.raises(DslSyntaxError):
        parse_word("xz", huet.objects)


def test_parse_path(ds2):
    path = parse_path("b[m] ; [g]", ds2)
    assert path.source == ("b", "a", "a")
    assert path.target == ("a", "b")
    assert str(path) == "b[m] ; [g]"
    assert parse_path("id ab", ds2).is_identity
    with pytest.raises(PresentationTypeError):
        parse_path("[m] ; [m]", ds2)


def test_printed_presentation_parses_back(ds2):
    assert parse_presentation(to_text(ds2)) == ds2


def test_multi_letter_object_names_print_spaced():
    text = (
        "mode monoidal\n"
        "objects a b ab\n"
        "gen f : a b -> ab\n"
        "gen k : ab ab -> ab\n"
        "rel r : [f]a b ; ab[f] ; [k] => a b[f] ; [f]ab ; [k]\n"
    )
    p = parse_presentation(text)
    printed = to_text(p)
    assert "gen f : a b -> ab" in printed
    assert "[f] a b ; ab [f] ; [k]" in printed
    assert parse_presentation(printed) == p


def test_unknown_declaration_reports_line():
    with pytest.raises(DslSyntaxError) as error:
        parse_presentation("objects a\nfrobnicate a\n")
    assert error.value.line == 2


def test_duplicate_generator():
    text = "objects a\ngen m : a a -> a\ngen m : a -> a a\n"
    with pytest.raises(DuplicateNameError):
        parse_presentation(text)


def test_equational_directive_marks_generators():
    p = parse_presentation("objects a b\ngen g : b a -> a b\nequational g\n")
    assert p.equational == frozenset({"g"})


def test_validate_collects_every_problem():
    text = "\n".join([
        "objects a b",
        "gen m : a a -> a",
        "rel bad : [m] => id aa",
        "rel worse : [k] => [m]",
        "equational q",
    ])
    diagnostics = validate(text)
    assert any("bad" in d and "not parallel" in d for d in diagnostics)
    assert any("worse" in d for d in diagnostics)
    assert any("undeclared generator q" in d for d in diagnostics)


def test_path_mode_generators_need_single_objects():
    text = "mode path\nobjects x y\ngen f : x y -> x\n"
    assert any("path mode needs single objects" in d for d in validate(text))
    with pytest.raises(PresentationTypeError):
        parse_presentation(text)


def test_weight_with_unknown_key():
    text = "objects a\ngen m : a a -> a\nweight w on steps order lex dim 1 {\n  k -> (1)\n}\n"
    assert validate(text) == ["weight w: unknown key k"]


def test_to_text_of_a_trace(ds2, ds2_table):
    from cohpres.residuation import step_tile
    f, g = parse_path("[g]a", ds2).steps[0], parse_path("b[m]", ds2).steps[0]
    _, _, trace = step_tile(f, g, ds2_table)
    lines = to_text(trace).splitlines()
    assert lines[0] == "[g]a ; a[g] ; [m]b"
    assert lines[1].startswith("  =gamma")
    assert lines[1].endswith("=> b[m] ; [g]")
