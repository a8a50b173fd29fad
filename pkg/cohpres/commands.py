import functools
import os
import random

import click
from flask import Blueprint, current_app

from .coherence import FAIL, INCONCLUSIVE, STRICT, UP_TO_EXCHANGE, check_all
from .constructions import apply_script
from .critical import check_cylinders, enumerate_critical_cylinders, enumerate_critical_pairs
from .dsl import load_presentation, parse_path, parse_word, to_text
from .errors import CohpresError, DslSyntaxError, DuplicateNameError, ModeError, PresentationTypeError
from .fractions import EQUAL, Fraction, check_left_fractions, fraction_compose, fraction_equal
from .objects import normalize
from .oracle import compare_constructions, enumerate_hom_classes
from .residuation import STRATEGIES, derive_residual_table, residual_witness, zigzag_residual

bp = Blueprint("cohpres", __name__, cli_group=None)

USAGE_ERRORS = (DslSyntaxError, PresentationTypeError, DuplicateNameError, ModeError, OSError)
# check could not decide within its budgets
INCONCLUSIVE_EXIT = 3


def _guarded(command):
    """Map library errors to exit codes, printing a witness line first."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except USAGE_ERRORS as e:
            current_app.logger.error(f"{command.__name__} failed: {e}", exc_info=True)
            click.echo(f"WITNESS: error: {e}")
            raise click.exceptions.Exit(2)
        except CohpresError as e:
            current_app.logger.error(f"{command.__name__} failed: {e}", exc_info=True)
            click.echo(f"WITNESS: {type(e).__name__}: {e}")
            raise click.exceptions.Exit(1)
    return wrapper


def _configure(**overrides):
    """Copy explicit flag values over the configuration and return it."""
    for key, value in overrides.items():
        if value is not None:
            current_app.config[key] = value
    return current_app.config


def _load(file):
    """Read a presentation; bare corpus names like `ds2.cp` resolve against CORPUS_DIR."""
    corpus_file = os.path.join(current_app.config["CORPUS_DIR"], file)
    if not os.path.exists(file) and os.path.exists(corpus_file):
        file = corpus_file
    current_app.logger.info(f"Loading presentation from {file}")
    return load_presentation(file)


def _fail(witnesses, code=1):
    for witness in witnesses:
        click.echo(f"WITNESS: {witness}")
    raise click.exceptions.Exit(code)


@bp.cli.command("check")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--assumption", type=click.Choice(["a1", "a2", "a3", "a3x", "a4", "all"]), default="all")
@click.option("--strong", is_flag=True, help="Relax A4 to cylinders whose vertical residual has length > 1.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Write the JSON report here.")
@click.option("--budget", type=int, help="Termination budget in explored words.")
@click.option("--depth", type=int, help="Named-cell depth of the 2-cell search.")
@_guarded
def check(file, assumption, strong, report_path, budget, depth):
    """Check the coherence assumptions of a presentation."""
    settings = _configure(TERMINATION_BUDGET=budget, SEARCH_DEPTH=depth)
    p = _load(file)
    current_app.logger.info(f"Checking {file} ({assumption})")
    a3_mode = {"a3": STRICT, "a3x": UP_TO_EXCHANGE}.get(assumption)
    report = check_all(
        p, strong=strong, a3_mode=a3_mode, with_opposite=assumption == "all",
        budget=settings["TERMINATION_BUDGET"], max_word_length=settings["MAX_WORD_LENGTH"],
        depth=settings["SEARCH_DEPTH"], node_cap=settings["SEARCH_NODE_CAP"],
        context_length=settings["CONTEXT_SAMPLE_LENGTH"], exchange_fallback=settings["EXCHANGE_FALLBACK"],
    )
    if report_path:
        with open(report_path, "w") as handle:
            handle.write(current_app.json.dumps(report.to_dict(), indent=2) + "\n")
        current_app.logger.info(f"Report written to {report_path}")

    selected = report.assumptions if assumption == "all" else {
        assumption[:2]: report.assumptions[assumption[:2]]}
    click.echo(f"mode: {p.mode}")
    for name, verdict in selected.items():
        line = f"{name}: {verdict.status.upper()}"
        if verdict.variant:
            line += f" [{verdict.variant}]"
        if verdict.reason and not verdict.passed:
            line += f" ({verdict.reason})"
        click.echo(line)
    if assumption == "all":
        click.echo(f"coherent: {report.coherent.upper()}")
        click.echo(f"faithful embedding: {report.faithful_embedding.upper()}")
        failed = report.coherent == FAIL
    else:
        failed = any(v.status == FAIL for v in selected.values())
    if failed:
        _fail(w for v in selected.values() for w in v.witnesses)
    if assumption == "all":
        undecided = report.coherent == INCONCLUSIVE
    else:
        undecided = any(v.status == INCONCLUSIVE for v in selected.values())
    if undecided:
        reasons = [f"{name} inconclusive: {v.reason}" for name, v in selected.items() if v.status == INCONCLUSIVE]
        _fail(reasons or ["coherence inconclusive"], INCONCLUSIVE_EXIT)


@bp.cli.command("nf")
@click.argument("file", type=click.Path(dir_okay=False))
@click.argument("word")
@click.option("--budget", type=int, help="Maximum number of equational steps.")
@_guarded
def nf(file, word, budget):
    """Print the normal form of WORD and its normalization path."""
    settings = _configure(TERMINATION_BUDGET=budget)
    p = _load(file)
    result = normalize(parse_word(word, p.objects), p, settings["TERMINATION_BUDGET"])
    click.echo(to_text(result.normal))
    click.echo(to_text(result.path))


@bp.cli.command("residual")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--of", "of_", required=True, help="The path g to residuate.")
@click.option("--after", required=True, help="The coinitial path f.")
@click.option("--witness", is_flag=True, help="Also print the 2-cell f;(g/f) => g;(f/g).")
@click.option("--strategy", type=click.Choice(STRATEGIES), default=STRATEGIES[0])
@click.option("--seed", type=int, default=0, help="Seed of the random schedule.")
@_guarded
def residual(file, of_, after, witness, strategy, seed):
    """Print g/f and f/g."""
    settings = _configure()
    p = _load(file)
    table = derive_residual_table(p)
    g, f = parse_path(of_, p), parse_path(after, p)
    g_over_f, f_over_g = zigzag_residual(
        g, f, table, strategy, random.Random(seed), settings["RESIDUAL_BUDGET"])
    click.echo(f"g/f: {g_over_f}")
    click.echo(f"f/g: {f_over_g}")
    if witness:
        click.echo(to_text(residual_witness(f, g, table).trace))


@bp.cli.command("critical")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--pairs", "show_pairs", is_flag=True, help="Only the critical pairs.")
@click.option("--cylinders", "show_cylinders", is_flag=True, help="Only the critical cylinders.")
@_guarded
def critical(file, show_pairs, show_cylinders):
    """Enumerate critical pairs and cylinders with their resolution status."""
    settings = _configure()
    p = _load(file)
    table = derive_residual_table(p)
    both = not (show_pairs or show_cylinders)
    unresolved = []
    if show_pairs or both:
        pairs = enumerate_critical_pairs(p, table)
        click.echo(f"critical pairs: {len(pairs)}")
        for pair in pairs:
            status = pair.entry.relation.name if pair.resolved else "UNRESOLVED"
            click.echo(f"  {to_text(pair.word)}: {pair.f} / {pair.g} -> {status}")
            if not pair.resolved:
                unresolved.append(f"unresolved critical pair {pair.f} / {pair.g} on {to_text(pair.word)}")
    if show_cylinders or both:
        cylinders = check_cylinders(
            enumerate_critical_cylinders(p, table), p, table, settings["SEARCH_DEPTH"], settings["SEARCH_NODE_CAP"])
        click.echo(f"critical cylinders: {len(cylinders)}")
        for cylinder in cylinders:
            top = "no top" if cylinder.check.top is None else f"top of {cylinder.check.top.length} cells"
            click.echo(f"  {to_text(cylinder.word)}: {cylinder.alpha} under {cylinder.f}: "
                       f"{cylinder.check.residual_targets}, {top}")
    if unresolved:
        _fail(unresolved)


@bp.cli.command("enumerate")
@click.argument("file", type=click.Path(dir_okay=False))
@click.argument("src")
@click.argument("tgt")
@click.option("--max-steps", type=int, default=5, show_default=True)
@_guarded
def enumerate_command(file, src, tgt, max_steps):
    """Enumerate the hom-set SRC -> TGT modulo relations."""
    settings = _configure()
    p = _load(file)
    hom = enumerate_hom_classes(
        parse_word(src, p.objects), parse_word(tgt, p.objects), p, max_steps, settings["HOM_EXPLOSION_CAP"])
    click.echo(f"hom({src}, {tgt}) up to {max_steps} steps: {hom.count} classes")
    for block in hom.classes:
        click.echo(f"  {block[0]}  ({len(block)} paths)")


@bp.cli.command("compare")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--max-word", type=int, default=4, show_default=True)
@click.option("--max-steps", type=int, default=5, show_default=True)
@click.option("--oracle", type=click.Choice(["ds2"]), default=None, help="Independent hom-set oracle.")
@_guarded
def compare(file, max_word, max_steps, oracle):
    """Compare normal-form, quotient and localization hom-set counts."""
    settings = _configure()
    p = _load(file)
    report = compare_constructions(p, max_word, max_steps, oracle, settings["HOM_EXPLOSION_CAP"])
    for row in report.rows:
        counts = ", ".join(f"{key} {value}" for key, value in row.items() if key not in ("source", "target"))
        click.echo(f"hom({row['source']}, {row['target']}): {counts}")
    if report.fractions:
        tally = report.fractions
        click.echo(f"fractions: {tally['agree']} agree, {tally['disagree']} disagree, "
                   f"{tally['inconclusive']} inconclusive of {tally['total']}")
    if report.mismatches:
        _fail(report.mismatches)
    click.echo("constructions agree")


@bp.cli.command("fractions")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--compose", nargs=4, default=None, metavar="NUM1 DEN1 NUM2 DEN2")
@click.option("--equal", nargs=4, default=None, metavar="NUM1 DEN1 NUM2 DEN2")
@click.option("--calculus", is_flag=True, help="Check the left calculus of fractions conditions.")
@click.option("--budget", type=int, default=8, show_default=True, help="Depth of the mediating search.")
@_guarded
def fractions(file, compose, equal, calculus, budget):
    """Compose or compare left fractions (num, den)."""
    if sum(bool(x) for x in (compose, equal, calculus)) != 1:
        raise click.UsageError("give exactly one of --compose, --equal, --calculus")
    settings = _configure()
    p = _load(file)
    table = derive_residual_table(p)
    if calculus:
        verdict = check_left_fractions(p, table)
        click.echo(f"left fractions: {verdict.status.upper()}")
        if verdict.reason:
            click.echo(f"  {verdict.reason}")
        if verdict.status == FAIL:
            _fail(verdict.witnesses)
        return
    paths = [parse_path(text, p) for text in (compose or equal)]
    first, second = Fraction(paths[0], paths[1]), Fraction(paths[2], paths[3])
    if compose:
        click.echo(str(fraction_compose(first, second, p, table)))
        return
    verdict = fraction_equal(first, second, p, table, budget, node_cap=settings["SEARCH_NODE_CAP"])
    click.echo(f"fractions: {verdict}")
    if verdict != EQUAL:
        _fail([f"{first} and {second} are {verdict} at budget {budget}"])


@bp.cli.command("tietze")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--script", required=True, type=click.Path(dir_okay=False), help="One transformation per line.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the result here instead of stdout.")
@click.option("--budget", type=int, help="Visited-path budget of the derivability search.")
@_guarded
def tietze(file, script, output, budget):
    """Apply a Tietze transformation script."""
    settings = _configure(TIETZE_BUDGET=budget)
    p = _load(file)
    with open(script) as handle:
        result = apply_script(p, handle.read(), settings["TIETZE_BUDGET"])
    text = to_text(result)
    if output:
        with open(output, "w") as handle:
            handle.write(text)
        current_app.logger.info(f"Presentation written to {output}")
    else:
        click.echo(text, nl=False)
