"""
Constructions on presentations: opposite, quotient, localization, Tietze
transformations, and the normal-form functor N with its tensor.
"""
import logging
import re
from dataclasses import dataclass, replace

import networkx as nx

from .cells import cells_equal
from .config import Config
from .core import PATH_MODE, MorGen, Path, Presentation, Relation, Step, identity, join_word
from .dsl import parse_path, parse_word
from .errors import (
    CohpresError, DslSyntaxError, DuplicateNameError, ModeError, PresentationTypeError, TietzeRefusedError,
)
from .objects import normalize
from .residuation import path_residual

logger = logging.getLogger(__name__)


def _map_path(path: Path, generators: dict, word_map=None) -> Path:
    word_map = word_map or (lambda w: w)
    steps = tuple(
        Step(word_map(step.left), generators[step.gen.name], word_map(step.right)) for step in path.steps
    )
    return Path(word_map(path.source), steps)


def opposite(p: Presentation) -> Presentation:
    """Reverse every generator and the step order of every relation side; weight sets trade places."""
    relations = tuple(
        Relation(rel.name, rel.lhs.reversed_steps(), rel.rhs.reversed_steps()) for rel in p.relations
    )
    return Presentation(
        p.mode, p.objects, tuple(gen.reversed() for gen in p.generators), relations,
        weights=p.opposite_weights, opposite_weights=p.weights,
    )


def object_classes(p: Presentation) -> dict:
    """Object -> representative: the first declared member of its equational component."""
    graph = nx.Graph()
    graph.add_nodes_from(p.objects)
    for gen in p.equational_generators:
        graph.add_edge(gen.source[0], gen.target[0])
    order = {name: i for i, name in enumerate(p.objects)}
    representative = {}
    for component in nx.connected_components(graph):
        first = min(component, key=order.__getitem__)
        for name in component:
            representative[name] = first
    return representative


def quotient_presentation(p: Presentation) -> Presentation:
    """Identify objects joined by equational generators; each such generator gets a relation to the identity."""
    if p.mode != PATH_MODE:
        raise ModeError("the quotient presentation exists only in path mode")
    logger.info(f"Building quotient presentation over {len(p.equational)} equational generators")
    representative = object_classes(p)
    word_map = lambda word: tuple(representative[x] for x in word)  # noqa: E731
    objects = tuple(x for x in p.objects if representative[x] == x)
    generators = {
        gen.name: MorGen(gen.name, word_map(gen.source), word_map(gen.target)) for gen in p.generators
    }
    relations = [
        Relation(rel.name, _map_path(rel.lhs, generators, word_map), _map_path(rel.rhs, generators, word_map))
        for rel in p.relations
    ]
    names = {rel.name for rel in relations}
    for gen in p.equational_generators:
        name = f"{gen.name}_id"
        if name in names:
            raise DuplicateNameError(f"relation {name} already exists")
        new = generators[gen.name]
        relations.append(Relation(name, Path(new.source, (Step((), new, ()),)), identity(new.source)))
    return Presentation(p.mode, objects, tuple(generators.values()), tuple(relations))


def localization_presentation(p: Presentation, sigma=None) -> Presentation:
    """
    Add a formal inverse ``<f>_inv`` to each f in ``sigma`` together with the
    relations ``<f>_sect`` and ``<f>_retr``. Generators of ``sigma`` stop
    being equational. ``sigma`` defaults to the equational set.
    """
    sigma = p.equational if sigma is None else frozenset(sigma)
    if not sigma:
        return p
    logger.info(f"Building localization at {sorted(sigma)}")
    for name in sigma:
        p.generator(name)
    taken = {gen.name for gen in p.generators} | {rel.name for rel in p.relations}
    generators = [replace(gen, equational=False) if gen.name in sigma else gen for gen in p.generators]
    by_name = {gen.name: gen for gen in generators}
    relations = [
        Relation(rel.name, _map_path(rel.lhs, by_name), _map_path(rel.rhs, by_name)) for rel in p.relations
    ]
    for gen in list(generators):
        if gen.name not in sigma:
            continue
        inverse = MorGen(f"{gen.name}_inv", gen.target, gen.source)
        for name in (inverse.name, f"{gen.name}_sect", f"{gen.name}_retr"):
            if name in taken:
                raise DuplicateNameError(f"{name} already exists")
        generators.append(inverse)
        forth, back = Step((), gen, ()), Step((), inverse, ())
        relations.append(Relation(f"{gen.name}_sect", Path(gen.source, (forth, back)), identity(gen.source)))
        relations.append(Relation(f"{gen.name}_retr", Path(gen.target, (back, forth)), identity(gen.target)))
    return Presentation(p.mode, p.objects, tuple(generators), tuple(relations))


@dataclass(frozen=True)
class Transformation:
    verb: str
    name: str
    source: str = ""
    target: str = ""
    lhs: str = ""
    rhs: str = ""

    def __str__(self):
        if self.verb == "addgen":
            return f"addgen {self.name} : {self.source} -> {self.target} := {self.lhs}"
        if self.verb == "addrel":
            return f"addrel {self.name} : {self.lhs} => {self.rhs}"
        return f"{self.verb} {self.name}"


_ADDGEN = re.compile(r"^addgen\s+(\S+)\s*:\s*(.*?)\s*->\s*(.*?)\s*:=\s*(.+)$")
_ADDREL = re.compile(r"^addrel\s+(\S+)\s*:\s*(.+?)\s*=>\s*(.+)$")
_REMOVE = re.compile(r"^(rmgen|rmrel)\s+(\S+)$")


def parse_tietze_script(text: str):
    transformations = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if match := _ADDGEN.match(line):
            transformations.append(Transformation("addgen", match[1], match[2], match[3], match[4]))
        elif match := _ADDREL.match(line):
            transformations.append(Transformation("addrel", match[1], lhs=match[2], rhs=match[3]))
        elif match := _REMOVE.match(line):
            transformations.append(Transformation(match[1], match[2]))
        else:
            raise DslSyntaxError(f"unknown transformation {line!r}", number)
    return transformations


def _derivable(lhs: Path, rhs: Path, p: Presentation, budget: int, depth: int) -> bool:
    return cells_equal(lhs, rhs, p, depth=depth, node_cap=budget).equal


def _without_generator_keys(weights, names):
    return tuple(replace(spec, entries=tuple(e for e in spec.entries if e[0] not in names)) for spec in weights)


def _substitute(path: Path, gen: MorGen, definition: Path, generators: dict) -> Path:
    steps = []
    for step in path.steps:
        if step.gen.name == gen.name:
            steps.extend(_map_path(definition, generators).whisker(step.left, step.right).steps)
        else:
            steps.append(Step(step.left, generators[step.gen.name], step.right))
    return Path(path.source, tuple(steps))


def tietze_apply(p: Presentation, t: Transformation, budget: int = Config.TIETZE_BUDGET,
                 depth: int = Config.SEARCH_DEPTH) -> Presentation:
    """Apply one Tietze transformation; removals and additions of relations must be derivable."""
    logger.info(f"Applying Tietze transformation {t}")
    generator_names = {gen.name for gen in p.generators}
    relation_names = {rel.name for rel in p.relations}
    if t.verb == "addgen":
        if t.name in generator_names or f"{t.name}_def" in relation_names:
            raise DuplicateNameError(f"generator {t.name} already exists")
        source, target = parse_word(t.source, p.objects), parse_word(t.target, p.objects)
        definition = parse_path(t.lhs, p)
        if definition.source != source or definition.target != target:
            raise PresentationTypeError(
                f"defining path {definition} is not a path {join_word(source)} -> {join_word(target)}")
        gen = MorGen(t.name, source, target)
        relation = Relation(f"{t.name}_def", Path(source, (Step((), gen, ()),)), definition)
        return replace(p, generators=p.generators + (gen,), relations=p.relations + (relation,))

    if t.verb == "rmgen":
        gen = p.generator(t.name)
        for relation in p.relations:
            lhs_is_gen = relation.lhs.steps == (Step((), gen, ()),)
            rhs_is_gen = relation.rhs.steps == (Step((), gen, ()),)
            if not (lhs_is_gen or rhs_is_gen):
                continue
            definition = relation.rhs if lhs_is_gen else relation.lhs
            if all(step.gen.name != gen.name for step in definition.steps):
                break
        else:
            raise TietzeRefusedError(f"no defining relation for generator {t.name}")
        generators = {g.name: g for g in p.generators if g.name != gen.name}
        relations = tuple(
            Relation(rel.name, _substitute(rel.lhs, gen, definition, generators),
                     _substitute(rel.rhs, gen, definition, generators))
            for rel in p.relations if rel is not relation
        )
        return Presentation(
            p.mode, p.objects, tuple(generators.values()), relations,
            _without_generator_keys(p.weights, {gen.name, relation.name}),
            _without_generator_keys(p.opposite_weights, {gen.name, relation.name}),
        )

    if t.verb == "addrel":
        if t.name in relation_names:
            raise DuplicateNameError(f"relation {t.name} already exists")
        relation = Relation(t.name, parse_path(t.lhs, p), parse_path(t.rhs, p)).check()
        if not _derivable(relation.lhs, relation.rhs, p, budget, depth):
            raise TietzeRefusedError(f"relation {t.name} is not derivable within budget {budget}")
        return replace(p, relations=p.relations + (relation,))

    if t.verb == "rmrel":
        relation = p.relation(t.name)
        rest = replace(p, relations=tuple(rel for rel in p.relations if rel.name != t.name))
        if not _derivable(relation.lhs, relation.rhs, rest, budget, depth):
            raise TietzeRefusedError(f"relation {t.name} is not derivable from the others within budget {budget}")
        return rest

    raise DslSyntaxError(f"unknown transformation {t.verb}")


def apply_script(p: Presentation, text: str, budget: int = Config.TIETZE_BUDGET) -> Presentation:
    for transformation in parse_tietze_script(text):
        p = tietze_apply(p, transformation, budget)
    return p


def nf_object(x, y, p) -> tuple:
    """Tensor of normal forms: the normal form of the concatenation."""
    return normalize(tuple(x) + tuple(y), p).normal


def nf_functor_apply(f: Path, p, table) -> Path:
    """N(f) = (f / u_x) ; u_y, with u the chosen normalization paths."""
    logger.debug(f"Starting normal form image of {f}")
    try:
        u = normalize(f.source, p).path
        residual = path_residual(f, u, table)
        image = residual.then(normalize(residual.target, p).path)
    except CohpresError as e:
        logger.error(f"Error applying the normal form functor to {f}: {e}", exc_info=True)
        raise
    logger.debug(f"Normal form image of {f}: {image}")
    return image


def nf_tensor(x, f: Path, z, p, table) -> Path:
    return nf_functor_apply(p.whisker(x, f, z), p, table)
