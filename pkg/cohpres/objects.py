"""
The rewriting system on object words generated by the equational generators.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import networkx as nx

from .config import Config
from .core import PATH_MODE, Path, Step, join_word
from .errors import BudgetExhaustedError, CohpresError
from .weights import transposition_count

logger = logging.getLogger(__name__)

TERMINATING = "terminating"
CYCLE = "cycle"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class NormalizationResult:
    input: tuple
    normal: tuple
    path: Path


@dataclass(frozen=True)
class TerminationVerdict:
    status: str
    explored: int
    witness: tuple = ()
    bound: int = None

    @property
    def terminating(self) -> bool:
        return self.status == TERMINATING


def successors(word, generators):
    """Steps of the given generators applicable to ``word``, by (left context length, generator order)."""
    word = tuple(word)
    steps = []
    for i in range(len(word) + 1):
        for gen in generators:
            k = len(gen.source)
            if i + k <= len(word) and word[i:i + k] == gen.source:
                steps.append(Step(word[:i], gen, word[i + k:]))
    return steps


def equational_successors(word, p):
    return successors(word, p.equational_generators)


def transposition_number(word, b, a) -> int:
    return transposition_count(word, b, a)


def words_up_to(objects, length, mode=None):
    """All words of length <= ``length`` in shortlex order (single objects in path mode)."""
    if mode == PATH_MODE:
        return [(x,) for x in objects]
    words = []
    for n in range(length + 1):
        words.extend(product(objects, repeat=n))
    return words


def _seed_words(p, max_word_length):
    seeds = list(words_up_to(p.objects, max_word_length, p.mode))
    for gen in p.generators:
        seeds += [gen.source, gen.target]
    for rel in p.relations:
        seeds += [rel.source, rel.target]
    return list(dict.fromkeys(seeds))


def check_equational_termination(p, budget: int = Config.TERMINATION_BUDGET,
                                 max_word_length: int = Config.MAX_WORD_LENGTH) -> TerminationVerdict:
    """
    Explore the equational step graph from the seed words and look for a cycle.

    ``budget`` bounds the number of distinct words visited. A cycle found in a
    partially explored graph is still reported as a cycle.
    """
    logger.info(f"Starting equational termination check ({len(p.equational)} equational generators)")
    graph = nx.DiGraph()
    seeds = _seed_words(p, max_word_length)
    graph.add_nodes_from(seeds)
    frontier = list(seeds)
    seen = set(seeds)
    exhausted = False
    while frontier:
        if len(seen) > budget:
            exhausted = True
            break
        word = frontier.pop(0)
        for step in equational_successors(word, p):
            graph.add_edge(word, step.target)
            if step.target not in seen:
                seen.add(step.target)
                frontier.append(step.target)

    try:
        edges = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        edges = None
    if edges:
        witness = tuple(u for u, _ in edges) + (edges[-1][1],)
        verdict = TerminationVerdict(CYCLE, len(seen), witness)
    elif exhausted:
        verdict = TerminationVerdict(BUDGET_EXHAUSTED, len(seen), bound=budget)
    else:
        verdict = TerminationVerdict(TERMINATING, len(seen))
    logger.info(f"Equational termination: {verdict.status} after {verdict.explored} words")
    return verdict


@lru_cache(maxsize=65536)
def normalize(word, p, budget: int = Config.TERMINATION_BUDGET) -> NormalizationResult:
    """Rewrite with the first equational successor until none applies."""
    word = tuple(word)
    logger.debug(f"Starting normalization of {join_word(word)}")
    current = word
    steps = []
    try:
        while True:
            options = equational_successors(current, p)
            if not options:
                break
            if len(steps) >= budget:
                raise BudgetExhaustedError(f"normalizing {word} did not terminate", budget)
            steps.append(options[0])
            current = options[0].target
    except CohpresError as e:
        logger.error(f"Error normalizing {join_word(word)}: {e}", exc_info=True)
        raise
    logger.debug(f"Normal form of {join_word(word)}: {join_word(current)} in {len(steps)} steps")
    return NormalizationResult(word, current, Path(word, tuple(steps)))


def is_normal(word, p) -> bool:
    return not equational_successors(word, p)


def reachable_normal_forms(word, p, budget: int = Config.TERMINATION_BUDGET) -> set:
    """Every irreducible word reachable from ``word`` under any strategy."""
    seen = {tuple(word)}
    frontier = [tuple(word)]
    normals = set()
    while frontier:
        if len(seen) > budget:
            raise BudgetExhaustedError(f"exploring the equational closure of {word}", budget)
        current = frontier.pop()
        options = equational_successors(current, p)
        if not options:
            normals.add(current)
        for step in options:
            if step.target not in seen:
                seen.add(step.target)
                frontier.append(step.target)
    return normals
