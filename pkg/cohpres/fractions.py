"""
Left fractions (num, den): a path followed by a formal inverse of an
equational path, composed and compared through residuation.
"""
import logging
from dataclasses import dataclass
from itertools import product

from .cells import cells_equal, search_cells
from .coherence import FAIL, INCONCLUSIVE, PASS, Verdict, check_all
from .config import Config
from .constructions import nf_functor_apply
from .core import MONOIDAL_MODE, Path, identity
from .errors import (
    BudgetExhaustedError, CohpresError, CompositionError, ExplosionError, MissingResidualError,
    PresentationTypeError, SearchExhaustedError,
)
from .objects import equational_successors, normalize, successors, words_up_to
from .residuation import derive_residual_table, residual_pair

logger = logging.getLogger(__name__)

EQUAL = "equal"
UNEQUAL = "unequal"
INCONCLUSIVE_FRACTION = "inconclusive"


@dataclass(frozen=True)
class Fraction:
    num: Path
    den: Path

    def __post_init__(self):
        if self.num.target != self.den.target:
            raise CompositionError(f"fraction ({self.num}, {self.den}) is not cofinal")
        if not self.den.equational:
            raise PresentationTypeError(f"denominator {self.den} is not equational")

    @property
    def source(self):
        return self.num.source

    @property
    def target(self):
        return self.den.source

    def __str__(self):
        return f"({self.num}, {self.den})"


def fraction_compose(first: Fraction, second: Fraction, p, table=None) -> Fraction:
    """The composite first-then-second, completing the middle span with residuals."""
    logger.info(f"Starting composition of {first} with {second}")
    if first.target != second.source:
        raise CompositionError(f"fractions {first} and {second} do not compose")
    if table is None:
        table = derive_residual_table(p)
    try:
        num_after, den_after = residual_pair(second.num, first.den, table)
    except CohpresError as e:
        logger.error(f"Error composing {first} with {second}: {e}", exc_info=True)
        raise
    composite = Fraction(first.num.then(num_after), second.den.then(den_after))
    logger.info(f"Composite fraction: {composite}")
    return composite


def equational_paths(word, p, max_length: int):
    """All equational paths from ``word`` with at most ``max_length`` steps, shortest first."""
    paths = [identity(word)]
    layer = list(paths)
    for _ in range(max_length):
        layer = [path.then(Path(path.target, (step,))) for path in layer
                 for step in equational_successors(path.target, p)]
        paths.extend(layer)
    return paths


def _search(p1, p2, p, depth, node_cap):
    """True, False, or None when the node cap was hit."""
    try:
        return search_cells(p1, p2, p, depth, node_cap) is not None
    except SearchExhaustedError:
        return None


def fraction_equal(first: Fraction, second: Fraction, p, table, budget: int = 8, coherent: bool = False,
                   node_cap: int = Config.SEARCH_NODE_CAP) -> str:
    """
    Decide whether two parallel fractions are equivalent.

    When the presentation is known to be coherent the numerators' N-images
    are compared. Otherwise mediating equational paths w1, w2 of length up
    to ``budget // 2`` are enumerated and both squares are searched with
    depth ``budget``.
    """
    if first.source != second.source or first.target != second.target:
        raise CompositionError(f"fractions {first} and {second} are not parallel")
    if coherent:
        left = nf_functor_apply(first.num, p, table)
        right = nf_functor_apply(second.num, p, table)
        if left.target != right.target:
            return UNEQUAL
        found = _search(left, right, p, budget, node_cap)
        return INCONCLUSIVE_FRACTION if found is None else (EQUAL if found else UNEQUAL)

    capped = False
    candidates = equational_paths(first.num.target, p, budget // 2)
    others = equational_paths(second.num.target, p, budget // 2)
    for w1, w2 in product(candidates, others):
        if w1.target != w2.target:
            continue
        nums = _search(first.num.then(w1), second.num.then(w2), p, budget, node_cap)
        if nums is None:
            capped = True
            continue
        if not nums:
            continue
        dens = _search(first.den.then(w1), second.den.then(w2), p, budget, node_cap)
        if dens:
            return EQUAL
        capped = capped or dens is None
    return INCONCLUSIVE_FRACTION if capped else UNEQUAL


def _sample_fractions(p, max_word: int):
    fractions = []
    for word in words_up_to(p.objects, max_word, p.mode):
        for step in successors(word, p.generators):
            f = Path(word, (step,))
            fractions.append(Fraction(f, identity(f.target)))
            u = normalize(f.target, p).path
            if not u.is_identity:
                fractions.append(Fraction(f.then(u), u))
    return fractions


def sample_fraction_agreement(p, table, limit: int = 20, max_word: int = 3, budget: int = 4) -> dict:
    """
    Compare the mediating-path decision of fraction equality with equality
    of N-images, on the first ``limit`` parallel pairs of sampled fractions.
    """
    logger.info(f"Sampling {limit} fraction pairs")
    fractions = _sample_fractions(p, max_word)
    tally = {"agree": 0, "disagree": 0, "inconclusive": 0, "total": 0, "disagreements": []}
    for first, second in product(fractions, repeat=2):
        if tally["total"] >= limit:
            break
        if first.source != second.source or first.target != second.target:
            continue
        tally["total"] += 1
        mediated = fraction_equal(first, second, p, table, budget)
        left, right = nf_functor_apply(first.num, p, table), nf_functor_apply(second.num, p, table)
        imaged = left.target == right.target and cells_equal(left, right, p, depth=budget).equal
        if mediated == INCONCLUSIVE_FRACTION:
            tally["inconclusive"] += 1
        elif (mediated == EQUAL) == imaged:
            tally["agree"] += 1
        else:
            tally["disagree"] += 1
            tally["disagreements"].append(f"{first} vs {second}")
    logger.info(f"Fraction agreement: {tally['agree']}/{tally['total']}")
    return tally


def _paths_from(word, p, bound: int, cap: int):
    paths = [identity(word)]
    layer = list(paths)
    for _ in range(bound):
        layer = [path.then(Path(path.target, (step,))) for path in layer
                 for step in successors(path.target, p.generators)]
        paths.extend(layer)
        if len(paths) > cap:
            raise ExplosionError(f"paths from {word}", cap)
    return paths


def _sample_words(p):
    words = words_up_to(p.objects, 3, p.mode)
    if p.mode == MONOIDAL_MODE:
        words += [w for gen in p.generators for w in (gen.source, gen.target)]
    return list(dict.fromkeys(words))


def check_epi(p, table, bound: int = 2, depth: int = Config.SEARCH_DEPTH,
              node_cap: int = Config.SEARCH_NODE_CAP, cap: int = Config.HOM_EXPLOSION_CAP) -> Verdict:
    """Look for u ; g1 <=>* u ; g2 with g1, g2 not related, u equational, all paths within ``bound``."""
    failures = []
    for word in _sample_words(p):
        for u in equational_paths(word, p, bound):
            if u.is_identity:
                continue
            continuations = _paths_from(u.target, p, bound, cap)
            for i, g1 in enumerate(continuations):
                for g2 in continuations[i + 1:]:
                    if g1.target != g2.target:
                        continue
                    if _search(u.then(g1), u.then(g2), p, depth, node_cap) and \
                            _search(g1, g2, p, depth, node_cap) is False:
                        failures.append(f"epi {u} does not cancel on {g1} vs {g2}")
    return Verdict(FAIL, tuple(failures)) if failures else Verdict(PASS, sampled=True)


def check_left_fractions(p, table, bound: int = 6, coherent=None,
                         cap: int = Config.HOM_EXPLOSION_CAP) -> Verdict:
    """
    The four conditions of a left calculus of fractions for the equational
    paths. Conditions 1 and 2 hold by construction; condition 3 is checked by
    residuation on pairs within ``bound``; condition 4 follows from
    epimorphy, which is established by coherence or by ``check_epi``.
    """
    logger.info(f"Starting left calculus of fractions check (bound {bound})")
    if not p.equational:
        return Verdict(PASS, reason="no equational generators")
    failures, notes = [], ["conditions 1-2 hold for the free equational paths"]
    checked = 0
    try:
        for word in _sample_words(p):
            us = [u for u in equational_paths(word, p, bound) if not u.is_identity]
            if not us:
                continue
            for f in _paths_from(word, p, bound, cap):
                for u in us:
                    checked += 1
                    try:
                        residual_pair(f, u, table)
                    except (MissingResidualError, BudgetExhaustedError) as e:
                        failures.append(f"condition 3: no completion of ({u}, {f}): {e}")
                        break
                if len(failures) >= 10:
                    break
    except ExplosionError as e:
        return Verdict(INCONCLUSIVE, tuple(failures), reason=str(e))
    notes.append(f"condition 3 checked on {checked} pairs")
    if coherent is None:
        coherent = check_all(p, with_opposite=False).coherent == PASS
    if coherent:
        notes.append("condition 4 by epimorphy of equational paths")
        condition4 = PASS
    else:
        epi = check_epi(p, table)
        condition4 = epi.status
        notes.append("condition 4 by bounded epi check" if epi.passed else "; ".join(epi.witnesses))
    if failures:
        return Verdict(FAIL, tuple(failures), reason="; ".join(notes))
    if condition4 != PASS:
        return Verdict(INCONCLUSIVE, reason="; ".join(notes))
    return Verdict(PASS, reason="; ".join(notes), sampled=True)
