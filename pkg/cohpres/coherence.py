"""
Checkers for the four coherence assumptions and the derived verdicts.

A1  critical pairs resolved and equational rewriting terminates
A2  omega1 strictly decreases along residuals (sampled over contexts)
A3  critical cylinders close, strictly or up to exchange (A3')
A4  omega2 strictly decreases from each cylinder base to its top
"""
import logging
import time
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Optional

from .cells import EQUAL, EXCHANGE_EQUAL
from .config import Config
from .constructions import opposite
from .core import MONOIDAL_MODE, Path, RelationInstance, Step, exchange_relation, join_word, side_of
from .critical import (
    EQUATIONAL_BASE, EQUATIONAL_VERTICAL, check_cylinder, enumerate_critical_cylinders,
    enumerate_critical_pairs,
)
from .errors import CohpresError, WeightError
from .objects import BUDGET_EXHAUSTED, CYCLE, check_equational_termination, successors, words_up_to
from .residuation import derive_residual_table, step_residual
from .weights import eval_weight, format_tuple, less, weight_of_path, weight_of_trace

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

STRICT = "strict"
UP_TO_EXCHANGE = "up_to_exchange"


@dataclass(frozen=True)
class Verdict:
    status: str
    witnesses: tuple = ()
    reason: str = ""
    sampled: bool = False
    variant: str = ""
    # per-cylinder results kept for A4
    cylinders: tuple = field(default=(), compare=False, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        result = {"verdict": self.status, "witnesses": list(self.witnesses)}
        if self.reason:
            result["reason"] = self.reason
        if self.sampled:
            result["sampled"] = True
        if self.variant:
            result["variant"] = self.variant
        return result


def _verdict(failures, inconclusive, **kwargs) -> Verdict:
    if failures:
        return Verdict(FAIL, tuple(failures), **kwargs)
    if inconclusive:
        return Verdict(INCONCLUSIVE, (), reason="; ".join(inconclusive), **kwargs)
    return Verdict(PASS, **kwargs)


def sample_contexts(objects, max_length: int):
    """Context pairs (x, z) by total length, longer left first, then lexicographically."""
    pairs = []
    for total in range(max_length + 1):
        for left_length in range(total, -1, -1):
            for x in product(objects, repeat=left_length):
                for z in product(objects, repeat=total - left_length):
                    pairs.append((tuple(x), tuple(z)))
    return pairs


def check_a1(p, table, budget: int = Config.TERMINATION_BUDGET,
             max_word_length: int = Config.MAX_WORD_LENGTH) -> Verdict:
    pairs = enumerate_critical_pairs(p, table)
    failures = []
    for pair in pairs:
        if not pair.resolved:
            failures.append(f"a1 unresolved critical pair ({pair.f}, {pair.g}) on {join_word(pair.word)}")
        elif (pair.f, pair.g) in table.ambiguous:
            failures.append(f"a1 critical pair ({pair.f}, {pair.g}) on {join_word(pair.word)} has several residuals")
    termination = check_equational_termination(p, budget, max_word_length)
    inconclusive = []
    if termination.status == CYCLE:
        rendered = ", ".join(join_word(word) for word in termination.witness)
        failures.append(f"a1 termination cycle [{rendered}]")
    elif termination.status == BUDGET_EXHAUSTED:
        inconclusive.append(f"equational termination undecided after {termination.explored} words")
    return _verdict(failures, inconclusive)


def _omega(p, name, fallback=None):
    spec = p.weight(name)
    if spec is None and fallback is not None:
        spec = p.weight(fallback)
    return spec


def _exchange_samples(p, max_middle: int):
    """(f, g) with f an equational step and g disjoint from it, over all generator pairs."""
    samples = []
    middles = words_up_to(p.objects, max_middle)
    for e in p.equational_generators:
        for h in p.generators:
            for mid in middles:
                samples.append((Step((), e, mid + h.source), Step(e.source + mid, h, ())))
                samples.append((Step(h.source + mid, e, ()), Step((), h, mid + e.source)))
    return samples


def check_a2(p, table, omega1=None, context_length: int = Config.CONTEXT_SAMPLE_LENGTH) -> Verdict:
    spec = omega1 or _omega(p, "omega1")
    entries = [entry for entry in table.entries.values() if entry.f.equational]
    if not entries and not p.equational_generators:
        return Verdict(PASS, reason="nothing to weigh", sampled=True)
    if spec is None:
        return Verdict(INCONCLUSIVE, reason="no omega1 weight declared", sampled=True)
    failures = []
    try:
        for entry in entries:
            g = Path(entry.relation.source, (entry.g.whisker(entry.outer_left, entry.outer_right),))
            residual = entry.g_over_f
            for x, z in [((), ())] + [(x, z) for x in words_up_to(p.objects, context_length)
                                      for z in words_up_to(p.objects, context_length) if x or z]:
                before = weight_of_path(spec, g.whisker(x, z))
                after = weight_of_path(spec, residual.whisker(x, z))
                if not less(spec.order, after, before):
                    label = f"{join_word(x)}·" if x else ""
                    label += f"({entry.g}/{entry.f})" + (f"·{join_word(z)}" if z else "")
                    failures.append(
                        f"a2 {label}: omega1 {format_tuple(after)} is not below {format_tuple(before)}")
                    break
        if p.mode == MONOIDAL_MODE:
            for f, g in _exchange_samples(p, 2):
                if side_of(f.start, f.end, g.start, g.end) is None:
                    continue
                residual, _ = step_residual(f, g, table)
                before = weight_of_path(spec, Path(g.source, (g,)))
                after = weight_of_path(spec, residual)
                if not less(spec.order, after, before):
                    failures.append(
                        f"a2 exchange residual {residual} of {g} after {f}: "
                        f"omega1 {format_tuple(after)} is not below {format_tuple(before)}")
    except WeightError as e:
        return Verdict(INCONCLUSIVE, reason=str(e), sampled=True)
    return _verdict(failures, [], sampled=True)


def check_a3(p, table, mode: str = STRICT, cylinders=None, depth: int = Config.SEARCH_DEPTH,
             node_cap: int = Config.SEARCH_NODE_CAP) -> Verdict:
    if cylinders is None:
        cylinders = enumerate_critical_cylinders(p, table)
    failures, inconclusive, results = [], [], []
    accepted = (EQUAL,) if mode == STRICT else (EQUAL, EXCHANGE_EQUAL)
    for cylinder in cylinders:
        try:
            verdict = check_cylinder(cylinder, p, table, depth, node_cap)
        except CohpresError as e:
            inconclusive.append(f"cylinder {cylinder.alpha} / {cylinder.f}: {e}")
            continue
        results.append((replace(cylinder, check=verdict), verdict))
        if verdict.residual_targets not in accepted:
            failures.append(
                f"a3 cylinder {cylinder.alpha} / {cylinder.f}: "
                f"f/g1 = {verdict.f_over_g1} differs from f/g2 = {verdict.f_over_g2}")
            continue
        if verdict.top is None:
            inconclusive.append(f"cylinder {cylinder.alpha} / {cylinder.f}: {'; '.join(verdict.notes)}")
            continue
        if mode == UP_TO_EXCHANGE and cylinder.alpha.relation.is_exchange:
            named = [str(i) for i in verdict.top.instances() if not i.relation.is_exchange]
            if named:
                failures.append(
                    f"a3 residual of exchange base {cylinder.alpha} after {cylinder.f} uses named cells "
                    + ", ".join(named))
    return _verdict(failures, inconclusive, variant=mode, cylinders=tuple(results))


def _cylinder_spec(p, flavor):
    if flavor == EQUATIONAL_BASE:
        return _omega(p, "omega2base", fallback="omega2")
    return _omega(p, "omega2")


def _in_context_bases(p, flavor):
    middles = words_up_to(p.objects, 1)
    if flavor == EQUATIONAL_VERTICAL:
        factors, verticals = p.generators, p.equational_generators
    else:
        factors, verticals = p.equational_generators, p.generators
    bases = [exchange_relation(h1, mid, h2) for h1 in factors for mid in middles for h2 in factors]
    return bases, verticals


def _in_context_failures(p, flavor, spec, context_length):
    """Exchange instances whose residual after a step inside their context weighs more."""
    failures = []
    bases, verticals = _in_context_bases(p, flavor)
    if not verticals:
        return failures
    contexts = sample_contexts(p.objects, context_length)
    for relation in bases:
        for x, z in contexts:
            instance = RelationInstance(relation, x, z)
            failure = None
            for step in successors(x, verticals):
                moved = RelationInstance(relation, step.target, z)
                vertical = step.whisker((), relation.source + z)
                failure = _increase(spec, instance, moved, vertical)
                if failure:
                    break
            if failure is None:
                for step in successors(z, verticals):
                    moved = RelationInstance(relation, x, step.target)
                    vertical = step.whisker(x + relation.source, ())
                    failure = _increase(spec, instance, moved, vertical)
                    if failure:
                        break
            if failure:
                failures.append(failure)
                break
    return failures


def _increase(spec, instance, moved, vertical):
    before = eval_weight(spec, instance)
    after = eval_weight(spec, moved)
    if before == after or less(spec.order, after, before):
        return None
    return (
        f"a4 in-context residual of {instance} after {vertical}: "
        f"ω₂ = {format_tuple(before)} ≯ {format_tuple(after)} = ω₂({moved})"
    )


def check_a4(p, a3: Verdict, strong: bool = False,
             context_length: int = Config.CONTEXT_SAMPLE_LENGTH) -> Verdict:
    failures, inconclusive = [], []
    try:
        for cylinder, verdict in a3.cylinders:
            if strong and verdict.f_over_g1.length <= 1:
                continue
            spec = _cylinder_spec(p, cylinder.flavor)
            if spec is None:
                inconclusive.append(f"no omega2 weight for {cylinder.flavor} cylinders")
                continue
            if verdict.top is None:
                inconclusive.append(f"cylinder {cylinder.alpha} / {cylinder.f} has no top 2-cell")
                continue
            base = eval_weight(spec, cylinder.alpha)
            top = weight_of_trace(spec, verdict.top)
            if not less(spec.order, top, base):
                failures.append(
                    f"a4 cylinder {cylinder.alpha} / {cylinder.f}: "
                    f"ω₂(top) = {format_tuple(top)} is not below {format_tuple(base)} = ω₂({cylinder.alpha})")
        if not strong and p.mode == MONOIDAL_MODE and p.equational_generators:
            for flavor in (EQUATIONAL_VERTICAL, EQUATIONAL_BASE):
                spec = _cylinder_spec(p, flavor)
                if spec is None:
                    inconclusive.append(f"no omega2 weight for {flavor} exchange residuals")
                    continue
                failures += _in_context_failures(p, flavor, spec, context_length)
    except WeightError as e:
        return Verdict(INCONCLUSIVE, reason=str(e), sampled=not strong)
    return _verdict(failures, inconclusive, sampled=not strong)


@dataclass
class CheckReport:
    mode: str
    assumptions: dict
    critical_pairs: list
    cylinders: list
    coherent: str
    faithful_embedding: str
    timings: dict = field(default_factory=dict)

    @property
    def witnesses(self):
        return [w for verdict in self.assumptions.values() for w in verdict.witnesses]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "assumptions": {name: verdict.to_dict() for name, verdict in self.assumptions.items()},
            "criticalPairs": [
                {"word": join_word(pair.word), "f": str(pair.f), "g": str(pair.g), "resolved": pair.resolved}
                for pair in self.critical_pairs
            ],
            "cylinders": [
                {
                    "word": join_word(cylinder.word), "f": str(cylinder.f), "base": str(cylinder.alpha),
                    "flavor": cylinder.flavor,
                    "residualTargets": verdict.residual_targets if verdict else None,
                    "top": [str(i) for i in verdict.top.instances()] if verdict and verdict.top else None,
                }
                for cylinder, verdict in self.cylinders
            ],
            "coherent": self.coherent,
            "faithfulEmbedding": self.faithful_embedding,
        }


def _combine(verdicts) -> str:
    statuses = [v.status for v in verdicts]
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


def check_all(p, strong: bool = False, a3_mode: Optional[str] = None,
              exchange_fallback: bool = Config.EXCHANGE_FALLBACK, with_opposite: bool = True,
              budget: int = Config.TERMINATION_BUDGET, max_word_length: int = Config.MAX_WORD_LENGTH,
              depth: int = Config.SEARCH_DEPTH, node_cap: int = Config.SEARCH_NODE_CAP,
              context_length: int = Config.CONTEXT_SAMPLE_LENGTH) -> CheckReport:
    """
    Run A1 to A4 in order. A3 is tried strictly first and, when that fails and
    ``exchange_fallback`` is set, up to exchange. ``a3_mode`` forces one variant.
    """
    logger.info(f"Starting coherence check of a {p.mode} presentation")
    timings = {}
    started = time.perf_counter()
    table = derive_residual_table(p)
    pairs = enumerate_critical_pairs(p, table)
    a1 = check_a1(p, table, budget, max_word_length)
    timings["a1"] = time.perf_counter() - started
    cylinder_results = []
    if not a1.passed:
        blocked = Verdict(INCONCLUSIVE, reason="assumption 1 does not hold")
        assumptions = {"a1": a1, "a2": blocked, "a3": blocked, "a4": blocked}
        cylinders = []
    else:
        started = time.perf_counter()
        a2 = check_a2(p, table, context_length=context_length)
        timings["a2"] = time.perf_counter() - started

        started = time.perf_counter()
        cylinders = enumerate_critical_cylinders(p, table)
        a3 = check_a3(p, table, a3_mode or STRICT, cylinders, depth, node_cap)
        if a3_mode is None and not a3.passed and exchange_fallback:
            relaxed = check_a3(p, table, UP_TO_EXCHANGE, cylinders, depth, node_cap)
            if relaxed.passed:
                logger.info("Strict cylinder property fails; using the up-to-exchange variant")
                a3 = relaxed
        timings["a3"] = time.perf_counter() - started

        started = time.perf_counter()
        a4 = check_a4(p, a3, strong, context_length)
        timings["a4"] = time.perf_counter() - started
        assumptions = {"a1": a1, "a2": a2, "a3": a3, "a4": a4}
        checked = dict(a3.cylinders)
        cylinder_results = [(cylinder, checked.get(cylinder)) for cylinder in cylinders]

    coherent = _combine(assumptions.values())
    faithful = INCONCLUSIVE
    if with_opposite:
        started = time.perf_counter()
        mirrored = check_all(
            opposite(p), strong, a3_mode, exchange_fallback, False,
            budget, max_word_length, depth, node_cap, context_length)
        timings["opposite"] = time.perf_counter() - started
        if mirrored.coherent == PASS:
            faithful = PASS
    for name, seconds in timings.items():
        logger.info(f"{name} took {seconds:.3f}s")
    logger.info(f"Coherence check finished: coherent {coherent}, faithful embedding {faithful}")
    return CheckReport(p.mode, assumptions, pairs, cylinder_results, coherent, faithful, timings)
