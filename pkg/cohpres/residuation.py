"""
Residuals of rewriting paths after equational ones.

The residual table is read off the declared relations. Step residuals split
into the equal, exchange, and overlapping cases. Path residuals come from
the zig-zag rewriting system, whose words alternate reversed steps of f with
steps of g; ``pasting_residual`` gives the same values by structural recursion
and also assembles the witnessing 2-cell.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from .cells import exchange_instance, search_cells
from .config import Config
from .core import (
    CellStep, CellTrace, Path, Relation, RelationInstance, Step, identity, side_of,
)
from .errors import (
    BudgetExhaustedError, CohpresError, CompositionError, MissingResidualError, ModeError, SearchExhaustedError,
)

logger = logging.getLogger(__name__)

LEFTMOST = "leftmost"
RIGHTMOST = "rightmost"
RANDOM = "random"
STRATEGIES = (LEFTMOST, RIGHTMOST, RANDOM)


@dataclass(frozen=True)
class ResidualEntry:
    """One residuation square f ; (g/f) <=> g ; (f/g), keyed on the overlap window."""
    f: Step
    g: Step
    g_over_f: Path
    f_over_g: Path
    relation: Relation
    # relation applied forwards rewrites f ; (g/f) into g ; (f/g)
    forward: bool
    outer_left: tuple = ()
    outer_right: tuple = ()


@dataclass
class ResidualTable:
    entries: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    ambiguous: set = field(default_factory=set)
    memo_size: int = Config.RESIDUAL_MEMO_SIZE
    # top 2-cells of the critical cylinders keyed on (vertical step, instance); filled on first use
    tops: Optional[dict] = field(default=None, repr=False)
    _memo: dict = field(default_factory=dict, repr=False)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    def lookup(self, f: Step, g: Step) -> Optional[ResidualEntry]:
        return self.entries.get((f, g))

    def remember(self, key, value):
        """Store a computed residual, dropping the oldest one once ``memo_size`` are kept."""
        if self.memo_size <= 0:
            return value
        while len(self._memo) >= self.memo_size:
            del self._memo[next(iter(self._memo))]
        self._memo[key] = value
        return value

    def pairs(self):
        """Entries in the orientation they were declared (f the relation's equational first step)."""
        seen = set()
        result = []
        for (f, g), entry in self.entries.items():
            if (g, f) in seen:
                continue
            seen.add((f, g))
            result.append(entry)
        return result


@dataclass(frozen=True)
class ResidualWitness:
    left: Path
    right: Path
    trace: CellTrace


def _window(f: Step, g: Step):
    return min(f.start, g.start), max(f.end, g.end)


def _strip_step(step: Step, lo: int, hi: int, length: int) -> Step:
    return Step(step.left[lo:], step.gen, step.right[:len(step.right) - (length - hi)])


def _rest(side: Path) -> Path:
    return side.slice(1)


def derive_residual_table(p) -> ResidualTable:
    """
    Read residuation squares off the relations of ``p``.

    A relation contributes when one side is ``g0`` followed by an equational
    path and the other starts with a different equational step ``f0``.
    """
    logger.info(f"Starting residual table derivation over {len(p.relations)} relations")
    table = ResidualTable()
    owner = {}
    for relation in p.relations:
        if relation.is_exchange:
            continue
        square = None
        for a_side, b_side in ((relation.lhs, relation.rhs), (relation.rhs, relation.lhs)):
            if a_side.length == 0 or b_side.length == 0:
                continue
            g0, f0 = a_side.steps[0], b_side.steps[0]
            if f0.equational and _rest(a_side).equational and f0 != g0:
                square = (f0, g0, _rest(b_side), _rest(a_side), b_side is relation.lhs)
                break
        if square is None:
            if any(step.equational for side in (relation.lhs, relation.rhs) for step in side.steps):
                table.diagnostics.append(f"relation {relation.name} yields no residual entry")
            continue
        f0, g0, g_over_f, f_over_g, forward = square
        word = relation.source
        lo, hi = _window(f0, g0)
        f_key = _strip_step(f0, lo, hi, len(word))
        g_key = _strip_step(g0, lo, hi, len(word))
        if (f_key, g_key) in table.entries:
            table.ambiguous.update({(f_key, g_key), (g_key, f_key)})
            table.diagnostics.append(
                f"relations {owner[(f_key, g_key)]} and {relation.name} both resolve the pair "
                f"({f_key}, {g_key}); using {owner[(f_key, g_key)]}"
            )
            continue
        outer_left, outer_right = word[:lo], word[hi:]
        table.entries[(f_key, g_key)] = ResidualEntry(
            f_key, g_key, g_over_f, f_over_g, relation, forward, outer_left, outer_right)
        table.entries[(g_key, f_key)] = ResidualEntry(
            g_key, f_key, f_over_g, g_over_f, relation, not forward, outer_left, outer_right)
        owner[(f_key, g_key)] = owner[(g_key, f_key)] = relation.name
    logger.info(f"Residual table: {len(table.pairs())} squares, {len(table.diagnostics)} diagnostics")
    return table


def _exchange_residuals(f: Step, g: Step, side: str):
    word = f.source
    if side == "right":
        between = word[f.end:g.start]
        g_over_f = Step(f.left + f.gen.target + between, g.gen, g.right)
        f_over_g = Step(f.left, f.gen, between + g.gen.target + g.right)
    else:
        between = word[g.end:f.start]
        g_over_f = Step(g.left, g.gen, between + f.gen.target + f.right)
        f_over_g = Step(g.left + g.gen.target + between, f.gen, f.right)
    return Path(f.target, (g_over_f,)), Path(g.target, (f_over_g,))


def _table_square(f: Step, g: Step, table: ResidualTable):
    """The matching entry and the outer contexts it is whiskered by."""
    word = f.source
    lo, hi = _window(f, g)
    entry = table.lookup(_strip_step(f, lo, hi, len(word)), _strip_step(g, lo, hi, len(word)))
    if entry is None:
        raise MissingResidualError(f, g)
    x, z = word[:lo], word[hi:]
    cut = len(x) - len(entry.outer_left)
    if cut < 0 or x[cut:] != entry.outer_left or z[:len(entry.outer_right)] != entry.outer_right:
        raise MissingResidualError(f, g)
    return entry, x[:cut], z[len(entry.outer_right):]


def step_residual(f: Step, g: Step, table: ResidualTable):
    """(g/f, f/g) for two coinitial steps."""
    logger.debug(f"Starting step residual of {g} after {f}")
    if f.source != g.source:
        raise CompositionError(f"steps {f} and {g} are not coinitial")
    if f == g:
        return identity(f.target), identity(g.target)
    side = side_of(f.start, f.end, g.start, g.end)
    if side is not None:
        return _exchange_residuals(f, g, side)
    entry, x, z = _table_square(f, g, table)
    return entry.g_over_f.whisker(x, z), entry.f_over_g.whisker(x, z)


def step_tile(f: Step, g: Step, table: ResidualTable):
    """(g/f, f/g, trace) with trace a 2-cell from f ; (g/f) to g ; (f/g)."""
    g_over_f, f_over_g = step_residual(f, g, table)
    source = Path(f.source, (f,)).then(g_over_f)
    if f == g:
        return g_over_f, f_over_g, CellTrace(source)
    side = side_of(f.start, f.end, g.start, g.end)
    if side is not None:
        instance = exchange_instance(f, g_over_f.steps[0])
    else:
        entry, x, z = _table_square(f, g, table)
        instance = RelationInstance(entry.relation, x, z, entry.forward)
    cell = CellStep(identity(f.source), instance, identity(source.target))
    return g_over_f, f_over_g, CellTrace.single(cell)


def _check_residuable(g: Path, f: Path):
    if f.source != g.source:
        raise CompositionError(f"{g} and {f} are not coinitial")
    if not (f.equational or g.equational):
        raise ModeError(f"residual of {g} after {f}: neither path is equational")


def zigzag_residual(g: Path, f: Path, table: ResidualTable, strategy: str = LEFTMOST,
                    rng: Optional[random.Random] = None, budget: int = Config.RESIDUAL_BUDGET):
    """
    (g/f, f/g) by exhaustive rewriting of the word ``reverse(f) . g``.

    Each rewrite replaces an adjacent pair (reversed a, b) by b/a followed by
    the reverse of a/b; the normal form lists the steps of g/f and then
    those of f/g reversed.
    """
    _check_residuable(g, f)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy}")
    rng = rng or random.Random(0)
    word = [(False, step) for step in reversed(f.steps)] + [(True, step) for step in g.steps]
    rewrites = 0
    while True:
        redexes = [i for i in range(len(word) - 1) if not word[i][0] and word[i + 1][0]]
        if not redexes:
            break
        if rewrites >= budget:
            raise BudgetExhaustedError(f"residual of {g} after {f} did not normalize", budget)
        if strategy == LEFTMOST:
            i = redexes[0]
        elif strategy == RIGHTMOST:
            i = redexes[-1]
        else:
            i = rng.choice(redexes)
        a, b = word[i][1], word[i + 1][1]
        b_over_a, a_over_b = step_residual(a, b, table)
        word[i:i + 2] = [(True, s) for s in b_over_a.steps] + [(False, s) for s in reversed(a_over_b.steps)]
        rewrites += 1
    positives = tuple(s for sign, s in word if sign)
    negatives = tuple(s for sign, s in reversed(word) if not sign)
    return Path(f.target, positives).check(), Path(g.target, negatives).check()


def residual_pair(g: Path, f: Path, table: ResidualTable):
    key = ("zigzag", g, f)
    if key in table._memo:
        return table._memo[key]
    logger.debug(f"Starting residual of {g} after {f}")
    try:
        result = zigzag_residual(g, f, table)
    except CohpresError as e:
        logger.error(f"Error computing the residual of {g} after {f}: {e}", exc_info=True)
        raise
    logger.debug(f"Residual of {g} after {f}: {result[0]} (and back: {result[1]})")
    return table.remember(key, result)


def path_residual(g: Path, f: Path, table: ResidualTable) -> Path:
    """g/f, the residual of g after f. One of the two paths must be equational."""
    return residual_pair(g, f, table)[0]


def pasting_residual(g: Path, f: Path, table: ResidualTable):
    """(g/f, f/g, trace) through the pasting laws; trace goes from f ; (g/f) to g ; (f/g)."""
    key = ("pasting", g, f)
    if key in table._memo:
        return table._memo[key]
    _check_residuable(g, f)
    if f.is_identity:
        result = g, identity(g.target), CellTrace(g)
    elif g.is_identity:
        result = identity(f.target), f, CellTrace(f)
    elif g.length > 1:
        g1, g2 = g.slice(0, 1), g.slice(1)
        g1_f, f_g1, t1 = pasting_residual(g1, f, table)
        g2_f, f_g, t2 = pasting_residual(g2, f_g1, table)
        trace = t1.extended(identity(f.source), g2_f).then(t2.extended(g1, identity(f_g.target)))
        result = g1_f.then(g2_f), f_g, trace
    elif f.length > 1:
        f1, f2 = f.slice(0, 1), f.slice(1)
        g_f1, f1_g, t1 = pasting_residual(g, f1, table)
        g_f, f2_g, t2 = pasting_residual(g_f1, f2, table)
        trace = t2.extended(f1, identity(g_f.target)).then(t1.extended(identity(f.source), f2_g))
        result = g_f, f1_g.then(f2_g), trace
    else:
        result = step_tile(f.steps[0], g.steps[0], table)
    return table.remember(key, result)


def residual_witness(f: Path, g: Path, table: ResidualTable) -> ResidualWitness:
    g_over_f, f_over_g, trace = pasting_residual(g, f, table)
    return ResidualWitness(f.then(g_over_f), g.then(f_over_g), trace)


def _shift_instance(instance: RelationInstance, step: Step) -> Optional[RelationInstance]:
    """The instance in the context rewritten by a step disjoint from its window, or None."""
    start, end = instance.window
    side = side_of(start, end, step.start, step.end)
    if side == "left":
        left = step.left + step.gen.target + instance.left[step.end:]
        return RelationInstance(instance.relation, left, instance.right, instance.forward)
    if side == "right":
        offset = step.start - end
        right = instance.right[:offset] + step.gen.target + step.right
        return RelationInstance(instance.relation, instance.left, right, instance.forward)
    return None


def _single(instance: RelationInstance) -> CellTrace:
    return CellTrace.single(CellStep(identity(instance.source_word), instance, identity(instance.after.target)))


def _cylinder_tops(p, table: ResidualTable, depth, node_cap) -> dict:
    """Top 2-cells of every critical cylinder of ``p`` that has one, computed once per table."""
    if table.tops is None:
        from .critical import check_cylinder, enumerate_critical_cylinders
        logger.info("Starting cylinder top collection")
        tops = {}
        for cylinder in enumerate_critical_cylinders(p, table):
            try:
                verdict = check_cylinder(cylinder, p, table, depth, node_cap)
            except CohpresError as e:
                logger.warning(f"Cylinder {cylinder.alpha} / {cylinder.f} has no usable top: {e}")
                continue
            if verdict.top is not None:
                tops[(cylinder.f, cylinder.alpha)] = verdict.top
        table.tops = tops
        logger.info(f"Collected {len(tops)} cylinder tops")
    return table.tops


def _cylinder_top(instance: RelationInstance, step: Step, table, p, depth, node_cap) -> Optional[CellTrace]:
    """The top of the critical cylinder formed by ``step`` and ``instance``, put back in context."""
    word = instance.source_word
    w_start, w_end = instance.window
    lo, hi = min(step.start, w_start), max(step.end, w_end)
    n = len(word)
    stripped = RelationInstance(instance.relation, instance.left[lo:], instance.right[:len(instance.right) - (n - hi)])
    top = _cylinder_tops(p, table, depth, node_cap).get((_strip_step(step, lo, hi, n), stripped))
    if top is None:
        return None
    if not instance.forward:
        top = top.inverse()
    return top.whisker(word[:lo], word[hi:])


def _instance_after_step(instance: RelationInstance, step: Step, table, p, depth, node_cap):
    shifted = _shift_instance(instance, step)
    if shifted is not None:
        return _single(shifted)
    return _cylinder_top(instance, step, table, p, depth, node_cap)


def _instance_residual(instance: RelationInstance, f: Path, table, p, depth, node_cap):
    """2-cell from instance.before/f to instance.after/f, and the vertical residual f/instance."""
    before_f, f_before = residual_pair(instance.before, f, table)
    after_f, f_after = residual_pair(instance.after, f, table)
    if f_before != f_after:
        return None, None
    if f.is_identity:
        return _single(instance), f_before
    trace = _instance_after_step(instance, f.steps[0], table, p, depth, node_cap)
    if trace is not None and f.length > 1:
        try:
            trace = cell_residual(trace, f.slice(1), table, p, depth, node_cap)
        except SearchExhaustedError:
            trace = None
    if trace is None or trace.source != before_f or trace.target != after_f:
        trace = search_cells(before_f, after_f, p, depth, node_cap)
    return trace, (f_before if trace is not None else None)


def _trace_after_step(alpha: CellTrace, step: Step, table, p, depth, node_cap) -> CellTrace:
    f = Path(step.source, (step,))
    result = CellTrace(path_residual(alpha.source, f, table))
    for cell in alpha.cells:
        before_f = path_residual(cell.before, f, table)
        after_f = path_residual(cell.after, f, table)
        prefix_f, f_prefix = residual_pair(cell.prefix, f, table)
        piece = None
        top, vertical = _instance_residual(cell.instance, f_prefix, table, p, depth, node_cap)
        if top is not None:
            suffix_f = path_residual(cell.suffix, vertical, table)
            candidate = top.extended(prefix_f, suffix_f)
            if candidate.source == before_f and candidate.target == after_f:
                piece = candidate
        if piece is None:
            piece = search_cells(before_f, after_f, p, depth, node_cap)
            if piece is None:
                raise SearchExhaustedError(f"no 2-cell between {before_f} and {after_f} within depth {depth}")
        result = result.then(piece)
    return result


def cell_residual(alpha: CellTrace, f: Path, table: ResidualTable, p,
                  depth: int = Config.SEARCH_DEPTH, node_cap: int = Config.SEARCH_NODE_CAP) -> CellTrace:
    """
    The residual of a 2-cell after a coinitial path: a trace from
    source(alpha)/f to target(alpha)/f.

    The path is taken one step at a time. An instance disjoint from the step
    moves along unchanged; one that overlaps it critically is replaced by the
    top of the matching critical cylinder, whiskered into place. Anything else
    is filled in by a bounded search.
    """
    logger.debug(f"Starting residual of a {alpha.length}-cell trace after {f}")
    try:
        result = alpha
        for step in f.steps:
            result = _trace_after_step(result, step, table, p, depth, node_cap)
    except CohpresError as e:
        logger.error(f"Error moving a 2-cell along {f}: {e}", exc_info=True)
        raise
    logger.debug(f"Residual trace after {f}: {result.length} cells")
    return result
