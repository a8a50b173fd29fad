"""
Critical pairs (step against step) and critical cylinders (step against a
relation instance), found by overlapping source words.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from .cells import EQUAL, EXCHANGE_EQUAL, UNEQUAL, exchange_equal, search_cells
from .config import Config
from .core import MONOIDAL_MODE, CellTrace, Path, RelationInstance, Step, exchange_relation, side_of
from .errors import SearchExhaustedError
from .residuation import ResidualEntry, ResidualTable, residual_pair

logger = logging.getLogger(__name__)

EQUATIONAL_VERTICAL = "equational_vertical"
EQUATIONAL_BASE = "equational_base"


@dataclass(frozen=True)
class CriticalPair:
    word: tuple
    f: Step
    g: Step
    entry: Optional[ResidualEntry] = None

    @property
    def resolved(self) -> bool:
        return self.entry is not None


@dataclass(frozen=True)
class CriticalCylinder:
    word: tuple
    f: Step
    alpha: RelationInstance
    flavor: str
    # filled in by check_cylinders; not part of the identity of the cylinder
    check: Optional["CylinderVerdict"] = field(default=None, compare=False, repr=False)

    @property
    def vertical(self) -> Path:
        return Path(self.word, (self.f,))

    @property
    def g1(self) -> Path:
        return self.alpha.before

    @property
    def g2(self) -> Path:
        return self.alpha.after


@dataclass(frozen=True)
class CylinderVerdict:
    residual_targets: str
    f_over_g1: Path
    f_over_g2: Path
    g1_over_f: Path
    g2_over_f: Path
    top: Optional[CellTrace] = None
    notes: tuple = field(default=())


def _step_pairs(e, h):
    """Overlapping placements of the sources of e and h, as (word, f, g); f applies e."""
    s, t = e.source, h.source
    found = []
    for o in range(len(s) - len(t) + 1):
        if s[o:o + len(t)] != t or (not t and not 0 < o < len(s)):
            continue
        found.append((s, Step((), e, ()), Step(s[:o], h, s[o + len(t):])))
    for o in range(len(t) - len(s) + 1):
        if t[o:o + len(s)] != s or (not s and not 0 < o < len(t)):
            continue
        found.append((t, Step(t[:o], e, t[o + len(s):]), Step((), h, ())))
    if not s and not t:
        found.append(((), Step((), e, ()), Step((), h, ())))
    for k in range(1, min(len(s), len(t))):
        if s[-k:] == t[:k]:
            found.append((s + t[k:], Step((), e, t[k:]), Step(s[:-k], h, ())))
        if t[-k:] == s[:k]:
            found.append((t + s[k:], Step(t[:-k], e, ()), Step((), h, s[k:])))
    return found


def enumerate_critical_pairs(p, table: Optional[ResidualTable] = None):
    """
    Minimal overlaps of an equational generator with any generator, both
    directions, ordered by generator declaration then offset.
    """
    logger.info(f"Starting critical pair enumeration ({len(p.equational)} equational generators)")
    pairs = []
    seen = set()
    for e in p.equational_generators:
        for h in p.generators:
            for word, f, g in sorted(_step_pairs(e, h), key=lambda item: (len(item[0]), item[2].start, item[1].start)):
                if f == g or frozenset((f, g)) in seen:
                    continue
                seen.add(frozenset((f, g)))
                entry = table.lookup(f, g) if table is not None else None
                pairs.append(CriticalPair(word, f, g, entry))
    logger.info(f"Found {len(pairs)} critical pairs")
    return pairs


def _placements(source, window):
    """Offsets k placing ``source`` against ``window`` with a genuine, consistent overlap."""
    n, m = len(window), len(source)
    for k in range(-m, n + 1):
        start, end = max(k, 0), min(k + m, n)
        if m and not start < end:
            continue
        if not m and not 0 < k < n:
            continue
        if all(source[i - k] == window[i] for i in range(start, end)):
            yield k


def _named_cylinders(p, vertical, relations, flavor):
    found = []
    for relation in relations:
        window = relation.source
        for gen in vertical:
            for k in _placements(gen.source, window):
                left_extra = gen.source[:max(-k, 0)]
                right_extra = gen.source[len(window) - k:] if k + len(gen.source) > len(window) else ()
                word = left_extra + window + right_extra
                start = len(left_extra) + k
                f = Step(word[:start], gen, word[start + len(gen.source):])
                alpha = RelationInstance(relation, left_extra, right_extra)
                w_start, w_end = alpha.window
                if side_of(f.start, f.end, w_start, w_end) is not None:
                    continue
                if f.start <= w_start and w_end <= f.end:
                    continue
                firsts = [side.steps[0] for side in (alpha.before, alpha.after) if side.length]
                if f in firsts:
                    continue
                found.append(CriticalCylinder(word, f, alpha, flavor))
    return found


def _compatible(short, long_, at_end):
    if len(short) > len(long_):
        short, long_ = long_, short
    return long_[len(long_) - len(short):] == short if at_end else long_[:len(short)] == short


def _exchange_cylinders(vertical, factors, flavor):
    found = []
    for gen in vertical:
        source = gen.source
        for i in range(1, len(source)):
            for j in range(i, len(source)):
                a, mid, b = source[:i], source[i:j], source[j:]
                for h1 in factors:
                    if not _compatible(a, h1.source, at_end=True):
                        continue
                    for h2 in factors:
                        if not _compatible(b, h2.source, at_end=False):
                            continue
                        left = a if len(a) > len(h1.source) else h1.source
                        right = b if len(b) > len(h2.source) else h2.source
                        word = left + mid + right
                        f = Step(left[:len(left) - len(a)], gen, right[len(b):])
                        alpha = RelationInstance(
                            exchange_relation(h1, mid, h2), left[:len(left) - len(h1.source)], right[len(h2.source):])
                        found.append(CriticalCylinder(word, f, alpha, flavor))
    return found


def enumerate_critical_cylinders(p, table: Optional[ResidualTable] = None):
    """
    Minimal coincidences of a vertical step with a relation instance.

    Equational-vertical cylinders pair an equational step with any named
    relation or exchange. Equational-base cylinders pair any step with a
    relation whose sides are equational or with an exchange of two
    equational generators.
    """
    logger.info("Starting critical cylinder enumeration")
    named = [rel for rel in p.relations if not rel.is_exchange]
    equational_named = [rel for rel in named if rel.equational]
    found = _named_cylinders(p, p.equational_generators, named, EQUATIONAL_VERTICAL)
    found += _named_cylinders(p, p.generators, equational_named, EQUATIONAL_BASE)
    if p.mode == MONOIDAL_MODE:
        found += _exchange_cylinders(p.equational_generators, p.generators, EQUATIONAL_VERTICAL)
        found += _exchange_cylinders(p.generators, p.equational_generators, EQUATIONAL_BASE)
    cylinders = []
    seen = set()
    for cylinder in found:
        key = (cylinder.f, cylinder.alpha)
        if key not in seen:
            seen.add(key)
            cylinders.append(cylinder)
    logger.info(f"Found {len(cylinders)} critical cylinders")
    return cylinders


def check_cylinder(c: CriticalCylinder, p, table: ResidualTable, depth: int = Config.SEARCH_DEPTH,
                   node_cap: int = Config.SEARCH_NODE_CAP) -> CylinderVerdict:
    """Compare the residuals of the vertical step after both sides, and look for the top 2-cell."""
    f = c.vertical
    g1_f, f_g1 = residual_pair(c.g1, f, table)
    g2_f, f_g2 = residual_pair(c.g2, f, table)
    if f_g1 == f_g2:
        status = EQUAL
    elif p.mode == MONOIDAL_MODE and f_g1.source == f_g2.source and exchange_equal(f_g1, f_g2):
        status = EXCHANGE_EQUAL
    else:
        status = UNEQUAL
    notes = []
    top = None
    if g1_f.target != g2_f.target:
        notes.append("residuals of the base are not cofinal")
    else:
        try:
            top = search_cells(g1_f, g2_f, p, depth, node_cap)
        except SearchExhaustedError as e:
            notes.append(str(e))
        if top is None and not notes:
            notes.append(f"no top 2-cell within {depth} named cells")
    logger.debug(f"Cylinder {c.alpha} / {c.f}: {status}")
    return CylinderVerdict(status, f_g1, f_g2, g1_f, g2_f, top, tuple(notes))


def check_cylinders(cylinders, p, table: ResidualTable, depth: int = Config.SEARCH_DEPTH,
                    node_cap: int = Config.SEARCH_NODE_CAP) -> list:
    """The cylinders again, each carrying its verdict in ``check``."""
    logger.info(f"Starting check of {len(cylinders)} critical cylinders")
    checked = [replace(c, check=check_cylinder(c, p, table, depth, node_cap)) for c in cylinders]
    closed = sum(1 for c in checked if c.check.top is not None)
    logger.info(f"Checked cylinders: {closed} of {len(checked)} have a top 2-cell")
    return checked
