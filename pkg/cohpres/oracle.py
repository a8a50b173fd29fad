"""
Brute-force ground truth at desk scale: hom-set enumeration modulo
relations, monotone surjection counts, and the comparison of the normal-form,
quotient and localization constructions.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

from networkx.utils import UnionFind

from .cells import cells_equal, exchange_canonical, single_cells  # noqa: F401
from .config import Config
from .constructions import localization_presentation, object_classes, quotient_presentation
from .core import PATH_MODE, Path, identity, join_word
from .errors import ExplosionError
from .fractions import sample_fraction_agreement
from .objects import check_equational_termination, is_normal, successors, words_up_to
from .residuation import derive_residual_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomClasses:
    source: tuple
    target: tuple
    bound: int
    classes: tuple

    @property
    def count(self) -> int:
        return len(self.classes)


def enumerate_paths(source, p, bound: int, cap: int = Config.HOM_EXPLOSION_CAP):
    """Every path from ``source`` with at most ``bound`` steps, breadth first."""
    paths = [identity(tuple(source))]
    layer = list(paths)
    for _ in range(bound):
        layer = [path.then(Path(path.target, (step,))) for path in layer
                 for step in successors(path.target, p.generators)]
        paths.extend(layer)
        if len(paths) > cap:
            raise ExplosionError(f"hom-set enumeration from {join_word(source)}", cap)
    return paths


def enumerate_hom_classes(source, target, p, bound: int, cap: int = Config.HOM_EXPLOSION_CAP) -> HomClasses:
    """
    Partition the paths source -> target with at most ``bound`` steps, merging
    two paths whenever a single relation instance rewrites one into the other.
    """
    source, target = tuple(source), tuple(target)
    paths = [path for path in enumerate_paths(source, p, bound, cap) if path.target == target]
    members = set(paths)
    classes = UnionFind(paths)
    for path in paths:
        for cell in single_cells(path, p):
            if cell.after in members:
                classes.union(path, cell.after)
    order = lambda path: (path.length, str(path))  # noqa: E731
    blocks = sorted((tuple(sorted(block, key=order)) for block in classes.to_sets()), key=lambda b: order(b[0]))
    logger.debug(f"hom({join_word(source)}, {join_word(target)}) at bound {bound}: {len(blocks)} classes")
    return HomClasses(source, target, bound, tuple(blocks))


def monotone_surjections(n: int, m: int) -> int:
    """Monotone surjections [n] -> [m], counted by enumerating non-decreasing maps."""
    return sum(1 for values in combinations_with_replacement(range(m), n) if set(values) == set(range(m)))


def surjection_count(pq, rs) -> int:
    (p, q), (r, s) = pq, rs
    return monotone_surjections(p, r) * monotone_surjections(q, s)


@dataclass
class ComparisonReport:
    mode: str
    rows: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    fractions: dict = None

    @property
    def agrees(self) -> bool:
        disagreements = self.fractions["disagree"] if self.fractions else 0
        return not self.mismatches and not disagreements

    def to_dict(self) -> dict:
        return {"mode": self.mode, "rows": self.rows, "mismatches": self.mismatches, "fractions": self.fractions}


def _compare_path_mode(p, max_steps, cap, report):
    terminating = check_equational_termination(p).terminating
    quotient = quotient_presentation(p)
    localized = localization_presentation(p)
    representative = object_classes(p)
    for x, y in product(p.objects, repeat=2):
        row = {"source": x, "target": y}
        if terminating and is_normal((x,), p) and is_normal((y,), p):
            row["nf"] = enumerate_hom_classes((x,), (y,), p, max_steps, cap).count
        row["quotient"] = enumerate_hom_classes(
            (representative[x],), (representative[y],), quotient, max_steps, cap).count
        row["localization"] = enumerate_hom_classes((x,), (y,), localized, max_steps, cap).count
        report.rows.append(row)
        if row["quotient"] != row["localization"]:
            report.mismatches.append(
                f"hom({x}, {y}): quotient has {row['quotient']} classes, localization has {row['localization']}")
        if "nf" in row and row["nf"] != row["quotient"]:
            report.mismatches.append(
                f"hom({x}, {y}): normal forms give {row['nf']} classes, quotient has {row['quotient']}")


def _compare_monoidal(p, max_word, max_steps, oracle, cap, report):
    table = derive_residual_table(p)
    normal = [w for w in words_up_to(p.objects, max_word) if is_normal(w, p)]
    for x, y in product(normal, repeat=2):
        row = {"source": join_word(x), "target": join_word(y),
               "nf": enumerate_hom_classes(x, y, p, max_steps, cap).count}
        if oracle == "ds2":
            a, b = p.objects[0], p.objects[1]
            letters_x, letters_y = Counter(x), Counter(y)
            row["surjections"] = surjection_count((letters_x[a], letters_x[b]), (letters_y[a], letters_y[b]))
            if row["surjections"] != row["nf"]:
                report.mismatches.append(
                    f"hom({row['source']}, {row['target']}): {row['nf']} classes but "
                    f"{row['surjections']} surjections")
        report.rows.append(row)
    report.fractions = sample_fraction_agreement(p, table)
    report.mismatches += [f"fraction disagreement: {d}" for d in report.fractions["disagreements"]]


def compare_constructions(p, max_word: int = 4, max_steps: int = 5, oracle=None,
                          cap: int = Config.HOM_EXPLOSION_CAP) -> ComparisonReport:
    """
    Count hom classes of the constructions side by side. In path mode the
    quotient and localization presentations (and normal forms, when the
    equational rules terminate) are compared on every pair of objects; in
    monoidal mode normal-form hom-sets are compared with the surjection
    oracle and fraction equality with N-image equality.
    """
    logger.info(f"Starting construction comparison (max word {max_word}, max steps {max_steps})")
    report = ComparisonReport(p.mode)
    if p.mode == PATH_MODE:
        _compare_path_mode(p, max_steps, cap, report)
    else:
        _compare_monoidal(p, max_word, max_steps, oracle, cap, report)
    logger.info(f"Comparison finished with {len(report.mismatches)} mismatches")
    return report
