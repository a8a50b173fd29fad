"""
2-cells between parallel paths: single relation applications, exchange
canonical forms, and the bounded bidirectional search deciding ``p1 <=>* p2``.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .config import Config
from .core import (
    MONOIDAL_MODE, CellStep, CellTrace, Path, RelationInstance, Step,
    exchange_relation, side_of,
)
from .errors import CompositionError, SearchExhaustedError

logger = logging.getLogger(__name__)

EQUAL = "equal"
EXCHANGE_EQUAL = "exchange_equal"
UNEQUAL = "unequal"
UNEQUAL_AT_BUDGET = "unequal_at_budget"


def exchange_instance(s1: Step, s2: Step) -> Optional[RelationInstance]:
    """
    The exchange instance rewriting ``s1 ; s2`` into the other order, or None
    when the two steps are not independent.
    """
    side = side_of(s1.start, s1.out_end, s2.start, s2.end)
    if side == "right":
        middle = s2.source[s1.out_end:s2.start]
        relation = exchange_relation(s1.gen, middle, s2.gen)
        return RelationInstance(relation, s1.left, s2.right, forward=True)
    if side == "left":
        word = s1.source
        middle = word[s2.end:s1.start]
        relation = exchange_relation(s2.gen, middle, s1.gen)
        return RelationInstance(relation, word[:s2.start], s1.right, forward=False)
    return None


def exchange_cells(path: Path):
    cells = []
    for i in range(path.length - 1):
        instance = exchange_instance(path.steps[i], path.steps[i + 1])
        if instance is not None:
            cells.append(CellStep(path.slice(0, i), instance, path.slice(i + 2)))
    return cells


@lru_cache(maxsize=65536)
def exchange_trace(path: Path):
    """
    Canonical representative of the exchange class of ``path`` and a trace of
    exchange cells leading to it.

    Adjacent independent steps are swapped whenever the later one acts left of
    the earlier one's output, until no such pair remains.
    """
    trace = CellTrace(path)
    current = path
    while True:
        for i in range(current.length - 1):
            s1, s2 = current.steps[i], current.steps[i + 1]
            if side_of(s1.start, s1.out_end, s2.start, s2.end) == "left":
                cell = CellStep(current.slice(0, i), exchange_instance(s1, s2), current.slice(i + 2))
                trace = CellTrace(trace.source, trace.cells + (cell,))
                current = cell.after
                break
        else:
            return current, trace


def exchange_canonical(path: Path) -> Path:
    return exchange_trace(path)[0]


def exchange_equal(p1: Path, p2: Path) -> bool:
    return exchange_canonical(p1) == exchange_canonical(p2)


@lru_cache(maxsize=4096)
def exchange_class(path: Path):
    """Every path exchange-equivalent to ``path``, each with a trace from ``path``."""
    members = {path: CellTrace(path)}
    queue = deque([path])
    while queue:
        current = queue.popleft()
        for cell in exchange_cells(current):
            if cell.after not in members:
                members[cell.after] = CellTrace(members[current].source, members[current].cells + (cell,))
                queue.append(cell.after)
    return members


def _side_matches(path: Path, i: int, side: Path):
    """Contexts (x, z) with ``x.side.z`` equal to the k steps of ``path`` starting at i."""
    k = side.length
    first, pattern = path.steps[i], side.steps[0]
    if first.gen != pattern.gen:
        return None
    cut = len(first.left) - len(pattern.left)
    if cut < 0 or first.left[cut:] != pattern.left or first.right[:len(pattern.right)] != pattern.right:
        return None
    x, z = first.left[:cut], first.right[len(pattern.right):]
    if path.steps[i:i + k] != tuple(step.whisker(x, z) for step in side.steps):
        return None
    return x, z


def named_cells(path: Path, p):
    """Every single named-relation application to ``path``, in both directions."""
    cells = []
    for relation in p.relations:
        for forward in (True, False):
            side = relation.lhs if forward else relation.rhs
            k = side.length
            if k == 0:
                for i in range(path.length + 1):
                    word = path.word_at(i)
                    n = len(side.source)
                    for o in range(len(word) - n + 1):
                        if word[o:o + n] != side.source:
                            continue
                        x, z = word[:o], word[o + n:]
                        if p.mode != MONOIDAL_MODE and (x or z):
                            continue
                        instance = RelationInstance(relation, x, z, forward)
                        cells.append(CellStep(path.slice(0, i), instance, path.slice(i)))
                continue
            for i in range(path.length - k + 1):
                match = _side_matches(path, i, side)
                if match is None:
                    continue
                instance = RelationInstance(relation, match[0], match[1], forward)
                cells.append(CellStep(path.slice(0, i), instance, path.slice(i + k)))
    return cells


def single_cells(path: Path, p):
    """Named applications followed by exchange swaps (the latter only in monoidal mode)."""
    cells = named_cells(path, p)
    if p.mode == MONOIDAL_MODE:
        cells += exchange_cells(path)
    return cells


def _key(path: Path, p):
    if p.mode == MONOIDAL_MODE:
        return exchange_trace(path)
    return path, CellTrace(path)


def search_cells(p1: Path, p2: Path, p, depth: int = Config.SEARCH_DEPTH,
                 node_cap: int = Config.SEARCH_NODE_CAP) -> Optional[CellTrace]:
    """
    Bidirectional breadth-first search for a 2-cell from ``p1`` to ``p2``.

    Nodes are exchange classes in monoidal mode and paths in path mode;
    ``depth`` bounds the number of named cells. Returns None when the bounded
    graph is exhausted and raises SearchExhaustedError past ``node_cap`` nodes.
    """
    if p1.source != p2.source or p1.target != p2.target:
        raise CompositionError(f"{p1} and {p2} are not parallel")
    key1, trace1 = _key(p1, p)
    key2, trace2 = _key(p2, p)
    if key1 == key2:
        return trace1.then(trace2.inverse())

    # per side: canonical path -> trace from that side's root
    found = ({key1: trace1}, {key2: trace2})
    frontiers = ([key1], [key2])
    levels = [0, 0]
    while levels[0] + levels[1] < depth and frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = found[side], found[1 - side]
        next_frontier = []
        for node in frontiers[side]:
            base = mine[node]
            members = exchange_class(node) if p.mode == MONOIDAL_MODE else {node: CellTrace(node)}
            for member, to_member in members.items():
                for cell in named_cells(member, p):
                    key, to_key = _key(cell.after, p)
                    if key in mine:
                        continue
                    trace = CellTrace(base.source, base.cells + to_member.cells + (cell,) + to_key.cells)
                    mine[key] = trace
                    if key in other:
                        forward, backward = (trace, other[key]) if side == 0 else (other[key], trace)
                        return forward.then(backward.inverse())
                    next_frontier.append(key)
                    if len(found[0]) + len(found[1]) > node_cap:
                        raise SearchExhaustedError(f"2-cell search between {p1} and {p2} passed {node_cap} nodes")
        frontiers = (next_frontier, frontiers[1]) if side == 0 else (frontiers[0], next_frontier)
        levels[side] += 1
    return None


@dataclass(frozen=True)
class CellEquality:
    verdict: str
    trace: Optional[CellTrace] = None
    reason: str = ""

    @property
    def equal(self) -> bool:
        return self.verdict == EQUAL


def cells_equal(p1: Path, p2: Path, p, depth: int = Config.SEARCH_DEPTH,
                node_cap: int = Config.SEARCH_NODE_CAP) -> CellEquality:
    try:
        trace = search_cells(p1, p2, p, depth, node_cap)
    except SearchExhaustedError as e:
        return CellEquality(UNEQUAL_AT_BUDGET, reason=str(e))
    if trace is None:
        return CellEquality(UNEQUAL_AT_BUDGET, reason=f"no 2-cell within {depth} named cells")
    return CellEquality(EQUAL, trace)
