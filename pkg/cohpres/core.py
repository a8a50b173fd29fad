"""
Data model for presentations modulo and their morphisms and 2-cells.

Words are tuples of object-generator names; the empty tuple is the monoidal
unit. Paths are stored in diagrammatic order: ``Path(src, (s1, s2))`` applies
``s1`` first, and prints as ``s1 ; s2``. Everything here is immutable.
"""
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Optional

from .errors import CompositionError, ModeError, PresentationTypeError

PATH_MODE = "path"
MONOIDAL_MODE = "monoidal"
MODES = (PATH_MODE, MONOIDAL_MODE)

Word = tuple


def join_word(word, spaced: bool = False) -> str:
    """
    Render a word. Single-letter words are juxtaposed, as in ``baa``, unless
    ``spaced`` is set; it must be whenever some object name of the
    presentation is longer than one letter, or ``a b`` would read back as ``ab``.
    """
    if not word:
        return "0"
    if not spaced and all(len(letter) == 1 for letter in word):
        return "".join(word)
    return " ".join(word)


def occurrences(word, factor):
    """Start offsets of ``factor`` in ``word``; an empty factor occurs at every gap."""
    n, k = len(word), len(factor)
    return [i for i in range(n - k + 1) if word[i:i + k] == factor]


@dataclass(frozen=True)
class MorGen:
    name: str
    source: tuple
    target: tuple
    equational: bool = False

    def reversed(self) -> "MorGen":
        return MorGen(self.name, self.target, self.source, self.equational)


@dataclass(frozen=True)
class Step:
    """One generator applied in a (left, right) word context."""
    left: tuple
    gen: MorGen
    right: tuple

    @property
    def source(self):
        return self.left + self.gen.source + self.right

    @property
    def target(self):
        return self.left + self.gen.target + self.right

    @property
    def start(self) -> int:
        return len(self.left)

    @property
    def end(self) -> int:
        return len(self.left) + len(self.gen.source)

    @property
    def out_end(self) -> int:
        return len(self.left) + len(self.gen.target)

    @property
    def equational(self) -> bool:
        return self.gen.equational

    def whisker(self, x=(), z=()) -> "Step":
        return Step(tuple(x) + self.left, self.gen, self.right + tuple(z))

    def render(self, spaced: bool = False) -> str:
        if not spaced:
            left = join_word(self.left) if self.left else ""
            right = join_word(self.right) if self.right else ""
            return f"{left}[{self.gen.name}]{right}"
        parts = [join_word(self.left, True)] if self.left else []
        parts.append(f"[{self.gen.name}]")
        if self.right:
            parts.append(join_word(self.right, True))
        return " ".join(parts)

    def __str__(self):
        return self.render()


def side_of(a_start, a_end, b_start, b_end):
    """
    Relative position of interval b with respect to interval a, both half-open.

    Returns "left" when b lies entirely before a, "right" when entirely after,
    and None when they overlap. An empty interval sits in a gap: it overlaps a
    nonempty interval only when the gap is strictly inside it, and two empty
    intervals in the same gap overlap.
    """
    a_empty = a_start == a_end
    b_empty = b_start == b_end
    if a_empty and b_empty and a_start == b_start:
        return None
    if b_end <= a_start:
        return "left"
    if a_end <= b_start:
        return "right"
    return None


@dataclass(frozen=True)
class Path:
    source: tuple
    steps: tuple = ()

    @property
    def target(self):
        return self.steps[-1].target if self.steps else self.source

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def is_identity(self) -> bool:
        return not self.steps

    @property
    def equational(self) -> bool:
        return all(step.equational for step in self.steps)

    def word_at(self, i: int):
        return self.steps[i].source if i < len(self.steps) else self.target

    def slice(self, i: int, j: Optional[int] = None) -> "Path":
        return Path(self.word_at(i), self.steps[i:j])

    def then(self, other: "Path") -> "Path":
        return compose(self, other)

    def whisker(self, x=(), z=()) -> "Path":
        return tensor_ctx(x, self, z)

    def reversed_steps(self) -> "Path":
        """The same steps read backwards, each generator reversed (opposite category)."""
        steps = tuple(Step(s.left, s.gen.reversed(), s.right) for s in reversed(self.steps))
        return Path(self.target, steps)

    def check(self) -> "Path":
        current = self.source
        for i, step in enumerate(self.steps):
            if step.source != current:
                raise PresentationTypeError(
                    f"step {i + 1} ({step}) expects {join_word(step.source)} but the path is at {join_word(current)}"
                )
            current = step.target
        return self

    def render(self, spaced: bool = False) -> str:
        if not self.steps:
            return f"id {join_word(self.source, spaced)}"
        return " ; ".join(step.render(spaced) for step in self.steps)

    def __str__(self):
        return self.render()


def identity(word) -> Path:
    return Path(tuple(word))


def compose(p1: Path, p2: Path) -> Path:
    if p1.target != p2.source:
        raise CompositionError(
            f"cannot compose {p1} : {join_word(p1.source)} -> {join_word(p1.target)} "
            f"with {p2} starting at {join_word(p2.source)}"
        )
    return Path(p1.source, p1.steps + p2.steps)


def tensor_ctx(x, p: Path, z) -> Path:
    x, z = tuple(x), tuple(z)
    return Path(x + p.source + z, tuple(step.whisker(x, z) for step in p.steps))


@dataclass(frozen=True)
class Relation:
    name: str
    lhs: Path
    rhs: Path
    # (h1, mid, h2) for an exchange in restricted form
    exchange: Optional[tuple] = None

    @property
    def source(self):
        return self.lhs.source

    @property
    def target(self):
        return self.lhs.target

    @property
    def is_exchange(self) -> bool:
        return self.exchange is not None

    @property
    def equational(self) -> bool:
        return self.lhs.equational and self.rhs.equational

    def check(self) -> "Relation":
        self.lhs.check()
        self.rhs.check()
        if self.lhs.source != self.rhs.source or self.lhs.target != self.rhs.target:
            raise PresentationTypeError(
                f"relation {self.name}: sides are not parallel "
                f"({join_word(self.lhs.source)} -> {join_word(self.lhs.target)} vs "
                f"{join_word(self.rhs.source)} -> {join_word(self.rhs.target)})"
            )
        return self


@lru_cache(maxsize=4096)
def exchange_relation(h1: MorGen, mid, h2: MorGen) -> Relation:
    """
    The exchange chi(h1, mid, h2) on h1.source . mid . h2.source.

    Its left side applies the left factor h1 first; its right side applies h2 first.
    """
    mid = tuple(mid)
    source = h1.source + mid + h2.source
    lhs = Path(source, (Step((), h1, mid + h2.source), Step(h1.target + mid, h2, ())))
    rhs = Path(source, (Step(h1.source + mid, h2, ()), Step((), h1, mid + h2.target)))
    if mid:
        name = f"chi({h1.name},{join_word(mid)},{h2.name})"
    else:
        name = f"chi({h1.name},{h2.name})"
    return Relation(name, lhs, rhs, exchange=(h1, mid, h2))


@dataclass(frozen=True)
class RelationInstance:
    relation: Relation
    left: tuple = ()
    right: tuple = ()
    forward: bool = True

    @property
    def kind(self) -> str:
        return "exchange" if self.relation.is_exchange else "named"

    @property
    def source_word(self):
        return self.left + self.relation.source + self.right

    @property
    def window(self):
        return len(self.left), len(self.left) + len(self.relation.source)

    @property
    def before(self) -> Path:
        side = self.relation.lhs if self.forward else self.relation.rhs
        return tensor_ctx(self.left, side, self.right)

    @property
    def after(self) -> Path:
        side = self.relation.rhs if self.forward else self.relation.lhs
        return tensor_ctx(self.left, side, self.right)

    def inverse(self) -> "RelationInstance":
        return replace(self, forward=not self.forward)

    def whisker(self, x=(), z=()) -> "RelationInstance":
        return replace(self, left=tuple(x) + self.left, right=self.right + tuple(z))

    def __str__(self):
        left = join_word(self.left) + "·" if self.left else ""
        right = "·" + join_word(self.right) if self.right else ""
        inverse = "" if self.forward else "^-1"
        return f"{left}{self.relation.name}{inverse}{right}"


@dataclass(frozen=True)
class CellStep:
    """A relation instance applied at a position of a path: prefix ; instance ; suffix."""
    prefix: Path
    instance: RelationInstance
    suffix: Path

    @property
    def before(self) -> Path:
        return self.prefix.then(self.instance.before).then(self.suffix)

    @property
    def after(self) -> Path:
        return self.prefix.then(self.instance.after).then(self.suffix)

    def inverse(self) -> "CellStep":
        return CellStep(self.prefix, self.instance.inverse(), self.suffix)

    def whisker(self, x=(), z=()) -> "CellStep":
        return CellStep(self.prefix.whisker(x, z), self.instance.whisker(x, z), self.suffix.whisker(x, z))

    def extended(self, before: Path, after: Path) -> "CellStep":
        return CellStep(before.then(self.prefix), self.instance, self.suffix.then(after))


@dataclass(frozen=True)
class CellTrace:
    source: Path
    cells: tuple = ()

    @classmethod
    def single(cls, cell: CellStep) -> "CellTrace":
        return cls(cell.before, (cell,))

    @property
    def target(self) -> Path:
        return self.cells[-1].after if self.cells else self.source

    @property
    def length(self) -> int:
        return len(self.cells)

    def then(self, other: "CellTrace") -> "CellTrace":
        if self.target != other.source:
            raise CompositionError(f"2-cells do not compose: {self.target} vs {other.source}")
        return CellTrace(self.source, self.cells + other.cells)

    def inverse(self) -> "CellTrace":
        return CellTrace(self.target, tuple(cell.inverse() for cell in reversed(self.cells)))

    def whisker(self, x=(), z=()) -> "CellTrace":
        return CellTrace(self.source.whisker(x, z), tuple(cell.whisker(x, z) for cell in self.cells))

    def extended(self, before: Path, after: Path) -> "CellTrace":
        """Pre- and post-compose every path of the trace with fixed 1-cells."""
        return CellTrace(
            before.then(self.source).then(after),
            tuple(cell.extended(before, after) for cell in self.cells),
        )

    def instances(self):
        return [cell.instance for cell in self.cells]

    def check(self) -> "CellTrace":
        current = self.source
        for i, cell in enumerate(self.cells):
            if cell.before != current:
                raise PresentationTypeError(f"cell {i + 1} ({cell.instance}) does not apply to {current}")
            current = cell.after
        return self


@dataclass(frozen=True)
class Presentation:
    mode: str
    objects: tuple
    generators: tuple
    relations: tuple = ()
    weights: tuple = ()
    opposite_weights: tuple = ()

    @cached_property
    def _generators_by_name(self):
        return {gen.name: gen for gen in self.generators}

    @cached_property
    def _order(self):
        return {gen.name: i for i, gen in enumerate(self.generators)}

    @property
    def equational(self) -> frozenset:
        return frozenset(gen.name for gen in self.generators if gen.equational)

    @property
    def equational_generators(self) -> tuple:
        return tuple(gen for gen in self.generators if gen.equational)

    def generator(self, name: str) -> MorGen:
        try:
            return self._generators_by_name[name]
        except KeyError:
            raise PresentationTypeError(f"unknown generator {name!r}") from None

    def gen_index(self, name: str) -> int:
        return self._order[name]

    def relation(self, name: str) -> Relation:
        for relation in self.relations:
            if relation.name == name:
                return relation
        raise PresentationTypeError(f"unknown relation {name!r}")

    def weight(self, name: str):
        for spec in self.weights:
            if spec.name == name:
                return spec
        return None

    def whisker(self, x, path: Path, z) -> Path:
        if self.mode == PATH_MODE and (x or z):
            raise ModeError("whiskering by object words is only available in monoidal mode")
        return tensor_ctx(x, path, z)
