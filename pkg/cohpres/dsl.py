"""
Text format for presentations, paths and traces.

    mode (path|monoidal)
    objects <name>+
    gen    <name> : <word> -> <word>       # 0 is the empty word
    eqgen  <name> : <word> -> <word>
    equational <name>+                     # marks already declared generators
    rel    <name> : <path> => <path>
    weight [op] <name> on (steps|rels) order (lex|pointwise) dim <k> { ... }

Words are object names, juxtaposed when every declared object name is a
single character and space separated otherwise. A step is ``left[gen]right``,
a path is steps joined by ``;`` or ``id <word>``.
"""
import logging
import re
from dataclasses import replace

from .core import (
    MODES, MONOIDAL_MODE, PATH_MODE, CellTrace, MorGen, Path, Presentation,
    Relation, RelationInstance, Step, join_word,
)
from .errors import CohpresError, DslSyntaxError, DuplicateNameError, PresentationTypeError
from .weights import WeightSpec, format_weight_block, parse_weight_block, validate_weight

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_STEP = re.compile(r"^(?P<left>[^\[\]]*)\[(?P<gen>[^\[\]]+)\](?P<right>[^\[\]]*)$")
_DECLARATION = re.compile(r"^(?P<name>\S+)\s*:\s*(?P<body>.*)$")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_word(text: str, objects, line=None) -> tuple:
    """Split ``text`` into object names, matching the longest declared name first."""
    text = text.strip()
    if text in ("", "0"):
        return ()
    names = sorted(objects, key=len, reverse=True)
    word = []
    for chunk in text.split():
        pos = 0
        while pos < len(chunk):
            for name in names:
                if chunk.startswith(name, pos):
                    word.append(name)
                    pos += len(name)
                    break
            else:
                raise DslSyntaxError(f"unknown object in word {chunk!r}", line, pos + 1)
    return tuple(word)


def parse_step(text: str, presentation, line=None) -> Step:
    match = _STEP.match(text.strip())
    if not match:
        raise DslSyntaxError(f"malformed step {text.strip()!r}", line)
    gen = presentation.generator(match.group("gen").strip())
    left = parse_word(match.group("left"), presentation.objects, line)
    right = parse_word(match.group("right"), presentation.objects, line)
    return Step(left, gen, right)


def parse_path(text: str, presentation, line=None) -> Path:
    text = text.strip()
    if text.startswith("id ") or text == "id":
        return Path(parse_word(text[2:], presentation.objects, line))
    if not text:
        raise DslSyntaxError("empty path", line)
    steps = tuple(parse_step(part, presentation, line) for part in text.split(";"))
    return Path(steps[0].source, steps).check()


class _Reader:
    """Accumulates declarations; in collecting mode errors become diagnostics."""

    def __init__(self, collect: bool):
        self.collect = collect
        self.diagnostics = []
        self.mode = MONOIDAL_MODE
        self.objects = []
        self.generators = []
        self.pending_equational = []
        self.relation_lines = []
        self.weights = []
        self.opposite_weights = []

    def fail(self, error: CohpresError):
        if not self.collect:
            raise error
        self.diagnostics.append(str(error))

    def snapshot(self, relations=()) -> Presentation:
        return Presentation(
            self.mode, tuple(self.objects), tuple(self.generators), tuple(relations),
            tuple(self.weights), tuple(self.opposite_weights),
        )

    def declare_objects(self, body, number):
        for name in body.split():
            if not IDENTIFIER.match(name):
                self.fail(DslSyntaxError(f"invalid object name {name!r}", number))
            elif name in self.objects:
                self.fail(DuplicateNameError(f"line {number}: object {name} declared twice"))
            else:
                self.objects.append(name)

    def declare_generator(self, body, number, equational):
        match = _DECLARATION.match(body)
        if not match or "->" not in match.group("body"):
            raise DslSyntaxError("expected '<name> : <word> -> <word>'", number)
        name = match.group("name")
        if not IDENTIFIER.match(name):
            raise DslSyntaxError(f"invalid generator name {name!r}", number)
        if any(gen.name == name for gen in self.generators):
            raise DuplicateNameError(f"line {number}: generator {name} declared twice")
        source_text, target_text = match.group("body").split("->", 1)
        source = parse_word(source_text, self.objects, number)
        target = parse_word(target_text, self.objects, number)
        self.generators.append(MorGen(name, source, target, equational))

    def mark_equational(self, body, number):
        for name in body.split():
            self.pending_equational.append((name, number))

    def apply_equational(self):
        by_name = {gen.name: i for i, gen in enumerate(self.generators)}
        for name, number in self.pending_equational:
            if name not in by_name:
                self.fail(PresentationTypeError(f"line {number}: equational set names undeclared generator {name}"))
                continue
            i = by_name[name]
            self.generators[i] = replace(self.generators[i], equational=True)

    def build_relations(self):
        draft = self.snapshot()
        relations = []
        for body, number in self.relation_lines:
            try:
                match = _DECLARATION.match(body)
                if not match or "=>" not in match.group("body"):
                    raise DslSyntaxError("expected '<name> : <path> => <path>'", number)
                name = match.group("name")
                if not IDENTIFIER.match(name):
                    raise DslSyntaxError(f"invalid relation name {name!r}", number)
                if any(rel.name == name for rel in relations):
                    raise DuplicateNameError(f"line {number}: relation {name} declared twice")
                lhs_text, rhs_text = match.group("body").split("=>", 1)
                try:
                    lhs = parse_path(lhs_text, draft, number)
                    rhs = parse_path(rhs_text, draft, number)
                except PresentationTypeError as e:
                    raise PresentationTypeError(f"line {number}: relation {name}: {e}") from None
                try:
                    relations.append(Relation(name, lhs, rhs).check())
                except PresentationTypeError as e:
                    raise PresentationTypeError(f"line {number}: {e}") from None
            except CohpresError as e:
                self.fail(e)
        return relations


def _logical_lines(text: str):
    """Yield (line number, text); a weight block is gathered until its braces balance."""
    buffer, start, depth = [], None, 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if buffer:
            buffer.append(line)
            depth += line.count("{") - line.count("}")
            if depth <= 0:
                yield start, " ".join(buffer)
                buffer = []
            continue
        if not line.strip():
            continue
        if line.split()[0] == "weight":
            depth = line.count("{") - line.count("}")
            if depth > 0 or "{" not in line:
                buffer, start = [line], number
                continue
        yield number, line
    if buffer:
        raise DslSyntaxError("unterminated weight block", start)


def _read(text: str, collect: bool):
    reader = _Reader(collect)
    seen_mode = False
    for number, line in _logical_lines(text):
        keyword, _, body = line.strip().partition(" ")
        body = body.strip()
        try:
            if keyword == "mode":
                if body not in MODES:
                    raise DslSyntaxError(f"unknown mode {body!r}", number)
                if seen_mode:
                    raise DuplicateNameError(f"line {number}: mode declared twice")
                reader.mode, seen_mode = body, True
            elif keyword == "objects":
                reader.declare_objects(body, number)
            elif keyword in ("gen", "eqgen"):
                reader.declare_generator(body, number, keyword == "eqgen")
            elif keyword == "equational":
                reader.mark_equational(body, number)
            elif keyword == "rel":
                reader.relation_lines.append((body, number))
            elif keyword == "weight":
                spec, opposite = parse_weight_block(line, number)
                target = reader.opposite_weights if opposite else reader.weights
                if any(existing.name == spec.name for existing in target):
                    raise DuplicateNameError(f"line {number}: weight {spec.name} declared twice")
                target.append(spec)
            else:
                raise DslSyntaxError(f"unknown declaration {keyword!r}", number, 1)
        except CohpresError as e:
            reader.fail(e)
    reader.apply_equational()
    relations = reader.build_relations()
    return reader.snapshot(relations), reader.diagnostics


def parse_presentation(text: str, check: bool = True) -> Presentation:
    """
    Parse a presentation document.

    With ``check`` set, any violation of the presentation invariants raises;
    otherwise structural problems are left for ``validate`` to report.
    """
    presentation, _ = _read(text, collect=False)
    if check:
        diagnostics = validate(presentation)
        if diagnostics:
            raise PresentationTypeError("; ".join(diagnostics))
    logger.debug(
        f"Parsed {presentation.mode} presentation: {len(presentation.objects)} objects, "
        f"{len(presentation.generators)} generators, {len(presentation.relations)} relations"
    )
    return presentation


def load_presentation(path: str, check: bool = True) -> Presentation:
    with open(path, encoding="utf-8") as handle:
        return parse_presentation(handle.read(), check=check)


def _word_diagnostics(word, objects, what):
    return [f"{what}: undeclared object {letter}" for letter in word if letter not in objects]


def validate(entity) -> list:
    """
    Diagnostics for a presentation, one per violated invariant.

    ``entity`` is a Presentation or a DSL document; a document is read in
    collecting mode so that undeclared names and ill-typed relations are
    reported rather than raised.
    """
    if isinstance(entity, str):
        try:
            presentation, diagnostics = _read(entity, collect=True)
        except DslSyntaxError as e:
            return [str(e)]
        return diagnostics + validate(presentation)

    p = entity
    diagnostics = []
    objects = set(p.objects)
    if p.mode not in MODES:
        diagnostics.append(f"unknown mode {p.mode}")
    for kind, names in (
        ("object", list(p.objects)),
        ("generator", [gen.name for gen in p.generators]),
        ("relation", [rel.name for rel in p.relations]),
    ):
        for name in sorted({n for n in names if names.count(n) > 1}):
            diagnostics.append(f"duplicate {kind} name {name}")
    for gen in p.generators:
        diagnostics += _word_diagnostics(gen.source + gen.target, objects, f"generator {gen.name}")
        if p.mode == PATH_MODE and (len(gen.source) != 1 or len(gen.target) != 1):
            diagnostics.append(
                f"generator {gen.name}: path mode needs single objects, got "
                f"{join_word(gen.source)} -> {join_word(gen.target)}"
            )
    for rel in p.relations:
        try:
            rel.check()
        except PresentationTypeError as e:
            diagnostics.append(str(e))
            continue
        if rel.is_exchange and p.mode == PATH_MODE:
            diagnostics.append(f"relation {rel.name}: exchange relations need monoidal mode")
        for side in (rel.lhs, rel.rhs):
            for step in side.steps:
                if step.gen not in p.generators:
                    diagnostics.append(f"relation {rel.name}: unknown generator {step.gen.name}")
                if p.mode == PATH_MODE and (step.left or step.right):
                    diagnostics.append(f"relation {rel.name}: step {step} has a context in path mode")
    for spec in p.weights + p.opposite_weights:
        if isinstance(spec, WeightSpec):
            diagnostics += validate_weight(spec, p)
    return diagnostics


def _generator_line(gen: MorGen, spaced: bool = False) -> str:
    keyword = "eqgen" if gen.equational else "gen"
    return f"{keyword} {gen.name} : {join_word(gen.source, spaced)} -> {join_word(gen.target, spaced)}"


def to_text(entity) -> str:
    """Canonical DSL rendering; parsing it back gives a structurally equal value."""
    if isinstance(entity, Presentation):
        spaced = any(len(name) > 1 for name in entity.objects)
        lines = [f"mode {entity.mode}", "objects " + " ".join(entity.objects)]
        lines += [_generator_line(gen, spaced) for gen in entity.generators]
        lines += [f"rel {rel.name} : {rel.lhs.render(spaced)} => {rel.rhs.render(spaced)}"
                  for rel in entity.relations]
        lines += [format_weight_block(spec) for spec in entity.weights]
        lines += [format_weight_block(spec, opposite=True) for spec in entity.opposite_weights]
        return "\n".join(lines) + "\n"
    if isinstance(entity, CellTrace):
        lines = [str(entity.source)]
        for cell in entity.cells:
            lines.append(f"  ={cell.instance}=> {cell.after}")
        return "\n".join(lines)
    if isinstance(entity, MorGen):
        return _generator_line(entity)
    if isinstance(entity, Relation):
        return f"rel {entity.name} : {entity.lhs} => {entity.rhs}"
    if isinstance(entity, WeightSpec):
        return format_weight_block(entity)
    if isinstance(entity, tuple):
        return join_word(entity)
    if isinstance(entity, (Path, Step, RelationInstance)):
        return str(entity)
    raise TypeError(f"cannot print {type(entity).__name__}")
