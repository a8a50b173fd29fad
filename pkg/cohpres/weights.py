"""
Weight functions on rewriting steps (omega1) and on relation instances (omega2).

A weight block assigns to each generator, relation or to ``exch`` a tuple of
expressions over N. Each expression is a sum of terms evaluated on the item's
context words:

    const(n) | n         a constant
    countL(s)            occurrences of s in the left context
    countR(s)            occurrences of s in the right context
    ctx_transp(s1,s2)    transposition number of left . right
    transp(s1,s2)        transposition number of the item's whole source word
    size                 length of the item's whole source word

Tuples are added componentwise and compared lexicographically or pointwise.
"""
import re
from dataclasses import dataclass

from .core import CellTrace, Path, RelationInstance, Step
from .errors import DslSyntaxError, WeightError

STEP_TARGET = "steps"
RELATION_TARGET = "rels"
EXCHANGE_KEY = "exch"
ORDERS = ("lex", "pointwise")
TERM_ARITY = {"const": 1, "countL": 1, "countR": 1, "ctx_transp": 2, "transp": 2, "size": 0}

_TOKEN = re.compile(r"\s*(->|[(){},+]|[A-Za-z_][A-Za-z0-9_']*|\d+)")


def transposition_count(word, b, a) -> int:
    """Number of pairs i < j with word[i] == b and word[j] == a."""
    seen_b = 0
    total = 0
    for letter in word:
        if letter == b:
            seen_b += 1
        elif letter == a:
            total += seen_b
    return total


@dataclass(frozen=True)
class Term:
    kind: str
    args: tuple = ()

    def evaluate(self, left, right, source_word) -> int:
        if self.kind == "const":
            return int(self.args[0])
        if self.kind == "countL":
            return left.count(self.args[0])
        if self.kind == "countR":
            return right.count(self.args[0])
        if self.kind == "ctx_transp":
            return transposition_count(left + right, *self.args)
        if self.kind == "transp":
            return transposition_count(source_word, *self.args)
        if self.kind == "size":
            return len(source_word)
        raise WeightError(f"unknown weight term {self.kind}")

    def __str__(self):
        if self.kind == "const":
            return str(self.args[0])
        if self.kind == "size":
            return "size"
        return f"{self.kind}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class WeightSpec:
    name: str
    target: str
    order: str
    dim: int
    entries: tuple

    def entry(self, key):
        for entry_key, expressions in self.entries:
            if entry_key == key:
                return expressions
        return None

    def keys(self):
        return [key for key, _ in self.entries]

    def zero(self) -> tuple:
        return (0,) * self.dim


def _key_of(item):
    if isinstance(item, Step):
        return item.gen.name, item.left, item.right, item.source
    if isinstance(item, RelationInstance):
        key = EXCHANGE_KEY if item.relation.is_exchange else item.relation.name
        return key, item.left, item.right, item.source_word
    raise WeightError(f"cannot weigh {item!r}")


def eval_weight(spec: WeightSpec, item) -> tuple:
    key, left, right, source_word = _key_of(item)
    expressions = spec.entry(key)
    if expressions is None:
        raise WeightError(f"weight {spec.name} has no entry for {key}")
    return tuple(sum(term.evaluate(left, right, source_word) for term in expr) for expr in expressions)


def add(x: tuple, y: tuple) -> tuple:
    return tuple(a + b for a, b in zip(x, y))


def weight_of_path(spec: WeightSpec, path: Path) -> tuple:
    total = spec.zero()
    for step in path.steps:
        total = add(total, eval_weight(spec, step))
    return total


def weight_of_trace(spec: WeightSpec, trace: CellTrace) -> tuple:
    # inverse cells weigh the same as forward ones
    total = spec.zero()
    for cell in trace.cells:
        total = add(total, eval_weight(spec, cell.instance))
    return total


def less(order: str, x: tuple, y: tuple) -> bool:
    """Strict order on N^k."""
    if order == "lex":
        return x < y
    return all(a <= b for a, b in zip(x, y)) and x != y


def format_tuple(t: tuple) -> str:
    return "(" + ",".join(str(v) for v in t) + ")"


def format_weight_block(spec: WeightSpec, opposite: bool = False) -> str:
    prefix = "op " if opposite else ""
    lines = [f"weight {prefix}{spec.name} on {spec.target} order {spec.order} dim {spec.dim} {{"]
    for key, expressions in spec.entries:
        rendered = ", ".join(" + ".join(str(term) for term in expr) for expr in expressions)
        lines.append(f"  {key} -> ({rendered})")
    lines.append("}")
    return "\n".join(lines)


class _Tokens:
    def __init__(self, text, line):
        self.line = line
        self.items = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if not match:
                raise DslSyntaxError(f"unexpected character {text[pos]!r} in weight block", line, pos + 1)
            self.items.append(match.group(1))
            pos = match.end()
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self, expected=None):
        token = self.peek()
        if token is None:
            raise DslSyntaxError("unexpected end of weight block", self.line)
        if expected is not None and token != expected:
            raise DslSyntaxError(f"expected {expected!r} in weight block, found {token!r}", self.line)
        self.pos += 1
        return token


def _parse_term(tokens: _Tokens) -> Term:
    token = tokens.take()
    if token.isdigit():
        return Term("const", (int(token),))
    if token == "size":
        return Term("size")
    if token not in TERM_ARITY:
        raise DslSyntaxError(f"unknown weight term {token!r}", tokens.line)
    tokens.take("(")
    args = [tokens.take()]
    while tokens.peek() == ",":
        tokens.take(",")
        args.append(tokens.take())
    tokens.take(")")
    if len(args) != TERM_ARITY[token]:
        raise DslSyntaxError(f"{token} takes {TERM_ARITY[token]} argument(s)", tokens.line)
    if token == "const":
        if not args[0].isdigit():
            raise DslSyntaxError("const expects a natural number", tokens.line)
        return Term("const", (int(args[0]),))
    return Term(token, tuple(args))


def _parse_expression(tokens: _Tokens) -> tuple:
    terms = [_parse_term(tokens)]
    while tokens.peek() == "+":
        tokens.take("+")
        terms.append(_parse_term(tokens))
    return tuple(terms)


def parse_weight_block(text: str, line: int = None):
    """
    Parse one ``weight`` block. Returns (spec, opposite) where ``opposite``
    marks a block declared with the ``op`` prefix.
    """
    tokens = _Tokens(text, line)
    tokens.take("weight")
    opposite = False
    if tokens.peek() == "op":
        tokens.take("op")
        opposite = True
    name = tokens.take()
    tokens.take("on")
    target = tokens.take()
    if target not in (STEP_TARGET, RELATION_TARGET):
        raise DslSyntaxError(f"weight target must be steps or rels, not {target!r}", line)
    tokens.take("order")
    order = tokens.take()
    if order not in ORDERS:
        raise DslSyntaxError(f"unknown order {order!r}", line)
    tokens.take("dim")
    dim_token = tokens.take()
    if not dim_token.isdigit() or int(dim_token) < 1:
        raise DslSyntaxError("dim must be a positive integer", line)
    dim = int(dim_token)
    tokens.take("{")
    entries = []
    while tokens.peek() != "}":
        key = tokens.take()
        tokens.take("->")
        tokens.take("(")
        expressions = [_parse_expression(tokens)]
        while tokens.peek() == ",":
            tokens.take(",")
            expressions.append(_parse_expression(tokens))
        tokens.take(")")
        if len(expressions) != dim:
            raise DslSyntaxError(f"entry {key} of {name} has {len(expressions)} components, expected {dim}", line)
        if any(key == existing for existing, _ in entries):
            raise DslSyntaxError(f"duplicate weight entry {key} in {name}", line)
        entries.append((key, tuple(expressions)))
    tokens.take("}")
    if tokens.peek() is not None:
        raise DslSyntaxError(f"trailing text after weight block {name}", line)
    return WeightSpec(name, target, order, dim, tuple(entries)), opposite


def validate_weight(spec: WeightSpec, presentation) -> list:
    """Diagnostics for undeclared symbols and keys."""
    diagnostics = []
    objects = set(presentation.objects)
    if spec.target == STEP_TARGET:
        known = {gen.name for gen in presentation.generators}
    else:
        known = {rel.name for rel in presentation.relations} | {EXCHANGE_KEY}
    for key, expressions in spec.entries:
        if key not in known:
            diagnostics.append(f"weight {spec.name}: unknown key {key}")
        for expr in expressions:
            for term in expr:
                if term.kind in ("countL", "countR", "ctx_transp", "transp"):
                    for symbol in term.args:
                        if symbol not in objects:
                            diagnostics.append(f"weight {spec.name}: undeclared object {symbol} in {term}")
    return diagnostics
