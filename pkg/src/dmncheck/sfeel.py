"""S-FEEL input-entry conditions: parsing, evaluation, and lowering.

A condition text is one of::

    -                       matches anything
    term                    shorthand for equality with the term
    not(term)               negated equality
    < term   <= term        comparison (numeric kinds only)
    > term   >= term
    [a..b]  (a..b)  etc.    interval with open/closed ends (numeric only)
    q1, q2, ...             alternative: any branch may match

Terms are literals or arithmetic over literals (``+ - * /``, with the
multiplication-dot and division-sign accepted as spellings of ``*`` and
``/``).  Terms are folded to a single literal while parsing, so every
AST node carries plain literal values.

Four value kinds exist: string, boolean, integer, real.  Their domains
are treated as pairwise disjoint; equality is defined for all kinds,
ordering and arithmetic only for the numeric ones.  Parsing is
kind-directed: ``123`` under a string column is the three-character
string, and ``[0..18]`` under a string column is a type error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .errors import CodecError, EvalError, SFeelSyntaxError, SFeelTypeError
from .intervals import NEG_INF, POS_INF, IntervalSet, interval


class Kind(str, Enum):
    """Value kind of a column."""

    STRING = "string"
    BOOLEAN = "boolean"
    INTEGER = "integer"
    REAL = "real"

    @property
    def is_numeric(self) -> bool:
        return self in (Kind.INTEGER, Kind.REAL)

    @property
    def is_categorical(self) -> bool:
        return self in (Kind.STRING, Kind.BOOLEAN)


def kind_of(value) -> Kind:
    """Kind of a literal value; bool is checked before int on purpose."""
    if isinstance(value, bool):
        return Kind.BOOLEAN
    if isinstance(value, int):
        return Kind.INTEGER
    if isinstance(value, float):
        return Kind.REAL
    if isinstance(value, str):
        return Kind.STRING
    raise SFeelTypeError(f"unsupported literal type {type(value).__name__}")


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class BinOp:
    """Binary arithmetic application over two sub-terms."""

    op: str  # one of + - * /
    left: "Term"
    right: "Term"


Term = Union[bool, int, float, str, BinOp]


def fold_term(term: Term):
    """Reduce a ground term to its literal value.

    Arithmetic requires both operands to share a numeric kind.  Integer
    division truncates toward zero; division by zero raises EvalError.
    """
    if not isinstance(term, BinOp):
        kind_of(term)  # reject exotic literal types
        return term
    left = fold_term(term.left)
    right = fold_term(term.right)
    lk, rk = kind_of(left), kind_of(right)
    if not (lk.is_numeric and rk.is_numeric):
        raise SFeelTypeError(f"arithmetic over non-numeric operands "
                             f"({lk.value}, {rk.value})")
    if lk != rk:
        raise SFeelTypeError(f"mixed numeric kinds in arithmetic "
                             f"({lk.value} {term.op} {rk.value})")
    op = term.op
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if right == 0:
            raise EvalError("division by zero")
        if lk is Kind.INTEGER:
            q = abs(left) // abs(right)
            return -q if (left < 0) != (right < 0) else q
        return left / right
    raise SFeelTypeError(f"unknown operator {op!r}")


# ---------------------------------------------------------------------------
# Condition AST


@dataclass(frozen=True)
class AnyValue:
    """The '-' condition: every legal value matches."""


ANY = AnyValue()


@dataclass(frozen=True)
class Match:
    value: Union[bool, int, float, str]


@dataclass(frozen=True)
class Not:
    value: Union[bool, int, float, str]


@dataclass(frozen=True)
class Comparison:
    op: str  # one of < > <= >=
    value: Union[int, float]


@dataclass(frozen=True)
class Interval:
    lo_closed: bool
    lo: Union[int, float]
    hi: Union[int, float]
    hi_closed: bool


@dataclass(frozen=True)
class Alternative:
    """Disjunction of branches; never nested, always two or more parts."""

    parts: tuple["Condition", ...]


Condition = Union[AnyValue, Match, Not, Comparison, Interval, Alternative]


# ---------------------------------------------------------------------------
# Lexing and parsing

_CANON = str.maketrans({"·": "*", "÷": "/", "−": "-",
                        "≤": "<=", "≥": ">="})

_TOKEN_RE = re.compile(
    r"""\s*(?:
      (?P<num>\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\.\d+(?:[eE][+-]?\d+)?|\d+)
    | (?P<dots>\.\.)
    | (?P<cmp><=|>=|<|>)
    | (?P<op>[+\-*/])
    | (?P<lpar>\()
    | (?P<rpar>\))
    | (?P<lbrack>\[)
    | (?P<rbrack>\])
    | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.X,
)

_QUOTED_RE = re.compile(r'"([^"]*)"')
_BARE_STRING_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_ .\-]*")


def _lex_numeric(text: str) -> list[tuple[str, object]]:
    text = text.translate(_CANON)
    tokens: list[tuple[str, object]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise SFeelSyntaxError(f"unexpected character {rest[0]!r} in {text!r}")
        pos = m.end()
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "num":
            lexical_int = value.isdigit()
            tokens.append(("num", int(value) if lexical_int else float(value)))
        else:
            tokens.append((kind, value))
    return tokens


class _NumericParser:
    """Recursive-descent parser for numeric condition elements."""

    def __init__(self, text: str, kind: Kind):
        self.text = text
        self.kind = kind
        self.tokens = _lex_numeric(text)
        self.pos = 0

    def peek(self) -> Optional[tuple[str, object]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, object]:
        tok = self.peek()
        if tok is None:
            raise SFeelSyntaxError(f"unexpected end of condition in {self.text!r}")
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, object]:
        tok = self.take()
        if tok[0] != kind:
            raise SFeelSyntaxError(f"expected {kind} but found {tok[1]!r} "
                                   f"in {self.text!r}")
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def require_end(self) -> None:
        if not self.at_end():
            raise SFeelSyntaxError(f"trailing input after condition "
                                   f"in {self.text!r}")

    # term grammar: addsub -> muldiv -> unary -> atom

    def term(self):
        return self.addsub()

    def addsub(self):
        node = self.muldiv()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.take()
            node = BinOp(str(tok[1]), node, self.muldiv())
        return node

    def muldiv(self):
        node = self.unary()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.take()
            node = BinOp(str(tok[1]), node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            operand = self.unary()
            if tok[1] == "+":
                return operand
            zero = 0 if self.kind is Kind.INTEGER else 0.0
            return BinOp("-", zero, operand)
        return self.atom()

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return self._literal(tok[1])
        if tok[0] == "lpar":
            node = self.addsub()
            self.expect("rpar")
            return node
        if tok[0] == "word":
            raise SFeelTypeError(f"{tok[1]!r} is not a {self.kind.value} "
                                 f"literal in {self.text!r}")
        raise SFeelSyntaxError(f"unexpected {tok[1]!r} in {self.text!r}")

    def _literal(self, value):
        if isinstance(value, int):
            return float(value) if self.kind is Kind.REAL else value
        if self.kind is Kind.INTEGER:
            raise SFeelTypeError(f"real literal in integer condition "
                                 f"{self.text!r}")
        return value

    def fold(self, term) -> Union[int, float]:
        return fold_term(term)

    # condition elements

    def element(self) -> Condition:
        tok = self.peek()
        if tok is None:
            raise SFeelSyntaxError(f"empty condition in {self.text!r}")
        if tok[0] == "word" and tok[1] == "not":
            self.take()
            self.expect("lpar")
            value = self.fold(self.term())
            self.expect("rpar")
            self.require_end()
            return Not(value)
        if tok[0] == "cmp":
            self.take()
            value = self.fold(self.term())
            self.require_end()
            return Comparison(str(tok[1]), value)
        if tok[0] in ("lbrack", "lpar"):
            cond = self._interval_or_term(tok[0] == "lbrack")
            self.require_end()
            return cond
        value = self.fold(self.term())
        self.require_end()
        return Match(value)

    def _interval_or_term(self, bracketed: bool) -> Condition:
        mark = self.pos
        self.take()  # opening bracket or paren
        try:
            lo = self.term()
            is_interval = (tok := self.peek()) is not None and tok[0] == "dots"
        except (SFeelSyntaxError, SFeelTypeError):
            if bracketed:
                raise
            is_interval = False
        if not is_interval:
            if bracketed:
                raise SFeelSyntaxError(f"expected '..' inside interval "
                                       f"in {self.text!r}")
            self.pos = mark  # plain parenthesised arithmetic
            return Match(self.fold(self.term()))
        self.take()  # '..'
        hi = self.term()
        closer = self.take()
        if closer[0] not in ("rbrack", "rpar"):
            raise SFeelSyntaxError(f"unterminated interval in {self.text!r}")
        return Interval(bracketed, self.fold(lo), self.fold(hi),
                        closer[0] == "rbrack")


def _split_alternatives(text: str) -> list[str]:
    parts: list[str] = []
    depth = 0
    in_quote = False
    start = 0
    for i, ch in enumerate(text):
        if in_quote:
            if ch == '"':
                in_quote = False
        elif ch == '"':
            in_quote = True
        elif ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if in_quote:
        raise SFeelSyntaxError(f"unterminated string literal in {text!r}")
    parts.append(text[start:])
    return parts


def _parse_string_literal(text: str) -> str:
    m = _QUOTED_RE.fullmatch(text)
    if m is not None:
        return m.group(1)
    if '"' in text:
        raise SFeelSyntaxError(f"malformed string literal {text!r}")
    return text


def _parse_categorical_element(text: str, kind: Kind) -> Condition:
    def literal(raw: str):
        raw = raw.strip()
        if not raw:
            raise SFeelSyntaxError("empty literal")
        if kind is Kind.BOOLEAN:
            if raw == "true":
                return True
            if raw == "false":
                return False
            raise SFeelTypeError(f"{raw!r} is not a boolean literal")
        return _parse_string_literal(raw)

    if text.startswith("not(") and text.endswith(")"):
        return Not(literal(text[4:-1]))
    if text[0] in "<>[" or text.startswith(("<=", ">=")):
        raise SFeelTypeError(f"comparisons and intervals are not defined "
                             f"for {kind.value} columns: {text!r}")
    if kind is Kind.STRING and text[0] == "(":
        raise SFeelTypeError(f"intervals are not defined for string "
                             f"columns: {text!r}")
    return Match(literal(text))


def parse_condition(text: str, kind: Kind) -> Condition:
    """Parse a condition text for a column of the given kind.

    Raises SFeelSyntaxError for malformed text, SFeelTypeError for
    kind mismatches, and EvalError when folding divides by zero.
    """
    if not isinstance(text, str):
        raise SFeelSyntaxError(f"condition must be text, got "
                               f"{type(text).__name__}")
    parts = [p.strip() for p in _split_alternatives(text)]
    if any(not p for p in parts):
        raise SFeelSyntaxError(f"empty condition branch in {text!r}")
    conditions = [_parse_element(p, kind) for p in parts]
    if len(conditions) == 1:
        return conditions[0]
    return Alternative(tuple(conditions))


def _parse_element(text: str, kind: Kind) -> Condition:
    if text == "-":
        return ANY
    if kind.is_categorical:
        return _parse_categorical_element(text, kind)
    parser = _NumericParser(text, kind)
    return parser.element()


# ---------------------------------------------------------------------------
# Evaluation


def _eq(value, literal) -> bool:
    vk, lk = kind_of(value), kind_of(literal)
    if vk != lk:
        raise SFeelTypeError(f"cannot compare {vk.value} value with "
                             f"{lk.value} literal")
    return value == literal


def satisfies(cond: Condition, value, kind: Optional[Kind] = None) -> bool:
    """True when the value meets the condition.

    When ``kind`` is given, the value's kind is checked against it
    first; mismatches raise SFeelTypeError rather than returning False.
    """
    if kind is not None and kind_of(value) != kind:
        raise SFeelTypeError(f"expected a {kind.value} value, got "
                             f"{kind_of(value).value}")
    if isinstance(cond, AnyValue):
        return True
    if isinstance(cond, Match):
        return _eq(value, cond.value)
    if isinstance(cond, Not):
        return not _eq(value, cond.value)
    if isinstance(cond, Comparison):
        if not kind_of(value).is_numeric:
            raise SFeelTypeError("comparison against a non-numeric value")
        op = cond.op
        if op == "<":
            return value < cond.value
        if op == "<=":
            return value <= cond.value
        if op == ">":
            return value > cond.value
        return value >= cond.value
    if isinstance(cond, Interval):
        if not kind_of(value).is_numeric:
            raise SFeelTypeError("interval test against a non-numeric value")
        if value < cond.lo or (value == cond.lo and not cond.lo_closed):
            return False
        if value > cond.hi or (value == cond.hi and not cond.hi_closed):
            return False
        return True
    if isinstance(cond, Alternative):
        return any(satisfies(part, value) for part in cond.parts)
    raise SFeelTypeError(f"not a condition: {cond!r}")


# ---------------------------------------------------------------------------
# Rendering


def format_literal(value) -> str:
    """Canonical literal text; parsing it back under the same kind
    reproduces the value."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    if not isinstance(value, str):
        raise SFeelTypeError(f"unsupported literal type {type(value).__name__}")
    if _BARE_STRING_RE.fullmatch(value) and not value.startswith("not("):
        return value
    if '"' in value:
        raise SFeelSyntaxError(f"string literal {value!r} cannot be rendered")
    return f'"{value}"'


def render_condition(cond: Condition) -> str:
    """Canonical text for a condition; inverse of parse_condition."""
    if isinstance(cond, AnyValue):
        return "-"
    if isinstance(cond, Match):
        return format_literal(cond.value)
    if isinstance(cond, Not):
        return f"not({format_literal(cond.value)})"
    if isinstance(cond, Comparison):
        return f"{cond.op}{format_literal(cond.value)}"
    if isinstance(cond, Interval):
        left = "[" if cond.lo_closed else "("
        right = "]" if cond.hi_closed else ")"
        return f"{left}{format_literal(cond.lo)}..{format_literal(cond.hi)}{right}"
    if isinstance(cond, Alternative):
        return ",".join(render_condition(part) for part in cond.parts)
    raise SFeelTypeError(f"not a condition: {cond!r}")


# ---------------------------------------------------------------------------
# Lowering to interval sets


def _category_index(categories: Sequence, literal) -> int:
    for i, cat in enumerate(categories):
        if cat == literal and type(cat) is type(literal):
            return i
    raise CodecError(f"literal {literal!r} is not among the known "
                     f"categories {list(categories)!r}")


def lower_to_intervals(cond: Condition, kind: Kind,
                       categories: Optional[Sequence] = None) -> IntervalSet:
    """Geometric image of a condition as a canonical interval set.

    Numeric kinds map directly (integer sets use the closed-bound
    discrete form).  Categorical kinds need the column's ordered
    category list: the k-th category occupies the half-open unit
    interval [k..k+1), so adjacent categories never touch unless both
    are present and merge.
    """
    if kind.is_categorical:
        if categories is None or len(categories) == 0:
            raise CodecError(f"no categories known for {kind.value} column")
        k = len(categories)
        if isinstance(cond, AnyValue):
            return IntervalSet.build([interval(0, True, k, False)])
        if isinstance(cond, Match):
            i = _category_index(categories, cond.value)
            return IntervalSet.build([interval(i, True, i + 1, False)])
        if isinstance(cond, Not):
            i = _category_index(categories, cond.value)
            return IntervalSet.build(
                [interval(0, True, i, False),
                 interval(i + 1, True, k, False)])
        if isinstance(cond, Alternative):
            out = IntervalSet.empty()
            for part in cond.parts:
                out = out.union(lower_to_intervals(part, kind, categories))
            return out
        raise SFeelTypeError(f"condition {cond!r} is not defined for "
                             f"{kind.value} columns")

    discrete = kind is Kind.INTEGER
    if isinstance(cond, AnyValue):
        return IntervalSet.full(discrete)
    if isinstance(cond, Match):
        v = _numeric_literal(cond.value, kind)
        return IntervalSet.build([interval(v, True, v, True)], discrete)
    if isinstance(cond, Not):
        v = _numeric_literal(cond.value, kind)
        return IntervalSet.build(
            [interval(NEG_INF, False, v, False),
             interval(v, False, POS_INF, False)], discrete)
    if isinstance(cond, Comparison):
        v = _numeric_literal(cond.value, kind)
        closed = cond.op in ("<=", ">=")
        if cond.op.startswith("<"):
            return IntervalSet.build([interval(NEG_INF, False, v, closed)],
                                     discrete)
        return IntervalSet.build([interval(v, closed, POS_INF, False)],
                                 discrete)
    if isinstance(cond, Interval):
        lo = _numeric_literal(cond.lo, kind)
        hi = _numeric_literal(cond.hi, kind)
        return IntervalSet.build(
            [interval(lo, cond.lo_closed, hi, cond.hi_closed)], discrete)
    if isinstance(cond, Alternative):
        out = IntervalSet.empty(discrete)
        for part in cond.parts:
            out = out.union(lower_to_intervals(part, kind))
        return out
    raise SFeelTypeError(f"not a condition: {cond!r}")


def _numeric_literal(value, kind: Kind):
    vk = kind_of(value)
    if vk != kind:
        raise SFeelTypeError(f"{vk.value} literal in a {kind.value} condition")
    return value
