"""Regular-expression patterns: AST, parser, printer.

Grammar (tightest to loosest: postfix star/plus, juxtaposition, `|`):

    union   := concat ('|' concat)*
    concat  := postfix+
    postfix := atom ('*' | '+')*
    atom    := '(' union ')' | '%' | '∅' | '_' | letter

`%` (or `∅`) is the empty language, `_` the empty word. Letters are the
single characters a-z / 0-9 declared in the alphabet. Whitespace is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union as TyUnion

from ..errors import AlphabetError, PatternError

ALPHABET_CHARS = set("abcdefghijklmnopqrstuvwxyz0123456789")


class Pattern:
    """Base class for pattern AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Empty(Pattern):
    pass


@dataclass(frozen=True)
class Epsilon(Pattern):
    pass


@dataclass(frozen=True)
class Letter(Pattern):
    symbol: str


@dataclass(frozen=True)
class Concat(Pattern):
    parts: tuple[Pattern, ...]


@dataclass(frozen=True)
class Union(Pattern):
    parts: tuple[Pattern, ...]


@dataclass(frozen=True)
class Star(Pattern):
    child: Pattern


@dataclass(frozen=True)
class Plus(Pattern):
    child: Pattern


def normalize_alphabet(symbols: TyUnion[str, Iterable[str]]) -> tuple[str, ...]:
    """Validate alphabet symbols (a-z, 0-9, no repeats) and sort them."""
    seq = list(symbols)
    seen = set()
    for ch in seq:
        if len(ch) != 1 or ch not in ALPHABET_CHARS:
            raise AlphabetError(f"bad alphabet symbol {ch!r}: expected one of a-z, 0-9")
        if ch in seen:
            raise AlphabetError(f"alphabet symbol {ch!r} declared twice")
        seen.add(ch)
    return tuple(sorted(seen))


class _Parser:
    def __init__(self, text: str, alphabet: frozenset[str]):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def fail(self, message: str):
        raise PatternError(message, self.pos)

    def parse_union(self) -> Pattern:
        parts = [self.parse_concat()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.parse_concat())
        if len(parts) == 1:
            return parts[0]
        return Union(tuple(parts))

    def parse_concat(self) -> Pattern:
        parts = [self.parse_postfix()]
        while True:
            ch = self.peek()
            if ch is None or ch in "|)":
                break
            parts.append(self.parse_postfix())
        if len(parts) == 1:
            return parts[0]
        return Concat(tuple(parts))

    def parse_postfix(self) -> Pattern:
        node = self.parse_atom()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                node = Star(node)
            elif ch == "+":
                self.pos += 1
                node = Plus(node)
            else:
                return node

    def parse_atom(self) -> Pattern:
        ch = self.peek()
        if ch is None:
            self.fail("expected a pattern atom, found end of input")
        if ch == "(":
            self.pos += 1
            inner = self.parse_union()
            if self.peek() != ")":
                self.fail("unbalanced '(': expected ')'")
            self.pos += 1
            return inner
        if ch in ("%", "∅"):
            self.pos += 1
            return Empty()
        if ch == "_":
            self.pos += 1
            return Epsilon()
        if ch in ALPHABET_CHARS:
            if ch not in self.alphabet:
                self.fail(f"symbol {ch!r} is not in the declared alphabet")
            self.pos += 1
            return Letter(ch)
        self.fail(f"unexpected character {ch!r}")


def parse_pattern(text: str, alphabet: TyUnion[str, Iterable[str]]) -> Pattern:
    """Parse `text` over the declared alphabet; PatternError carries a position."""
    alpha = frozenset(normalize_alphabet(alphabet))
    parser = _Parser(text, alpha)
    node = parser.parse_union()
    if parser.peek() is not None:
        parser.fail(f"unexpected character {parser.peek()!r}")
    return node


_PREC_UNION, _PREC_CONCAT, _PREC_POSTFIX, _PREC_ATOM = 0, 1, 2, 3


def _prec(n: Pattern) -> int:
    if isinstance(n, (Empty, Epsilon, Letter)):
        return _PREC_ATOM
    if isinstance(n, (Star, Plus)):
        return _PREC_POSTFIX
    if isinstance(n, Concat):
        return _PREC_CONCAT
    if isinstance(n, Union):
        return _PREC_UNION
    raise TypeError(f"not a pattern node: {n!r}")


def pattern_to_text(node: Pattern) -> str:
    """Render a pattern; parses back to the same AST (modulo parentheses)."""

    def render(n: Pattern, context: int) -> str:
        if isinstance(n, Empty):
            body = "%"
        elif isinstance(n, Epsilon):
            body = "_"
        elif isinstance(n, Letter):
            body = n.symbol
        elif isinstance(n, Star):
            body = render(n.child, _PREC_POSTFIX) + "*"
        elif isinstance(n, Plus):
            body = render(n.child, _PREC_POSTFIX) + "+"
        elif isinstance(n, Concat):
            body = "".join(render(p, _PREC_CONCAT + 1) for p in n.parts)
        else:
            body = "|".join(render(p, _PREC_UNION + 1) for p in n.parts)
        return f"({body})" if _prec(n) < context else body

    return render(node, _PREC_UNION)
