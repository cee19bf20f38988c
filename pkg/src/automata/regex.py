"""
Regex Frontend - Parse regular expressions and compile them to minimal DFAs

Surface syntax (lowest to highest precedence):
    r|s     union          (written r+s in the literature)
    rs      concatenation
    r* r+   Kleene star / plus (postfix)
    (r)     grouping
    _       the empty word λ
    ~       the empty language ∅
Blanks between tokens are ignored.
"""

from dataclasses import dataclass
from typing import List, Optional, Set, Tuple

from .core import EPSILON, Alphabet, Dfa, Nfa, determinize, minimize, remove_lambda
from .errors import FormatError


class Regex:
    """Base class of regular expression AST nodes"""

    def to_text(self) -> str:
        return _render(self, 0)

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class EmptySet(Regex):
    pass


@dataclass(frozen=True)
class Lambda(Regex):
    pass


@dataclass(frozen=True)
class Sym(Regex):
    symbol: str


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Plus(Regex):
    inner: Regex


def _render(node: Regex, context: int) -> str:
    # context: 0 = inside union, 1 = inside concatenation, 2 = under a postfix operator
    if isinstance(node, EmptySet):
        return '~'
    if isinstance(node, Lambda):
        return '_'
    if isinstance(node, Sym):
        return node.symbol
    if isinstance(node, Union):
        text = f"{_render(node.left, 0)}|{_render(node.right, 0)}"
        return f"({text})" if context > 0 else text
    if isinstance(node, Concat):
        text = f"{_render(node.left, 1)}{_render(node.right, 1)}"
        return f"({text})" if context > 1 else text
    if isinstance(node, Star):
        return f"{_render(node.inner, 2)}*"
    if isinstance(node, Plus):
        return f"{_render(node.inner, 2)}+"
    raise TypeError(f"Not a regex node: {node!r}")


class _Parser:
    """Recursive-descent parser over the surface syntax"""

    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def error(self, message: str, pos: Optional[int] = None) -> FormatError:
        pos = self.pos if pos is None else pos
        offset = len(self.text[:pos].encode('utf-8'))
        return FormatError(message, source='<regex>', offset=offset)

    def peek(self) -> Optional[str]:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> Regex:
        if self.peek() is None:
            raise self.error("empty expression (write _ for the empty word)")
        node = self.union()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return node

    def union(self) -> Regex:
        node = self.concat()
        while self.peek() == '|':
            self.pos += 1
            node = Union(node, self.concat())
        return node

    def concat(self) -> Regex:
        char = self.peek()
        if char is None or char in '|)':
            raise self.error("expected an expression")
        node = self.postfix()
        while True:
            char = self.peek()
            if char is None or char in '|)':
                return node
            node = Concat(node, self.postfix())

    def postfix(self) -> Regex:
        node = self.atom()
        while self.peek() in ('*', '+'):
            node = Star(node) if self.text[self.pos] == '*' else Plus(node)
            self.pos += 1
        return node

    def atom(self) -> Regex:
        char = self.peek()
        start = self.pos
        if char == '(':
            self.pos += 1
            node = self.union()
            if self.peek() != ')':
                raise self.error("missing ')'", start if self.peek() is None else None)
            self.pos += 1
            return node
        if char == '_':
            self.pos += 1
            return Lambda()
        if char == '~':
            self.pos += 1
            return EmptySet()
        if char in ('*', '+'):
            raise self.error(f"{char!r} has nothing to repeat")
        if char not in self.alphabet:
            raise self.error(f"symbol {char!r} is not in alphabet {{{self.alphabet}}}")
        self.pos += 1
        return Sym(char)


def parse_regex(text: str, alphabet: Alphabet) -> Regex:
    """
    Parse a regular expression

    Args:
        text: Expression in the surface syntax, e.g. '(a|b)a*'
        alphabet: Declared alphabet; every symbol must belong to it

    Returns:
        Regex AST

    Raises:
        FormatError: On a syntax error or an unknown symbol, with the byte offset
    """
    return _Parser(text, alphabet).parse()


class _Thompson:
    """Builds a λ-NFA fragment per AST node"""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.count = 0
        self.edges: List[Tuple[int, Optional[int], int]] = []

    def state(self) -> int:
        self.count += 1
        return self.count - 1

    def build(self, node: Regex) -> Tuple[int, int]:
        start, end = self.state(), self.state()

        if isinstance(node, EmptySet):
            pass
        elif isinstance(node, Lambda):
            self.edges.append((start, EPSILON, end))
        elif isinstance(node, Sym):
            self.edges.append((start, self.alphabet.index(node.symbol), end))
        elif isinstance(node, Concat):
            left_start, left_end = self.build(node.left)
            right_start, right_end = self.build(node.right)
            self.edges += [
                (start, EPSILON, left_start),
                (left_end, EPSILON, right_start),
                (right_end, EPSILON, end),
            ]
        elif isinstance(node, Union):
            for branch in (node.left, node.right):
                inner_start, inner_end = self.build(branch)
                self.edges += [(start, EPSILON, inner_start), (inner_end, EPSILON, end)]
        elif isinstance(node, (Star, Plus)):
            inner_start, inner_end = self.build(node.inner)
            self.edges += [
                (start, EPSILON, inner_start),
                (inner_end, EPSILON, inner_start),
                (inner_end, EPSILON, end),
            ]
            if isinstance(node, Star):
                self.edges.append((start, EPSILON, end))
        else:
            raise TypeError(f"Not a regex node: {node!r}")

        return start, end


def thompson(regex: Regex, alphabet: Alphabet) -> Nfa:
    """λ-NFA for a regex with a single initial and a single final state"""
    builder = _Thompson(alphabet)
    start, end = builder.build(regex)
    return Nfa(alphabet, builder.count, builder.edges, (start,), (end,))


def compile_regex(regex: Regex, alphabet: Alphabet) -> Dfa:
    """
    Compile a regex to the minimal complete DFA over the declared alphabet

    Thompson construction, λ-removal, subset construction, minimization.
    """
    return minimize(determinize(remove_lambda(thompson(regex, alphabet))))


def dfa_from_regex(text: str, alphabet: Alphabet) -> Dfa:
    """Parse and compile in one step"""
    return compile_regex(parse_regex(text, alphabet), alphabet)


def regex_words(regex: Regex, alphabet: Alphabet, max_len: int) -> Set[str]:
    """
    Words of length <= max_len denoted by a regex, by direct recursion on the AST

    Independent of the automaton pipeline; used as an oracle.
    """
    if isinstance(regex, EmptySet):
        return set()
    if isinstance(regex, Lambda):
        return {''}
    if isinstance(regex, Sym):
        return {regex.symbol} if max_len >= 1 else set()
    if isinstance(regex, Union):
        return regex_words(regex.left, alphabet, max_len) | regex_words(regex.right, alphabet, max_len)
    if isinstance(regex, Concat):
        left = regex_words(regex.left, alphabet, max_len)
        right = regex_words(regex.right, alphabet, max_len)
        return {u + v for u in left for v in right if len(u) + len(v) <= max_len}
    if isinstance(regex, (Star, Plus)):
        inner = regex_words(regex.inner, alphabet, max_len) - {''}
        words = set(inner)
        frontier = set(inner)
        while frontier:
            frontier = {u + v for u in frontier for v in inner if len(u) + len(v) <= max_len} - words
            words |= frontier
        if isinstance(regex, Star) or '' in regex_words(regex.inner, alphabet, max_len):
            words.add('')
        return words
    raise TypeError(f"Not a regex node: {regex!r}")
