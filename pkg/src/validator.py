"""
Validator - Loads and serializes the DFA and homomorphism text formats

DFA format (UTF-8, line oriented, '#' starts a comment, blank lines ignored):

    alphabet: a,b
    states: s,r,f
    initial: s
    final: f
    s a f
    ...

The four header lines come first and in this order; every other line is
one transition 'source symbol target'.
"""

import re
from typing import Dict, List, Optional, Sequence, Tuple

from automata.core import (
    RESERVED_CHARACTERS, Alphabet, Dfa, PartialDfa, canonical, complete, trim_accessible,
)
from automata.errors import FormatError
from automata.language_ops import Homomorphism

HEADER_KEYS = ('alphabet', 'states', 'initial', 'final')

_HOM_LINE = re.compile(r'^(\S+)\s*->\s*(\S+)$')


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """(line number, content) pairs with comments and blank lines removed"""
    lines = []
    for number, raw in enumerate(text.splitlines(), 1):
        content = raw.split('#', 1)[0].strip()
        if content:
            lines.append((number, content))
    return lines


def _split_list(value: str) -> List[str]:
    return [part.strip() for part in value.split(',')] if value.strip() else []


def _check_state_name(name: str, source: str, line: int) -> str:
    if not name or any(char.isspace() or char in RESERVED_CHARACTERS for char in name):
        raise FormatError(f"invalid state name {name!r}", source, line)
    return name


class DfaLoader:
    """Parses one DFA document; errors carry the source name and line"""

    def __init__(self, text: str, source: str = '<input>'):
        self.text = text
        self.source = source

    def error(self, message: str, line: Optional[int] = None) -> FormatError:
        return FormatError(message, self.source, line)

    def header(self, lines: List[Tuple[int, str]]) -> Dict[str, Tuple[int, str]]:
        values = {}
        for position, key in enumerate(HEADER_KEYS):
            if position >= len(lines):
                raise self.error(f"missing '{key}:' header line")
            number, content = lines[position]
            name, colon, value = content.partition(':')
            if not colon or name.strip() != key:
                raise self.error(f"expected '{key}:' header, got {content!r}", number)
            values[key] = (number, value.strip())
        return values

    def load(self, allow_partial: bool = False) -> Dfa:
        lines = _content_lines(self.text)
        header = self.header(lines)

        number, value = header['alphabet']
        try:
            alphabet = Alphabet(_split_list(value))
        except ValueError as e:
            raise self.error(str(e), number) from None

        number, value = header['states']
        names = [_check_state_name(name, self.source, number) for name in _split_list(value)]
        if not names:
            raise self.error("a DFA needs at least one state", number)
        index = {}
        for name in names:
            if name in index:
                raise self.error(f"duplicate state {name!r}", number)
            index[name] = len(index)

        number, value = header['initial']
        if value not in index:
            raise self.error(f"unknown initial state {value!r}", number)
        initial = index[value]

        number, value = header['final']
        finals = set()
        for name in _split_list(value):
            if name not in index:
                raise self.error(f"unknown final state {name!r}", number)
            if index[name] in finals:
                raise self.error(f"duplicate final state {name!r}", number)
            finals.add(index[name])

        transitions: Dict[Tuple[int, int], int] = {}
        for number, content in lines[len(HEADER_KEYS):]:
            parts = content.split()
            if len(parts) != 3:
                raise self.error(f"expected 'source symbol target', got {content!r}", number)
            state, symbol, target = parts
            if state not in index:
                raise self.error(f"unknown state {state!r}", number)
            if target not in index:
                raise self.error(f"unknown state {target!r}", number)
            if symbol not in alphabet:
                raise self.error(f"symbol {symbol!r} is not in alphabet {{{alphabet}}}", number)
            key = (index[state], alphabet.index(symbol))
            if key in transitions:
                raise self.error(f"duplicate transition from {state!r} on {symbol!r}", number)
            transitions[key] = index[target]

        partial = PartialDfa(alphabet, len(names), transitions, initial, finals, names)
        if allow_partial:
            return complete(partial)

        missing = partial.missing()
        if missing:
            state, symbol_index = missing[0]
            raise self.error(
                f"transition function is not complete: no move from {names[state]!r} "
                f"on {alphabet.symbols[symbol_index]!r} (use --complete to add a sink)"
            )
        return trim_accessible(partial)


def load_dfa(text: str, source: str = '<input>', allow_partial: bool = False) -> Dfa:
    """
    Parse a DFA document

    Args:
        text: Document text
        source: Name used in error messages (file name or '<stdin>')
        allow_partial: Complete a partial transition function with a sink
            instead of rejecting it

    Returns:
        Complete, accessible Dfa; unreachable states are dropped

    Raises:
        FormatError: On any malformed, duplicate or unknown entry
    """
    return DfaLoader(text, source).load(allow_partial)


def dump_dfa(dfa: Dfa, label_names: Optional[Sequence[str]] = None) -> str:
    """
    Serialize a DFA in canonical numbering q0, q1, ...

    Args:
        dfa: Automaton to write
        label_names: When given and the DFA carries subset labels, append a
            '# subset qN = {...}' comment per state, naming members with these names

    Returns:
        Document text; identical automata give identical text
    """
    dfa = canonical(dfa)
    lines = [
        f"alphabet: {dfa.alphabet}",
        f"states: {','.join(dfa.names)}",
        f"initial: {dfa.names[dfa.initial]}",
        f"final: {','.join(dfa.names[state] for state in sorted(dfa.finals))}".rstrip(),
    ]
    for state, row in enumerate(dfa.delta):
        for symbol, target in zip(dfa.alphabet, row):
            lines.append(f"{dfa.names[state]} {symbol} {dfa.names[target]}")

    if label_names is not None and dfa.labels is not None:
        for state, label in enumerate(dfa.labels):
            members = ','.join(label_names[member] for member in sorted(label))
            lines.append(f"# subset {dfa.names[state]} = {{{members}}}")

    return '\n'.join(lines) + '\n'


def load_homomorphism(text: str, source: str = '<input>', target: Optional[Alphabet] = None) -> Homomorphism:
    """
    Parse a homomorphism document: one 'a -> ab' line per symbol, '_' for λ

    Args:
        text: Document text
        source: Name used in error messages
        target: Target alphabet; defaults to the source symbols plus any new
            symbols in the images

    Raises:
        FormatError: On a malformed or duplicate line, or an image symbol
            outside the target alphabet
    """
    images: Dict[str, str] = {}
    for number, content in _content_lines(text):
        match = _HOM_LINE.match(content)
        if not match:
            raise FormatError(f"expected 'symbol -> image', got {content!r}", source, number)
        symbol, image = match.group(1), match.group(2)
        if symbol in images:
            raise FormatError(f"duplicate image for {symbol!r}", source, number)
        images[symbol] = '' if image == '_' else image

    if not images:
        raise FormatError("homomorphism has no lines", source)
    try:
        return Homomorphism.from_images(images, target)
    except ValueError as e:
        raise FormatError(str(e), source) from None


def dump_homomorphism(hom: Homomorphism) -> str:
    return str(hom)
