"""
Utility functions for observa
"""

import sys
from pathlib import Path
from typing import Iterable, Optional, Tuple

from automata.core import Alphabet
from automata.errors import FormatError


def read_source(path: str) -> Tuple[str, str]:
    """
    Read a document from a file, or from stdin when path is '-'

    Returns:
        (text, source name used in error messages)
    """
    if path == '-':
        return sys.stdin.read(), '<stdin>'
    try:
        return Path(path).read_text(encoding='utf-8'), path
    except FileNotFoundError:
        raise FormatError("no such file", path) from None
    except UnicodeDecodeError:
        raise FormatError("not valid UTF-8", path) from None


def write_output(text: str, path: Optional[str] = None):
    """Write to a file, or to stdout when no path (or '-') is given"""
    if path is None or path == '-':
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding='utf-8')


def parse_alphabet(text: str) -> Alphabet:
    """
    Parse a '-a a,b' style alphabet argument

    Raises:
        FormatError: If the list is empty or holds an illegal symbol
    """
    try:
        return Alphabet.parse(text)
    except ValueError as e:
        raise FormatError(str(e), '<alphabet>') from None


def display_word(word: str) -> str:
    """Words as printed by 'observa enum'; λ is shown as '_'"""
    return word or '_'


def format_words(words: Iterable[str]) -> str:
    return ''.join(display_word(word) + '\n' for word in words)
