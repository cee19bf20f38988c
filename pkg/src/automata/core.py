"""
Automata Core - Canonical DFA/NFA values and the constructions built on them

States are integers 0..n-1; symbols are single characters addressed by their
index in the Alphabet. Every Dfa is complete and accessible by construction.
"""

from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import AlphabetMismatchError

RESERVED_CHARACTERS = frozenset('#:,->|()*+_~')

# Key used for λ-moves in Nfa transition tables; never a symbol index
EPSILON = None


def validate_symbol(symbol: str) -> str:
    """
    Check that a string is a legal symbol

    Args:
        symbol: Candidate symbol

    Returns:
        The symbol unchanged

    Raises:
        ValueError: If the symbol is not a single printable, non-reserved character
    """
    if not isinstance(symbol, str) or len(symbol) != 1:
        raise ValueError(f"Symbol must be a single character: {symbol!r}")
    if symbol.isspace() or not symbol.isprintable():
        raise ValueError(f"Symbol must be printable and not whitespace: {symbol!r}")
    if symbol in RESERVED_CHARACTERS:
        raise ValueError(f"Symbol is a reserved character: {symbol!r}")
    return symbol


class Alphabet:
    """Ordered, nonempty set of symbols (order = first appearance)"""

    __slots__ = ('symbols', '_index')

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("Alphabet must be nonempty")

        index = {}
        for symbol in symbols:
            validate_symbol(symbol)
            if symbol in index:
                raise ValueError(f"Duplicate symbol in alphabet: {symbol!r}")
            index[symbol] = len(index)

        self.symbols = symbols
        self._index = index

    @classmethod
    def parse(cls, text: str) -> 'Alphabet':
        """Parse a comma-separated list such as 'a,b'"""
        return cls(part.strip() for part in text.split(',') if part.strip())

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError(f"Symbol {symbol!r} is not in alphabet {{{self}}}") from None

    def same_symbols(self, other: 'Alphabet') -> bool:
        return set(self.symbols) == set(other.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __str__(self) -> str:
        return ','.join(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({str(self)!r})"


def _default_names(count: int) -> Tuple[str, ...]:
    return tuple(f"q{i}" for i in range(count))


def reachable(delta: Sequence[Sequence[int]], initial: int) -> List[int]:
    """States reachable from initial, in breadth-first discovery order"""
    seen = {initial}
    order = [initial]
    i = 0
    while i < len(order):
        for target in delta[order[i]]:
            if target not in seen:
                seen.add(target)
                order.append(target)
        i += 1
    return order


class Dfa:
    """
    Complete, accessible deterministic finite automaton

    delta[q][i] is the successor of state q on alphabet.symbols[i].
    names are display names used by the text format; labels optionally
    record the subset of source states a constructed state stands for.
    """

    __slots__ = ('alphabet', 'delta', 'initial', 'finals', 'names', 'labels')

    def __init__(
        self,
        alphabet: Alphabet,
        delta: Sequence[Sequence[int]],
        initial: int = 0,
        finals: Iterable[int] = (),
        names: Optional[Sequence[str]] = None,
        labels: Optional[Sequence[FrozenSet[int]]] = None
    ):
        delta = tuple(tuple(row) for row in delta)
        size = len(delta)
        width = len(alphabet)

        if size == 0:
            raise ValueError("A DFA needs at least one state")

        for state, row in enumerate(delta):
            if len(row) != width:
                raise ValueError(
                    f"Transition function is not complete at state {state}: "
                    f"{len(row)} successor(s) for {width} symbol(s)"
                )
            for target in row:
                if not 0 <= target < size:
                    raise ValueError(f"State {state} has successor {target} outside 0..{size - 1}")

        if not 0 <= initial < size:
            raise ValueError(f"Initial state {initial} outside 0..{size - 1}")

        finals = frozenset(finals)
        for state in finals:
            if not 0 <= state < size:
                raise ValueError(f"Final state {state} outside 0..{size - 1}")

        names = _default_names(size) if names is None else tuple(names)
        if len(names) != size or len(set(names)) != size:
            raise ValueError("State names must be unique and one per state")

        if labels is not None:
            labels = tuple(frozenset(label) for label in labels)
            if len(labels) != size:
                raise ValueError("Subset labels must be one per state")

        if len(reachable(delta, initial)) != size:
            raise ValueError("DFA is not accessible: some states are unreachable from the initial state")

        self.alphabet = alphabet
        self.delta = delta
        self.initial = initial
        self.finals = finals
        self.names = names
        self.labels = labels

    @property
    def size(self) -> int:
        return len(self.delta)

    @property
    def states(self) -> range:
        return range(len(self.delta))

    def step(self, state: int, symbol: str) -> int:
        return self.delta[state][self.alphabet.index(symbol)]

    def run(self, word: str, start: Optional[int] = None) -> int:
        """Extended transition function δ(start, word)"""
        state = self.initial if start is None else start
        for symbol in word:
            state = self.delta[state][self.alphabet.index(symbol)]
        return state

    def accepts(self, word: str) -> bool:
        return self.run(word) in self.finals

    def key(self) -> tuple:
        """Structural identity, ignoring names and labels"""
        return (self.alphabet.symbols, self.delta, self.initial, tuple(sorted(self.finals)))

    def with_finals(self, finals: Iterable[int]) -> 'Dfa':
        return Dfa(self.alphabet, self.delta, self.initial, finals, self.names, self.labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Dfa) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (
            f"Dfa(alphabet={str(self.alphabet)!r}, delta={self.delta}, "
            f"initial={self.initial}, finals={sorted(self.finals)})"
        )


class PartialDfa:
    """
    Deterministic automaton that may be incomplete or contain unreachable states

    This is the loader's output; complete() and trim_accessible() turn it
    into a Dfa.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        size: int,
        transitions: Dict[Tuple[int, int], int],
        initial: int = 0,
        finals: Iterable[int] = (),
        names: Optional[Sequence[str]] = None
    ):
        self.alphabet = alphabet
        self.size = size
        self.transitions = dict(transitions)
        self.initial = initial
        self.finals = frozenset(finals)
        self.names = _default_names(size) if names is None else tuple(names)

        for (state, index), target in self.transitions.items():
            if not (0 <= state < size and 0 <= target < size):
                raise ValueError(f"Transition ({state}, {index}) -> {target} references an unknown state")
            if not 0 <= index < len(alphabet):
                raise ValueError(f"Transition from state {state} uses symbol index {index} outside the alphabet")

    @classmethod
    def from_dfa(cls, dfa: Dfa) -> 'PartialDfa':
        transitions = {
            (state, index): target
            for state, row in enumerate(dfa.delta)
            for index, target in enumerate(row)
        }
        return cls(dfa.alphabet, dfa.size, transitions, dfa.initial, dfa.finals, dfa.names)

    def missing(self) -> List[Tuple[int, int]]:
        """(state, symbol index) pairs without a transition"""
        return [
            (state, index)
            for state in range(self.size)
            for index in range(len(self.alphabet))
            if (state, index) not in self.transitions
        ]


class Nfa:
    """
    Nondeterministic automaton with optional λ-moves

    moves[q] maps a symbol index (or EPSILON) to the set of successors.
    """

    __slots__ = ('alphabet', 'moves', 'initials', 'finals')

    def __init__(
        self,
        alphabet: Alphabet,
        size: int,
        edges: Iterable[Tuple[int, Optional[int], int]] = (),
        initials: Iterable[int] = (0,),
        finals: Iterable[int] = ()
    ):
        moves: List[Dict[Optional[int], set]] = [{} for _ in range(size)]
        for source, index, target in edges:
            if not (0 <= source < size and 0 <= target < size):
                raise ValueError(f"Edge {source} -> {target} references an unknown state")
            if index is not EPSILON and not 0 <= index < len(alphabet):
                raise ValueError(f"Edge {source} -> {target} uses symbol index {index} outside the alphabet")
            moves[source].setdefault(index, set()).add(target)

        initials = frozenset(initials)
        finals = frozenset(finals)
        for state in initials | finals:
            if not 0 <= state < size:
                raise ValueError(f"State {state} outside 0..{size - 1}")

        self.alphabet = alphabet
        self.moves = tuple(
            {index: frozenset(targets) for index, targets in row.items()}
            for row in moves
        )
        self.initials = initials
        self.finals = finals

    @property
    def size(self) -> int:
        return len(self.moves)

    def edges(self) -> List[Tuple[int, Optional[int], int]]:
        return [
            (source, index, target)
            for source, row in enumerate(self.moves)
            for index, targets in row.items()
            for target in sorted(targets)
        ]

    def has_lambda(self) -> bool:
        return any(EPSILON in row for row in self.moves)

    def accepts(self, word: str) -> bool:
        """Direct simulation, used as an oracle in tests"""
        current = self._closure(self.initials)
        for symbol in word:
            index = self.alphabet.index(symbol)
            step = set()
            for state in current:
                step |= self.moves[state].get(index, frozenset())
            current = self._closure(step)
        return bool(current & self.finals)

    def _closure(self, states: Iterable[int]) -> FrozenSet[int]:
        closure = set(states)
        stack = list(closure)
        while stack:
            state = stack.pop()
            for target in self.moves[state].get(EPSILON, ()):
                if target not in closure:
                    closure.add(target)
                    stack.append(target)
        return frozenset(closure)


def to_nfa(dfa: Dfa, offset: int = 0) -> List[Tuple[int, Optional[int], int]]:
    """Edges of a DFA as NFA edges, with state numbers shifted by offset"""
    return [
        (state + offset, index, target + offset)
        for state, row in enumerate(dfa.delta)
        for index, target in enumerate(row)
    ]


def complete(partial: PartialDfa, alphabet: Optional[Alphabet] = None) -> Dfa:
    """
    Fill missing transitions with a fresh non-final sink state

    Args:
        partial: Deterministic automaton, possibly with missing transitions
        alphabet: Declared alphabet; must contain the automaton's symbols

    Returns:
        Complete, accessible Dfa accepting the same language. The sink is
        added only if some transition was missing; unreachable states are dropped.
    """
    alphabet = alphabet or partial.alphabet
    if not set(partial.alphabet.symbols) <= set(alphabet.symbols):
        extra = [s for s in partial.alphabet if s not in alphabet]
        raise ValueError(f"Symbols {extra} are outside the declared alphabet {{{alphabet}}}")

    remap = [alphabet.index(symbol) for symbol in partial.alphabet]
    transitions = {
        (state, remap[index]): target
        for (state, index), target in partial.transitions.items()
    }

    size = partial.size
    names = list(partial.names)
    missing = [
        (state, index)
        for state in range(size)
        for index in range(len(alphabet))
        if (state, index) not in transitions
    ]
    if missing:
        sink = size
        size += 1
        sink_name = 'sink'
        while sink_name in names:
            sink_name += "'"
        names.append(sink_name)
        for pair in missing:
            transitions[pair] = sink
        for index in range(len(alphabet)):
            transitions[(sink, index)] = sink

    filled = PartialDfa(alphabet, size, transitions, partial.initial, partial.finals, names)
    return trim_accessible(filled)


def trim_accessible(partial: PartialDfa) -> Dfa:
    """
    Remove states unreachable from the initial state

    Surviving states keep their relative order and names.

    Raises:
        ValueError: If the automaton is not complete
    """
    missing = partial.missing()
    if missing:
        state, index = missing[0]
        raise ValueError(
            f"Transition function is not complete: no move from {partial.names[state]} "
            f"on {partial.alphabet.symbols[index]!r}"
        )

    width = len(partial.alphabet)
    rows = [
        [partial.transitions[(state, index)] for index in range(width)]
        for state in range(partial.size)
    ]
    kept = sorted(reachable(rows, partial.initial))
    renumber = {old: new for new, old in enumerate(kept)}

    return Dfa(
        partial.alphabet,
        [[renumber[target] for target in rows[old]] for old in kept],
        renumber[partial.initial],
        [renumber[state] for state in partial.finals if state in renumber],
        [partial.names[old] for old in kept]
    )


def remove_lambda(nfa: Nfa) -> Nfa:
    """
    Eliminate λ-moves

    δ'(p, a) = δ(closure(p), a); p is final iff closure(p) meets F;
    initial states are unchanged. Applied after λ-edges from every final
    state to the initial state this yields the automaton whose subsets are
    {X : X ∩ F ≠ ∅}-final with initial {q0}.
    """
    if not nfa.has_lambda():
        return nfa

    edges = []
    finals = set()
    for state in range(nfa.size):
        closure = nfa._closure((state,))
        if closure & nfa.finals:
            finals.add(state)
        for member in closure:
            for index, targets in nfa.moves[member].items():
                if index is EPSILON:
                    continue
                for target in targets:
                    edges.append((state, index, target))

    return Nfa(nfa.alphabet, nfa.size, edges, nfa.initials, finals)


def determinize(nfa: Nfa) -> Dfa:
    """
    Subset construction

    Subsets are explored breadth-first from the initial subset with symbols in
    alphabet order. The empty subset is kept as the sink, so the result is
    complete and accessible. Each state's subset is kept in Dfa.labels.

    Raises:
        ValueError: If the NFA still has λ-moves
    """
    if nfa.has_lambda():
        raise ValueError("determinize() needs a λ-free NFA; run remove_lambda() first")

    width = len(nfa.alphabet)
    start = frozenset(nfa.initials)
    subsets = [start]
    numbering = {start: 0}
    delta = []

    i = 0
    while i < len(subsets):
        current = subsets[i]
        row = []
        for index in range(width):
            target = set()
            for state in current:
                target |= nfa.moves[state].get(index, frozenset())
            target = frozenset(target)
            if target not in numbering:
                numbering[target] = len(subsets)
                subsets.append(target)
            row.append(numbering[target])
        delta.append(row)
        i += 1

    finals = [number for number, subset in enumerate(subsets) if subset & nfa.finals]
    return Dfa(nfa.alphabet, delta, 0, finals, labels=subsets)


def canonical(dfa: Dfa) -> Dfa:
    """
    Renumber states breadth-first from the initial state, exploring symbols
    in alphabet order; names become q0, q1, ...
    """
    order = reachable(dfa.delta, dfa.initial)
    renumber = {old: new for new, old in enumerate(order)}
    labels = None
    if dfa.labels is not None:
        labels = [dfa.labels[old] for old in order]
    return Dfa(
        dfa.alphabet,
        [[renumber[target] for target in dfa.delta[old]] for old in order],
        0,
        [renumber[state] for state in dfa.finals],
        labels=labels
    )


def minimize(dfa: Dfa) -> Dfa:
    """
    Minimal complete accessible DFA for the same language

    Moore partition refinement: start from {finals, non-finals} and split
    blocks by the blocks of their successors until stable. The quotient is
    returned in canonical numbering, so two minimal DFAs for the same
    language are structurally equal.
    """
    delta = dfa.delta
    finals = dfa.finals
    blocks = [1 if state in finals else 0 for state in dfa.states]
    count = len(set(blocks))

    while True:
        signatures: Dict[tuple, int] = {}
        refined = []
        for state, row in enumerate(delta):
            signature = (blocks[state],) + tuple(blocks[target] for target in row)
            refined.append(signatures.setdefault(signature, len(signatures)))
        blocks = refined
        if len(signatures) == count:
            break
        count = len(signatures)

    rows: Dict[int, List[int]] = {}
    for state, row in enumerate(delta):
        if blocks[state] not in rows:
            rows[blocks[state]] = [blocks[target] for target in row]

    quotient = [rows[block] for block in range(count)]
    order = reachable(quotient, blocks[dfa.initial])
    renumber = {old: new for new, old in enumerate(order)}

    return Dfa(
        dfa.alphabet,
        [[renumber[target] for target in quotient[old]] for old in order],
        0,
        {renumber[blocks[state]] for state in finals}
    )


def reorder(dfa: Dfa, alphabet: Alphabet) -> Dfa:
    """
    Re-index a DFA's transitions to another ordering of the same symbols

    Raises:
        AlphabetMismatchError: If the symbol sets differ
    """
    if dfa.alphabet == alphabet:
        return dfa
    if not dfa.alphabet.same_symbols(alphabet):
        raise AlphabetMismatchError(
            f"Alphabets differ: {{{dfa.alphabet}}} vs {{{alphabet}}}; embed both into a common alphabet first"
        )
    source = [dfa.alphabet.index(symbol) for symbol in alphabet]
    return Dfa(
        alphabet,
        [[row[index] for index in source] for row in dfa.delta],
        dfa.initial,
        dfa.finals,
        dfa.names,
        dfa.labels
    )


def embed(dfa: Dfa, alphabet: Alphabet) -> Dfa:
    """
    Widen a DFA to a larger alphabet; new symbols lead to a fresh sink

    Raises:
        AlphabetMismatchError: If the DFA uses symbols outside the target alphabet
    """
    if not set(dfa.alphabet.symbols) <= set(alphabet.symbols):
        raise AlphabetMismatchError(
            f"Cannot embed {{{dfa.alphabet}}} into {{{alphabet}}}: target alphabet must contain every symbol"
        )
    if dfa.alphabet.same_symbols(alphabet):
        return reorder(dfa, alphabet)

    transitions = {
        (state, alphabet.index(symbol)): dfa.delta[state][index]
        for state in dfa.states
        for index, symbol in enumerate(dfa.alphabet)
    }
    return complete(PartialDfa(alphabet, dfa.size, transitions, dfa.initial, dfa.finals, dfa.names))


def restrict(dfa: Dfa, symbols: Sequence[str]) -> Dfa:
    """
    Drop every symbol not in symbols and trim what becomes unreachable

    The result accepts L(dfa) ∩ symbols*.
    """
    alphabet = Alphabet(symbols)
    source = [dfa.alphabet.index(symbol) for symbol in alphabet]
    transitions = {
        (state, new): dfa.delta[state][old]
        for state in dfa.states
        for new, old in enumerate(source)
    }
    return trim_accessible(PartialDfa(alphabet, dfa.size, transitions, dfa.initial, dfa.finals, dfa.names))


def is_isomorphic(a: Dfa, b: Dfa) -> bool:
    """
    True iff a state bijection preserves initial state, finals and transitions

    For accessible deterministic automata the bijection, if any, is forced by
    breadth-first discovery, so canonical forms are compared structurally.
    """
    if not a.alphabet.same_symbols(b.alphabet) or a.size != b.size:
        return False
    return canonical(a) == canonical(reorder(b, a.alphabet))


def equivalent(a: Dfa, b: Dfa) -> bool:
    """
    True iff L(a) = L(b)

    Raises:
        AlphabetMismatchError: If the alphabets differ
    """
    b = reorder(b, a.alphabet)
    return is_isomorphic(minimize(a), minimize(b))


def combine_or(left: bool, right: bool) -> bool:
    return left or right


def combine_and(left: bool, right: bool) -> bool:
    return left and right


def product(a: Dfa, b: Dfa, combine: Callable[[bool, bool], bool]) -> Dfa:
    """
    Reachable product automaton

    Args:
        a: Left operand
        b: Right operand over the same symbols
        combine: Final-state rule applied to (a-final?, b-final?)

    Returns:
        Complete, accessible DFA; state names carry the (a-state,b-state) pair

    Raises:
        AlphabetMismatchError: If the alphabets differ
    """
    b = reorder(b, a.alphabet)
    width = len(a.alphabet)
    start = (a.initial, b.initial)
    pairs = [start]
    numbering = {start: 0}
    delta = []

    i = 0
    while i < len(pairs):
        left, right = pairs[i]
        row = []
        for index in range(width):
            target = (a.delta[left][index], b.delta[right][index])
            if target not in numbering:
                numbering[target] = len(pairs)
                pairs.append(target)
            row.append(numbering[target])
        delta.append(row)
        i += 1

    finals = [
        number for number, (left, right) in enumerate(pairs)
        if combine(left in a.finals, right in b.finals)
    ]
    names = [f"({a.names[left]},{b.names[right]})" for left, right in pairs]
    return Dfa(a.alphabet, delta, 0, finals, names)


def empty_dfa(alphabet: Alphabet) -> Dfa:
    """One non-final state looping on every symbol: accepts ∅"""
    return Dfa(alphabet, [[0] * len(alphabet)], 0, ())


def universal_dfa(alphabet: Alphabet) -> Dfa:
    """Accepts Σ*"""
    return Dfa(alphabet, [[0] * len(alphabet)], 0, (0,))


def lambda_dfa(alphabet: Alphabet) -> Dfa:
    """Accepts {λ}"""
    return Dfa(alphabet, [[1] * len(alphabet), [1] * len(alphabet)], 0, (0,))


def sigma_plus_dfa(alphabet: Alphabet) -> Dfa:
    """Accepts Σ⁺"""
    return Dfa(alphabet, [[1] * len(alphabet), [1] * len(alphabet)], 0, (1,))
