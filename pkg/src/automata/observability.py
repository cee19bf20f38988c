"""
Observability - State classification and the semi-observability index

A state is observable when some word leads from it to a final state,
non-observable otherwise, and semi-observable when it is observable but
one symbol leads to a non-observable state. so(A) counts semi-observable
states; T_k is the family of languages with a DFA where so(A) <= k.
"""

from enum import Enum
from typing import Dict, FrozenSet, List, Tuple

from pydantic import BaseModel

from .core import Alphabet, Dfa, minimize, restrict
from .errors import SelfCheckError
from .regex import dfa_from_regex


class StateClass(str, Enum):
    NON_OBSERVABLE = 'non-observable'
    OBSERVABLE = 'observable'
    SEMI_OBSERVABLE = 'semi-observable'


def observable_states(dfa: Dfa) -> FrozenSet[int]:
    """States that co-reach a final state (backward search from the finals)"""
    predecessors: List[List[int]] = [[] for _ in dfa.states]
    for state, row in enumerate(dfa.delta):
        for target in row:
            predecessors[target].append(state)

    seen = set(dfa.finals)
    stack = list(seen)
    while stack:
        state = stack.pop()
        for source in predecessors[state]:
            if source not in seen:
                seen.add(source)
                stack.append(source)
    return frozenset(seen)


def classify_states(dfa: Dfa) -> Dict[int, StateClass]:
    """
    Three-way classification of every state

    Args:
        dfa: Complete, accessible DFA

    Returns:
        Mapping state -> StateClass, in state order
    """
    observable = observable_states(dfa)
    classes = {}
    for state, row in enumerate(dfa.delta):
        if state not in observable:
            classes[state] = StateClass.NON_OBSERVABLE
        elif any(target not in observable for target in row):
            classes[state] = StateClass.SEMI_OBSERVABLE
        else:
            classes[state] = StateClass.OBSERVABLE
    return classes


def so_count(dfa: Dfa) -> int:
    """so(A): number of semi-observable states of the automaton as given"""
    return sum(1 for cls in classify_states(dfa).values() if cls is StateClass.SEMI_OBSERVABLE)


def non_observable_count(dfa: Dfa) -> int:
    return dfa.size - len(observable_states(dfa))


def so_index(dfa: Dfa) -> int:
    """Least k with L(dfa) in T_k: so() of the minimal DFA"""
    return so_count(minimize(dfa))


def tk_membership(dfa: Dfa, k: int) -> bool:
    """True iff L(dfa) belongs to T_k"""
    return so_index(dfa) <= k


def init_language(dfa: Dfa) -> Dfa:
    """Minimal DFA for Init(L), the set of prefixes of words of L"""
    return minimize(dfa.with_finals(observable_states(dfa)))


def minimal_alphabet(dfa: Dfa) -> Tuple[str, ...]:
    """
    Symbols occurring in some word of L, in alphabet order

    A symbol occurs iff some edge on it enters an observable state (every
    state is accessible, so such an edge lies on an accepting path). Empty
    for ∅ and for {λ}.
    """
    observable = observable_states(dfa)
    used = set()
    for state in observable:
        for index, target in enumerate(dfa.delta[state]):
            if target in observable:
                used.add(index)
    return tuple(symbol for index, symbol in enumerate(dfa.alphabet) if index in used)


def intrinsic_so_index(dfa: Dfa) -> int:
    """
    so_index over the language's own minimal alphabet

    Unused symbols of the declared alphabet only add dead edges, so family
    membership is judged here. ∅ and {λ} have an empty minimal alphabet and
    lie in T_0.
    """
    symbols = minimal_alphabet(dfa)
    if not symbols:
        return 0
    return so_index(restrict(dfa, symbols))


def is_observable_language(dfa: Dfa) -> bool:
    """
    True iff L is observable over its minimal alphabet

    The minimal DFA of L restricted to its minimal alphabet must have no
    non-observable state. ∅ and {λ} have an empty minimal alphabet and are
    not observable.
    """
    symbols = minimal_alphabet(dfa)
    if not symbols:
        return False
    return non_observable_count(minimize(restrict(dfa, symbols))) == 0


def is_infinite_language(dfa: Dfa) -> bool:
    """True iff the minimal DFA has a cycle through observable states"""
    minimal = minimize(dfa)
    observable = observable_states(minimal)
    # Kahn's algorithm on the observable subgraph: leftover states lie on a cycle
    indegree = {state: 0 for state in observable}
    for state in observable:
        for target in minimal.delta[state]:
            if target in observable:
                indegree[target] += 1
    ready = [state for state, degree in indegree.items() if degree == 0]
    removed = 0
    while ready:
        state = ready.pop()
        removed += 1
        for target in minimal.delta[state]:
            if target in observable:
                indegree[target] -= 1
                if indegree[target] == 0:
                    ready.append(target)
    return removed < len(observable)


class ObservabilityReport(BaseModel):
    """Per-state classes plus language-level observability figures"""

    states: int
    minimal_states: int
    so_count: int
    so_index: int
    observable_language: bool
    minimal_alphabet: List[str]
    non_observable_count: int
    per_state: Dict[str, StateClass]

    def to_text(self) -> str:
        lines = [
            f"states: {self.states}",
            f"minimal_states: {self.minimal_states}",
            f"so_count: {self.so_count}",
            f"so_index: {self.so_index}",
            f"observable_language: {str(self.observable_language).lower()}",
            f"minimal_alphabet: {','.join(self.minimal_alphabet)}",
            f"non_observable_count: {self.non_observable_count}",
        ]
        lines += [f"state {name}: {cls.value}" for name, cls in self.per_state.items()]
        return '\n'.join(lines) + '\n'

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + '\n'


def analyze(dfa: Dfa) -> ObservabilityReport:
    """
    Build the full observability report

    so_count and per_state describe the automaton as given; so_index and
    non_observable_count describe its minimal DFA.
    """
    minimal = minimize(dfa)
    classes = classify_states(dfa)
    return ObservabilityReport(
        states=dfa.size,
        minimal_states=minimal.size,
        so_count=sum(1 for cls in classes.values() if cls is StateClass.SEMI_OBSERVABLE),
        so_index=so_count(minimal),
        observable_language=is_observable_language(dfa),
        minimal_alphabet=list(minimal_alphabet(dfa)),
        non_observable_count=non_observable_count(minimal),
        per_state={dfa.names[state]: cls for state, cls in classes.items()}
    )


HIERARCHY_LETTERS = 'abcdefghijklmnopqrstuvwxyz'


def hierarchy_witness(k: int) -> Dfa:
    """
    A DFA whose language has semi-observability index exactly k

    k = 0: Σ⁺ over {a,b}; k = 1: (a|b)a*; k >= 2: Σ(c1*|...|ck*) over the
    first k letters, whose minimal DFA has one semi-observable run state per
    letter.

    Raises:
        ValueError: If k is negative or exceeds the available letters
        SelfCheckError: If the construction does not reach index k
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if k > len(HIERARCHY_LETTERS):
        raise ValueError(f"k must be at most {len(HIERARCHY_LETTERS)}, got {k}")

    if k == 0:
        dfa = dfa_from_regex('(a|b)+', Alphabet('ab'))
    elif k == 1:
        dfa = dfa_from_regex('(a|b)a*', Alphabet('ab'))
    else:
        letters = HIERARCHY_LETTERS[:k]
        text = f"({'|'.join(letters)})({'|'.join(f'{c}*' for c in letters)})"
        dfa = dfa_from_regex(text, Alphabet(letters))

    index = so_index(dfa)
    if index != k:
        raise SelfCheckError(f"hierarchy witness for k={k} has so_index {index}")
    return dfa
