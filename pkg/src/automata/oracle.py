"""
Oracle Search - Bounded enumeration, small-DFA enumeration and witness search

Everything here is ground truth at desk scale: languages are enumerated
word by word, DFAs are enumerated exhaustively in canonical form, and
non-closure claims are re-derived by searching for the first counterexample
in a fixed canonical order.
"""

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from . import language_ops, observability
from .core import Alphabet, Dfa, PartialDfa, complete, minimize, restrict, trim_accessible
from .errors import BoundsExhausted, SearchBudgetExceeded, SelfCheckError
from .language_ops import Homomorphism

MAX_ENUM_LENGTH = 16
MAX_ENUM_STATES = 5


# ---------------------------------------------------------------------------
# Language enumeration
# ---------------------------------------------------------------------------

def enumerate_language(dfa: Dfa, max_len: int, limit: int = MAX_ENUM_LENGTH) -> List[str]:
    """
    Accepted words of length <= max_len in length-then-alphabet order

    Args:
        dfa: Automaton to enumerate
        max_len: Longest word length to include
        limit: Guard against blowup; max_len above it is refused

    Returns:
        Deterministically ordered list of words ('' stands for λ)
    """
    if max_len < 0:
        raise ValueError(f"max_len must be nonnegative, got {max_len}")
    if max_len > limit:
        raise ValueError(f"max_len {max_len} exceeds the enumeration guard {limit}")

    observable = observability.observable_states(dfa)
    symbols = dfa.alphabet.symbols
    words = []
    layer = [('', dfa.initial)] if dfa.initial in observable else []

    for length in range(max_len + 1):
        words += [word for word, state in layer if state in dfa.finals]
        if length == max_len:
            break
        # Words that already fell into a non-observable state can never be accepted
        layer = [
            (word + symbol, target)
            for word, state in layer
            for symbol, target in zip(symbols, dfa.delta[state])
            if target in observable
        ]
    return words


def bounded_equivalent(a: Dfa, b: Dfa, max_len: int) -> bool:
    """True iff a and b accept the same words of length <= max_len"""
    return enumerate_language(a, max_len) == enumerate_language(b, max_len)


def all_words(alphabet: Alphabet, max_len: int) -> List[str]:
    """Every word of length <= max_len in length-then-alphabet order"""
    words = []
    for length in range(max_len + 1):
        words += [''.join(letters) for letters in itertools.product(alphabet.symbols, repeat=length)]
    return words


# ---------------------------------------------------------------------------
# Small-DFA enumeration
# ---------------------------------------------------------------------------

def _canonical_deltas(size: int, width: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """
    Transition tables in breadth-first canonical form, lexicographic order

    Transitions are filled state by state, symbol by symbol. A target is
    either an already discovered state or exactly the next new one, and a
    state's row may only be filled once the state has been discovered.
    """
    cells = [0] * (size * width)

    def fill(position: int, discovered: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
        if position == len(cells):
            if discovered == size:
                yield tuple(tuple(cells[row * width:(row + 1) * width]) for row in range(size))
            return
        state = position // width
        if state >= discovered:
            return
        for target in range(min(discovered + 1, size)):
            cells[position] = target
            yield from fill(position + 1, max(discovered, target + 1))

    yield from fill(0, 1)


def enumerate_dfas(max_states: int, alphabet: Alphabet) -> Iterator[Dfa]:
    """
    Every complete accessible DFA with <= max_states states, up to isomorphism

    Order: state count ascending, then transition table lexicographic, then
    final-state bitmask ascending (bit i marks state i). Each isomorphism
    class appears exactly once, in its breadth-first canonical numbering.
    """
    if max_states > MAX_ENUM_STATES:
        raise ValueError(f"Exhaustive enumeration is capped at {MAX_ENUM_STATES} states, got {max_states}")

    for size in range(1, max_states + 1):
        for delta in _canonical_deltas(size, len(alphabet)):
            for mask in range(1 << size):
                finals = [state for state in range(size) if mask >> state & 1]
                yield Dfa(alphabet, delta, 0, finals)


def minimal_dfas(max_states: int, alphabet: Alphabet) -> List[Dfa]:
    """Enumerated DFAs that are already minimal: one per language, canonical order"""
    return [dfa for dfa in enumerate_dfas(max_states, alphabet) if minimize(dfa) == dfa]


# ---------------------------------------------------------------------------
# Random generators
# ---------------------------------------------------------------------------

def random_dfa(rng: random.Random, max_states: int, alphabet: Alphabet) -> Dfa:
    """Random complete DFA, trimmed to its accessible part"""
    size = rng.randint(1, max_states)
    width = len(alphabet)
    transitions = {
        (state, index): rng.randrange(size)
        for state in range(size)
        for index in range(width)
    }
    finals = [state for state in range(size) if rng.random() < 0.5]
    return trim_accessible(PartialDfa(alphabet, size, transitions, 0, finals))


def random_alphabet(rng: random.Random, max_symbols: int) -> Alphabet:
    return Alphabet('abc'[:rng.randint(1, max_symbols)])


def finite_language_dfa(words: Sequence[str], alphabet: Alphabet) -> Dfa:
    """Minimal DFA accepting exactly the given finite set of words (prefix tree)"""
    nodes = {'': 0}
    transitions: Dict[Tuple[int, int], int] = {}
    for word in sorted(set(words), key=lambda w: (len(w), w)):
        for end in range(1, len(word) + 1):
            prefix = word[:end]
            if prefix not in nodes:
                nodes[prefix] = len(nodes)
                transitions[(nodes[word[:end - 1]], alphabet.index(word[end - 1]))] = nodes[prefix]
    finals = [nodes[word] for word in words]
    return minimize(complete(PartialDfa(alphabet, len(nodes), transitions, 0, finals)))


# ---------------------------------------------------------------------------
# Naive independent classifier
# ---------------------------------------------------------------------------

def naive_reaches_final(dfa: Dfa, state: int) -> bool:
    """Forward search from one state; written separately from observable_states"""
    frontier = [state]
    visited = set(frontier)
    while frontier:
        current = frontier.pop(0)
        if current in dfa.finals:
            return True
        for target in dfa.delta[current]:
            if target not in visited:
                visited.add(target)
                frontier.append(target)
    return False


def naive_so_count(dfa: Dfa) -> int:
    alive = [naive_reaches_final(dfa, state) for state in dfa.states]
    count = 0
    for state in dfa.states:
        if alive[state] and not all(alive[target] for target in dfa.delta[state]):
            count += 1
    return count


def naive_so_index(dfa: Dfa) -> int:
    return naive_so_count(minimize(dfa))


def naive_minimal_alphabet(dfa: Dfa) -> Tuple[str, ...]:
    alive = [naive_reaches_final(dfa, state) for state in dfa.states]
    used = set()
    for state in dfa.states:
        if not alive[state]:
            continue
        for index, target in enumerate(dfa.delta[state]):
            if alive[target]:
                used.add(dfa.alphabet.symbols[index])
    return tuple(symbol for symbol in dfa.alphabet if symbol in used)


def naive_intrinsic_so_index(dfa: Dfa) -> int:
    symbols = naive_minimal_alphabet(dfa)
    if not symbols:
        return 0
    return naive_so_index(restrict(dfa, symbols))


def naive_is_observable(dfa: Dfa) -> bool:
    symbols = naive_minimal_alphabet(dfa)
    if not symbols:
        return False
    reduced = minimize(restrict(dfa, symbols))
    return all(naive_reaches_final(reduced, state) for state in reduced.states)


# ---------------------------------------------------------------------------
# Witness claims
# ---------------------------------------------------------------------------

class Family:
    """
    A language family a claim quantifies over

    kind 'T' is T_k (so_index over the minimal alphabet <= k); 'O' is the
    observable languages. 'TS' and 'OS' are T_k(Σ) and O(Σ): the same, with
    minimal alphabet equal to the whole alphabet.
    """

    def __init__(self, kind: str, k: int = 0):
        self.kind = kind
        self.k = k

    @property
    def full_alphabet(self) -> bool:
        return self.kind in ('TS', 'OS')

    def contains(self, dfa: Dfa) -> bool:
        if self.full_alphabet and len(observability.minimal_alphabet(dfa)) != len(dfa.alphabet):
            return False
        if self.kind in ('T', 'TS'):
            return observability.intrinsic_so_index(dfa) <= self.k
        return observability.is_observable_language(dfa)

    def naive_contains(self, dfa: Dfa) -> bool:
        if self.full_alphabet and len(naive_minimal_alphabet(dfa)) != len(dfa.alphabet):
            return False
        if self.kind in ('T', 'TS'):
            return naive_intrinsic_so_index(dfa) <= self.k
        return naive_is_observable(dfa)

    def __str__(self) -> str:
        name = f"T_{self.k}" if self.kind in ('T', 'TS') else 'O'
        return f"{name}(Σ)" if self.full_alphabet else name


class Claim:
    """
    A registered non-closure claim: some inputs in family, output outside it

    shape is one of 'unary', 'binary', 'regular' (second operand an
    arbitrary regular language) or 'hom' (automaton plus a λ-free
    homomorphism over the same alphabet).
    """

    def __init__(self, claim_id: str, operation: str, shape: str, family: Family):
        self.claim_id = claim_id
        self.operation = operation
        self.shape = shape
        self.family = family

    def apply(self, inputs: Sequence[Dfa], homomorphism: Optional[Homomorphism] = None) -> Dfa:
        handler = _OPERATIONS[self.operation]
        if self.shape == 'hom':
            return handler(inputs[0], homomorphism)
        return handler(*inputs)

    def constrained(self, position: int) -> bool:
        """Whether the input at this position must lie in the family"""
        return not (self.shape == 'regular' and position == 1)


_OPERATIONS: Dict[str, Callable] = {
    'union': language_ops.union,
    'intersection': language_ops.intersection,
    'complement': language_ops.complement,
    'concat': language_ops.concatenate,
    'plus': language_ops.kleene_plus,
    'hom': language_ops.hom_image,
    'invhom': language_ops.hom_inverse,
    'mirror': language_ops.mirror,
    'lquot': language_ops.left_quotient,
    'rquot': language_ops.right_quotient,
    'intreg': language_ops.intersect_regular,
}

_SHAPES = {
    'union': 'binary', 'intersection': 'binary', 'concat': 'binary',
    'lquot': 'binary', 'rquot': 'binary', 'complement': 'unary',
    'mirror': 'unary', 'plus': 'unary', 'hom': 'hom', 'invhom': 'hom',
    'intreg': 'regular',
}


def _build_claims() -> Dict[str, Claim]:
    claims = {}

    def register(claim_id: str, operation: str, family: Family):
        claims[claim_id] = Claim(claim_id, operation, _SHAPES[operation], family)

    register('T1-union', 'union', Family('T', 1))
    register('T1-concat', 'concat', Family('TS', 1))
    register('T1-hom', 'hom', Family('T', 1))
    register('T1-invhom', 'invhom', Family('T', 1))
    register('T2-plus', 'plus', Family('T', 2))
    register('T3-plus', 'plus', Family('T', 3))
    register('T0-intreg', 'intreg', Family('T', 0))
    register('T1-intreg', 'intreg', Family('T', 1))
    for operation in ('union', 'intersection', 'complement', 'concat', 'intreg',
                      'hom', 'invhom', 'mirror', 'lquot', 'rquot'):
        register(f'O-nonclosure-{operation}', operation, Family('O'))
    for operation in ('intersection', 'complement', 'hom', 'invhom', 'mirror', 'rquot'):
        register(f'OS-nonclosure-{operation}', operation, Family('OS'))
    return claims


CLAIMS = _build_claims()


class WitnessBounds(BaseModel):
    """Search bounds for one claim"""

    max_states: int = Field(gt=0)
    sigma: str = 'a,b'
    max_image: int = Field(default=1, gt=0)
    measured: Optional[str] = None

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.parse(self.sigma)

    def describe(self) -> Dict[str, Any]:
        return {'max_states': self.max_states, 'sigma': self.sigma, 'max_image': self.max_image}


class WitnessTask(BaseModel):
    """A registered claim paired with the bounds to search within"""

    claim_id: str
    bounds: WitnessBounds

    @property
    def claim(self) -> Claim:
        return CLAIMS[self.claim_id]


def default_bounds_path() -> Path:
    return Path(__file__).parent.parent.parent / 'config' / 'witness_bounds.json'


def load_witness_bounds(path: Optional[Path] = None) -> Dict[str, WitnessBounds]:
    """
    Load per-claim starting bounds

    Raises:
        FileNotFoundError: If the bounds file is missing
        ValueError: If it names an unregistered claim
    """
    path = Path(path) if path is not None else default_bounds_path()
    if not path.exists():
        raise FileNotFoundError(f"Witness bounds config not found at {path}")

    with open(path, 'r', encoding='utf-8') as f:
        raw = json.load(f)

    unknown = sorted(set(raw) - set(CLAIMS))
    if unknown:
        raise ValueError(f"Unknown claim id(s) in {path}: {', '.join(unknown)}")
    return {claim_id: WitnessBounds(**entry) for claim_id, entry in raw.items()}


def make_task(
    claim_id: str,
    bounds_file: Optional[Path] = None,
    max_states: Optional[int] = None,
    sigma: Optional[str] = None,
    max_image: Optional[int] = None
) -> WitnessTask:
    """Starting bounds from the registry file, overridden by explicit values"""
    if claim_id not in CLAIMS:
        raise ValueError(f"Unknown claim id: {claim_id} (known: {', '.join(CLAIMS)})")
    registry = load_witness_bounds(bounds_file)
    bounds = registry.get(claim_id, WitnessBounds(max_states=3))
    overrides = {
        key: value
        for key, value in (('max_states', max_states), ('sigma', sigma), ('max_image', max_image))
        if value is not None
    }
    return WitnessTask(claim_id=claim_id, bounds=bounds.model_copy(update=overrides))


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------

def dfa_document(dfa: Dfa) -> Dict[str, Any]:
    """JSON-ready view of a DFA"""
    return {
        'alphabet': list(dfa.alphabet.symbols),
        'states': dfa.size,
        'initial': dfa.initial,
        'finals': sorted(dfa.finals),
        'delta': [list(row) for row in dfa.delta],
    }


class Witness(BaseModel):
    """A counterexample to a closure claim, re-verified after the search"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    claim_id: str
    operation: str
    family: str
    inputs: List[Dfa]
    homomorphism: Optional[Homomorphism] = None
    result: Dfa
    before_indices: List[int]
    after_index: int
    examined: int
    bounds: Dict[str, Any]
    subset_diagnostics: Optional[List[str]] = None

    def to_text(self) -> str:
        lines = [
            f"claim: {self.claim_id}",
            f"operation: {self.operation}",
            f"family: {self.family}",
            f"bounds: {', '.join(f'{key}={value}' for key, value in self.bounds.items())}",
            f"examined: {self.examined}",
            f"before_indices: {','.join(str(index) for index in self.before_indices)}",
            f"after_index: {self.after_index}",
        ]
        if self.homomorphism is not None:
            images = ', '.join(f"{s}->{img or '_'}" for s, img in self.homomorphism.images.items())
            lines.append(f"homomorphism: {images}")
        if self.subset_diagnostics is not None:
            lines.append(f"subset_diagnostics: {' '.join(self.subset_diagnostics)}")
        return '\n'.join(lines) + '\n'

    @field_serializer('inputs')
    def _serialize_inputs(self, inputs: List[Dfa]) -> List[Dict[str, Any]]:
        return [dfa_document(dfa) for dfa in inputs]

    @field_serializer('result')
    def _serialize_result(self, result: Dfa) -> Dict[str, Any]:
        return dfa_document(result)

    @field_serializer('homomorphism')
    def _serialize_homomorphism(self, hom: Optional[Homomorphism]) -> Optional[Dict[str, str]]:
        return None if hom is None else dict(hom.images)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + '\n'


def _image_words(alphabet: Alphabet, max_image: int) -> List[str]:
    words = []
    for length in range(1, max_image + 1):
        words += [''.join(letters) for letters in itertools.product(alphabet.symbols, repeat=length)]
    return words


def _homomorphisms(alphabet: Alphabet, max_image: int) -> List[Homomorphism]:
    """λ-free homomorphisms alphabet -> alphabet*, images ordered by length then lexicographically"""
    words = _image_words(alphabet, max_image)
    return [
        Homomorphism(dict(zip(alphabet.symbols, images)), alphabet, alphabet)
        for images in itertools.product(words, repeat=len(alphabet))
    ]


def _candidates(claim: Claim, bounds: WitnessBounds) -> Iterator[tuple]:
    """
    Candidate inputs in canonical search order

    The outer machine stream stays lazy so a time budget can cut a
    five-state search short; inner operands are materialized once.
    """
    alphabet = bounds.alphabet
    members = (
        dfa for dfa in enumerate_dfas(bounds.max_states, alphabet)
        if minimize(dfa) == dfa and claim.family.contains(dfa)
    )

    if claim.shape == 'unary':
        for dfa in members:
            yield ((dfa,), None)
    elif claim.shape == 'binary':
        members = list(members)
        for left in members:
            for right in members:
                yield ((left, right), None)
    elif claim.shape == 'regular':
        machines = minimal_dfas(bounds.max_states, alphabet)
        for left in members:
            for right in machines:
                yield ((left, right), None)
    else:
        homs = _homomorphisms(alphabet, bounds.max_image)
        for dfa in members:
            for hom in homs:
                yield ((dfa,), hom)


def _is_witness(claim_id: str, candidate: tuple) -> bool:
    claim = CLAIMS[claim_id]
    inputs, hom = candidate
    return not claim.family.contains(claim.apply(inputs, hom))


def _first_hit(claim_id: str, batch: List[tuple], start: int) -> Optional[int]:
    """Global index of the first witness in a batch, or None"""
    for offset, candidate in enumerate(batch):
        if _is_witness(claim_id, candidate):
            return start + offset
    return None


def _subset_label(label, names: Sequence[str]) -> str:
    return '{' + ','.join(names[state] for state in sorted(label)) + '}'


def subset_diagnostics(dfa: Dfa) -> List[str]:
    """
    Subset labels of the semi-observable states in the raw L⁺ construction

    States are named with the input automaton's state names; smaller
    subsets come first.
    """
    subset_dfa = language_ops.kleene_plus_steps(dfa)['subset_dfa']
    classes = observability.classify_states(subset_dfa)
    subsets = sorted(
        (sorted(subset_dfa.labels[state]) for state, cls in classes.items()
         if cls is observability.StateClass.SEMI_OBSERVABLE),
        key=lambda members: (len(members), members)
    )
    return [_subset_label(members, dfa.names) for members in subsets]


def verify_witness(claim: Claim, inputs: Sequence[Dfa], hom: Optional[Homomorphism], result: Dfa):
    """
    Re-check a witness with the naive classifier

    Raises:
        SelfCheckError: If any input is outside the family or the result inside it
    """
    for position, dfa in enumerate(inputs):
        if claim.constrained(position) and not claim.family.naive_contains(dfa):
            raise SelfCheckError(f"{claim.claim_id}: input {position} is not in {claim.family}")
    if claim.family.naive_contains(result):
        raise SelfCheckError(f"{claim.claim_id}: result is in {claim.family}")


def build_witness(
    claim: Claim,
    inputs: Sequence[Dfa],
    hom: Optional[Homomorphism],
    examined: int,
    bounds: Dict[str, Any]
) -> Witness:
    """Apply the claim's operation, re-verify, and package the outcome"""
    result = claim.apply(inputs, hom)
    verify_witness(claim, inputs, hom, result)
    diagnostics = subset_diagnostics(inputs[0]) if claim.operation == 'plus' else None
    return Witness(
        claim_id=claim.claim_id,
        operation=claim.operation,
        family=str(claim.family),
        inputs=list(inputs),
        homomorphism=hom,
        result=result,
        before_indices=[naive_intrinsic_so_index(dfa) for dfa in inputs],
        after_index=naive_intrinsic_so_index(result),
        examined=examined,
        bounds=bounds,
        subset_diagnostics=diagnostics
    )


def find_witness(
    task: WitnessTask,
    workers: int = 1,
    budget_seconds: Optional[float] = None,
    batch_size: int = 256,
    progress: Optional[Callable[[str], None]] = None
) -> Witness:
    """
    First counterexample to a claim in canonical search order

    Inputs are minimal DFAs from enumerate_dfas, filtered to the claim's
    family; parameters (second operand or homomorphism) vary fastest.
    With workers > 1 the candidate stream is cut into batches that run in
    parallel one wave at a time; the earliest hit of the first wave with any
    hit is returned, so the answer does not depend on the worker count.

    Args:
        task: Claim and bounds
        workers: Process count
        budget_seconds: Wall-clock budget; None for unlimited
        batch_size: Candidates per batch
        progress: Optional callback for progress lines

    Returns:
        Witness, re-verified by the naive classifier

    Raises:
        BoundsExhausted: No witness within bounds
        SearchBudgetExceeded: Budget ran out first
    """
    claim = task.claim
    bounds = task.bounds.describe()
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    stream = _candidates(claim, task.bounds)
    examined = 0

    def out_of_time() -> bool:
        return deadline is not None and time.monotonic() > deadline

    if workers <= 1:
        for candidate in stream:
            if out_of_time():
                raise SearchBudgetExceeded(claim.claim_id, bounds, examined)
            examined += 1
            if progress is not None and examined % 10000 == 0:
                progress(f"{claim.claim_id}: {examined} candidate(s) examined")
            if _is_witness(claim.claim_id, candidate):
                return build_witness(claim, candidate[0], candidate[1], examined, bounds)
        raise BoundsExhausted(claim.claim_id, bounds, examined)

    with ProcessPoolExecutor(max_workers=workers) as pool:
        while True:
            wave = []
            for _ in range(workers):
                batch = list(itertools.islice(stream, batch_size))
                if not batch:
                    break
                wave.append((examined, batch))
                examined += len(batch)
            if not wave:
                raise BoundsExhausted(claim.claim_id, bounds, examined)
            if out_of_time():
                raise SearchBudgetExceeded(claim.claim_id, bounds, wave[0][0])

            futures = [pool.submit(_first_hit, claim.claim_id, batch, start) for start, batch in wave]
            hits = [index for index in (future.result() for future in futures) if index is not None]
            if progress is not None:
                progress(f"{claim.claim_id}: {examined} candidate(s) examined")
            if hits:
                first = min(hits)
                for start, batch in wave:
                    if start <= first < start + len(batch):
                        inputs, hom = batch[first - start]
                        return build_witness(claim, inputs, hom, first + 1, bounds)


# ---------------------------------------------------------------------------
# Minimal-DFA so-count validation
# ---------------------------------------------------------------------------

class LanguageRecord(BaseModel):
    """One language of the sweep: the minimal DFA's so-count vs. the best in its group"""

    language: str
    minimal_states: int
    automata: int
    minimal_so_count: int
    group_min_so_count: int

    @property
    def discrepancy(self) -> bool:
        return self.group_min_so_count < self.minimal_so_count


class MinimalSoReport(BaseModel):
    """Does any non-minimal DFA have fewer semi-observable states than the minimal one?"""

    max_states: int
    alphabet: str
    automata: int
    languages: int
    discrepancies: int
    flagged: List[LanguageRecord]
    records: List[LanguageRecord]

    def to_text(self) -> str:
        lines = [
            f"max_states: {self.max_states}",
            f"alphabet: {self.alphabet}",
            f"automata: {self.automata}",
            f"languages: {self.languages}",
            f"discrepancies: {self.discrepancies}",
        ]
        lines += [
            f"flagged {record.language}: minimal {record.minimal_so_count}, group minimum {record.group_min_so_count}"
            for record in self.flagged
        ]
        return '\n'.join(lines) + '\n'


def _language_key(dfa: Dfa) -> str:
    rows = ';'.join(','.join(str(target) for target in row) for row in dfa.delta)
    finals = ','.join(str(state) for state in sorted(dfa.finals))
    return f"{rows}|{finals}"


def validate_lemma1(max_states: int, alphabet: Alphabet) -> MinimalSoReport:
    """
    Group every enumerated DFA by language and compare so-counts

    Args:
        max_states: Enumeration bound (at most 4)
        alphabet: Alphabet to enumerate over

    Returns:
        Report with one record per language; any language where some
        non-minimal automaton has fewer semi-observable states than the
        minimal DFA is flagged
    """
    if max_states > 4:
        raise ValueError(f"validate_lemma1 is limited to 4 states, got {max_states}")

    groups: Dict[Dfa, List[int]] = {}
    automata = 0
    for dfa in enumerate_dfas(max_states, alphabet):
        automata += 1
        groups.setdefault(minimize(dfa), []).append(observability.so_count(dfa))

    records = [
        LanguageRecord(
            language=_language_key(minimal),
            minimal_states=minimal.size,
            automata=len(counts),
            minimal_so_count=observability.so_count(minimal),
            group_min_so_count=min(counts),
        )
        for minimal, counts in groups.items()
    ]
    flagged = [record for record in records if record.discrepancy]
    return MinimalSoReport(
        max_states=max_states,
        alphabet=str(alphabet),
        automata=automata,
        languages=len(records),
        discrepancies=len(flagged),
        flagged=flagged,
        records=records
    )
