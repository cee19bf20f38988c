"""
Replication Suite - Embedded fixtures and the one-command replication run

Steps run in a fixed order and every random population is drawn from a
seeded generator, so two runs with the same arguments produce identical
reports.
"""

import random
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from . import language_ops, observability, oracle
from .core import Alphabet, Dfa, embed, equivalent, minimize, universal_dfa
from .errors import BoundsExhausted, SearchBudgetExceeded, SelfCheckError
from .regex import dfa_from_regex

SIGMA = Alphabet('ab')

PASSED = 'PASSED'
FAILED = 'FAILED'
SKIPPED_AT_SCALE = 'SKIPPED-AT-SCALE'
FINDING = 'FINDING'


class Fixture(BaseModel):
    """A concrete automaton with the values the suite expects of it"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    source: str
    dfa: Dfa
    expected: Dict[str, object]
    anchor: str


def _table(delta, finals, alphabet: Alphabet = SIGMA) -> Dfa:
    return Dfa(alphabet, delta, 0, finals)


# (a|b)a*: s --a,b--> f, f --a--> f, f --b--> r (dead)
M1 = Fixture(
    name='M1',
    source='(a|b)a*',
    dfa=_table(((1, 1), (1, 2), (2, 2)), {1}),
    expected={'so_index': 1, 'states': 3},
    anchor='union counterexample, first operand'
)

M2 = Fixture(
    name='M2',
    source='(a|b)b*',
    dfa=_table(((1, 1), (2, 1), (2, 2)), {1}),
    expected={'so_index': 1, 'states': 3},
    anchor='union counterexample, second operand'
)

# The explicit 5-state union table; state i of the published table is q(i-1) here
UNION_TABLE = Fixture(
    name='M1 ∪ M2',
    source='(a|b)(a*|b*)',
    dfa=_table(((1, 1), (2, 3), (2, 4), (4, 3), (4, 4)), {1, 2, 3}),
    expected={'so_index': 2, 'semi_observable': ['q2', 'q3'], 'non_observable': ['q4']},
    anchor='union counterexample, states 3 and 4 semi-observable'
)

A_PLUS = Fixture(
    name='a+',
    source='a+',
    dfa=dfa_from_regex('a+', Alphabet('a')),
    expected={'so_index': 0},
    anchor='concatenation counterexample, first operand'
)

B_PLUS = Fixture(
    name='b+',
    source='b+',
    dfa=dfa_from_regex('b+', Alphabet('b')),
    expected={'so_index': 0},
    anchor='concatenation counterexample, second operand'
)

# A language in T_2 whose Kleene plus needs three semi-observable states
T2_PLUS = Fixture(
    name='T2-plus',
    source='table',
    dfa=_table(((1, 2), (2, 3), (4, 3), (3, 3), (2, 4)), {4}),
    expected={
        'so_index': 2,
        'plus_so_index': 3,
        'plus_states': 7,
        'subset_diagnostics': ['{q1}', '{q2}', '{q1,q2}'],
    },
    anchor='Kleene plus leaves T_2 through subsets {p}, {q}, {p,q}'
)

FIXTURES = [M1, M2, UNION_TABLE, A_PLUS, B_PLUS, T2_PLUS]

STEPS = ('union', 'concat', 'kleene-plus', 'closures', 'witnesses', 'minimal-so')

WITNESS_CLAIMS = ('T1-hom', 'T1-invhom', 'T1-concat', 'T2-plus', 'T3-plus')


class AssertionResult(BaseModel):
    name: str
    status: str
    expected: str
    actual: str
    anchor: str = ''


class SuiteReport(BaseModel):
    """Outcome of every suite assertion, in execution order"""

    results: List[AssertionResult]

    @property
    def counts(self) -> Dict[str, int]:
        counts = {PASSED: 0, FAILED: 0, SKIPPED_AT_SCALE: 0, FINDING: 0}
        for result in self.results:
            counts[result.status] += 1
        return counts

    @property
    def ok(self) -> bool:
        return self.counts[FAILED] == 0

    @property
    def first_failure(self) -> Optional[str]:
        return next((result.name for result in self.results if result.status == FAILED), None)

    def to_text(self) -> str:
        lines = [
            f"{result.status} {result.name}: expected {result.expected}, actual {result.actual}"
            for result in self.results
        ]
        summary = ', '.join(f"{status.lower()} {count}" for status, count in self.counts.items())
        lines.append(f"summary: {summary}")
        return '\n'.join(lines) + '\n'

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + '\n'


class SuiteRunner:
    """
    Runs the replication steps and collects assertion results

    Args:
        seed: Seed for every random population
        random_samples: Size of the random Kleene plus population
        pair_samples: Number of random observable pairs for the positive closures
        sweep_max_states: Exhaustive sweep bound over {a,b}
        budget_seconds: Time budget per witness search
        witness_overrides: Bounds forced on every witness search (e.g. max_states=1)
        workers: Process count for witness searches
        progress: Callback for [SUITE] diagnostics
    """

    def __init__(
        self,
        seed: int = 20240601,
        random_samples: int = 1000,
        pair_samples: int = 300,
        sweep_max_states: int = 4,
        budget_seconds: Optional[float] = None,
        witness_overrides: Optional[Dict[str, object]] = None,
        workers: int = 1,
        progress: Optional[Callable[[str], None]] = None
    ):
        self.seed = seed
        self.random_samples = random_samples
        self.pair_samples = pair_samples
        self.sweep_max_states = sweep_max_states
        self.budget_seconds = budget_seconds
        self.witness_overrides = witness_overrides or {}
        self.workers = workers
        self.progress = progress or (lambda message: None)
        self.results: List[AssertionResult] = []

    def check(self, name: str, expected, actual, anchor: str = '', passed: Optional[bool] = None):
        if passed is None:
            passed = expected == actual
        self.results.append(AssertionResult(
            name=name,
            status=PASSED if passed else FAILED,
            expected=str(expected),
            actual=str(actual),
            anchor=anchor
        ))

    def guarded(self, name: str, step: Callable[[], None]):
        """Run a step; a self-check failure inside it becomes a FAILED result"""
        try:
            step()
        except SelfCheckError as e:
            self.results.append(AssertionResult(
                name=name, status=FAILED, expected='self-check', actual=str(e)
            ))

    def run(self, steps: Optional[Sequence[str]] = None) -> SuiteReport:
        selected = STEPS if steps is None else tuple(steps)
        unknown = [step for step in selected if step not in STEPS]
        if unknown:
            raise ValueError(f"Unknown suite step(s): {', '.join(unknown)}")

        handlers = {
            'union': self.step_union,
            'concat': self.step_concat,
            'kleene-plus': self.step_kleene_plus,
            'closures': self.step_closures,
            'witnesses': self.step_witnesses,
            'minimal-so': self.step_minimal_so,
        }
        for step in STEPS:
            if step in selected:
                self.progress(f"step {step}")
                self.guarded(step, handlers[step])
        return SuiteReport(results=self.results)

    # -- (1)-(2) union counterexample ------------------------------------

    def step_union(self):
        for fixture in (M1, M2):
            self.check(f"{fixture.name} so_index", fixture.expected['so_index'],
                       observability.so_index(fixture.dfa), fixture.anchor)
        for fixture in (M1, M2):
            compiled = dfa_from_regex(fixture.source, SIGMA)
            self.check(f"{fixture.name} compiles from {fixture.source}", True,
                       compiled == fixture.dfa, fixture.anchor)

        union = language_ops.union(M1.dfa, M2.dfa)
        self.check("union(M1,M2) equals the 5-state table", True,
                   union == UNION_TABLE.dfa, UNION_TABLE.anchor)
        self.check("union(M1,M2) so_index", UNION_TABLE.expected['so_index'],
                   observability.so_index(union), UNION_TABLE.anchor)

        classes = observability.classify_states(union)
        semi = [union.names[state] for state, cls in classes.items()
                if cls is observability.StateClass.SEMI_OBSERVABLE]
        self.check("union(M1,M2) semi-observable states", UNION_TABLE.expected['semi_observable'],
                   semi, UNION_TABLE.anchor)

    # -- (3) concatenation counterexample -------------------------------

    def step_concat(self):
        for fixture in (A_PLUS, B_PLUS):
            self.check(f"{fixture.name} so_index", fixture.expected['so_index'],
                       observability.so_index(fixture.dfa), fixture.anchor)

        left = embed(A_PLUS.dfa, SIGMA)
        right = embed(B_PLUS.dfa, SIGMA)
        product = language_ops.concatenate(left, right)
        index = observability.so_index(product)
        self.check("a+ · b+ so_index >= 2", '>= 2', index, 'L1·L2 not in T_1',
                   passed=index >= 2)
        self.check("a+ · b+ so_index exact", 2, index, 'classified on the 4-state minimal DFA')
        self.check("a+ · b+ equals compile(a+b+)", True,
                   equivalent(product, dfa_from_regex('a+b+', SIGMA)))

    # -- (4) Kleene plus closure sweep ---------------------------------

    def _kleene_population(self) -> List[Dfa]:
        population = list(oracle.enumerate_dfas(self.sweep_max_states, SIGMA))
        rng = random.Random(self.seed)
        for _ in range(self.random_samples):
            alphabet = oracle.random_alphabet(rng, 3)
            population.append(oracle.random_dfa(rng, 6, alphabet))
        return population

    def step_kleene_plus(self):
        t1_total = t1_closed = 0
        observable_total = observable_closed = 0
        dead_state_violations = 0

        for dfa in self._kleene_population():
            minimal = minimize(dfa)
            if observability.non_observable_count(minimal) > 1:
                dead_state_violations += 1

            in_t1 = observability.so_index(minimal) <= 1
            is_observable = observability.is_observable_language(minimal)
            if not (in_t1 or is_observable):
                continue
            plus = language_ops.kleene_plus(minimal)
            if in_t1:
                t1_total += 1
                t1_closed += observability.so_index(plus) <= 1
            if is_observable:
                observable_total += 1
                observable_closed += observability.is_observable_language(plus)

        self.check("T_1 closed under Kleene plus", f"{t1_total}/{t1_total}",
                   f"{t1_closed}/{t1_total}", 'T_1 Kleene plus closure')
        self.check("O closed under Kleene plus", f"{observable_total}/{observable_total}",
                   f"{observable_closed}/{observable_total}", 'O Kleene plus closure')
        self.check("minimal DFAs have at most one non-observable state", 0,
                   dead_state_violations, 'only one non-observable state')

        plus = language_ops.kleene_plus(T2_PLUS.dfa)
        self.check("T2-plus fixture so_index", T2_PLUS.expected['so_index'],
                   observability.so_index(T2_PLUS.dfa), T2_PLUS.anchor)
        self.check("T2-plus fixture L+ so_index", T2_PLUS.expected['plus_so_index'],
                   observability.so_index(plus), T2_PLUS.anchor)
        self.check("T2-plus fixture L+ minimal states", T2_PLUS.expected['plus_states'],
                   plus.size, T2_PLUS.anchor)
        self.check("T2-plus fixture subset diagnostics", T2_PLUS.expected['subset_diagnostics'],
                   oracle.subset_diagnostics(T2_PLUS.dfa), T2_PLUS.anchor)

    # -- (5) observability, positive closures, hierarchy -------------

    def _observable_pairs(self) -> List[tuple]:
        rng = random.Random(self.seed + 1)
        family = oracle.Family('OS')
        members = []
        attempts = 0
        while len(members) < 2 * self.pair_samples and attempts < 200 * max(self.pair_samples, 1):
            attempts += 1
            dfa = minimize(oracle.random_dfa(rng, 4, SIGMA))
            if family.contains(dfa):
                members.append(dfa)
        return list(zip(members[0::2], members[1::2]))

    def step_closures(self):
        universal = universal_dfa(SIGMA)
        total = agree = 0
        for dfa in oracle.enumerate_dfas(3, SIGMA):
            if len(observability.minimal_alphabet(dfa)) != len(SIGMA):
                continue
            total += 1
            agree += observability.is_observable_language(dfa) == equivalent(
                observability.init_language(dfa), universal)
        self.check("observable iff Init(L) = Σ*", f"{total}/{total}", f"{agree}/{total}", 'observability via prefixes')

        pairs = self._observable_pairs()
        for name, operation in (
            ('union', language_ops.union),
            ('concatenation', language_ops.concatenate),
            ('left quotient', language_ops.left_quotient),
        ):
            closed = sum(observability.is_observable_language(operation(a, b)) for a, b in pairs)
            self.check(f"O(Σ) closed under {name}", f"{len(pairs)}/{len(pairs)}",
                       f"{closed}/{len(pairs)}", 'O(Σ) positive closures')

        for k in range(5):
            self.check(f"hierarchy witness k={k} so_index", k,
                       observability.so_index(observability.hierarchy_witness(k)), 'hierarchy')
        self.check("hierarchy witness k=2 matches the union table", True,
                   equivalent(observability.hierarchy_witness(2), UNION_TABLE.dfa), 'hierarchy')

    # -- (6) witness searches -------------------------------------------

    def step_witnesses(self):
        for claim_id in WITNESS_CLAIMS:
            task = oracle.make_task(claim_id, **self._override_arguments())
            self.progress(f"searching {claim_id} at {task.bounds.describe()}")
            try:
                witness = oracle.find_witness(task, workers=self.workers, budget_seconds=self.budget_seconds)
            except SearchBudgetExceeded as e:
                self.results.append(AssertionResult(
                    name=f"witness {claim_id}", status=SKIPPED_AT_SCALE,
                    expected='witness', actual=e.reason
                ))
                continue
            except BoundsExhausted as e:
                self.results.append(AssertionResult(
                    name=f"witness {claim_id}", status=SKIPPED_AT_SCALE,
                    expected='witness', actual=f"{e.reason} ({e.examined} examined)"
                ))
                continue

            bound = CLAIM_BOUNDS[claim_id]
            self.check(f"witness {claim_id}", f"after_index > {bound}", witness.after_index,
                       passed=witness.after_index > bound
                       and all(index <= bound for index in witness.before_indices))

    def _override_arguments(self) -> Dict[str, object]:
        return {key: value for key, value in self.witness_overrides.items() if value is not None}

    # -- (7) minimal DFA experiment -----------------------------------

    def step_minimal_so(self):
        report = oracle.validate_lemma1(3, SIGMA)
        self.results.append(AssertionResult(
            name="minimal DFA so-count discrepancies",
            status=PASSED if report.discrepancies == 0 else FINDING,
            expected='0',
            actual=str(report.discrepancies),
            anchor='so_index from the minimal DFA'
        ))


CLAIM_BOUNDS = {'T1-hom': 1, 'T1-invhom': 1, 'T1-concat': 1, 'T2-plus': 2, 'T3-plus': 3}


def run_suite(
    budget_seconds: Optional[float] = None,
    steps: Optional[Sequence[str]] = None,
    **options
) -> SuiteReport:
    """Convenience wrapper around SuiteRunner"""
    return SuiteRunner(budget_seconds=budget_seconds, **options).run(steps)
