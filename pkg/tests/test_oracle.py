"""
Tests for enumeration, the naive classifier and witness search
"""

import itertools
import json
import random

import pytest

from automata import language_ops, observability, oracle
from automata.core import Alphabet, Dfa, PartialDfa, canonical, empty_dfa, sigma_plus_dfa, trim_accessible
from automata.errors import BoundsExhausted, SearchBudgetExceeded, SelfCheckError
from automata.oracle import (
    CLAIMS, Family, WitnessBounds, WitnessTask, _canonical_deltas, all_words,
    enumerate_dfas, enumerate_language, find_witness, finite_language_dfa,
    load_witness_bounds, make_task, minimal_dfas, random_dfa, validate_lemma1, verify_witness,
)
from automata.regex import dfa_from_regex

AB = Alphabet('ab')


def brute_force_dfas(max_states: int, alphabet: Alphabet) -> set:
    """Every complete table and final set, trimmed and deduplicated by canonical form"""
    found = set()
    width = len(alphabet)
    for size in range(1, max_states + 1):
        for cells in itertools.product(range(size), repeat=size * width):
            for mask in range(1 << size):
                transitions = {
                    (state, index): cells[state * width + index]
                    for state in range(size)
                    for index in range(width)
                }
                finals = [state for state in range(size) if mask >> state & 1]
                found.add(canonical(trim_accessible(PartialDfa(alphabet, size, transitions, 0, finals))))
    return found


class TestEnumerateLanguage:
    """Bounded language enumeration"""

    def test_length_then_alphabet_order(self):
        dfa = dfa_from_regex('(a|b)a*', AB)
        assert enumerate_language(dfa, 3) == ['a', 'b', 'aa', 'ba', 'aaa', 'baa']

    def test_lambda_is_listed_first(self):
        assert enumerate_language(dfa_from_regex('_|b', AB), 2) == ['', 'b']

    def test_guard(self):
        with pytest.raises(ValueError, match='enumeration guard'):
            enumerate_language(sigma_plus_dfa(AB), 17)
        with pytest.raises(ValueError):
            enumerate_language(sigma_plus_dfa(AB), -1)

    def test_all_words(self):
        assert all_words(AB, 2) == ['', 'a', 'b', 'aa', 'ab', 'ba', 'bb']

    def test_finite_language_dfa(self):
        dfa = finite_language_dfa(['ab', 'a', 'ab'], AB)
        assert enumerate_language(dfa, 5) == ['a', 'ab']


class TestEnumerateDfas:
    """Exhaustive enumeration up to isomorphism"""

    @pytest.mark.parametrize('max_states, symbols, count', [
        (1, 'a', 2),
        (2, 'a', 10),
        (1, 'ab', 2),
        (2, 'ab', 50),
    ])
    def test_counts(self, max_states, symbols, count):
        assert len(list(enumerate_dfas(max_states, Alphabet(symbols)))) == count

    @pytest.mark.parametrize('size, count', [(1, 1), (2, 12), (3, 216)])
    def test_canonical_table_counts(self, size, count):
        assert len(list(_canonical_deltas(size, 2))) == count

    @pytest.mark.slow
    def test_four_state_table_count(self):
        assert len(list(_canonical_deltas(4, 2))) == 5248

    def test_matches_generate_and_deduplicate(self):
        assert set(enumerate_dfas(2, AB)) == brute_force_dfas(2, AB)

    def test_every_enumerated_dfa_is_canonical(self):
        for dfa in enumerate_dfas(3, AB):
            assert canonical(dfa) == dfa

    def test_minimal_dfas_are_distinct_languages(self):
        machines = minimal_dfas(2, AB)
        assert len(machines) == len(set(machines))
        assert machines[:2] == [Dfa(AB, ((0, 0),), 0, ()), Dfa(AB, ((0, 0),), 0, (0,))]

    def test_cap(self):
        with pytest.raises(ValueError, match='capped'):
            next(enumerate_dfas(6, AB))

    def test_random_dfa_is_seeded(self):
        first = [random_dfa(random.Random(7), 5, AB) for _ in range(3)]
        second = [random_dfa(random.Random(7), 5, AB) for _ in range(3)]
        assert first == second


class TestFamilies:
    """Family membership, fast and naive"""

    def test_tk(self):
        m1 = dfa_from_regex('(a|b)a*', AB)
        assert Family('T', 1).contains(m1)
        assert not Family('T', 0).contains(m1)
        assert Family('T', 1).naive_contains(m1)

    def test_observable_over_full_alphabet(self):
        a_plus = dfa_from_regex('a+', AB)
        assert Family('O').contains(a_plus)
        assert not Family('OS').contains(a_plus)
        assert Family('OS').contains(sigma_plus_dfa(AB))
        assert Family('OS').naive_contains(sigma_plus_dfa(AB))

    def test_tk_is_judged_over_the_minimal_alphabet(self):
        # a+ over {a,b} has two semi-observable states only because b leads to the sink
        a_plus = dfa_from_regex('a+', AB)
        assert observability.so_index(a_plus) == 2
        assert Family('T', 0).contains(a_plus)
        assert Family('T', 0).naive_contains(a_plus)

    def test_empty_and_lambda_are_in_t0(self):
        for dfa in (empty_dfa(AB), dfa_from_regex('_', AB)):
            assert Family('T', 0).contains(dfa)
            assert Family('T', 0).naive_contains(dfa)

    def test_full_alphabet_tk(self):
        m1 = dfa_from_regex('(a|b)a*', AB)
        assert Family('TS', 1).contains(m1)
        assert not Family('TS', 1).contains(dfa_from_regex('a+', AB))
        assert not Family('TS', 1).contains(empty_dfa(AB))
        assert not Family('TS', 0).contains(m1)

    @pytest.mark.parametrize('family', [Family('T', 0), Family('T', 1), Family('TS', 1), Family('OS')],
                             ids=str)
    def test_fast_and_naive_membership_agree(self, family):
        for dfa in minimal_dfas(3, AB):
            assert family.contains(dfa) == family.naive_contains(dfa)

    def test_names(self):
        assert str(Family('T', 2)) == 'T_2'
        assert str(Family('TS', 1)) == 'T_1(Σ)'
        assert str(Family('O')) == 'O'
        assert str(Family('OS')) == 'O(Σ)'

    def test_claim_registry(self):
        assert str(CLAIMS['T1-concat'].family) == 'T_1(Σ)'
        assert CLAIMS['T1-hom'].shape == 'hom'
        assert CLAIMS['T2-plus'].shape == 'unary'
        assert CLAIMS['T1-union'].shape == 'binary'
        assert not CLAIMS['T0-intreg'].constrained(1)
        assert CLAIMS['T0-intreg'].constrained(0)
        assert len([claim for claim in CLAIMS if claim.startswith('O-nonclosure-')]) == 10
        assert len([claim for claim in CLAIMS if claim.startswith('OS-nonclosure-')]) == 6


class TestWitnessBounds:
    """Bounds registry"""

    def test_default_file_covers_every_claim(self):
        assert set(load_witness_bounds()) == set(CLAIMS)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_witness_bounds(tmp_path / 'absent.json')

    def test_unknown_claim(self, tmp_path):
        path = tmp_path / 'bounds.json'
        path.write_text(json.dumps({'T9-nothing': {'max_states': 2}}))
        with pytest.raises(ValueError, match='T9-nothing'):
            load_witness_bounds(path)

    def test_overrides(self):
        task = make_task('T1-hom', max_states=1)
        assert task.bounds.max_states == 1
        assert task.bounds.max_image == 3
        assert task.bounds.describe() == {'max_states': 1, 'sigma': 'a,b', 'max_image': 3}

    def test_figure_claims_start_at_four_states(self):
        registry = load_witness_bounds()
        for claim_id in ('T1-concat', 'T1-hom', 'T1-invhom'):
            assert registry[claim_id].max_states == 4
        assert registry['T1-hom'].max_image == 3
        assert registry['T1-invhom'].max_image == 3

    def test_unknown_claim_id(self):
        with pytest.raises(ValueError, match='Unknown claim id'):
            make_task('T7-plus')


class TestFindWitness:
    """Canonical-order witness search"""

    def setup_method(self):
        self.tiny_hom = WitnessTask(claim_id='T1-hom', bounds=WitnessBounds(max_states=1, max_image=2))

    def test_first_hom_witness(self):
        # After ∅ with all 36 homomorphisms, Σ* with 17 more stays in T_1 over its
        # own minimal alphabet; h(a)=aa, h(b)=bb is the first to leave it
        witness = find_witness(self.tiny_hom)
        assert witness.examined == 54
        assert witness.inputs == [Dfa(AB, ((0, 0),), 0, (0,))]
        assert witness.homomorphism.images == {'a': 'aa', 'b': 'bb'}
        assert witness.result == dfa_from_regex('(aa|bb)*', AB)
        assert witness.before_indices == [0]
        assert witness.after_index == 2

    def test_witness_text(self):
        assert find_witness(self.tiny_hom).to_text() == (
            "claim: T1-hom\n"
            "operation: hom\n"
            "family: T_1\n"
            "bounds: max_states=1, sigma=a,b, max_image=2\n"
            "examined: 54\n"
            "before_indices: 0\n"
            "after_index: 2\n"
            "homomorphism: a->aa, b->bb\n"
        )

    def test_witness_json(self):
        document = json.loads(find_witness(self.tiny_hom).to_json())
        assert document['inputs'] == [
            {'alphabet': ['a', 'b'], 'states': 1, 'initial': 0, 'finals': [0], 'delta': [[0, 0]]}
        ]
        assert document['homomorphism'] == {'a': 'aa', 'b': 'bb'}
        assert document['after_index'] == 2

    def test_parallel_search_agrees(self):
        serial = find_witness(self.tiny_hom)
        parallel = find_witness(self.tiny_hom, workers=2, batch_size=8)
        assert parallel.examined == serial.examined
        assert parallel.inputs == serial.inputs
        assert parallel.homomorphism.images == serial.homomorphism.images

    @pytest.mark.parametrize('claim_id', ['T1-hom', 'T1-invhom', 'T1-concat', 'T2-plus', 'T3-plus'])
    def test_one_state_bounds_exhaust(self, claim_id):
        task = make_task(claim_id, max_states=1, max_image=1)
        with pytest.raises(BoundsExhausted) as excinfo:
            find_witness(task)
        assert excinfo.value.reason == 'bounds exhausted'
        assert excinfo.value.examined > 0

    def test_budget(self, monkeypatch):
        ticks = itertools.count(0, 10)
        monkeypatch.setattr(oracle.time, 'monotonic', lambda: next(ticks))
        with pytest.raises(SearchBudgetExceeded) as excinfo:
            find_witness(make_task('T3-plus'), budget_seconds=5)
        assert excinfo.value.examined == 0
        assert excinfo.value.reason == 'time budget exceeded'

    def test_complement_of_universal_language(self):
        witness = find_witness(make_task('O-nonclosure-complement'))
        assert witness.examined == 1
        assert witness.inputs == [Dfa(AB, ((0, 0),), 0, (0,))]
        assert enumerate_language(witness.result, 4) == []

    def check_witness(self, witness, k):
        claim = CLAIMS[witness.claim_id]
        for position, dfa in enumerate(witness.inputs):
            if claim.constrained(position):
                assert observability.intrinsic_so_index(dfa) <= k
                assert claim.family.naive_contains(dfa)
        assert observability.intrinsic_so_index(witness.result) > k
        assert witness.after_index == observability.intrinsic_so_index(witness.result)
        assert not claim.family.naive_contains(witness.result)

    @pytest.mark.parametrize('claim_id, k', [('T1-union', 1), ('T1-hom', 1), ('T0-intreg', 0), ('T1-intreg', 1)])
    def test_default_bounds_find_verified_witness(self, claim_id, k):
        self.check_witness(find_witness(make_task(claim_id)), k)

    @pytest.mark.slow
    def test_inverse_hom_search(self):
        self.check_witness(find_witness(make_task('T1-invhom', max_states=4, max_image=2)), 1)

    @pytest.mark.slow
    def test_same_alphabet_concat_search(self):
        witness = find_witness(make_task('T1-concat', max_states=3))
        self.check_witness(witness, 1)
        for dfa in witness.inputs:
            assert observability.minimal_alphabet(dfa) == ('a', 'b')

    def test_inverse_hom_witness_by_hand(self):
        # h(w) = a^(2|w|_a + |w|_b), so h⁻¹(aa) = {a, bb}
        language = dfa_from_regex('aa', AB)
        hom = language_ops.Homomorphism({'a': 'aa', 'b': 'a'}, AB, AB)
        result = language_ops.hom_inverse(language, hom)
        assert enumerate_language(result, 4) == ['a', 'bb']
        assert observability.intrinsic_so_index(language) == 1
        assert observability.intrinsic_so_index(result) == 2
        verify_witness(CLAIMS['T1-invhom'], [language], hom, result)

    def test_same_alphabet_concat_witness_by_hand(self):
        first = dfa_from_regex('b(b|ab)*', AB)
        second = dfa_from_regex('(b|aa)*', AB)
        for dfa in (first, second):
            assert observability.minimal_alphabet(dfa) == ('a', 'b')
            assert observability.so_index(dfa) == 1
        result = language_ops.concatenate(first, second)
        assert observability.so_index(result) == 2
        verify_witness(CLAIMS['T1-concat'], [first, second], None, result)

    def test_different_alphabet_concat_is_not_a_same_alphabet_witness(self):
        a_plus, b_plus = dfa_from_regex('a+', AB), dfa_from_regex('b+', AB)
        with pytest.raises(SelfCheckError, match='input 0'):
            verify_witness(CLAIMS['T1-concat'], [a_plus, b_plus], None, language_ops.concatenate(a_plus, b_plus))

    def test_verify_rejects_non_witness(self):
        m1 = dfa_from_regex('(a|b)a*', AB)
        with pytest.raises(SelfCheckError, match='result is in'):
            verify_witness(CLAIMS['T1-union'], [m1, m1], None, m1)


class TestValidateLemma1:
    """Minimal DFA so-count against every equivalent automaton"""

    def test_no_discrepancies_up_to_three_states(self):
        report = validate_lemma1(3, AB)
        assert report.automata == 2 + 48 + 1728
        assert report.languages == len(minimal_dfas(3, AB))
        assert report.discrepancies == 0
        assert report.flagged == []
        assert report.to_text().startswith("max_states: 3\nalphabet: a,b\nautomata: 1778\n")

    def test_limit(self):
        with pytest.raises(ValueError):
            validate_lemma1(5, AB)
