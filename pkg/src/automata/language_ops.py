"""
Language Operations - Every closure operation analyzed for the T_k families

Each operation returns a complete, accessible DFA. Results are minimized
unless the LanguageOps instance was created with minimize_results=False,
which keeps raw constructions (and their subset labels) for inspection.
"""

from typing import Dict, List, Optional, Tuple

from .core import (
    EPSILON, Alphabet, Dfa, Nfa,
    combine_and, combine_or, determinize, lambda_dfa, minimize,
    product, reachable, remove_lambda, reorder, to_nfa,
)
from .errors import AlphabetMismatchError


class Homomorphism:
    """
    Monoid homomorphism h: source* -> target*, given by one image per symbol
    """

    def __init__(self, images: Dict[str, str], source: Alphabet, target: Alphabet):
        missing = [symbol for symbol in source if symbol not in images]
        if missing:
            raise ValueError(f"Homomorphism has no image for {missing}")
        extra = [symbol for symbol in images if symbol not in source]
        if extra:
            raise ValueError(f"Homomorphism maps symbols outside its source alphabet: {extra}")
        for symbol, image in images.items():
            for char in image:
                if char not in target:
                    raise ValueError(
                        f"Image of {symbol!r} uses {char!r}, which is not in target alphabet {{{target}}}"
                    )

        self.images = {symbol: images[symbol] for symbol in source}
        self.source = source
        self.target = target

    @classmethod
    def from_images(cls, images: Dict[str, str], target: Optional[Alphabet] = None) -> 'Homomorphism':
        """
        Build from a mapping; the target alphabet defaults to the source
        symbols followed by any new symbols in the images
        """
        source = Alphabet(images)
        if target is None:
            symbols = list(source)
            for image in images.values():
                for char in image:
                    if char not in symbols:
                        symbols.append(char)
            target = Alphabet(symbols)
        return cls(images, source, target)

    @classmethod
    def identity(cls, alphabet: Alphabet) -> 'Homomorphism':
        return cls({symbol: symbol for symbol in alphabet}, alphabet, alphabet)

    @property
    def lambda_free(self) -> bool:
        return all(self.images.values())

    def apply(self, word: str) -> str:
        return ''.join(self.images[symbol] for symbol in word)

    def __str__(self) -> str:
        return '\n'.join(f"{symbol} -> {image or '_'}" for symbol, image in self.images.items()) + '\n'

    def __repr__(self) -> str:
        return f"Homomorphism({self.images!r})"


class LanguageOps:
    """Closure operations on DFA-represented regular languages"""

    def __init__(self, minimize_results: bool = True):
        self.minimize_results = minimize_results

    def _finish(self, dfa: Dfa) -> Dfa:
        return minimize(dfa) if self.minimize_results else dfa

    def union(self, a: Dfa, b: Dfa) -> Dfa:
        return self._finish(product(a, b, combine_or))

    def intersection(self, a: Dfa, b: Dfa) -> Dfa:
        return self._finish(product(a, b, combine_and))

    def complement(self, a: Dfa) -> Dfa:
        return self._finish(a.with_finals(set(a.states) - a.finals))

    def concatenate(self, a: Dfa, b: Dfa) -> Dfa:
        """λ-edges from a's finals to b's initial state, then determinize"""
        b = reorder(b, a.alphabet)
        offset = a.size
        edges = to_nfa(a) + to_nfa(b, offset)
        edges += [(state, EPSILON, b.initial + offset) for state in sorted(a.finals)]
        nfa = Nfa(a.alphabet, a.size + b.size, edges, (a.initial,), [state + offset for state in b.finals])
        return self._finish(determinize(remove_lambda(nfa)))

    def kleene_plus_steps(self, a: Dfa) -> Dict[str, object]:
        """
        The four-step L⁺ construction, with every intermediate automaton

        1. add a λ-edge from each final state to the initial state
        2. remove λ-moves
        3. subset construction (subset labels kept)
        4. minimize; the subset construction already drops inaccessible subsets

        Returns:
            {'lambda_nfa', 'lambda_free', 'subset_dfa', 'minimal'}
        """
        edges = to_nfa(a) + [(state, EPSILON, a.initial) for state in sorted(a.finals)]
        lambda_nfa = Nfa(a.alphabet, a.size, edges, (a.initial,), a.finals)
        lambda_free = remove_lambda(lambda_nfa)
        subset_dfa = determinize(lambda_free)
        return {
            'lambda_nfa': lambda_nfa,
            'lambda_free': lambda_free,
            'subset_dfa': subset_dfa,
            'minimal': minimize(subset_dfa),
        }

    def kleene_plus(self, a: Dfa) -> Dfa:
        steps = self.kleene_plus_steps(a)
        return steps['minimal'] if self.minimize_results else steps['subset_dfa']

    def kleene_star(self, a: Dfa) -> Dfa:
        """L* = L⁺ ∪ {λ}"""
        plus = self.kleene_plus_steps(a)['subset_dfa']
        return self._finish(product(plus, lambda_dfa(a.alphabet), combine_or))

    def hom_image(self, a: Dfa, h: Homomorphism) -> Dfa:
        """
        h(L): every edge (q, c, p) becomes a path spelling h(c) through fresh
        states (a λ-edge when h(c) is empty)
        """
        a = reorder(a, h.source)
        target = h.target
        count = a.size
        edges: List[Tuple[int, Optional[int], int]] = []

        for state, row in enumerate(a.delta):
            for index, successor in enumerate(row):
                image = h.images[a.alphabet.symbols[index]]
                if not image:
                    edges.append((state, EPSILON, successor))
                    continue
                current = state
                for position, char in enumerate(image):
                    if position == len(image) - 1:
                        following = successor
                    else:
                        following = count
                        count += 1
                    edges.append((current, target.index(char), following))
                    current = following

        nfa = Nfa(target, count, edges, (a.initial,), a.finals)
        return self._finish(determinize(remove_lambda(nfa)))

    def hom_inverse(self, a: Dfa, h: Homomorphism) -> Dfa:
        """h⁻¹(L) = {w : h(w) in L}: δ'(q, c) = δ(q, h(c)) on the same states"""
        for symbol, image in h.images.items():
            outside = [char for char in image if char not in a.alphabet]
            if outside:
                raise AlphabetMismatchError(
                    f"Image of {symbol!r} uses {outside} outside the automaton alphabet {{{a.alphabet}}}"
                )
        delta = [
            [a.run(h.images[symbol], start=state) for symbol in h.source]
            for state in a.states
        ]
        # Canonical renumbering drops states no longer reachable under the new moves
        order = reachable(delta, a.initial)
        renumber = {old: new for new, old in enumerate(order)}
        trimmed = Dfa(
            h.source,
            [[renumber[target] for target in delta[old]] for old in order],
            0,
            [renumber[state] for state in a.finals if state in renumber],
            [a.names[old] for old in order]
        )
        return self._finish(trimmed)

    def mirror(self, a: Dfa) -> Dfa:
        """Reverse every edge and swap the initial state with the finals"""
        edges = [(target, index, source) for source, index, target in to_nfa(a)]
        nfa = Nfa(a.alphabet, a.size, edges, sorted(a.finals), (a.initial,))
        return self._finish(determinize(nfa))

    def left_quotient(self, k: Dfa, l: Dfa) -> Dfa:
        """
        K\\L = {w : uw in L for some u in K}

        Starts an NFA copy of l from every state δ_l(q0, u) with u in K, found
        by searching the reachable part of the product of k and l.
        """
        l = reorder(l, k.alphabet)
        width = len(k.alphabet)
        start = (k.initial, l.initial)
        seen = {start}
        stack = [start]
        initials = set()
        while stack:
            left, right = stack.pop()
            if left in k.finals:
                initials.add(right)
            for index in range(width):
                pair = (k.delta[left][index], l.delta[right][index])
                if pair not in seen:
                    seen.add(pair)
                    stack.append(pair)

        nfa = Nfa(k.alphabet, l.size, to_nfa(l), sorted(initials), l.finals)
        return self._finish(determinize(nfa))

    def right_quotient(self, l: Dfa, k: Dfa) -> Dfa:
        """
        L/K = {w : wu in L for some u in K}

        A state q of l becomes final iff some word of K leads from q into F_l:
        backward search over the product of l and k from F_l x F_k.
        """
        k = reorder(k, l.alphabet)
        predecessors: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        for left in l.states:
            for right in k.states:
                for index in range(len(l.alphabet)):
                    pair = (l.delta[left][index], k.delta[right][index])
                    predecessors.setdefault(pair, []).append((left, right))

        seen = {(left, right) for left in l.finals for right in k.finals}
        stack = list(seen)
        while stack:
            pair = stack.pop()
            for source in predecessors.get(pair, ()):
                if source not in seen:
                    seen.add(source)
                    stack.append(source)

        finals = [state for state in l.states if (state, k.initial) in seen]
        return self._finish(l.with_finals(finals))

    def intersect_regular(self, a: Dfa, regular: Dfa) -> Dfa:
        """Intersection with an arbitrary regular set"""
        return self.intersection(a, regular)


_DEFAULT = LanguageOps()

union = _DEFAULT.union
intersection = _DEFAULT.intersection
complement = _DEFAULT.complement
concatenate = _DEFAULT.concatenate
kleene_plus = _DEFAULT.kleene_plus
kleene_plus_steps = _DEFAULT.kleene_plus_steps
kleene_star = _DEFAULT.kleene_star
hom_image = _DEFAULT.hom_image
hom_inverse = _DEFAULT.hom_inverse
mirror = _DEFAULT.mirror
left_quotient = _DEFAULT.left_quotient
right_quotient = _DEFAULT.right_quotient
intersect_regular = _DEFAULT.intersect_regular
