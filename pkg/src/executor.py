"""
Executor - Dispatches 'observa op' names to language operations
"""

from typing import Callable, Dict, List, Optional

from automata.core import Dfa
from automata.errors import AlphabetMismatchError
from automata.language_ops import Homomorphism, LanguageOps


class Operation:
    """A registered operation: handler plus how many automata it takes"""

    def __init__(self, name: str, handler: Callable, arity: int, needs_hom: bool = False):
        self.name = name
        self.handler = handler
        self.arity = arity
        self.needs_hom = needs_hom


class Executor:
    """Runs one language operation on loaded automata"""

    def __init__(self, minimize_results: bool = True):
        self.ops = LanguageOps(minimize_results=minimize_results)

        # Operation registry - maps CLI names to handlers
        self.operations: Dict[str, Operation] = {
            'union': Operation('union', self.ops.union, 2),
            'intersect': Operation('intersect', self.ops.intersection, 2),
            'complement': Operation('complement', self.ops.complement, 1),
            'concat': Operation('concat', self.ops.concatenate, 2),
            'plus': Operation('plus', self.ops.kleene_plus, 1),
            'star': Operation('star', self.ops.kleene_star, 1),
            'hom': Operation('hom', self.ops.hom_image, 1, needs_hom=True),
            'invhom': Operation('invhom', self.ops.hom_inverse, 1, needs_hom=True),
            'mirror': Operation('mirror', self.ops.mirror, 1),
            'lquot': Operation('lquot', self.ops.left_quotient, 2),
            'rquot': Operation('rquot', self.ops.right_quotient, 2),
        }

    @property
    def names(self) -> List[str]:
        return list(self.operations)

    def lookup(self, name: str) -> Operation:
        if name not in self.operations:
            raise KeyError(f"Unknown operation: {name} (known: {', '.join(self.operations)})")
        return self.operations[name]

    def execute(self, name: str, automata: List[Dfa], hom: Optional[Homomorphism] = None) -> Dfa:
        """
        Apply a registered operation

        Args:
            name: Operation name, e.g. 'union'
            automata: Operands in order (left quotient takes K first, then L)
            hom: Homomorphism for 'hom' and 'invhom'

        Returns:
            Result DFA (minimal unless the executor was built with minimize_results=False)

        Raises:
            KeyError: Unknown operation
            ValueError: Wrong operand count or missing homomorphism
            AlphabetMismatchError: Binary operation over different alphabets
        """
        operation = self.lookup(name)
        if len(automata) != operation.arity:
            raise ValueError(f"'{name}' takes {operation.arity} automaton operand(s), got {len(automata)}")
        if operation.needs_hom:
            if hom is None:
                raise ValueError(f"'{name}' needs a homomorphism (-m FILE)")
            return operation.handler(automata[0], hom)
        if operation.arity == 2 and not automata[0].alphabet.same_symbols(automata[1].alphabet):
            raise AlphabetMismatchError(
                f"'{name}' operands have different alphabets {{{automata[0].alphabet}}} and "
                f"{{{automata[1].alphabet}}}; use 'observa embed' first"
            )
        return operation.handler(*automata)
