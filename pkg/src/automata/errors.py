"""
Error types shared by the automata package and the CLI
"""

from typing import Optional


class FormatError(ValueError):
    """Malformed automaton, homomorphism or regex text"""

    def __init__(
        self,
        message: str,
        source: str = '<input>',
        line: Optional[int] = None,
        offset: Optional[int] = None
    ):
        self.message = message
        self.source = source
        self.line = line
        self.offset = offset
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.source
        if self.line is not None:
            where += f":{self.line}"
        if self.offset is not None:
            where += f": offset {self.offset}"
        return f"{where}: {self.message}"


class AlphabetMismatchError(ValueError):
    """Binary operation on automata over different alphabets"""


class BoundsExhausted(RuntimeError):
    """Witness search examined every candidate within bounds without success"""

    def __init__(self, claim_id: str, bounds: dict, examined: int, reason: str = 'bounds exhausted'):
        self.claim_id = claim_id
        self.bounds = bounds
        self.examined = examined
        self.reason = reason
        super().__init__(
            f"{claim_id}: {reason} after {examined} candidate(s) at bounds {bounds}"
        )


class SearchBudgetExceeded(BoundsExhausted):
    """Witness search stopped because its time budget ran out"""

    def __init__(self, claim_id: str, bounds: dict, examined: int):
        super().__init__(claim_id, bounds, examined, reason='time budget exceeded')


class SelfCheckError(AssertionError):
    """A self-verified postcondition did not hold"""
