"""
Finite automata, state observability and closure operations for observa
"""

__all__ = ['core', 'errors', 'regex', 'observability', 'language_ops', 'oracle', 'suite']
