"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: InputError -> 2, NumericalError -> 3.
"""


class TransitResError(Exception):
    """Base class for all package errors."""


class InputError(TransitResError):
    """Malformed or inconsistent user input (files, ids, parameters)."""


class NumericalError(TransitResError):
    """A computation is undefined for the given data (degenerate ensemble,
    all-zero metric vector, graph with no connected pairs, ...)."""
