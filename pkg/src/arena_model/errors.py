"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit with 2,
numeric-domain problems with 3.
"""


class ArenaError(Exception):
    pass


class ValidationError(ArenaError, ValueError):
    """Malformed input: bad shape, invalid trajectory, non-binary matrix..."""


class NumericDomainError(ArenaError, ValueError):
    """Argument outside the domain where a formula is defined."""


class EngineLimitError(NumericDomainError):
    """The exact engine would need polynomials too large to be practical."""
