"""Exception types shared across the package.

All of them derive from ``ValueError`` so callers (and the CLI) can treat
them uniformly as input errors.
"""


class DomainError(ValueError):
    """A parameter lies outside the region where the quantity is defined."""


class SizeError(ValueError):
    """An exhaustive routine was asked to run on a too-large instance."""


class InputError(ValueError):
    """Malformed vector data or file contents."""
