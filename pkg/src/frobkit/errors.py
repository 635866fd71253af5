"""Exception types shared across the package."""


class FrobkitError(Exception):
    """Base class for all package errors."""


class InputError(FrobkitError, ValueError):
    """Malformed or inconsistent user input (bad text, ring mismatch, ...)."""


class UnsupportedInputError(InputError):
    """Input outside the supported fragment.

    Raised e.g. when minimal primes are requested for a non-monomial defining
    ideal without the caller supplying them explicitly.
    """


class BudgetError(FrobkitError, RuntimeError):
    """A computation exceeded the configured degree or basis-size budget."""
