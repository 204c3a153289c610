"""Exception hierarchy shared across the package."""


class KemodError(Exception):
    """Base class for all package errors."""


class InputError(KemodError):
    """Malformed input: bad files, domain mismatches, invalid parameters."""


class MathRefusal(KemodError):
    """A mathematically well-posed refusal (e.g. bundle of a non-CJT module)."""


class ConsistencyError(KemodError):
    """Two independent computation routes disagreed; never silently resolved."""
