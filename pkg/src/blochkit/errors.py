"""Exception and warning types raised across the package."""


class BlochKitError(Exception):
    pass


class ParseError(BlochKitError, ValueError):
    """Malformed symbol text.  ``pos`` is the 0-based character offset."""

    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class InvalidSelfMap(BlochKitError, ValueError):
    """A compiled symbol leaves the closed disk; ``witness`` is the offending point."""

    def __init__(self, message, witness=None, value=None):
        self.witness = witness
        self.value = value
        super().__init__(message)


class DegenerateSymbol(BlochKitError, ValueError):
    pass


class KTooLarge(BlochKitError, ValueError):
    pass


class HypothesisViolated(BlochKitError):
    """Some proper subset of the scalars sums to 0, so the structural test does not apply; carries that subset."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class PreconditionViolated(BlochKitError, ValueError):
    pass


class ConfigError(BlochKitError):
    def __init__(self, key, reason):
        self.key = key
        self.reason = reason
        super().__init__(f"{key}: {reason}" if key else reason)


class TruncationWarning(UserWarning):
    pass
