"""Exception hierarchy shared by all modules."""


class DKWavesError(Exception):
    """Base class for every error raised by dkwaves."""


class DomainError(DKWavesError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class InvalidSpecError(DKWavesError, ValueError):
    """A mode specification violates its quantum-number constraints."""


class UnsupportedRegimeError(DKWavesError, ValueError):
    """The requested physical regime is not handled (e.g. bound states)."""


class UnimplementedCaseError(DKWavesError, NotImplementedError):
    """A case outside the covered set of expansions was requested."""
