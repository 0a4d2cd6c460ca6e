"""Exception hierarchy.

``GuardExceeded`` subclasses map to CLI exit code 2, ``CheckFailure`` to 3.
"""


class OrbitSiteError(Exception):
    """Base class for all package errors."""


class GuardExceeded(OrbitSiteError):
    """A configured size guard was exceeded."""


class OrderGuardExceeded(GuardExceeded):
    pass


class ChainCountGuardExceeded(GuardExceeded):
    pass


class RankGuardExceeded(GuardExceeded):
    pass


class EnumerationGuardExceeded(GuardExceeded):
    pass


class MatrixGuardExceeded(GuardExceeded):
    pass


class EmptyCategory(OrbitSiteError):
    pass


class MalformedPermutation(OrbitSiteError, ValueError):
    pass


class MalformedDescriptor(OrbitSiteError, ValueError):
    pass


class NotASubgroupPair(OrbitSiteError, ValueError):
    pass


class EmptyObjectSet(OrbitSiteError, ValueError):
    pass


class MixedCodomain(OrbitSiteError, ValueError):
    pass


class ApexMismatch(OrbitSiteError, ValueError):
    pass


class IllDefinedMap(OrbitSiteError, ValueError):
    pass


class NotASheaf(OrbitSiteError):
    pass


class NotInvertible(OrbitSiteError):
    pass


class WellDefinednessFailure(OrbitSiteError):
    pass


class CheckFailure(OrbitSiteError):
    """An internal consistency check failed; carries a machine-readable witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
