__all__ = [
    'CapExceededError',
    'ClassificationError',
    'ConfigError',
    'GroupSpecError',
    'MissingEntryError',
    'PrecisionError',
    'SectionError',
    'TPOError',
    'TPOException',
    'UnsupportedRankError',
]


class TPOException(Exception):
    pass


class TPOError(TPOException):
    pass


class PrecisionError(TPOError):
    """
    Raised when an operation needs torsion points outside the working level
    ``Λ*[p^N]`` of its context.
    """


class CapExceededError(TPOError):
    pass


class UnsupportedRankError(TPOError):
    pass


class GroupSpecError(TPOError):
    pass


class SectionError(TPOError):
    pass


class ClassificationError(TPOError):
    pass


class MissingEntryError(TPOError, KeyError):
    pass


class ConfigError(TPOError):
    pass
