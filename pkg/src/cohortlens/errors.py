"""Exception types raised by the engine."""


class CohortLensError(Exception):
    """Base class for all engine errors."""


# -- hierarchy construction --

class DuplicateCode(CohortLensError):
    pass


class MissingParent(CohortLensError):
    pass


class MultipleRoots(CohortLensError):
    pass


class CycleDetected(CohortLensError):
    pass


class UnknownCode(CohortLensError):
    pass


class EmptyInput(CohortLensError):
    pass


# -- ingestion --

class ParseError(CohortLensError):
    def __init__(self, message, row=None):
        super().__init__(f"row {row}: {message}" if row is not None else message)
        self.row = row


class UnknownTypeCode(CohortLensError):
    def __init__(self, code, row=None):
        super().__init__(f"unknown type code {code!r}" + (f" at row {row}" if row is not None else ""))
        self.code = code
        self.row = row


class EmptyDataset(CohortLensError):
    pass


class InvalidSpec(CohortLensError):
    pass


# -- querying --

class UnknownAttribute(CohortLensError):
    pass


class UnknownSelection(CohortLensError):
    pass


# -- statistics --

class EmptyCohort(CohortLensError):
    pass


class LeafNode(CohortLensError):
    pass


# -- layout optimization --

class InvalidAlpha(CohortLensError):
    pass


class OutOfBoundsInitial(CohortLensError):
    pass


# -- timeline --

class UnknownEdge(CohortLensError):
    pass


class NoMatchingEntities(CohortLensError):
    pass


# -- service --

class BadConfig(CohortLensError):
    pass
