"""Exception hierarchy shared by every layer of the package."""


class MergeTreeError(ValueError):
    """Base class for malformed trees and bad tree queries."""


class InvalidTree(MergeTreeError):
    """A tree table breaks one of the structural rules.

    ``node`` is the first offending node id (or None) and ``rule`` a short
    machine-readable tag naming the broken rule.
    """

    rule = "invalid"

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class CycleDetected(InvalidTree):
    rule = "cycle"


class MultipleRoots(InvalidTree):
    rule = "multiple-roots"


class NoRoot(InvalidTree):
    rule = "no-root"


class NonIncreasingEdge(InvalidTree):
    rule = "non-increasing-edge"


class OrphanNode(InvalidTree):
    rule = "orphan"


class UnknownNode(MergeTreeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class TargetOutOfRange(MergeTreeError):
    pass


class ValueNotInteriorToEdge(MergeTreeError):
    pass


# ingestion / file formats

class IngestError(ValueError):
    pass


class EqualAdjacentValues(IngestError):
    pass


class MalformedSeries(IngestError):
    pass


class DocumentSyntaxError(IngestError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateId(DocumentSyntaxError):
    pass


# search

class SearchBudgetExceeded(RuntimeError):
    def __init__(self, budget, epsilon=None):
        msg = f"enumeration budget of {budget} leaf assignments exhausted"
        if epsilon is not None:
            msg += f" at epsilon={epsilon}"
        super().__init__(msg)
        self.budget = budget
        self.epsilon = epsilon


class PathLengthMismatch(RuntimeError):
    """Raised when two paths that augmentation should have aligned differ."""


class InstanceTooLarge(ValueError):
    pass
