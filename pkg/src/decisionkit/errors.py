"""Exception hierarchy shared across the package.

Every error raised by the public API derives from DecisionError so callers
can catch one type at the CLI / service boundary.
"""


class DecisionError(Exception):
    """Base class for all package errors."""


# relation algebra

class MalformedRelation(DecisionError):
    pass


class CapExceeded(DecisionError):
    pass


class CyclicStrictPart(DecisionError):
    pass


# formulation

class NoDecisionProblem(DecisionError):
    pass


class MissingNorms(DecisionError):
    pass


class NotEnumerable(DecisionError):
    pass


class EvaluationFailure(DecisionError):
    pass


class NoDecomposition(DecisionError):
    pass


class NotAggregable(DecisionError):
    pass


# preference statements

class UnknownReference(DecisionError):
    pass


class InconsistentStatements(DecisionError):
    pass


class DependentDimensions(DecisionError):
    """Raised when an importance derivation requires independence that fails.

    Carries the implication discovered between the two dimension groups so
    the caller can report it instead of the verdict.
    """

    def __init__(self, message, implication=None):
        super().__init__(message)
        self.implication = implication


class IntransitiveSwaps(DecisionError):
    pass


class IncompleteElicitation(DecisionError):
    pass


# aggregation

class NoAdmissibleArchetype(DecisionError):
    pass


class CarrierMismatch(DecisionError):
    pass


class NotCommensurable(DecisionError):
    pass


class NotTotalImportance(DecisionError):
    pass


class NotRepresentable(DecisionError):
    pass


class UnconfiguredNode(DecisionError):
    pass


# solvers

class MalformedNorms(DecisionError):
    pass


class AmbiguousAssignment(DecisionError):
    pass


class BadK(DecisionError):
    pass


class Infeasible(DecisionError):
    pass


class InvalidFixture(DecisionError):
    pass


# process engine / interface

class ProtocolViolation(DecisionError):
    pass


class UnsupportedVersion(DecisionError):
    pass


class ParseError(DecisionError):
    pass
