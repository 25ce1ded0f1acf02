"""Exception hierarchy shared across the engine."""


class PtaError(Exception):
    """Base class for all engine errors."""


class DocumentSyntaxError(PtaError):
    """Malformed JSON document. Carries line/column of the failure."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaError(PtaError):
    """Missing or unexpected field. Carries a JSON-pointer-style path."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{message} at {path}")
        self.path = path


class InvariantError(PtaError):
    """A structural invariant of a loaded model is violated."""


# goal net / interpreter

class UnknownNode(PtaError):
    pass


class UnboundTask(PtaError):
    def __init__(self, task_name: str, transition_id: str | None = None):
        where = f" (transition {transition_id})" if transition_id else ""
        super().__init__(f"no registered task named {task_name!r}{where}")
        self.task_name = task_name
        self.transition_id = transition_id


class MissingDecision(PtaError):
    pass


class InvalidDecision(PtaError):
    pass


class StepLimitExceeded(PtaError):
    pass


# fcm

class NonFiniteInput(PtaError):
    pass


class DimensionMismatch(PtaError):
    pass


class UnknownLeaf(PtaError):
    pass


class NonLeafClamp(PtaError):
    pass


# events

class TaxonomyViolation(PtaError):
    pass


class ClockRegression(PtaError):
    pass


# knowledge base

class UnknownMap(PtaError):
    pass


class UnknownBlank(PtaError):
    pass


class UnknownLabel(PtaError):
    pass


class PreconditionViolation(PtaError):
    pass


# reasoning

class EmptyBatch(PtaError):
    pass


class NoActiveTeachingOpportunity(PtaError):
    pass


class NoLearntKnowledge(PtaError):
    pass


# session

class TraceInputMismatch(PtaError):
    pass


class TraceExhausted(PtaError):
    pass
