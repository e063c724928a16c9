class PoUIError(Exception):
    pass


class RangeViolation(PoUIError):
    def __init__(self, field: str, value, allowed: str):
        self.field = field
        self.value = value
        self.allowed = allowed
        super().__init__(f"{field}={value!r} is out of range, allowed: {allowed}")


class EvenValidatorCount(PoUIError):
    def __init__(self, k: int):
        self.k = k
        super().__init__(f"validators_per_task must be odd to avoid tied votes, got {k}")


class ConfigError(PoUIError):
    pass


class ScreeningRejected(PoUIError):
    def __init__(self, poster, reputation: float, reason: str = "reputation below threshold"):
        self.poster = poster
        self.reputation = reputation
        self.reason = reason
        super().__init__(f"job from poster {poster} rejected at screening ({reason}, reputation {reputation:.4f})")


class JobNotAvailable(PoUIError):
    def __init__(self, job_id: int):
        self.job_id = job_id
        super().__init__(f"job {job_id} is not available for acceptance")


class InsufficientPosterFunds(PoUIError):
    def __init__(self, poster, needed, available):
        self.poster = poster
        self.needed = needed
        self.available = available
        super().__init__(f"poster {poster} cannot fund {needed} coins (balance {available})")


class SubsidyPoolExhausted(PoUIError):
    def __init__(self, needed, available):
        self.needed = needed
        self.available = available
        super().__init__(f"subsidy pool cannot fund {needed} coins (pool {available})")


class NotYetDue(PoUIError):
    def __init__(self, job_id: int, due_at: int, now: int):
        self.job_id = job_id
        self.due_at = due_at
        self.now = now
        super().__init__(f"job {job_id} is due at step {due_at}, now is {now}")


class WrongStatus(PoUIError):
    def __init__(self, job_id: int, status, expected):
        self.job_id = job_id
        self.status = status
        self.expected = expected
        super().__init__(f"job {job_id} is {status.name}, expected {expected.name}")


class IllegalTransition(PoUIError):
    def __init__(self, job_id: int, old, new):
        self.job_id = job_id
        self.old = old
        self.new = new
        super().__init__(f"job {job_id} cannot move from {old.name} to {new.name}")


class InsufficientValidators(PoUIError):
    def __init__(self, needed: int, available: int):
        self.needed = needed
        self.available = available
        super().__init__(f"need {needed} eligible validators, only {available} available")


class SelfValidation(PoUIError):
    def __init__(self, worker):
        self.worker = worker
        super().__init__(f"worker {worker} cannot validate its own work")


class UnknownNode(PoUIError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"unknown node {node}")


class MissingRole(PoUIError):
    def __init__(self, node, role):
        self.node = node
        self.role = role
        super().__init__(f"node {node} does not hold role {role.name}")


class InsufficientFunds(PoUIError):
    def __init__(self, node, requested, available):
        self.node = node
        self.requested = requested
        self.available = available
        super().__init__(f"node {node} requested {requested} coins, only {available} available")


class ZeroWorkers(PoUIError):
    def __init__(self):
        super().__init__("worker count is zero, the relative disparity is undefined")


class ConservationViolation(PoUIError):
    def __init__(self, expected, actual):
        self.expected = expected
        self.actual = actual
        super().__init__(f"coin supply drifted: minted {expected}, accounted {actual}")


class StepError(PoUIError):
    def __init__(self, step: int, cause: Exception):
        self.step = step
        self.cause = cause
        super().__init__(f"step {step}: {cause}")


class UsageError(PoUIError):
    UNKNOWN_FLAG = "UnknownFlag"
    MISSING_ARGUMENT = "MissingArgument"
    BAD_VALUE = "BadValue"

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)
