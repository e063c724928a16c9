from abc import ABC, abstractmethod

from .market import JobRecord
from .poui import JobStatus
from .snapshot import SnapshotReader
from .staking import ValidationOutcome
from .trace import TraceRow


#
# The SimulationObserver is handed to the harness to watch a run as it happens. The harness calls it
# synchronously on the simulation thread; an observer must not mutate the state it is shown.
#


class SimulationObserver(ABC):
    #
    # on_transition is called after every job status change, with the job already in its new status.
    #
    @abstractmethod
    def on_transition(self, job: JobRecord, old: JobStatus, new: JobStatus):
        pass

    #
    # on_validation is called once per completed job as soon as its panel has voted, before settlement.
    #
    @abstractmethod
    def on_validation(self, job: JobRecord, outcome: ValidationOutcome):
        pass

    #
    # on_step is called at the end of each step with a reader over the final state of that step and the
    # row that was appended to the trace.
    #
    @abstractmethod
    def on_step(self, step: int, reader: SnapshotReader, row: TraceRow):
        pass


class NullObserver(SimulationObserver):
    def on_transition(self, job: JobRecord, old: JobStatus, new: JobStatus):
        pass

    def on_validation(self, job: JobRecord, outcome: ValidationOutcome):
        pass

    def on_step(self, step: int, reader: SnapshotReader, row: TraceRow):
        pass
