import csv
import io
import os
import tempfile
from dataclasses import astuple, dataclass, field, fields
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np


@dataclass(frozen=True)
class TraceRow:
    step: int
    reward: float
    workers: int
    target_workers: int
    pending_jobs: int
    completed_this_step: int
    expired_this_step: int
    validated_this_step: int
    rejected_this_step: int
    total_energy_kwh: float
    mean_reputation: float
    subsidy_pool: float


COLUMNS = tuple(f.name for f in fields(TraceRow))


@dataclass
class SimTrace:
    rows: List[TraceRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def append(self, row: TraceRow):
        if self.rows and row.step <= self.rows[-1].step:
            raise ValueError(f"trace steps must increase, got {row.step} after {self.rows[-1].step}")
        self.rows.append(row)

    def column(self, name: str) -> np.ndarray:
        if name not in COLUMNS:
            raise KeyError(name)
        return np.array([getattr(row, name) for row in self.rows])

    def to_csv(self) -> str:
        return render_csv(COLUMNS, (astuple(row) for row in self.rows))

    def write_csv(self, path: Union[str, Path]):
        write_atomic(path, self.to_csv())


def format_cell(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".6g")
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(value) for value in row])
    return buffer.getvalue()


# the target is either complete or untouched
def write_atomic(path: Union[str, Path], text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
