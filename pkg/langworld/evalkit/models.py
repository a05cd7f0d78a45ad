import math
from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class EvalResult:
    """Per-episode success flags of one policy on one task."""

    policy: str
    task: str
    seeds: Tuple[int, ...]
    flags: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.seeds) != len(self.flags):
            raise ValueError(
                "%d seeds but %d success flags" % (len(self.seeds), len(self.flags))
            )
        if not self.seeds:
            raise ValueError("an evaluation needs at least one episode")

    @property
    def n(self):
        return len(self.flags)

    @property
    def success_rate(self):
        return math.fsum(1.0 for flag in self.flags if flag) / len(self.flags)


@dataclass(frozen=True)
class CdfPoint:
    rank: int
    level: float


@dataclass(frozen=True)
class ReportRow:
    """One (policy, task) line of a report: mean rate with its min/max band over runs."""

    policy: str
    task: str
    n: int
    success_rate: float
    min: float
    max: float


@dataclass(frozen=True)
class CdfBand:
    policy: str
    points: Tuple[CdfPoint, ...]
    low: Tuple[float, ...]
    high: Tuple[float, ...]
