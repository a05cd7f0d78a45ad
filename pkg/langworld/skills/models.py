from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from langworld.world.models import ZERO, Vec3


@dataclass(frozen=True)
class Skill:
    """A stateless linear controller named by a sentence.

    The setpoint is the position of ``reference`` (an object, the goal, or
    the gripper itself) plus ``offset``.
    """

    id: str
    description: str
    reference: str
    offset: Vec3 = ZERO
    gain: float = 1.0
    grip: float = -1.0

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError("skill gain must be positive, got %r" % (self.gain,))
        if not -1.0 <= self.grip <= 1.0:
            raise ValueError("grip command must be in [-1, 1], got %r" % (self.grip,))


@dataclass(frozen=True)
class ExpertPlan:
    task: str
    steps: Tuple[Tuple[str, str], ...]

    @property
    def conditions(self):
        return [condition for condition, _ in self.steps]

    @property
    def skill_ids(self):
        return [skill_id for _, skill_id in self.steps]


@dataclass(eq=False)
class Demonstration:
    task: str
    seed: int
    observations: np.ndarray
    actions: np.ndarray
    success: bool

    def __len__(self):
        return len(self.actions)

    def __eq__(self, other):
        if not isinstance(other, Demonstration):
            return NotImplemented
        return (
            (self.task, self.seed, self.success) == (other.task, other.seed, other.success)
            and np.array_equal(self.observations, other.observations)
            and np.array_equal(self.actions, other.actions)
        )


@dataclass
class DemoSet:
    seed: int
    n_per_task: int
    demos: Dict[str, List[Demonstration]] = field(default_factory=dict)
    attempts: Dict[str, List[Tuple[int, bool]]] = field(default_factory=dict)

    @property
    def tasks(self):
        return list(self.demos)

    def __len__(self):
        return sum(len(demos) for demos in self.demos.values())
