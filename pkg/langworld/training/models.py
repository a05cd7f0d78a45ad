import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from django.conf import settings

from langworld.world.models import TaskSet
from langworld.world.tasks import list_tasks


class DataConfig(enum.Enum):
    """How many demonstrations of which tasks a model is trained on."""

    ZERO_SHOT = "zero_shot"
    FEW_SHOT = "few_shot"
    ONE_SHOT = "one_shot"

    @property
    def demos_per_task(self):
        conf = settings.LANGWORLD["DEMOS"]
        if self is DataConfig.FEW_SHOT:
            return conf["FEW_SHOT_PER_TASK"]
        return conf["ZERO_SHOT_PER_TASK"]

    @property
    def demo_tasks(self):
        if self is DataConfig.FEW_SHOT:
            return [task.name for task in list_tasks(TaskSet.FULL20)]
        return [task.name for task in list_tasks(TaskSet.BASE10)]

    @property
    def targets(self):
        """One model per target; ``None`` means a single model."""
        if self is DataConfig.ONE_SHOT:
            return [task.name for task in list_tasks(TaskSet.FULL20)]
        return [None]


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 120
    learning_rate: float = 1e-3
    steps: int = 5000
    seed: int = 0
    betas: Tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    log_every: int = 100

    def __post_init__(self):
        if not 0 < self.batch_size < 200:
            raise ValueError("batch_size must be below 200, got %d" % self.batch_size)

    @classmethod
    def defaults(cls, **overrides):
        conf = settings.LANGWORLD["TRAIN"]
        values = dict(
            batch_size=conf["BATCH_SIZE"],
            learning_rate=conf["LEARNING_RATE"],
            steps=conf["STEPS"],
            betas=tuple(conf["BETAS"]),
            eps=conf["EPS"],
            log_every=conf["LOG_EVERY"],
        )
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True)
class TrainingSample:
    task: str
    observation: np.ndarray
    action: np.ndarray


@dataclass(eq=False)
class TaskData:
    """Every demo timestep of one task with its conditioning row."""

    task: str
    observations: np.ndarray
    actions: np.ndarray
    mixing: np.ndarray

    def __len__(self):
        return len(self.actions)


@dataclass(eq=False)
class Minibatch:
    tasks: Tuple[str, ...]
    observations: np.ndarray
    actions: np.ndarray
    mixing: np.ndarray

    def __len__(self):
        return len(self.tasks)

    def samples(self):
        for task, observation, action in zip(self.tasks, self.observations, self.actions):
            yield TrainingSample(task, observation, action)

    def counts(self):
        counts = {}
        for task in self.tasks:
            counts[task] = counts.get(task, 0) + 1
        return counts


@dataclass(eq=False)
class TrainResult:
    architecture: str
    data: DataConfig
    target: Optional[str]
    params: object
    policy: object
    log: list
    checkpoint: Optional[str] = None
    log_file: Optional[str] = None
