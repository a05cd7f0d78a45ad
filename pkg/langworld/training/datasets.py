import logging

import numpy as np

from langworld.exceptions import DemoGenerationError
from langworld.training.models import TaskData
from langworld.world.dynamics import observe, rollout
from langworld.world.models import Action

logger = logging.getLogger(__name__)


def demo_states(demo):
    """Replay a demonstration's actions to recover the states it visited."""
    states = rollout(demo.task, demo.seed, [Action(*(float(v) for v in row)) for row in demo.actions])[:-1]
    if not np.array_equal(np.stack([observe(state) for state in states]), demo.observations):
        raise DemoGenerationError(
            demo.task, "seed %d does not replay to its recorded observations" % demo.seed
        )
    return states


def task_data(policy, task, demos):
    if not demos:
        raise DemoGenerationError(task, "no demonstrations to train on")
    observations, actions, mixing = [], [], []
    for demo in demos:
        if policy.needs_states:
            rows = policy.mixing(task, demo_states(demo))
        else:
            rows = policy.mixing(task, [None] * len(demo))
        observations.append(demo.observations)
        actions.append(demo.actions)
        mixing.append(rows)
    return TaskData(
        task=task,
        observations=np.concatenate(observations),
        actions=np.concatenate(actions),
        mixing=np.concatenate(mixing),
    )


def build_dataset(policy, demoset, tasks):
    dataset = {}
    for task in tasks:
        dataset[task] = task_data(policy, task, demoset.demos.get(task, []))
        logger.debug("%s: %d training timesteps", task, len(dataset[task]))
    return dataset
