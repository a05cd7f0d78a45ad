"""Minibatch samplers: equal shares per task, or 1:1 target/base co-learning."""

import numpy as np

from langworld.training.models import Minibatch


def _draw(data, count, rng):
    index = rng.integers(0, len(data), size=count)
    return data.observations[index], data.actions[index], data.mixing[index]


def _assemble(parts):
    tasks, observations, actions, mixing = [], [], [], []
    for task, (obs, act, mix) in parts:
        tasks.extend([task] * len(act))
        observations.append(obs)
        actions.append(act)
        mixing.append(mix)
    return Minibatch(
        tasks=tuple(tasks),
        observations=np.concatenate(observations),
        actions=np.concatenate(actions),
        mixing=np.concatenate(mixing),
    )


def sample_uniform(dataset, batch_size, rng):
    """``batch_size / T`` timesteps from each of the T tasks, with replacement."""
    if not dataset:
        raise ValueError("cannot sample from an empty dataset")
    if batch_size % len(dataset):
        raise ValueError(
            "batch size %d is not divisible by the %d tasks" % (batch_size, len(dataset))
        )
    share = batch_size // len(dataset)
    return _assemble((task, _draw(data, share, rng)) for task, data in dataset.items())


def sample_colearning(base, target, batch_size, rng):
    """Half the batch from the target demonstration, half split evenly over base tasks."""
    if not base:
        raise ValueError("co-learning needs at least one base task")
    if batch_size % 2 or batch_size % (2 * len(base)):
        raise ValueError(
            "batch size %d must be divisible by 2 and by 2 x %d base tasks" % (batch_size, len(base))
        )
    share = batch_size // (2 * len(base))
    parts = [(target.task, _draw(target, batch_size // 2, rng))]
    parts.extend((task, _draw(data, share, rng)) for task, data in base.items())
    return _assemble(parts)
