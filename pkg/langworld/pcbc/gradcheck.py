"""Analytic gradients against central finite differences."""

import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from langworld.exceptions import GradientCheckError
from langworld.pcbc.attention import attention_weights
from langworld.pcbc.encoder import count_matrix
from langworld.pcbc.models import Architecture, BlockError, GradCheckReport, PolicyParams
from langworld.pcbc.network import forward, init_params, leaves, mse
from langworld.rng import counter_rng
from langworld.skills.library import DESCRIPTIONS
from langworld.world.dynamics import OBSERVATION_SIZE
from langworld.world.tasks import TASKS

logger = logging.getLogger(__name__)

# relative errors are taken against at least this magnitude
GRADIENT_FLOOR = 1e-6


@dataclass(eq=False)
class GradCheckInstance:
    architecture: Architecture
    params: PolicyParams
    observations: np.ndarray
    mixing: np.ndarray
    counts: np.ndarray
    targets: np.ndarray

    def loss(self, params=None):
        weights = leaves(params or self.params)
        return mse(forward(weights, self.observations, self.mixing, self.counts), self.targets)

    def gradients(self):
        weights = leaves(self.params)
        loss = mse(forward(weights, self.observations, self.mixing, self.counts), self.targets)
        loss.backward()
        return {name: weights[name].grad for name in self.params.names}


def random_instance(architecture, seed, batch=6, latent_dim=8, vocab_size=64, hidden=8):
    """A small random problem; PCBC mixes several skills, DC picks one description."""
    architecture = Architecture(architecture)
    rng = counter_rng(seed, "gradcheck", architecture.value)
    params = init_params(seed, latent_dim=latent_dim, vocab_size=vocab_size, hidden=hidden)
    if architecture is Architecture.PCBC:
        texts = [DESCRIPTIONS[i] for i in rng.choice(len(DESCRIPTIONS), size=5, replace=False)]
        mixing = np.stack([attention_weights(rng.integers(0, 2, size=len(texts))) for _ in range(batch)])
    else:
        texts = [task.description for task in TASKS[:5]]
        mixing = np.eye(len(texts))[rng.integers(0, len(texts), size=batch)]
    return GradCheckInstance(
        architecture=architecture,
        params=params,
        observations=rng.uniform(-1.0, 1.0, size=(batch, OBSERVATION_SIZE)),
        mixing=mixing,
        counts=count_matrix(texts, vocab_size),
        targets=rng.uniform(-1.0, 1.0, size=(batch, 4)),
    )


def relative_error(analytic, numeric):
    difference = abs(analytic - numeric)
    if difference == 0.0:
        return 0.0
    return difference / max(abs(analytic), abs(numeric), GRADIENT_FLOOR)


def grad_check(model, tolerance=None, step=None, entries_per_block=None, seed=0, strict=False):
    """Worst relative error per parameter block.

    Blocks larger than ``entries_per_block`` are checked on a seeded sample
    of entries.
    """
    conf = settings.LANGWORLD["GRADCHECK"]
    tolerance = conf["TOLERANCE"] if tolerance is None else tolerance
    step = conf["STEP"] if step is None else step
    entries_per_block = entries_per_block or conf["ENTRIES_PER_BLOCK"]
    analytic = model.gradients()
    rng = counter_rng(seed, "gradcheck-entries")
    blocks = []
    for name in model.params.names:
        values = model.params[name]
        flat = np.arange(values.size)
        if values.size > entries_per_block:
            flat = np.sort(rng.choice(values.size, size=entries_per_block, replace=False))
        worst = None
        shifted = model.params.copy()
        for position in flat:
            index = np.unravel_index(position, values.shape)
            shifted.arrays[name][index] = values[index] + step
            upper = model.loss(shifted).data.item()
            shifted.arrays[name][index] = values[index] - step
            lower = model.loss(shifted).data.item()
            shifted.arrays[name][index] = values[index]
            numeric = (upper - lower) / (2.0 * step)
            error = BlockError(
                name=name,
                index=tuple(int(i) for i in index),
                analytic=float(analytic[name][index]),
                numeric=numeric,
                relative_error=relative_error(float(analytic[name][index]), numeric),
            )
            if worst is None or error.relative_error > worst.relative_error:
                worst = error
        blocks.append(worst)
    report = GradCheckReport(tolerance=tolerance, blocks=tuple(blocks))
    logger.info(
        "%s gradient check: max relative error %.3g (tolerance %g)",
        model.architecture.value, report.max_relative_error, tolerance,
    )
    if strict and not report.passed:
        raise GradientCheckError(
            "max relative error %.3g above %g in block %r"
            % (report.max_relative_error, tolerance,
               max(report.blocks, key=lambda block: block.relative_error).name)
        )
    return report
