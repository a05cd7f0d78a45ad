"""Versioned JSON checkpoints; floats use shortest round-trip repr, so reloads are exact."""

import logging
from pathlib import Path

from langworld.pcbc.models import Architecture
from langworld.pcbc.policies import build_policy
from langworld.pcbc.schemas import CHECKPOINT_VERSION, CheckpointSchema
from langworld.utils import dumps, read_json

logger = logging.getLogger(__name__)


def save_checkpoint(path, architecture, params, step, seed, rng, plans=None, descriptions=None):
    record = CheckpointSchema().dump({
        "version": CHECKPOINT_VERSION,
        "architecture": Architecture(architecture),
        "step": step,
        "seed": seed,
        "params": params,
        "rng": rng,
        "plans": list((plans or {}).values()),
        "descriptions": descriptions or {},
    })
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(record) + "\n", encoding="utf-8")
    logger.info("wrote checkpoint %s (step %d)", path, step)
    return path


def load_checkpoint(path):
    return CheckpointSchema().load(read_json(path))


def load_policy(path):
    checkpoint = load_checkpoint(path)
    return build_policy(
        checkpoint["architecture"],
        checkpoint["params"],
        plans={plan.task: plan for plan in checkpoint["plans"]},
        descriptions=checkpoint["descriptions"] or None,
    )
