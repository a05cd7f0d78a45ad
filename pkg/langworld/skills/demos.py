"""Demonstration generation and the on-disk demo set.

A demo set directory holds ``<task>.jsonl`` (one line per step, every
kept episode in seed order) and ``manifest.json`` listing the kept seeds
and every attempt.
"""

import logging
from collections import defaultdict
from pathlib import Path

import numpy as np
from django.conf import settings
from marshmallow import ValidationError

import langworld
from langworld.exceptions import DemoGenerationError
from langworld.skills.executor import compile_plan, run_expert
from langworld.skills.experts import expert_plan
from langworld.skills.models import DemoSet, Demonstration
from langworld.skills.schemas import DemoManifestSchema, DemoStepSchema
from langworld.utils import parallel_map, read_json, read_jsonl, write_json, write_jsonl
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


def retry_budget(n_per_task):
    conf = settings.LANGWORLD["DEMOS"]
    return n_per_task * conf["RETRY_FACTOR"] + conf["RETRY_SLACK"]


def _task_demos(job):
    name, n_per_task, seed = job
    plan = compile_plan(name, expert_plan(name).steps)
    demos, attempts = [], []
    for offset in range(retry_budget(n_per_task)):
        if len(demos) == n_per_task:
            break
        _, demo = run_expert(name, plan, seed + offset)
        attempts.append((seed + offset, demo.success))
        if demo.success:
            demos.append(demo)
    if len(demos) < n_per_task:
        raise DemoGenerationError(
            name,
            "only %d of %d episodes succeeded within %d attempts"
            % (len(demos), n_per_task, len(attempts)),
        )
    logger.info("%s: %d demos from %d attempts", name, len(demos), len(attempts))
    return name, demos, attempts


def generate_demos(tasks, n_per_task, seed, jobs=1):
    """Successful expert episodes; seeds ``seed``, ``seed + 1``, ... per task."""
    if n_per_task < 1:
        raise ValueError("n_per_task must be at least 1, got %r" % (n_per_task,))
    names = [get_task(task).name for task in tasks]
    demoset = DemoSet(seed=seed, n_per_task=n_per_task)
    for name, demos, attempts in parallel_map(
        _task_demos, [(name, n_per_task, seed) for name in names], jobs
    ):
        demoset.demos[name] = demos
        demoset.attempts[name] = attempts
    return demoset


def write_demoset(demoset, directory):
    directory = Path(directory)
    written = []
    manifest = {
        "version": langworld.__version__,
        "seed": demoset.seed,
        "n_per_task": demoset.n_per_task,
        "tasks": {},
    }
    for name, demos in demoset.demos.items():
        filename = "%s.jsonl" % name
        written.append(write_jsonl(directory / filename, _records(demos)))
        manifest["tasks"][name] = {
            "seeds": [demo.seed for demo in demos],
            "attempts": [
                {"seed": attempt_seed, "success": success}
                for attempt_seed, success in demoset.attempts.get(name, [])
            ],
            "steps": len(demos[0]) if demos else 0,
            "file": filename,
        }
    written.append(write_json(directory / MANIFEST, DemoManifestSchema().dump(manifest)))
    return written


def _records(demos):
    schema = DemoStepSchema()
    for demo in demos:
        for t, (observation, action) in enumerate(zip(demo.observations, demo.actions)):
            yield schema.dump(
                {
                    "seed": demo.seed,
                    "t": t,
                    "observation": observation.tolist(),
                    "action": action.tolist(),
                }
            )


def read_demoset(directory, tasks=None):
    """Load a demo set, optionally only some of its tasks."""
    directory = Path(directory)
    manifest = DemoManifestSchema().load(read_json(directory / MANIFEST))
    demoset = DemoSet(seed=manifest["seed"], n_per_task=manifest["n_per_task"])
    wanted = None if tasks is None else {get_task(task).name for task in tasks}
    schema = DemoStepSchema()
    for name, entry in manifest["tasks"].items():
        if wanted is not None and name not in wanted:
            continue
        steps = defaultdict(list)
        for record in read_jsonl(directory / entry["file"]):
            record = schema.load(record)
            steps[record["seed"]].append(record)
        demos = []
        for seed in entry["seeds"]:
            records = sorted(steps[seed], key=lambda record: record["t"])
            if len(records) != entry["steps"]:
                raise ValidationError(
                    {entry["file"]: ["seed %d has %d steps, expected %d"
                                     % (seed, len(records), entry["steps"])]}
                )
            demos.append(
                Demonstration(
                    task=name,
                    seed=seed,
                    observations=np.array([r["observation"] for r in records], dtype=np.float64),
                    actions=np.array([r["action"] for r in records], dtype=np.float64),
                    success=True,
                )
            )
        demoset.demos[name] = demos
        demoset.attempts[name] = [(a["seed"], a["success"]) for a in entry["attempts"]]
    return demoset
