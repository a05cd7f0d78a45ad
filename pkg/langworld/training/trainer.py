"""Behavioral cloning for PCBC and DC policies."""

import logging
import time
from pathlib import Path

from langworld.exceptions import DemoGenerationError, MissingPlanError
from langworld.pcbc.checkpoints import save_checkpoint
from langworld.pcbc.models import Architecture
from langworld.pcbc.network import init_params, leaves
from langworld.pcbc.policies import build_policy
from langworld.rng import counter_rng
from langworld.skills.demos import generate_demos
from langworld.training.datasets import build_dataset, task_data
from langworld.training.loss import bc_loss
from langworld.training.models import DataConfig, TrainResult
from langworld.training.optim import Adam
from langworld.training.samplers import sample_colearning, sample_uniform
from langworld.training.schemas import TrainLogRowSchema
from langworld.utils import parallel_map, write_csv
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)

LOG_FIELDS = ("step", "loss", "wall_ms")


def run_name(architecture, target=None):
    architecture = Architecture(architecture).value
    return architecture if target is None else "%s-%s" % (architecture, target)


def collect_demos(data, seed, jobs=1):
    """Demonstrations a data configuration needs: (per-task demo set, target demos)."""
    data = DataConfig(data)
    demos = generate_demos(data.demo_tasks, data.demos_per_task, seed, jobs=jobs)
    target_demos = None
    if data is DataConfig.ONE_SHOT:
        target_demos = generate_demos(data.targets, 1, seed, jobs=jobs)
    return demos, target_demos


def _check_inputs(architecture, tasks, demos, plans, target, target_demos):
    for task in tasks:
        if not demos.demos.get(task):
            raise DemoGenerationError(task, "no demonstrations to train on")
    if target is not None and not target_demos:
        raise DemoGenerationError(target, "no target demonstration to co-learn from")
    if architecture is Architecture.PCBC:
        needed = list(tasks) + ([target] if target else [])
        missing = [task for task in needed if task not in (plans or {})]
        if missing:
            raise MissingPlanError("no grounded plan for %s" % ", ".join(missing))


def train(config, data, architecture, demos, plans=None, target=None, target_demos=None, out=None,
          tasks=None):
    """Run ``config.steps`` Adam updates on the BC loss; deterministic given the seed.

    ``target_demos`` (one_shot only) lists demonstrations of ``target``;
    the first one is co-learned with every base task. ``tasks`` narrows the
    demo tasks of the data configuration.
    """
    data = DataConfig(data)
    architecture = Architecture(architecture)
    if data is DataConfig.ONE_SHOT and target is None:
        raise ValueError("one_shot training needs a target task")
    target = get_task(target).name if target else None
    tasks = list(tasks or data.demo_tasks)
    _check_inputs(architecture, tasks, demos, plans, target, target_demos)

    params = init_params(config.seed)
    needed = list(tasks) + ([target] if target and target not in tasks else [])
    pcbc_plans = None
    if architecture is Architecture.PCBC:
        pcbc_plans = {task: plans[task] for task in needed}
    policy = build_policy(architecture, params, plans=pcbc_plans)
    dataset = build_dataset(policy, demos, tasks)
    target_data = task_data(policy, target, target_demos[:1]) if target else None

    rng = counter_rng(config.seed, "sampler", data.value, target or "")
    optimizer = Adam(params, config.learning_rate, config.betas, config.eps)
    name = run_name(architecture, target)
    log = []
    started = time.perf_counter()
    for step in range(config.steps):
        if target_data is not None:
            batch = sample_colearning(dataset, target_data, config.batch_size, rng)
        else:
            batch = sample_uniform(dataset, config.batch_size, rng)
        weights = leaves(params)
        loss = bc_loss(policy, batch, weights)
        loss.backward()
        optimizer.step({key: weights[key].grad for key in params.names})
        log.append({
            "step": step,
            "loss": float(loss.data),
            "wall_ms": round((time.perf_counter() - started) * 1000.0, 3),
        })
        if step % config.log_every == 0 or step == config.steps - 1:
            logger.info("%s step %d/%d loss %.6f", name, step, config.steps, float(loss.data))

    result = TrainResult(
        architecture=architecture.value,
        data=data,
        target=target,
        params=params,
        policy=build_policy(architecture, params, plans=pcbc_plans),
        log=log,
    )
    if out is not None:
        out = Path(out)
        result.log_file = str(write_csv(
            out / ("%s.log.csv" % name), LOG_FIELDS, TrainLogRowSchema(many=True).dump(log)
        ))
        result.checkpoint = str(save_checkpoint(
            out / ("%s.ckpt.json" % name),
            architecture,
            params,
            config.steps,
            config.seed,
            rng,
            plans=pcbc_plans,
            descriptions=None if architecture is Architecture.PCBC else policy.descriptions,
        ))
    return result


def _train_job(job):
    return train(*job)


def train_models(config, data, architecture, demos, plans=None, target_demos=None, out=None, jobs=1):
    """One model, or one per target for one_shot; targets train in parallel."""
    data = DataConfig(data)
    jobs_list = []
    for target in data.targets:
        targets = target_demos.demos.get(target) if target and target_demos else None
        jobs_list.append((config, data, architecture, demos, plans, target, targets, out))
    return parallel_map(_train_job, jobs_list, jobs)
