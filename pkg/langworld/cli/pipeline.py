"""Demos, plans, training and evaluation glued together for the commands."""

import logging
from dataclasses import replace
from pathlib import Path

from langworld.evalkit.evaluation import cdf_bands, evaluate, summarize
from langworld.evalkit.policies import PlanPolicy, RandomPolicy, ScriptedPolicy
from langworld.evalkit.reports import write_report
from langworld.exceptions import MissingPlanError
from langworld.pcbc.checkpoints import load_policy
from langworld.pcbc.models import Architecture
from langworld.plans.seeding import task_plans
from langworld.skills.demos import MANIFEST, generate_demos, read_demoset
from langworld.training.models import DataConfig
from langworld.training.trainer import collect_demos, train, train_models
from langworld.world.models import TaskSet
from langworld.world.tasks import list_tasks

logger = logging.getLogger(__name__)

FULL = [task.name for task in list_tasks(TaskSet.FULL20)]
HELD_OUT = [task.name for task in list_tasks(TaskSet.FULL20) if not task.is_base]
EXPERIMENTS = ("zero-shot", "few-shot", "one-shot", "scripted")


def plans_for(config, tasks):
    return task_plans(tasks, config.plan_source)


def training_tasks(data):
    data = DataConfig(data)
    return sorted(set(data.demo_tasks) | {target for target in data.targets if target})


def load_demos(data, seed, directory=None, jobs=1):
    """(demo set, one_shot target demos, input files) for a data configuration."""
    data = DataConfig(data)
    if directory is None:
        demos, target_demos = collect_demos(data, seed, jobs)
        return demos, target_demos, []
    demos = read_demoset(directory, tasks=data.demo_tasks)
    target_demos = None
    if data is DataConfig.ONE_SHOT:
        target_demos = generate_demos(data.targets, 1, seed, jobs=jobs)
    return demos, target_demos, [Path(directory) / MANIFEST]


def evaluation_policy(kind, config, tasks, checkpoint=None, seed=0):
    """A policy ready to run on ``tasks``; PCBC gets plans for tasks it never saw."""
    if kind == "scripted":
        return ScriptedPolicy()
    if kind == "plans":
        return PlanPolicy(plans_for(config, tasks))
    if kind == "random":
        return RandomPolicy(seed)
    if checkpoint is None:
        raise MissingPlanError("a %s evaluation needs a --checkpoint" % kind)
    policy = load_policy(checkpoint)
    if policy.architecture.value != kind:
        raise ValueError("%s holds a %s policy, not %s" % (checkpoint, policy.architecture.value, kind))
    if policy.architecture is Architecture.PCBC:
        missing = [task for task in tasks if task not in policy.plans]
        if missing:
            policy = policy.with_plans(plans_for(config, missing))
    return policy


def run_seed0(config, run):
    return config.eval_seed0 + run * config.eval_episodes


def _scripted_runs(config, seed, jobs):
    plans = PlanPolicy(plans_for(replace(config, plan_source="corpus"), FULL))
    runs = []
    for run in range(config.eval_seeds):
        seed0 = run_seed0(config, run) + seed
        runs.append(
            evaluate(ScriptedPolicy(), FULL, config.eval_episodes, seed0, jobs)
            + evaluate(plans, FULL, config.eval_episodes, seed0, jobs)
        )
    return runs


def _learned_runs(config, data, seed, out, jobs):
    """Train PCBC and DC once per seed; evaluate each on every task it is scored on."""
    data = DataConfig(data)
    plans = plans_for(config, training_tasks(data))
    runs, checkpoints, logs = [], [], []
    for run in range(config.eval_seeds):
        run_seed = seed + run
        demos, target_demos, _ = collect_demos(data, run_seed, jobs)
        train_config = replace(config.train, seed=run_seed)
        models = Path(out) / "models" / ("seed-%d" % run_seed)
        seed0 = run_seed0(config, run) + seed
        results = []
        for architecture in Architecture:
            if data is DataConfig.ONE_SHOT:
                trained = train_models(train_config, data, architecture, demos, plans,
                                       target_demos, models, jobs)
                for result in trained:
                    results += evaluate(result.policy, [result.target], config.eval_episodes, seed0)
            else:
                result = train(train_config, data, architecture, demos, plans, out=models)
                policy = result.policy
                if architecture is Architecture.PCBC:
                    policy = policy.with_plans(plans_for(config, FULL))
                results += evaluate(policy, FULL, config.eval_episodes, seed0, jobs)
                trained = [result]
            checkpoints += [result.checkpoint for result in trained]
            logs += [result.log_file for result in trained]
        runs.append(results)
    return runs, checkpoints, logs


def run_experiment(name, config, seed, out, jobs=1):
    """Reproduce one data configuration end to end; returns (outputs, volatile outputs)."""
    if name not in EXPERIMENTS:
        raise ValueError("unknown experiment %r (known: %s)" % (name, ", ".join(EXPERIMENTS)))
    out = Path(out)
    checkpoints, logs = [], []
    if name == "scripted":
        runs = _scripted_runs(config, seed, jobs)
    else:
        data = DataConfig(name.replace("-", "_"))
        runs, checkpoints, logs = _learned_runs(replace(config, data=data), data, seed, out, jobs)
    written = write_report(summarize(runs), cdf_bands(runs), out, runs=runs)
    logger.info("%s experiment finished: %d runs", name, len(runs))
    return written + checkpoints, logs
