"""Success rates per task, CDFs over tasks, and min/max bands over runs."""

import logging
import math
from collections import OrderedDict

from langworld.evalkit.models import CdfBand, CdfPoint, EvalResult, ReportRow
from langworld.evalkit.rollouts import run_episode
from langworld.utils import parallel_map
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)


def _task_result(job):
    policy, task, seeds = job
    flags = tuple(bool(run_episode(policy, task, seed)[1]) for seed in seeds)
    result = EvalResult(policy=policy.id, task=task, seeds=tuple(seeds), flags=flags)
    logger.info("%s on %s: %d/%d", policy.id, task, sum(flags), len(flags))
    return result


def evaluate(policy, tasks, n_eps, seed0=0, jobs=1):
    """Seeds ``seed0 .. seed0 + n_eps - 1`` on every task, in task order."""
    if n_eps < 1:
        raise ValueError("n_eps must be at least 1, got %r" % (n_eps,))
    seeds = list(range(seed0, seed0 + n_eps))
    names = [get_task(task).name for task in tasks]
    return parallel_map(_task_result, [(policy, name, seeds) for name in names], jobs)


def success_cdf(results):
    """Point k holds the k-th largest success rate."""
    if not results:
        raise ValueError("success_cdf needs at least one result")
    levels = sorted((result.success_rate for result in results), reverse=True)
    return [CdfPoint(rank=k, level=level) for k, level in enumerate(levels, start=1)]


def _mean(values):
    return math.fsum(values) / len(values)


def summarize(runs):
    """Collapse repeated runs (one list of results per seed) into report rows."""
    grouped = OrderedDict()
    for results in runs:
        for result in results:
            grouped.setdefault((result.policy, result.task), []).append(result)
    rows = []
    for (policy, task), results in grouped.items():
        rates = [result.success_rate for result in results]
        rows.append(ReportRow(
            policy=policy,
            task=task,
            n=results[0].n,
            success_rate=_mean(rates),
            min=min(rates),
            max=max(rates),
        ))
    return rows


def cdf_bands(runs):
    """Per policy: mean CDF over runs with the min and max at each rank."""
    per_policy = OrderedDict()
    for results in runs:
        by_policy = OrderedDict()
        for result in results:
            by_policy.setdefault(result.policy, []).append(result)
        for policy, policy_results in by_policy.items():
            levels = [point.level for point in success_cdf(policy_results)]
            per_policy.setdefault(policy, []).append(levels)
    bands = []
    for policy, curves in per_policy.items():
        width = min(len(curve) for curve in curves)
        columns = [[curve[k] for curve in curves] for k in range(width)]
        bands.append(CdfBand(
            policy=policy,
            points=tuple(CdfPoint(rank=k + 1, level=_mean(column)) for k, column in enumerate(columns)),
            low=tuple(min(column) for column in columns),
            high=tuple(max(column) for column in columns),
        ))
    return bands
