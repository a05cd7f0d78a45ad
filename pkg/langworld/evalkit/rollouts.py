import logging

import numpy as np

from langworld.evalkit.policies import begin_episode
from langworld.skills.executor import compile_plan, run_plan
from langworld.world.dynamics import episode_success, reset, step
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)


def run_episode(policy, task, seed):
    """Full-horizon rollout; returns the visited states and the success flag."""
    task = get_task(task)
    begin_episode(policy, task.name, seed)
    state = reset(task, seed)
    trajectory = [state]
    for _ in range(task.horizon):
        state = step(state, policy.act(task.name, state))
        trajectory.append(state)
    return trajectory, episode_success(task, trajectory)


def run_plan_with_scripted_skills(plan, task, seed):
    """Roll out a grounded plan; ungrounded plans fail to compile."""
    task = get_task(task)
    states, _ = run_plan(task, compile_plan(task, plan.pairs), seed)
    return states, episode_success(task, states)


def plan_success_rate(plan, task, seeds):
    flags = [run_plan_with_scripted_skills(plan, task, seed)[1] for seed in seeds]
    return float(np.mean(flags))


def best_of_plans(plans, task, seeds):
    """Best success rate over plan variants, and every variant's rate."""
    if not plans:
        raise ValueError("best_of_plans needs at least one plan")
    rates = [plan_success_rate(plan, task, seeds) for plan in plans]
    logger.info("%s: plan success rates %s", get_task(task).name, rates)
    return max(rates), rates
