import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from langworld.exceptions import InvalidPlanError, LangWorldError
from langworld.queries.evaluator import eval_query
from langworld.queries.grammar import parse_query, render_query
from langworld.queries.models import Query
from langworld.skills.controller import skill_action
from langworld.skills.library import get_skill
from langworld.skills.models import Demonstration, Skill
from langworld.world.dynamics import episode_success, observe, reset, step
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompiledPlan:
    """Parsed conditions paired with executable skills."""

    task: str
    steps: Tuple[Tuple[Query, Skill], ...]

    def select(self, state):
        """Index of the first step whose condition holds, else the last step."""
        for index, (query, _) in enumerate(self.steps):
            if eval_query(query, state):
                return index
        return len(self.steps) - 1

    def truths(self, state):
        return np.array([eval_query(query, state) for query, _ in self.steps], dtype=np.float64)

    def act(self, state):
        return skill_action(self.steps[self.select(state)][1], state)


def compile_plan(task, steps):
    """Check that every condition is canonical and every skill exists.

    ``steps`` holds (condition sentence, skill id or description) pairs;
    both expert plans and grounded conditional plans compile this way.
    """
    task = get_task(task)
    steps = list(steps)
    if not steps:
        raise InvalidPlanError("plan for %r has no steps" % task.name)
    compiled = []
    for condition, skill in steps:
        try:
            query = parse_query(condition, task)
        except LangWorldError as error:
            raise InvalidPlanError("%s: condition %r: %s" % (task.name, condition, error)) from error
        if render_query(query) != condition:
            raise InvalidPlanError(
                "%s: condition %r is not canonical (expected %r)"
                % (task.name, condition, render_query(query))
            )
        try:
            compiled.append((query, get_skill(skill)))
        except KeyError:
            raise InvalidPlanError("%s: no skill %r in the library" % (task.name, skill)) from None
    return CompiledPlan(task.name, tuple(compiled))


def run_plan(task, plan, seed):
    """Roll out a compiled plan for the full horizon; returns states and actions."""
    task = get_task(task)
    state = reset(task, seed)
    states = [state]
    actions = []
    for _ in range(task.horizon):
        action = plan.act(state)
        state = step(state, action)
        actions.append(action)
        states.append(state)
    return states, actions


def run_expert(task, plan, seed):
    task = get_task(task)
    compiled = plan if isinstance(plan, CompiledPlan) else compile_plan(task, plan.steps)
    states, actions = run_plan(task, compiled, seed)
    demo = Demonstration(
        task=task.name,
        seed=seed,
        observations=np.stack([observe(state) for state in states[:-1]]),
        actions=np.array([action.as_tuple() for action in actions], dtype=np.float64),
        success=episode_success(task, states),
    )
    logger.debug("%s seed %d: success=%s", task.name, seed, demo.success)
    return states, demo
