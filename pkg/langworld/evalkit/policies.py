"""Anything that maps (task, state) to an action can be evaluated.

Learned policies from ``langworld.pcbc`` already satisfy :class:`Policy`;
this module adds the scripted ones and the random baseline.
"""

from typing import Dict, Protocol, runtime_checkable

from langworld.exceptions import MissingPlanError
from langworld.plans.models import ConditionalPlan
from langworld.rng import counter_rng
from langworld.skills.executor import compile_plan
from langworld.skills.experts import expert_plan
from langworld.world.models import Action
from langworld.world.tasks import get_task


@runtime_checkable
class Policy(Protocol):
    @property
    def id(self) -> str:
        ...

    def act(self, task, state) -> Action:
        ...


def begin_episode(policy, task, seed):
    """Let a stateful policy reset itself; stateless policies ignore this."""
    hook = getattr(policy, "begin_episode", None)
    if hook is not None:
        hook(task, seed)


class PlanPolicy:
    """Scripted skills selected by the first true condition of a grounded plan."""

    id = "plans"

    def __init__(self, plans: Dict[str, ConditionalPlan]):
        self.plans = dict(plans)
        self._compiled = {
            task: compile_plan(task, plan.pairs) for task, plan in self.plans.items()
        }

    def act(self, task, state):
        name = get_task(task).name
        try:
            compiled = self._compiled[name]
        except KeyError:
            raise MissingPlanError("no grounded plan for %r" % name) from None
        return compiled.act(state)


class ScriptedPolicy:
    """The hand-written expert plan of every task."""

    id = "scripted"

    def __init__(self):
        self._compiled = {}

    def act(self, task, state):
        name = get_task(task).name
        if name not in self._compiled:
            self._compiled[name] = compile_plan(name, expert_plan(name).steps)
        return self._compiled[name].act(state)


class RandomPolicy:
    """Uniform actions in the action box, reseeded from the episode seed."""

    id = "random"

    def __init__(self, seed=0):
        self.seed = seed
        self._rng = counter_rng(seed, "random-policy")

    def begin_episode(self, task, seed):
        self._rng = counter_rng(self.seed, "random-policy", get_task(task).name, seed)

    def act(self, task, state):
        return Action(*(float(value) for value in self._rng.uniform(-1.0, 1.0, size=4)))


POLICY_KINDS = ("scripted", "plans", "random", "pcbc", "dc")
