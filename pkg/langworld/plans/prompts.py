"""Few-shot prompts built from hand-written plans of other tasks."""

from langworld.exceptions import MissingPlanError
from langworld.plans.formats import encode_header, encode_plan
from langworld.plans.models import ConditionalPlan, PlanStep
from langworld.queries.distance import edit_distance
from langworld.skills.experts import expert_plan
from langworld.skills.library import get_skill
from langworld.world.models import TaskSet
from langworld.world.tasks import TASKS, get_task, list_tasks

ANCHOR_TASK = "pick-place"
NEIGHBOURS = 2


def manual_plan(task):
    """A task's expert plan written out with skill descriptions."""
    task = get_task(task)
    plan = expert_plan(task)
    return ConditionalPlan(
        task=task.name,
        description=task.description,
        steps=tuple(
            PlanStep(condition, get_skill(skill).description)
            for condition, skill in plan.steps
        ),
    )


def manual_library():
    return {task.name: manual_plan(task) for task in list_tasks(TaskSet.BASE10)}


def exemplar_tasks(target, library):
    """pick-place, then the base tasks whose descriptions are closest to the target's.

    When pick-place itself is the target, a third neighbour takes its place.
    """
    target = get_task(target)
    if ANCHOR_TASK not in library:
        raise MissingPlanError("the prompt library has no %r plan" % ANCHOR_TASK)
    order = {task.name: index for index, task in enumerate(TASKS)}
    candidates = [
        name for name in library
        if name not in (target.name, ANCHOR_TASK) and get_task(name).is_base
    ]
    candidates.sort(
        key=lambda name: (edit_distance(get_task(name).description, target.description), order[name])
    )
    if target.name == ANCHOR_TASK:
        return candidates[:NEIGHBOURS + 1]
    return [ANCHOR_TASK] + candidates[:NEIGHBOURS]


def build_prompt(target, plan_format, library):
    target = get_task(target)
    parts = [encode_plan(library[name], plan_format) for name in exemplar_tasks(target, library)]
    parts.append(encode_header(target.name, target.description, plan_format))
    return "\n".join(parts)
