import logging

from langworld.plans.formats import decode_plan, encode_header
from langworld.plans.models import ConditionalPlan, PlanStep
from langworld.queries.matching import nearest_query
from langworld.skills.library import nearest_skill
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)


def ground_plan(plan, task):
    """Snap every condition to a supported query and every skill to the library."""
    task = get_task(task)
    steps = []
    for step in plan.steps:
        grounded = PlanStep(
            nearest_query(step.condition, task), nearest_skill(step.skill, task).description
        )
        if grounded != step:
            logger.debug("%s: grounded %r -> %r", task.name, step, grounded)
        steps.append(grounded)
    return ConditionalPlan(
        task=task.name, description=plan.description or task.description, steps=tuple(steps)
    )


def decode_completion(task, completion, plan_format):
    """Decode a completion that continues the prompt's target header."""
    task = get_task(task)
    text = encode_header(task.name, task.description, plan_format) + completion
    return decode_plan(text, plan_format, task=task.name, description=task.description)
