from django.conf import settings

from langworld.queries.evaluator import entity_position
from langworld.world.models import Action


def setpoint(skill, state):
    return entity_position(state, skill.reference) + skill.offset


def skill_action(skill, state):
    """Proportional step toward the skill's setpoint, saturated per axis."""
    error = setpoint(skill, state) - state.gripper_pos
    command = error.scale(skill.gain / settings.LANGWORLD["STEP_SCALE"])
    return Action(command.x, command.y, command.z, skill.grip).clamped()
