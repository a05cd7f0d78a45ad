"""The 30 scripted skills."""

from langworld.queries.distance import nearest
from langworld.skills.models import Skill
from langworld.world.models import Vec3
from langworld.world.tasks import get_task

# z offset of a hover setpoint above a handle or object
HOVER = 0.06
# lateral offset when lining up beside a button or faucet
STANDOFF = 0.06
# how far ahead of a handle a pulling or pushing setpoint sits
LEAD = 0.1
# setpoint for carried objects: undo the grasp offset
CARRY = Vec3(0.0, 0.0, 0.005)

OPEN, CLOSE = -1.0, 1.0


def _grasping(slug, noun):
    return (
        Skill("move_above_%s" % slug, "move the gripper above the %s" % noun, noun,
              Vec3(0.0, 0.0, HOVER), grip=OPEN),
        Skill("move_down_around_%s" % slug, "move the gripper down around the %s" % noun,
              noun, grip=OPEN),
    )


SKILLS = (
    Skill("open_gripper", "open the gripper", "gripper", grip=OPEN),
    Skill("close_gripper", "close the gripper", "gripper", grip=CLOSE),
    Skill("move_gripper_to_goal", "move the gripper to the goal", "goal", grip=OPEN),
    *_grasping("puck", "puck"),
    Skill("move_puck_to_goal", "move the puck to the goal", "goal", CARRY, grip=CLOSE),
    Skill("slide_puck_to_goal", "slide the puck to the goal", "goal", CARRY, grip=CLOSE),
    *_grasping("drawer_handle", "drawer handle"),
    Skill("pull_drawer_open", "pull the drawer open", "drawer handle",
          Vec3(0.0, -LEAD, 0.0), grip=CLOSE),
    Skill("push_drawer_closed", "push the drawer closed", "drawer handle",
          Vec3(0.0, LEAD, 0.0), grip=CLOSE),
    Skill("move_in_front_of_button", "move the gripper in front of the button", "button",
          Vec3(0.0, -STANDOFF, 0.0), grip=CLOSE),
    Skill("push_button", "push the button", "button", Vec3(0.0, 0.05, 0.0), grip=CLOSE),
    *_grasping("door_handle", "door handle"),
    Skill("pull_door_open", "pull the door open", "door handle",
          Vec3(-LEAD, 0.0, 0.0), grip=CLOSE),
    Skill("push_door_closed", "push the door closed", "door handle",
          Vec3(LEAD, 0.0, 0.0), grip=CLOSE),
    *_grasping("window_handle", "window handle"),
    Skill("slide_window_open", "slide the window open", "window handle",
          Vec3(LEAD, 0.0, 0.0), grip=CLOSE),
    Skill("slide_window_closed", "slide the window closed", "window handle",
          Vec3(-LEAD, 0.0, 0.0), grip=CLOSE),
    *_grasping("peg", "peg"),
    Skill("insert_peg_into_hole", "insert the peg into the hole", "hole", CARRY, grip=CLOSE),
    Skill("move_left_of_faucet_handle", "move the gripper to the left of the faucet handle",
          "faucet handle", Vec3(-STANDOFF, 0.0, 0.0), grip=CLOSE),
    Skill("turn_faucet_right", "turn the faucet right", "faucet handle",
          Vec3(LEAD, 0.0, 0.0), grip=CLOSE),
    Skill("move_right_of_faucet_handle", "move the gripper to the right of the faucet handle",
          "faucet handle", Vec3(STANDOFF, 0.0, 0.0), grip=CLOSE),
    Skill("turn_faucet_left", "turn the faucet left", "faucet handle",
          Vec3(-LEAD, 0.0, 0.0), grip=CLOSE),
    Skill("move_above_handle", "move the gripper above the handle", "handle",
          Vec3(0.0, 0.0, HOVER), grip=OPEN),
    Skill("press_handle_down", "press the handle down", "handle",
          Vec3(0.0, 0.0, -LEAD), grip=CLOSE),
)

_BY_ID = {skill.id: skill for skill in SKILLS}
_BY_DESCRIPTION = {skill.description: skill for skill in SKILLS}
DESCRIPTIONS = [skill.description for skill in SKILLS]


def library():
    return list(SKILLS)


def get_skill(key):
    """Look a skill up by id or by exact description."""
    if isinstance(key, Skill):
        return key
    skill = _BY_ID.get(key) or _BY_DESCRIPTION.get(key)
    if skill is None:
        raise KeyError(key)
    return skill


def skills_for(task):
    """Skills whose reference exists in ``task``; the gripper skills always do."""
    entities = set(get_task(task).entities)
    return [skill for skill in SKILLS if skill.reference in entities]


def nearest_skill(description, task=None):
    candidates = SKILLS if task is None else skills_for(task)
    index, _ = nearest(description, [skill.description for skill in candidates])
    return candidates[index]
