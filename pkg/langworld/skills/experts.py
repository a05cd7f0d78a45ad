"""Hand-written query -> skill plans, one per task."""

from langworld.exceptions import MissingPlanError
from langworld.skills.models import ExpertPlan
from langworld.world.tasks import get_task


def _grasp_then(noun, final, held=None):
    held = held or noun
    return (
        ("the gripper is closed and not near the %s" % noun, "open_gripper"),
        ("the gripper is not near the %s" % noun, "move_above_%s" % noun.replace(" ", "_")),
        ("the gripper is above the %s" % noun,
         "move_down_around_%s" % noun.replace(" ", "_")),
        ("the gripper is open and around the %s" % held, "close_gripper"),
        ("the gripper is closed and around the %s" % held, final),
    )


def _press(noun, approach, press):
    return (
        ("the gripper is not near the %s" % noun, approach),
        ("the gripper is near the %s" % noun, press),
    )


def _faucet(approach, turn):
    return (
        ("the gripper is open and not near the faucet handle", "close_gripper"),
        ("the gripper is not near the faucet handle", approach),
        ("the gripper is near the faucet handle", turn),
    )


_STEPS = {
    "reach": (("the gripper is not near the goal", "move_gripper_to_goal"),),
    "push": _grasp_then("puck", "slide_puck_to_goal"),
    "pick-place": _grasp_then("puck", "move_puck_to_goal"),
    # the drawer front follows its handle, so both names work
    "drawer-open": _grasp_then("drawer handle", "pull_drawer_open", held="drawer"),
    "drawer-close": _grasp_then("drawer handle", "push_drawer_closed", held="drawer"),
    "button-press": _press("button", "move_in_front_of_button", "push_button"),
    "door-open": _grasp_then("door handle", "pull_door_open"),
    "window-open": _grasp_then("window handle", "slide_window_open"),
    "window-close": _grasp_then("window handle", "slide_window_closed"),
    "peg-insert": _grasp_then("peg", "insert_peg_into_hole"),
    "coffee-button": _press("button", "move_in_front_of_button", "push_button"),
    "door-close": _grasp_then("door handle", "push_door_closed"),
    "faucet-open": _faucet("move_left_of_faucet_handle", "turn_faucet_right"),
    "faucet-close": _faucet("move_right_of_faucet_handle", "turn_faucet_left"),
    "handle-press": (
        ("the gripper is closed and not near the handle", "open_gripper"),
        ("the gripper is not near the handle", "move_above_handle"),
        ("the gripper is near the handle", "press_handle_down"),
    ),
    "pick-place-wall": _grasp_then("puck", "move_puck_to_goal"),
    "plate-slide": _grasp_then("puck", "slide_puck_to_goal"),
    "push-back": _grasp_then("puck", "slide_puck_to_goal"),
    "reach-wall": (("the gripper is not near the goal", "move_gripper_to_goal"),),
    "shelf-place": _grasp_then("puck", "move_puck_to_goal"),
}

EXPERT_PLANS = {name: ExpertPlan(name, steps) for name, steps in _STEPS.items()}


def expert_plan(task):
    name = get_task(task).name
    try:
        return EXPERT_PLANS[name]
    except KeyError:
        raise MissingPlanError("no expert plan for %r" % name) from None
