"""Task registry: ten base tasks and ten held-out tasks built from the same parts."""

from langworld.exceptions import UnknownTaskError
from langworld.world.models import (
    ObjectTemplate,
    SuccessPredicate,
    TaskSet,
    TaskSpec,
    Vec3,
)

BASE = frozenset({TaskSet.BASE10, TaskSet.FULL20})
HELD_OUT = frozenset({TaskSet.FULL20})

DEFAULT_GOAL = ((-0.1, 0.1), (0.6, 0.7), (0.1, 0.2))

PUCK = ObjectTemplate("puck", x=(-0.1, 0.1), y=(0.6, 0.7), graspable=True)

DRAWER_HANDLE = dict(
    x=(-0.1, 0.1), y=(0.75, 0.8), z=(0.05, 0.09),
    axis=Vec3(0.0, -1.0, 0.0), joint_range=(0.0, 0.15),
)
DRAWER = ObjectTemplate("drawer", anchor="drawer handle")
DOOR_HANDLE = dict(
    x=(-0.05, 0.05), y=(0.7, 0.8), z=(0.05, 0.09),
    axis=Vec3(-1.0, 0.0, 0.0), joint_range=(0.0, 0.2),
)
WINDOW_HANDLE = dict(
    x=(-0.15, -0.05), y=(0.7, 0.8), z=(0.05, 0.09),
    axis=Vec3(1.0, 0.0, 0.0), joint_range=(0.0, 0.2),
)
FAUCET_HANDLE = dict(
    y=(0.75, 0.85), z=(0.08, 0.12),
    axis=Vec3(1.0, 0.0, 0.0), joint_range=(0.0, 0.12),
)
BUTTON = dict(axis=Vec3(0.0, 1.0, 0.0), joint_range=(0.0, 0.04), pushable=True)


TASKS = (
    TaskSpec(
        name="reach",
        description="reach the goal position with the gripper",
        objects=(),
        goal=((-0.2, 0.2), (0.6, 0.85), (0.05, 0.3)),
        success=SuccessPredicate.GRIPPER_AT_GOAL,
        uses_goal=True,
        member_of=BASE,
    ),
    TaskSpec(
        name="push",
        description="push the puck to the goal position",
        objects=(PUCK,),
        goal=((-0.2, 0.2), (0.75, 0.85), (0.0, 0.0)),
        success=SuccessPredicate.OBJECT_AT_GOAL,
        target="puck",
        uses_goal=True,
        member_of=BASE,
    ),
    TaskSpec(
        name="pick-place",
        description="pick up the puck and place it at the goal",
        objects=(PUCK,),
        goal=((-0.15, 0.15), (0.75, 0.85), (0.1, 0.25)),
        success=SuccessPredicate.OBJECT_AT_GOAL,
        target="puck",
        uses_goal=True,
        member_of=BASE,
    ),
    TaskSpec(
        name="drawer-open",
        description="open the drawer",
        objects=(ObjectTemplate("drawer handle", **DRAWER_HANDLE), DRAWER),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_OPEN,
        target="drawer handle",
        member_of=BASE,
    ),
    TaskSpec(
        name="drawer-close",
        description="close the drawer",
        objects=(
            ObjectTemplate("drawer handle", initial_value=(0.1, 0.15), **DRAWER_HANDLE),
            DRAWER,
        ),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_CLOSED,
        target="drawer handle",
        member_of=BASE,
    ),
    TaskSpec(
        name="button-press",
        description="press the button",
        objects=(
            ObjectTemplate(
                "button", x=(-0.1, 0.1), y=(0.8, 0.85), z=(0.06, 0.12), **BUTTON
            ),
        ),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_OPEN,
        target="button",
        member_of=BASE,
    ),
    TaskSpec(
        name="door-open",
        description="open the door",
        objects=(ObjectTemplate("door handle", **DOOR_HANDLE),),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_OPEN,
        target="door handle",
        member_of=BASE,
    ),
    TaskSpec(
        name="window-open",
        description="slide the window open",
        objects=(ObjectTemplate("window handle", **WINDOW_HANDLE),),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_OPEN,
        target="window handle",
        member_of=BASE,
    ),
    TaskSpec(
        name="window-close",
        description="slide the window closed",
        objects=(
            ObjectTemplate("window handle", initial_value=(0.15, 0.2), **WINDOW_HANDLE),
        ),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_CLOSED,
        target="window handle",
        member_of=BASE,
    ),
    TaskSpec(
        name="peg-insert",
        description="insert the peg into the hole",
        objects=(
            ObjectTemplate("peg", x=(-0.1, 0.1), y=(0.6, 0.65), graspable=True),
            ObjectTemplate("hole", anchor="goal"),
        ),
        goal=((-0.2, 0.2), (0.8, 0.85), (0.05, 0.1)),
        success=SuccessPredicate.OBJECT_AT_GOAL,
        target="peg",
        member_of=BASE,
    ),
    TaskSpec(
        name="coffee-button",
        description="push the button on the coffee machine",
        objects=(
            ObjectTemplate(
                "button", x=(-0.1, 0.1), y=(0.75, 0.8), z=(0.2, 0.25), **BUTTON
            ),
        ),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_OPEN,
        target="button",
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="door-close",
        description="close the door",
        objects=(
            ObjectTemplate("door handle", initial_value=(0.15, 0.2), **DOOR_HANDLE),
        ),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_CLOSED,
        target="door handle",
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="faucet-open",
        description="turn the faucet on",
        objects=(ObjectTemplate("faucet handle", x=(-0.05, 0.05), **FAUCET_HANDLE),),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_OPEN,
        target="faucet handle",
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="faucet-close",
        description="turn the faucet off",
        objects=(
            ObjectTemplate(
                "faucet handle",
                x=(-0.17, -0.07),
                initial_value=(0.1, 0.12),
                **FAUCET_HANDLE
            ),
        ),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_CLOSED,
        target="faucet handle",
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="handle-press",
        description="press the handle down",
        objects=(
            ObjectTemplate(
                "handle",
                x=(-0.1, 0.1), y=(0.7, 0.8), z=(0.1, 0.12),
                axis=Vec3(0.0, 0.0, -1.0), joint_range=(0.0, 0.08), pushable=True,
            ),
        ),
        goal=DEFAULT_GOAL,
        success=SuccessPredicate.JOINT_OPEN,
        target="handle",
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="pick-place-wall",
        description="pick up the puck and place it at the goal near the wall",
        objects=(PUCK,),
        goal=((-0.15, 0.15), (0.84, 0.88), (0.1, 0.25)),
        success=SuccessPredicate.OBJECT_AT_GOAL,
        target="puck",
        uses_goal=True,
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="plate-slide",
        description="slide the plate into the goal",
        objects=(ObjectTemplate("puck", x=(-0.1, 0.1), y=(0.6, 0.65), graspable=True),),
        goal=((-0.25, 0.25), (0.8, 0.88), (0.0, 0.0)),
        success=SuccessPredicate.OBJECT_AT_GOAL,
        target="puck",
        uses_goal=True,
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="push-back",
        description="pull the puck back to the goal",
        objects=(ObjectTemplate("puck", x=(-0.1, 0.1), y=(0.7, 0.75), graspable=True),),
        goal=((-0.2, 0.2), (0.4, 0.5), (0.0, 0.0)),
        success=SuccessPredicate.OBJECT_AT_GOAL,
        target="puck",
        uses_goal=True,
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="reach-wall",
        description="reach the goal near the wall",
        objects=(),
        goal=((-0.2, 0.2), (0.82, 0.88), (0.05, 0.3)),
        success=SuccessPredicate.GRIPPER_AT_GOAL,
        uses_goal=True,
        member_of=HELD_OUT,
    ),
    TaskSpec(
        name="shelf-place",
        description="pick up the puck and place it on the shelf",
        objects=(
            ObjectTemplate("puck", x=(-0.1, 0.1), y=(0.6, 0.65), graspable=True),
            ObjectTemplate("shelf", anchor="goal", offset=Vec3(0.0, 0.0, -0.03)),
        ),
        goal=((-0.15, 0.15), (0.8, 0.85), (0.15, 0.25)),
        success=SuccessPredicate.OBJECT_AT_GOAL,
        target="puck",
        uses_goal=True,
        member_of=HELD_OUT,
    ),
)

_BY_NAME = {task.name: task for task in TASKS}


def list_tasks(task_set=TaskSet.FULL20):
    task_set = TaskSet(task_set)
    return [task for task in TASKS if task_set in task.member_of]


def get_task(name):
    if isinstance(name, TaskSpec):
        return name
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownTaskError(
            "no task named %r (known: %s)" % (name, ", ".join(_BY_NAME))
        ) from None


def resolve_tasks(selector):
    """``base``, ``full``, ``held-out`` or a comma-separated list of task names."""
    if selector in ("base", "full"):
        return list_tasks(selector)
    if selector == "held-out":
        return [task for task in TASKS if not task.is_base]
    return [get_task(name.strip()) for name in selector.split(",") if name.strip()]
