"""Kinematic tabletop dynamics.

States are immutable; ``reset`` and ``step`` are pure functions, so a
(task, seed, action sequence) triple always produces the same trajectory.
"""

import logging

import numpy as np
from django.conf import settings

from langworld.exceptions import HorizonExceededError
from langworld.rng import counter_rng
from langworld.world.models import (
    JointState,
    ObjectState,
    SuccessPredicate,
    Vec3,
    WorldState,
)
from langworld.world.tasks import get_task

logger = logging.getLogger(__name__)

OBSERVATION_SIZE = 14
OBSERVED_OBJECTS = 2


def _conf():
    return settings.LANGWORLD


def _draw(rng, bounds):
    return Vec3(*(float(rng.uniform(low, high)) for low, high in bounds))


def reset(task, seed):
    task = get_task(task)
    if seed < 0:
        raise ValueError("seed must be non-negative, got %r" % (seed,))
    rng = counter_rng(seed, "reset", task.name)
    gripper = _draw(rng, task.gripper)
    goal = _draw(rng, task.goal)
    objects = []
    placed = {}
    for template in task.objects:
        follows = None
        if template.anchor == "goal":
            position = goal + template.offset
        elif template.anchor is not None:
            follows = template.anchor
            position = placed[follows]
        else:
            position = _draw(rng, (template.x, template.y, template.z))
        joint = None
        if template.jointed:
            low, high = template.initial_value
            joint = JointState(
                base=position,
                axis=template.axis,
                value=float(rng.uniform(low, high)),
                low=template.joint_range[0],
                high=template.joint_range[1],
            )
            position = joint.position
        objects.append(
            ObjectState(
                name=template.name,
                position=position,
                joint=joint,
                graspable=template.graspable,
                pushable=template.pushable,
                follows=follows,
            )
        )
        placed[template.name] = position
    return WorldState(
        task=task.name,
        gripper_pos=gripper,
        gripper_closure=0.0,
        objects=tuple(objects),
        goal_pos=goal,
        step_index=0,
        attached=None,
    )


def _approach(current, target, rate):
    if target > current:
        return min(current + rate, target)
    return max(current - rate, target)


def _press(obj, gripper, radius):
    """Buttons follow a gripper that has pushed past their face."""
    joint = obj.joint
    relative = gripper - joint.base
    travel = relative.dot(joint.axis)
    off_axis = (relative - joint.axis.scale(travel)).norm()
    if off_axis < radius and travel > joint.value:
        return obj.with_joint_value(travel)
    return obj


def step(state, action):
    conf = _conf()
    if state.step_index >= conf["HORIZON"]:
        raise HorizonExceededError(
            "episode already has %d steps" % (state.step_index,)
        )
    action = action.clamped()
    closure = _approach(
        state.gripper_closure, (action.grip + 1.0) / 2.0, conf["CLOSURE_RATE"]
    )
    old = state.gripper_pos
    new = (old + action.xyz.scale(conf["STEP_SCALE"])).clamp(
        conf["WORKSPACE_LOW"], conf["WORKSPACE_HIGH"]
    )
    displacement = new - old
    radius = conf["GRASP_RADIUS"]

    attached = state.attached
    if attached is not None and closure < conf["CLOSURE_DETACH"]:
        attached = None
    elif attached is None and closure > conf["CLOSURE_ATTACH"]:
        candidates = [
            (obj.position.distance(old), index, obj.name)
            for index, obj in enumerate(state.objects)
            if obj.graspable and obj.position.distance(old) < radius
        ]
        if candidates:
            attached = min(candidates)[2]

    objects = []
    for obj in state.objects:
        if obj.name == attached:
            obj = obj.moved_to(new + conf["GRASP_OFFSET"])
        elif obj.joint is not None:
            if obj.pushable:
                obj = _press(obj, new, radius)
            elif closure > conf["CLOSURE_ATTACH"] and obj.position.distance(old) < radius:
                obj = obj.with_joint_value(
                    obj.joint.value + displacement.dot(obj.joint.axis)
                )
        objects.append(obj)
    moved = {obj.name: obj.position for obj in objects}
    objects = [
        obj.moved_to(moved[obj.follows]) if obj.follows else obj for obj in objects
    ]

    return WorldState(
        task=state.task,
        gripper_pos=new,
        gripper_closure=closure,
        objects=tuple(objects),
        goal_pos=state.goal_pos,
        step_index=state.step_index + 1,
        attached=attached,
    )


def observe(state):
    """Fixed 14-wide vector: gripper, closure, two object slots, goal, time."""
    values = np.zeros(OBSERVATION_SIZE, dtype=np.float64)
    values[0:3] = state.gripper_pos
    values[3] = state.gripper_closure
    for slot, obj in enumerate(state.objects[:OBSERVED_OBJECTS]):
        values[4 + 3 * slot:7 + 3 * slot] = obj.position
    values[10:13] = state.goal_pos
    values[13] = state.step_index / _conf()["HORIZON"]
    return values


def predicate_holds(task, state):
    conf = _conf()
    task = get_task(task)
    if task.success is SuccessPredicate.GRIPPER_AT_GOAL:
        return state.gripper_pos.distance(state.goal_pos) < conf["SUCCESS_RADIUS"]
    target = state.get(task.target)
    if task.success is SuccessPredicate.OBJECT_AT_GOAL:
        return target.position.distance(state.goal_pos) < conf["SUCCESS_RADIUS"]
    joint = target.joint
    if task.success is SuccessPredicate.JOINT_OPEN:
        return joint.fraction >= conf["JOINT_OPEN_FRACTION"]
    return joint.fraction <= conf["JOINT_CLOSED_FRACTION"]


def episode_success(task, trajectory):
    """Success at any state of the episode counts."""
    if len(trajectory) > _conf()["HORIZON"] + 1:
        raise ValueError("trajectory longer than the horizon: %d" % len(trajectory))
    return any(predicate_holds(task, state) for state in trajectory)


def rollout(task, seed, actions):
    """Replay an action sequence from ``reset(task, seed)``; returns all states."""
    state = reset(task, seed)
    states = [state]
    for action in actions:
        state = step(state, action)
        states.append(state)
    return states
