import json
import tempfile
from pathlib import Path

from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from langworld.exceptions import HorizonExceededError, UnknownTaskError
from langworld.world.dynamics import (
    OBSERVATION_SIZE,
    episode_success,
    observe,
    reset,
    rollout,
    step,
)
from langworld.world.models import Action, TaskSet, Vec3
from langworld.world.schemas import ObjectStateSchema, TaskSpecSchema, WorldStateSchema
from langworld.world.tasks import TASKS, get_task, list_tasks, resolve_tasks
from langworld.world.trajectories import read_trajectory, write_trajectory

BASE_NAMES = [
    "reach", "push", "pick-place", "drawer-open", "drawer-close",
    "button-press", "door-open", "window-open", "window-close", "peg-insert",
]

actions = st.builds(
    Action,
    st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3),
)


class TaskRegistryTestCase(SimpleTestCase):
    def test_base_set_has_ten_named_tasks(self):
        self.assertEqual([task.name for task in list_tasks(TaskSet.BASE10)], BASE_NAMES)

    def test_full_set_is_superset_of_base(self):
        full = [task.name for task in list_tasks(TaskSet.FULL20)]
        self.assertEqual(len(full), 20)
        self.assertEqual(len(set(full)), 20)
        self.assertTrue(set(BASE_NAMES) <= set(full))

    def test_every_task_has_description_and_fixed_horizon(self):
        for task in TASKS:
            self.assertTrue(task.description.strip())
            self.assertEqual(task.horizon, 500)
            self.assertIn(TaskSet.FULL20, task.member_of)

    def test_resolve_selectors(self):
        self.assertEqual(len(resolve_tasks("base")), 10)
        self.assertEqual(len(resolve_tasks("held-out")), 10)
        self.assertEqual(
            [task.name for task in resolve_tasks("reach, push")], ["reach", "push"]
        )
        with self.assertRaises(UnknownTaskError):
            resolve_tasks("reach,fly")

    def test_registry_export_is_json(self):
        data = TaskSpecSchema().dump(get_task("drawer-open"))
        json.dumps(data)
        self.assertEqual(data["success"], "joint_open")
        self.assertEqual(data["member_of"], ["base", "full"])
        self.assertEqual(data["objects"][0]["axis"], [0.0, -1.0, 0.0])


class ResetTestCase(SimpleTestCase):
    def test_reset_is_deterministic(self):
        self.assertEqual(reset("drawer-open", 7), reset("drawer-open", 7))

    def test_seeds_change_goal(self):
        self.assertNotEqual(reset("reach", 0).goal_pos, reset("reach", 1).goal_pos)

    def test_reset_starts_open_and_unattached(self):
        for task in TASKS:
            state = reset(task, 3)
            self.assertEqual(state.gripper_closure, 0.0)
            self.assertIsNone(state.attached)
            self.assertEqual(state.step_index, 0)

    def test_unknown_task(self):
        with self.assertRaises(UnknownTaskError):
            reset("juggle", 0)

    def test_draws_stay_in_declared_ranges(self):
        task = get_task("pick-place")
        for seed in range(20):
            state = reset(task, seed)
            for value, (low, high) in zip(state.goal_pos, task.goal):
                self.assertTrue(low <= value <= high)

    def test_anchored_objects_follow_goal(self):
        state = reset("peg-insert", 4)
        self.assertEqual(state.get("hole").position, state.goal_pos)
        shelf = reset("shelf-place", 4)
        self.assertAlmostEqual(
            shelf.get("shelf").position.z, shelf.goal_pos.z - 0.03, places=12
        )


class StepTestCase(SimpleTestCase):
    def test_zero_action_keeps_positions(self):
        state = reset("pick-place", 2)
        after = step(state, Action(0, 0, 0, -1))
        self.assertEqual(after.gripper_pos, state.gripper_pos)
        self.assertEqual(after.objects, state.objects)
        self.assertEqual(after.step_index, 1)

    def test_action_is_clamped_before_scaling(self):
        state = reset("reach", 0)
        after = step(state, Action(2, 0, 0, 0))
        self.assertAlmostEqual(after.gripper_pos.x - state.gripper_pos.x, 0.02, places=12)
        self.assertEqual(after.gripper_pos.y, state.gripper_pos.y)

    def test_closure_moves_a_quarter_per_step(self):
        state = step(reset("reach", 0), Action(0, 0, 0, 1))
        self.assertEqual(state.gripper_closure, 0.25)
        state = step(state, Action(0, 0, 0, 0))
        self.assertEqual(state.gripper_closure, 0.5)

    def test_pulling_drawer_handle_decreases_value(self):
        state = reset("drawer-close", 1)
        handle = state.get("drawer handle")
        start = handle.joint.value
        state = WorldStateSchema().load(
            dict(
                WorldStateSchema().dump(state),
                gripper_pos=list(handle.position),
                gripper_closure=1.0,
            )
        )
        for k in range(1, 4):
            state = step(state, Action(0, 1, 0, 1))
            self.assertAlmostEqual(
                state.get("drawer handle").joint.value, start - 0.02 * k, places=9
            )
            self.assertEqual(
                state.get("drawer").position, state.get("drawer handle").position
            )
        for _ in range(10):
            state = step(state, Action(0, 1, 0, 1))
        self.assertEqual(state.get("drawer handle").joint.value, 0.0)

    def test_grasped_puck_follows_gripper(self):
        state = reset("pick-place", 5)
        puck = state.get("puck")
        state = WorldStateSchema().load(
            dict(WorldStateSchema().dump(state), gripper_pos=list(puck.position))
        )
        for _ in range(4):
            state = step(state, Action(0, 0, 0, 1))
        self.assertEqual(state.attached, "puck")
        state = step(state, Action(0, 0, 1, 1))
        self.assertEqual(state.get("puck").position, state.gripper_pos + (0, 0, -0.005))
        for _ in range(3):
            state = step(state, Action(0, 0, 0, -1))
        self.assertIsNone(state.attached)

    def test_stepping_past_horizon_raises(self):
        states = rollout("reach", 0, [Action()] * 500)
        self.assertEqual(len(states), 501)
        with self.assertRaises(HorizonExceededError):
            step(states[-1], Action())

    @hsettings(max_examples=30, deadline=None)
    @given(st.sampled_from([task.name for task in TASKS]), st.lists(actions, max_size=40))
    def test_bounds_and_attachment_hold(self, name, sequence):
        for state in rollout(name, 11, sequence):
            for value, low, high in zip(state.gripper_pos, (-0.5, 0.3, 0.0), (0.5, 0.9, 0.4)):
                self.assertTrue(low <= value <= high)
            self.assertTrue(0.0 <= state.gripper_closure <= 1.0)
            for obj in state.objects:
                if obj.joint is not None:
                    self.assertTrue(obj.joint.low <= obj.joint.value <= obj.joint.high)
            if state.attached is not None:
                self.assertEqual(
                    state.get(state.attached).position,
                    state.gripper_pos + (0, 0, -0.005),
                )

    @hsettings(max_examples=20, deadline=None)
    @given(st.lists(actions, max_size=20))
    def test_rollout_is_bitwise_deterministic(self, sequence):
        self.assertEqual(rollout("push", 3, sequence), rollout("push", 3, sequence))


class ObserveTestCase(SimpleTestCase):
    def test_shape_is_fixed_for_every_task(self):
        for task in TASKS:
            self.assertEqual(observe(reset(task, 0)).shape, (OBSERVATION_SIZE,))

    def test_single_object_pads_second_slot(self):
        values = observe(reset("pick-place", 0))
        self.assertEqual(list(values[7:10]), [0.0, 0.0, 0.0])

    def test_step_fraction(self):
        state = reset("reach", 0)
        halfway = WorldStateSchema().load(dict(WorldStateSchema().dump(state), step_index=250))
        self.assertEqual(observe(halfway)[-1], 0.5)
        self.assertEqual(list(observe(halfway)), list(observe(halfway)))


class EpisodeSuccessTestCase(SimpleTestCase):
    def test_success_at_last_step_counts(self):
        task = get_task("reach")
        state = reset(task, 0)
        far = [state] * 499
        schema = WorldStateSchema()
        at_goal = schema.load(dict(schema.dump(state), gripper_pos=list(state.goal_pos)))
        self.assertTrue(episode_success(task, far + [at_goal]))
        self.assertFalse(episode_success(task, far))

    def test_rejects_overlong_trajectory(self):
        state = reset("reach", 0)
        with self.assertRaises(ValueError):
            episode_success("reach", [state] * 502)

    def test_open_predicate_uses_fraction_of_range(self):
        state = reset("drawer-open", 0)
        handle = state.get("drawer handle")
        opened = handle.with_joint_value(handle.joint.high)
        schema = WorldStateSchema()
        data = dict(schema.dump(state), objects=[ObjectStateSchema().dump(opened)])
        self.assertTrue(episode_success("drawer-open", [state, schema.load(data)]))


class TrajectoryDumpTestCase(SimpleTestCase):
    def test_one_record_per_state(self):
        moves = [Action(0.5, 0.0, -0.2, 1.0)] * 12
        states = rollout("push", 4, moves)
        with tempfile.TemporaryDirectory() as out:
            path = write_trajectory(Path(out) / "push.jsonl", "push", 4, states, moves)
            lines = path.read_text(encoding="utf-8").splitlines()
            records = read_trajectory(path)
        self.assertEqual(len(lines), 13)
        self.assertEqual(json.loads(lines[0])["t"], 0)
        self.assertEqual([record["state"] for record in records], states)
        self.assertEqual(records[3]["action"], moves[3])
        self.assertIsNone(records[-1]["action"])
        self.assertEqual(records[5]["observation"], observe(states[5]).tolist())

    def test_lengths_checked(self):
        states = rollout("reach", 0, [])
        with self.assertRaises(ValueError):
            write_trajectory("never.jsonl", "reach", 0, states, [Action(0, 0, 0, 0)] * 3)
