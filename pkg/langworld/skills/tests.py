import tempfile
from dataclasses import replace
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st

from langworld.exceptions import DemoGenerationError, InvalidPlanError, UnknownObjectError
from langworld.queries.catalog import supported_queries
from langworld.skills.controller import setpoint, skill_action
from langworld.skills.demos import generate_demos, read_demoset, write_demoset
from langworld.skills.executor import compile_plan, run_expert, run_plan
from langworld.skills.experts import EXPERT_PLANS, expert_plan
from langworld.skills.library import get_skill, library, nearest_skill, skills_for
from langworld.skills.models import ExpertPlan
from langworld.world.dynamics import reset, step
from langworld.world.models import TaskSet, Vec3
from langworld.world.tasks import TASKS, get_task, list_tasks

TABLE_ONE = [
    "open the gripper",
    "move the gripper above the drawer handle",
    "move the gripper down around the drawer handle",
    "close the gripper",
    "pull the drawer open",
]


def success_rate(task, seeds):
    plan = compile_plan(task, expert_plan(task).steps)
    return np.mean([run_expert(task, plan, seed)[1].success for seed in seeds])


class LibraryTestCase(SimpleTestCase):
    def test_thirty_unique_skills(self):
        skills = library()
        self.assertEqual(len(skills), 30)
        self.assertEqual(len({skill.description for skill in skills}), 30)
        self.assertEqual(len({skill.id for skill in skills}), 30)

    def test_drawer_open_skills_are_present(self):
        descriptions = [skill.description for skill in library()]
        for description in TABLE_ONE:
            self.assertIn(description, descriptions)

    def test_nearest_skill(self):
        self.assertEqual(nearest_skill("pull the drawer open").id, "pull_drawer_open")
        self.assertEqual(nearest_skill("pull drawer open").id, "pull_drawer_open")
        self.assertEqual(nearest_skill("close gripper").id, "close_gripper")
        self.assertEqual(nearest_skill("pull drawer open"), nearest_skill("pull drawer open"))

    def test_task_limits_the_candidates(self):
        self.assertEqual(nearest_skill("push the button").id, "push_button")
        skill = nearest_skill("push the button", "reach-wall")
        self.assertIn(skill.reference, get_task("reach-wall").entities)
        for task in TASKS:
            references = {skill.reference for skill in skills_for(task)}
            self.assertIn("gripper", references)
            self.assertLessEqual(references, set(task.entities))
            for name in expert_plan(task.name).skill_ids:
                self.assertIn(get_skill(name), skills_for(task))

    def test_get_skill_by_id_or_description(self):
        self.assertIs(get_skill("push_button"), get_skill("push the button"))
        with self.assertRaises(KeyError):
            get_skill("juggle")


class SkillActionTestCase(SimpleTestCase):
    def test_zero_error_gives_zero_motion(self):
        state = reset("pick-place", 0)
        skill = get_skill("move_above_puck")
        state = replace(state, gripper_pos=setpoint(skill, state))
        self.assertEqual(skill_action(skill, state).xyz, Vec3(0.0, 0.0, 0.0))
        self.assertEqual(skill_action(skill, state).grip, -1.0)

    def test_saturates_far_from_setpoint(self):
        state = reset("pick-place", 0)
        state = replace(state, gripper_pos=Vec3(state.get("puck").position.x,
                                                state.get("puck").position.y, 0.0))
        action = skill_action(get_skill("move_above_puck"), state)
        self.assertEqual(action.dz, 1.0)

    def test_missing_reference_object(self):
        with self.assertRaises(UnknownObjectError):
            skill_action(get_skill("push_button"), reset("reach", 0))

    def test_distance_to_setpoint_decreases(self):
        state = reset("drawer-open", 3)
        skill = get_skill("move_above_drawer_handle")
        distance = setpoint(skill, state).distance(state.gripper_pos)
        while distance >= 0.02:
            state = step(state, skill_action(skill, state))
            new_distance = setpoint(skill, state).distance(state.gripper_pos)
            self.assertLess(new_distance, distance)
            distance = new_distance

    @hsettings(max_examples=50, deadline=None)
    @given(st.sampled_from([task.name for task in TASKS]), st.integers(0, 10 ** 6))
    def test_actions_are_stateless_and_saturated(self, name, seed):
        state = reset(name, seed)
        for skill in library():
            try:
                first = skill_action(skill, state)
            except UnknownObjectError:
                continue
            self.assertTrue(all(-1.0 <= value <= 1.0 for value in first.as_tuple()))
            self.assertEqual(first, skill_action(skill, state))


class ExpertPlanTestCase(SimpleTestCase):
    def test_every_task_has_a_valid_plan(self):
        for task in TASKS:
            plan = expert_plan(task)
            compile_plan(task, plan.steps)
            for condition in plan.conditions:
                for conjunct in condition.split(" and "):
                    if " is " not in conjunct:
                        conjunct = "the gripper is " + conjunct
                    self.assertIn(conjunct, supported_queries(task))

    def test_drawer_open_follows_the_published_plan(self):
        plan = expert_plan("drawer-open")
        self.assertEqual([get_skill(skill).description for skill in plan.skill_ids], TABLE_ONE)
        self.assertEqual(plan.conditions[3], "the gripper is open and around the drawer")

    def test_held_out_tasks_share_a_base_skill(self):
        base_skills = set()
        for task in list_tasks(TaskSet.BASE10):
            base_skills.update(EXPERT_PLANS[task.name].skill_ids)
        for task in TASKS:
            if not task.is_base:
                self.assertTrue(base_skills & set(EXPERT_PLANS[task.name].skill_ids), task.name)

    def test_rejects_bad_plans(self):
        with self.assertRaises(InvalidPlanError):
            compile_plan("reach", [])
        with self.assertRaises(InvalidPlanError):
            compile_plan("reach", [("the gripper near the goal", "open_gripper")])
        with self.assertRaises(InvalidPlanError):
            compile_plan("reach", [("the gripper is near the goal", "juggle")])
        with self.assertRaises(InvalidPlanError):
            compile_plan("reach", [("the gripper is near the puck", "open_gripper")])

    def test_first_true_step_wins(self):
        state = reset("reach", 0)
        move = ("the gripper is not near the goal", "move_gripper_to_goal")
        close = ("the gripper is open", "close_gripper")
        forward = compile_plan("reach", [move, close])
        backward = compile_plan("reach", [close, move])
        self.assertNotEqual(forward.act(state), backward.act(state))
        self.assertEqual(backward.act(state).xyz, Vec3(0.0, 0.0, 0.0))

    def test_falls_back_to_last_step(self):
        plan = compile_plan("reach", [
            ("the gripper is near the wall", "open_gripper"),
            ("the gripper is closed", "move_gripper_to_goal"),
        ])
        self.assertEqual(plan.select(reset("reach", 0)), 1)
        states, actions = run_plan("reach", plan, 0)
        self.assertEqual(len(actions), 500)


class RunExpertTestCase(SimpleTestCase):
    def test_demonstration_shape_and_determinism(self):
        plan = expert_plan("drawer-open")
        states, demo = run_expert("drawer-open", plan, 5)
        self.assertEqual(len(states), 501)
        self.assertEqual(demo.observations.shape, (500, 14))
        self.assertEqual(demo.actions.shape, (500, 4))
        self.assertTrue(demo.success)
        self.assertEqual(run_expert("drawer-open", plan, 5)[1], demo)

    def test_drawer_open_reaches_ninety_percent(self):
        self.assertGreaterEqual(success_rate("drawer-open", range(100)), 0.9)

    def test_every_base_task_reaches_ninety_percent(self):
        for task in list_tasks(TaskSet.BASE10):
            self.assertGreaterEqual(success_rate(task, range(1000, 1020)), 0.9, task.name)


class DemoSetTestCase(SimpleTestCase):
    def test_single_demo(self):
        demoset = generate_demos(["reach"], 1, seed=42)
        self.assertEqual(len(demoset), 1)
        demo = demoset.demos["reach"][0]
        self.assertEqual(demo.seed, 42)
        self.assertTrue(demo.success)
        self.assertEqual(generate_demos(["reach"], 1, seed=42).demos["reach"][0], demo)

    def test_round_trips_through_disk(self):
        demoset = generate_demos(["reach", "button-press"], 2, seed=3)
        with tempfile.TemporaryDirectory() as directory:
            write_demoset(demoset, directory)
            loaded = read_demoset(directory)
            only = read_demoset(directory, tasks=["reach"])
        self.assertEqual(sorted(loaded.tasks), ["button-press", "reach"])
        for name in demoset.tasks:
            self.assertEqual(loaded.demos[name], demoset.demos[name])
        self.assertEqual(loaded.attempts, demoset.attempts)
        self.assertEqual(only.tasks, ["reach"])

    def test_gives_up_after_retry_budget(self):
        hopeless = ExpertPlan("reach", (("the gripper is open", "open_gripper"),))
        with mock.patch("langworld.skills.demos.expert_plan", return_value=hopeless):
            with self.assertRaises(DemoGenerationError) as caught:
                generate_demos(["reach"], 2, seed=0)
        self.assertEqual(caught.exception.task_name, "reach")
        self.assertIn("24 attempts", str(caught.exception))
