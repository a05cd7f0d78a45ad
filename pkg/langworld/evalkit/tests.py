import tempfile
import xml.etree.ElementTree as ElementTree
from pathlib import Path
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st
from marshmallow import ValidationError

from langworld.evalkit.evaluation import cdf_bands, evaluate, success_cdf, summarize
from langworld.evalkit.models import CdfPoint, EvalResult
from langworld.evalkit.policies import PlanPolicy, Policy, RandomPolicy, ScriptedPolicy
from langworld.evalkit.reports import read_report, write_report
from langworld.evalkit.rollouts import best_of_plans, run_episode, run_plan_with_scripted_skills
from langworld.evalkit.schemas import EvalResultSchema
from langworld.exceptions import InvalidPlanError, MissingPlanError
from langworld.pcbc.network import init_params
from langworld.pcbc.policies import DcPolicy, PcbcPolicy
from langworld.plans.models import ConditionalPlan, PlanStep
from langworld.plans.prompts import manual_plan
from langworld.plans.seeding import grounded_corpus, task_plans
from langworld.utils import read_csv
from langworld.world.models import Action, TaskSet
from langworld.world.tasks import TASKS, list_tasks


class StillPolicy:
    id = "still"

    def act(self, task, state):
        return Action(0.0, 0.0, 0.0, 0.0)


def result(task, flags, policy="p"):
    return EvalResult(policy=policy, task=task, seeds=tuple(range(len(flags))), flags=tuple(flags))


class EvalResultTestCase(SimpleTestCase):
    def test_rate_is_mean_of_flags(self):
        self.assertEqual(result("reach", [True, False, True, True]).success_rate, 0.75)
        self.assertEqual(result("reach", [False]).success_rate, 0.0)

    @hsettings(max_examples=100, deadline=None)
    @given(st.lists(st.booleans(), min_size=1, max_size=10000))
    def test_rate_is_exact(self, flags):
        self.assertEqual(result("reach", flags).success_rate, sum(flags) / len(flags))

    def test_lengths_must_agree(self):
        with self.assertRaises(ValueError):
            EvalResult("p", "reach", (0, 1), (True,))
        with self.assertRaises(ValueError):
            EvalResult("p", "reach", (), ())

    def test_dumped_result_loads_back(self):
        schema = EvalResultSchema()
        dumped = schema.dump(result("reach", [True, False, True]))
        self.assertEqual(dumped["success_rate"], 2 / 3)
        self.assertEqual(schema.load(dumped), result("reach", [True, False, True]))
        with self.assertRaises(ValidationError):
            schema.load(dict(dumped, successes=2))


class RunEpisodeTestCase(SimpleTestCase):
    def test_full_horizon(self):
        trajectory, success = run_episode(StillPolicy(), "reach", 0)
        self.assertEqual(len(trajectory), 501)
        self.assertEqual(trajectory[-1].step_index, 500)
        self.assertIsInstance(success, bool)

    def test_deterministic(self):
        for seed in range(3):
            first = run_episode(ScriptedPolicy(), "push", seed)[1]
            self.assertEqual(first, run_episode(ScriptedPolicy(), "push", seed)[1])

    def test_scripted_expert_opens_drawers(self):
        flags = [run_episode(ScriptedPolicy(), "drawer-open", seed)[1] for seed in range(100)]
        self.assertGreaterEqual(sum(flags), 90)

    def test_random_baseline_rarely_places(self):
        flags = [run_episode(RandomPolicy(), "pick-place", seed)[1] for seed in range(100)]
        self.assertLess(np.mean(flags), 0.1)

    def test_random_policy_reseeds_per_episode(self):
        first, _ = run_episode(RandomPolicy(), "reach", 5)
        second, _ = run_episode(RandomPolicy(), "reach", 5)
        self.assertEqual(first[-1], second[-1])

    def test_learned_policies_satisfy_the_protocol(self):
        params = init_params(0)
        for policy in (ScriptedPolicy(), RandomPolicy(), StillPolicy(), DcPolicy(params),
                       PcbcPolicy(params, {"reach": manual_plan("reach")})):
            self.assertIsInstance(policy, Policy)


class ScriptedPlanTestCase(SimpleTestCase):
    def test_table_one_plan_opens_the_drawer(self):
        _, success = run_plan_with_scripted_skills(manual_plan("drawer-open"), "drawer-open", 0)
        self.assertTrue(success)

    def test_false_conditions_fall_back_to_last_skill(self):
        plan = ConditionalPlan("drawer-open", "open the drawer", (
            PlanStep("the gripper is below the table", "open the gripper"),
            PlanStep("the gripper is below the table", "close the gripper"),
        ))
        trajectory, success = run_plan_with_scripted_skills(plan, "drawer-open", 0)
        self.assertEqual(len(trajectory), 501)
        self.assertFalse(success)
        self.assertGreater(trajectory[-1].gripper_closure, 0.9)

    def test_ungrounded_plan(self):
        plan = ConditionalPlan("drawer-open", "open the drawer", (
            PlanStep("the gripper is kind of near the handle", "yank the drawer"),
        ))
        with self.assertRaises(InvalidPlanError):
            run_plan_with_scripted_skills(plan, "drawer-open", 0)

    def test_best_of_takes_the_max(self):
        broken = ConditionalPlan("reach", "reach the goal", (
            PlanStep("the gripper is below the table", "open the gripper"),
        ))
        best, rates = best_of_plans([broken, manual_plan("reach")], "reach", range(4))
        self.assertEqual(rates[0], 0.0)
        self.assertEqual(best, max(rates))
        self.assertEqual(best, 1.0)
        with self.assertRaises(ValueError):
            best_of_plans([], "reach", range(4))

    def test_corpus_plans_generalize(self):
        corpus = grounded_corpus()
        seeds = range(5)
        generalized = [
            task for task, plans in corpus.items()
            if best_of_plans(plans, task, seeds)[0] >= 0.5
        ]
        self.assertGreaterEqual(len(generalized), 3)

    def test_every_corpus_sample_runs_with_scripted_skills(self):
        for task, plans in grounded_corpus().items():
            for plan in plans:
                _, success = run_plan_with_scripted_skills(plan, task, 0)
                self.assertIsInstance(success, bool)

    def test_plan_policy_needs_a_plan(self):
        policy = PlanPolicy({"reach": manual_plan("reach")})
        with self.assertRaises(MissingPlanError):
            run_episode(policy, "push", 0)


class EvaluateTestCase(SimpleTestCase):
    def test_always_succeeding_stub(self):
        with mock.patch("langworld.evalkit.rollouts.episode_success", return_value=True):
            results = evaluate(StillPolicy(), [task.name for task in TASKS], 1, seed0=0)
        self.assertEqual(len(results), 20)
        self.assertEqual({r.success_rate for r in results}, {1.0})
        self.assertEqual({r.seeds for r in results}, {(0,)})

    def test_seeds_and_order(self):
        forward = evaluate(ScriptedPolicy(), ["reach", "push"], 3, seed0=7)
        backward = evaluate(ScriptedPolicy(), ["push", "reach"], 3, seed0=7)
        self.assertEqual(forward[0].seeds, (7, 8, 9))
        self.assertEqual(forward, backward[::-1])

    def test_evaluation_leaves_parameters_alone(self):
        params = init_params(3)
        before = params.copy()
        evaluate(DcPolicy(params), ["reach"], 1)
        self.assertEqual(params, before)

    def test_needs_an_episode(self):
        with self.assertRaises(ValueError):
            evaluate(StillPolicy(), ["reach"], 0)

    def test_plans_over_the_full_set(self):
        tasks = [task.name for task in list_tasks(TaskSet.FULL20)]
        results = evaluate(PlanPolicy(task_plans(tasks, source="corpus")), tasks, 10)
        levels = [point.level for point in success_cdf(results)]
        self.assertGreaterEqual(sum(level >= 0.9 for level in levels), 10)
        self.assertGreater(sum(level > 0 for level in levels), 10)


class CdfTestCase(SimpleTestCase):
    def test_points(self):
        results = [result("a", [True]), result("b", [False]), result("c", [True])]
        self.assertEqual(
            success_cdf(results),
            [CdfPoint(1, 1.0), CdfPoint(2, 1.0), CdfPoint(3, 0.0)],
        )

    def test_flat(self):
        results = [result(task.name, [True, False]) for task in TASKS]
        self.assertEqual({point.level for point in success_cdf(results)}, {0.5})

    @hsettings(max_examples=100, deadline=None)
    @given(st.lists(st.lists(st.booleans(), min_size=1, max_size=8), min_size=1, max_size=20))
    def test_nonincreasing(self, flag_lists):
        points = success_cdf([result("t%d" % i, flags) for i, flags in enumerate(flag_lists)])
        self.assertEqual([point.rank for point in points], list(range(1, len(points) + 1)))
        for earlier, later in zip(points, points[1:]):
            self.assertGreaterEqual(earlier.level, later.level)

    def test_empty(self):
        with self.assertRaises(ValueError):
            success_cdf([])

    def test_bands_over_four_seeds(self):
        runs = [
            [result("reach", [True, True]), result("push", [False, False])],
            [result("reach", [True, False]), result("push", [False, False])],
            [result("reach", [True, True]), result("push", [True, False])],
            [result("reach", [False, False]), result("push", [True, True])],
        ]
        rows = {row.task: row for row in summarize(runs)}
        self.assertEqual((rows["reach"].min, rows["reach"].max), (0.0, 1.0))
        self.assertEqual(rows["reach"].success_rate, 0.625)
        self.assertEqual(rows["push"].n, 2)
        band, = cdf_bands(runs)
        self.assertEqual(band.high, (1.0, 0.5))
        self.assertEqual(band.low, (0.5, 0.0))
        self.assertEqual([point.level for point in band.points], [0.875, 0.125])


class ReportTestCase(SimpleTestCase):
    def setUp(self):
        self.runs = [
            [result("reach", [True, True], "pcbc"), result("push", [True, False], "pcbc"),
             result("reach", [True, False], "dc"), result("push", [False, False], "dc")],
            [result("reach", [True, False], "pcbc"), result("push", [True, True], "pcbc"),
             result("reach", [False, False], "dc"), result("push", [False, True], "dc")],
        ]
        self.rows = summarize(self.runs)
        self.bands = cdf_bands(self.runs)

    def test_writes_three_files(self):
        with tempfile.TemporaryDirectory() as out:
            paths = write_report(self.rows, self.bands, out, runs=self.runs)
            self.assertEqual(sorted(path.name for path in paths),
                             ["cdf.svg", "results.csv", "results.json"])
            self.assertTrue(all(path.exists() for path in paths))

    def test_csv_matches_json(self):
        with tempfile.TemporaryDirectory() as out:
            write_report(self.rows, self.bands, out, runs=self.runs)
            csv_rows = read_csv(Path(out) / "results.csv")
            rows, bands, runs = read_report(Path(out) / "results.json")
        self.assertEqual(list(csv_rows[0]), ["policy", "task", "n", "success_rate", "min", "max"])
        self.assertEqual(rows, self.rows)
        self.assertEqual(bands, self.bands)
        self.assertEqual(runs, self.runs)
        for line, row in zip(csv_rows, rows):
            self.assertEqual((line["policy"], line["task"], int(line["n"])), (row.policy, row.task, row.n))
            self.assertEqual(float(line["success_rate"]), row.success_rate)
            self.assertEqual((float(line["min"]), float(line["max"])), (row.min, row.max))

    def test_svg_is_well_formed(self):
        with tempfile.TemporaryDirectory() as out:
            write_report(self.rows, self.bands, out, formats=("svg",))
            root = ElementTree.parse(Path(out) / "cdf.svg").getroot()
        self.assertTrue(root.tag.endswith("svg"))

    def test_byte_identical(self):
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            write_report(self.rows, self.bands, first)
            write_report(self.rows, self.bands, second)
            for name in ("results.csv", "results.json", "cdf.svg"):
                self.assertEqual((Path(first) / name).read_bytes(), (Path(second) / name).read_bytes())

    def test_unknown_format(self):
        with tempfile.TemporaryDirectory() as out:
            with self.assertRaises(ValueError):
                write_report(self.rows, self.bands, out, formats=("png",))
