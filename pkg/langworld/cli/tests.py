import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from marshmallow import ValidationError

import lw
from langworld.cli.base import load_run_config
from langworld.cli.manifests import MANIFEST, read_manifest
from langworld.cli.pipeline import plans_for
from langworld.cli.schemas import RunConfigSchema
from langworld.evalkit.reports import read_report
from langworld.plans.completion import FixtureStore
from langworld.plans.prompts import manual_plan
from langworld.plans.seeding import grounded_corpus, seed_fixtures
from langworld.queries.evaluator import eval_query
from langworld.queries.grammar import parse_query
from langworld.training.models import DataConfig
from langworld.utils import read_csv, write_json
from langworld.world.dynamics import reset
from langworld.world.schemas import WorldStateSchema

SMALL = {
    "train": {"batch_size": 20, "steps": 5, "log_every": 1},
    "data": "zero_shot",
    "eval_episodes": 1,
    "eval_seeds": 1,
}


def lw_call(*args):
    out = StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def tree_bytes(directory):
    return {
        path.relative_to(directory).as_posix(): path.read_bytes()
        for path in sorted(Path(directory).rglob("*")) if path.is_file()
    }


class RunConfigTestCase(SimpleTestCase):
    def test_defaults(self):
        config = load_run_config()
        self.assertEqual(config.train.batch_size, 120)
        self.assertEqual(config.data, DataConfig.FEW_SHOT)
        self.assertEqual(config.eval_episodes, 50)
        self.assertEqual(config.eval_seeds, 4)
        self.assertIsNone(config.completion)

    def test_held_out_tasks_get_generated_plans(self):
        config = load_run_config()
        self.assertEqual(config.plan_source, "corpus")
        self.assertEqual(plans_for(config, ["coffee-button"])["coffee-button"],
                         grounded_corpus()["coffee-button"][0])
        self.assertEqual(plans_for(config, ["drawer-open"])["drawer-open"], manual_plan("drawer-open"))

    def test_batch_cap(self):
        with self.assertRaises(ValidationError) as caught:
            RunConfigSchema().load({"train": {"batch_size": 200}})
        self.assertIn("train", caught.exception.messages)

    def test_hash_follows_results_affecting_fields(self):
        with tempfile.TemporaryDirectory() as out:
            first, second = Path(out) / "a.json", Path(out) / "b.json"
            write_json(first, SMALL)
            write_json(second, dict(SMALL, eval_episodes=2))
            ids = []
            for path in (first, first, second):
                lw_call("tasks", "export", "--config", str(path), "--out", str(Path(out) / "x"))
                ids.append(read_manifest(Path(out) / "x" / MANIFEST).config_hash)
        self.assertEqual(ids[0], ids[1])
        self.assertNotEqual(ids[0], ids[2])


class CommandLineTestCase(SimpleTestCase):
    def test_tasks_list(self):
        self.assertEqual(len(lw_call("tasks", "list", "--set", "base").splitlines()), 10)
        self.assertEqual(len(lw_call("tasks", "list").splitlines()), 20)

    def test_unknown_command_lists_commands(self):
        stderr = StringIO()
        with mock.patch("sys.stderr", stderr), self.assertRaises(SystemExit) as caught:
            lw.main(["lw.py", "frobnicate"])
        self.assertEqual(caught.exception.code, 2)
        self.assertIn("experiment", stderr.getvalue())

    def test_usage_errors_exit_two(self):
        for argv in (["tasks", "list", "--bogus"], ["tasks"], ["eval", "--policy", "oracle"]):
            with mock.patch("sys.stderr", StringIO()), self.assertRaises(SystemExit) as caught:
                lw.main(["lw.py"] + argv)
            self.assertEqual(caught.exception.code, 2)

    def test_validation_failure_is_one_line(self):
        with tempfile.TemporaryDirectory() as out:
            path = write_json(Path(out) / "bad.json", {"train": {"batch_size": 200}})
            with self.assertRaises(CommandError) as caught:
                lw_call("tasks", "export", "--config", str(path), "--out", out)
        message = str(caught.exception)
        self.assertTrue(message.startswith("validation: "))
        self.assertNotIn("\n", message)
        self.assertIn("batch_size", message)

    def test_library_errors_become_command_errors(self):
        with self.assertRaises(CommandError) as caught:
            lw_call("query", "list", "--task", "no-such-task")
        self.assertTrue(str(caught.exception).startswith("unknown-task: "))

    def test_query_actions(self):
        queries = lw_call("query", "list", "--task", "drawer-open").splitlines()
        self.assertIn("the gripper is above the drawer handle", queries)
        self.assertEqual(
            lw_call("query", "nearest", "--task", "drawer-open", "the gripper is abov the drawer handle").strip(),
            "the gripper is above the drawer handle",
        )
        answer = lw_call("query", "eval", "--task", "reach", "--query", "the gripper is open", "--seed", "2")
        self.assertIn(answer.split("\t")[0], ("true", "false"))

    def test_query_eval_on_a_state_file(self):
        state = reset("drawer-open", 3)
        query = "the gripper is not near the drawer handle"
        with tempfile.TemporaryDirectory() as out:
            path = write_json(Path(out) / "state.json", WorldStateSchema().dump(state))
            answer = lw_call("query", "eval", "--task", "drawer-open", "--state", str(path),
                             "--query", query)
        truth = eval_query(parse_query(query, "drawer-open"), state)
        self.assertEqual(answer.rstrip("\n"), "%s\t%s" % (str(truth).lower(), query))

    def test_plan_actions(self):
        encoded = lw_call("plan", "encode", "drawer-open", "--format", "plain_list")
        self.assertIn("if the gripper is closed and around the drawer: pull the drawer open", encoded)
        prompt = lw_call("plan", "prompt", "door-close", "--format", "chain_py")
        self.assertTrue(prompt.endswith("# door-close: close the door\ndef door_close(robot):\n"))
        self.assertNotIn("door_close(robot):\n    #", prompt)
        with tempfile.TemporaryDirectory() as out:
            path = Path(out) / "plan.txt"
            path.write_text(encoded, encoding="utf-8")
            decoded = json.loads(lw_call("plan", "decode", "drawer-open", str(path), "--format", "plain_list"))
            grounded = lw_call("plan", "ground", "drawer-open", str(path), "--format", "plain_list")
        self.assertEqual(len(decoded["steps"]), 5)
        self.assertEqual(grounded, encoded)

    def test_llm_replay_and_http_config(self):
        with tempfile.TemporaryDirectory() as fixtures:
            seed_fixtures(FixtureStore(fixtures))
            text = lw_call("llm", "complete", "door-close", "--samples", "2", "--fixtures", fixtures)
        self.assertEqual(text.count("# sample"), 2)
        self.assertIn("robot.", text)
        with self.assertRaises(CommandError):
            lw_call("llm", "complete", "door-close", "--backend", "http")


class PipelineTestCase(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.workdir = tempfile.TemporaryDirectory()
        cls.root = Path(cls.workdir.name)
        cls.config = str(write_json(cls.root / "small.json", SMALL))
        lw_call("demos", "generate", "--tasks", "base", "--per-task", "1", "--seed", "3",
                "--config", cls.config, "--out", str(cls.root / "demos-a"))

    @classmethod
    def tearDownClass(cls):
        cls.workdir.cleanup()
        super().tearDownClass()

    def test_demos_are_reproducible(self):
        out = self.root / "demos-b"
        lw_call("demos", "generate", "--tasks", "base", "--per-task", "1", "--seed", "3",
                "--config", self.config, "--out", str(out))
        self.assertEqual(tree_bytes(self.root / "demos-a"), tree_bytes(out))
        manifest = read_manifest(out / MANIFEST)
        self.assertEqual(manifest.command, "demos generate")
        self.assertEqual(len(manifest.outputs), 11)
        self.assertTrue(all(entry.digest for entry in manifest.outputs))

    def test_demos_show(self):
        listing = lw_call("demos", "show", str(self.root / "demos-a" / "demos"), "--task", "push")
        self.assertTrue(listing.startswith("push\t1 demos"))

    def test_train_then_evaluate(self):
        demos = str(self.root / "demos-a" / "demos")
        runs = []
        for name in ("train-a", "train-b"):
            out = self.root / name
            lw_call("train", "--arch", "pcbc", "--demos", demos, "--config", self.config, "--out", str(out))
            runs.append(out)
        first, second = (tree_bytes(out) for out in runs)
        self.assertEqual(first.pop("pcbc.ckpt.json"), second.pop("pcbc.ckpt.json"))
        self.assertEqual(first[MANIFEST], second[MANIFEST])
        manifest = read_manifest(runs[0] / MANIFEST)
        log, = [entry for entry in manifest.outputs if entry.volatile]
        self.assertEqual((log.path, log.digest), ("pcbc.log.csv", None))
        self.assertEqual(len(read_csv(runs[0] / "pcbc.log.csv")), 5)

        out = self.root / "eval-pcbc"
        lw_call("eval", "--policy", "pcbc", "--checkpoint", str(runs[0] / "pcbc.ckpt.json"),
                "--tasks", "reach,door-close", "--episodes", "1", "--out", str(out))
        rows = read_csv(out / "results.csv")
        self.assertEqual([row["task"] for row in rows], ["reach", "door-close"])

    def test_scripted_eval_is_reproducible(self):
        outs = [self.root / "eval-a", self.root / "eval-b"]
        for out in outs:
            lw_call("eval", "--policy", "scripted", "--tasks", "reach,push", "--episodes", "3",
                    "--out", str(out))
        self.assertEqual(tree_bytes(outs[0]), tree_bytes(outs[1]))
        rows = read_csv(outs[0] / "results.csv")
        self.assertEqual(list(rows[0]), ["policy", "task", "n", "success_rate", "min", "max"])
        self.assertEqual({row["n"] for row in rows}, {"3"})

        merged = self.root / "merged"
        lw_call("report", str(outs[0] / "results.json"), str(outs[1] / "results.json"),
                "--out", str(merged))
        rows, bands, runs = read_report(merged / "results.json")
        self.assertEqual(len(rows), 2)
        self.assertEqual(len(runs), 1)
        self.assertEqual(len(runs[0]), 4)

    def test_scripted_experiment(self):
        out = self.root / "experiment"
        lw_call("experiment", "scripted", "--config", self.config, "--out", str(out))
        rows = read_csv(out / "results.csv")
        self.assertEqual({row["policy"] for row in rows}, {"scripted", "plans"})
        self.assertEqual(len(rows), 40)
        self.assertTrue((out / "cdf.svg").exists())

    def test_selfcheck_gradients(self):
        output = lw_call("selfcheck", "--skip-suites")
        self.assertEqual(output.count("gradcheck"), 20)
