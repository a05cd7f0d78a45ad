import hashlib
import json
import os
import tempfile
from pathlib import Path
from unittest import mock

import httpx
from django.test import SimpleTestCase
from hypothesis import given, settings as hsettings, strategies as st
from marshmallow import ValidationError

from langworld.exceptions import (
    CompletionStatusError,
    CompletionTransportError,
    MissingFixtureError,
    MissingPlanError,
    PlanDecodeError,
)
from langworld.plans.calls import description_to_skill_call, skill_call_to_description
from langworld.plans.completion import (
    FixtureStore,
    HttpBackend,
    ReplayBackend,
    complete,
    fixture_key,
    make_request,
)
from langworld.plans.formats import decode_plan, encode_header, encode_plan
from langworld.plans.grounding import decode_completion, ground_plan
from langworld.plans.models import ConditionalPlan, PlanFormat, PlanStep
from langworld.plans.prompts import build_prompt, exemplar_tasks, manual_library, manual_plan
from langworld.plans.schemas import ConditionalPlanSchema, HttpBackendSchema
from langworld.plans.seeding import grounded_corpus, load_corpus, seed_fixtures
from langworld.queries.catalog import supported_queries
from langworld.queries.distance import edit_distance
from langworld.queries.grammar import parse_query, render_query
from langworld.queries.models import Query
from langworld.skills.library import DESCRIPTIONS, get_skill
from langworld.world.models import TaskSet
from langworld.world.tasks import TASKS, get_task, list_tasks

TABLE_ONE = ConditionalPlan(
    task="drawer-open",
    description="open the drawer",
    steps=(
        PlanStep("the gripper is closed and not near the drawer handle", "open the gripper"),
        PlanStep("the gripper is not near the drawer handle",
                 "move the gripper above the drawer handle"),
        PlanStep("the gripper is above the drawer handle",
                 "move the gripper down around the drawer handle"),
        PlanStep("the gripper is open and around the drawer", "close the gripper"),
        PlanStep("the gripper is closed and around the drawer", "pull the drawer open"),
    ),
)

FIG_THREE = '''Here is the plan for the new task.

```python
# pick-place: pick up the puck and place it at the goal
def pick_place(robot):
    # Steps:
    #  1. Open the gripper
    #  2. Place the gripper above the puck
    #  3. Move the gripper down around the puck
    #  4. Close the gripper
    #  5. Move the puck to the goal
    if check("the gripper is closed and not near the puck"):
        robot.open("gripper")
    elif check("the gripper is not near the puck"):
        robot.place("gripper above puck")
    elif check("the gripper is above the puck"):
        robot.move("gripper down around puck")
    elif check("the gripper is open and around the puck"):
        robot.close_gripper()
    elif check("the gripper is closed and around the puck"):
        robot.move("puck to goal")
```
I hope this helps!
'''


def conjunction(task, first, second):
    literals = list(parse_query(first, task).literals)
    for literal in parse_query(second, task).literals:
        if literal not in literals:
            literals.append(literal)
    return render_query(Query(tuple(literals)))


@st.composite
def plans(draw):
    task = draw(st.sampled_from(TASKS))
    catalog = supported_queries(task)
    steps = []
    for _ in range(draw(st.integers(1, 6))):
        condition = draw(st.sampled_from(catalog))
        if draw(st.booleans()):
            condition = conjunction(task, condition, draw(st.sampled_from(catalog)))
        steps.append(PlanStep(condition, draw(st.sampled_from(DESCRIPTIONS))))
    return ConditionalPlan(task.name, task.description, tuple(steps))


class EncodePlanTestCase(SimpleTestCase):
    def test_table_one_plain_list(self):
        text = encode_plan(TABLE_ONE, PlanFormat.PLAIN_LIST)
        lines = text.splitlines()
        self.assertEqual(lines[:2], ["task: drawer-open", "description: open the drawer"])
        self.assertEqual(lines[2:], ["if %s: %s" % pair for pair in TABLE_ONE.pairs])

    def test_chain_py_shape(self):
        text = encode_plan(TABLE_ONE, PlanFormat.CHAIN_PY)
        self.assertTrue(text.startswith("# drawer-open: open the drawer\ndef drawer_open(robot):\n"))
        self.assertEqual(text.count("elif "), len(TABLE_ONE.steps) - 1)
        self.assertIn('robot.move("gripper above drawer handle")', text)
        self.assertIn('robot.pull("drawer open")', text)
        self.assertIn("# Steps:", text)

    def test_basic_py_md_shape(self):
        text = encode_plan(TABLE_ONE, PlanFormat.BASIC_PY_MD)
        self.assertTrue(text.startswith("### drawer-open\nTask: open the drawer\n```python\n"))
        self.assertIn('    skill("pull the drawer open")', text)
        self.assertTrue(text.endswith("```\n"))

    def test_encoding_is_deterministic(self):
        for plan_format in PlanFormat:
            self.assertEqual(encode_plan(TABLE_ONE, plan_format), encode_plan(TABLE_ONE, plan_format))

    @hsettings(max_examples=100, deadline=None)
    @given(plans())
    def test_round_trip_every_format(self, plan):
        for plan_format in PlanFormat:
            self.assertEqual(decode_plan(encode_plan(plan, plan_format), plan_format), plan)


class DecodePlanTestCase(SimpleTestCase):
    def test_chain_of_thought_comments_are_ignored(self):
        plan = decode_plan(FIG_THREE, PlanFormat.CHAIN_PY)
        self.assertEqual(plan.task, "pick-place")
        self.assertEqual(plan.description, "pick up the puck and place it at the goal")
        self.assertEqual(
            [step.skill for step in plan.steps],
            [
                "open the gripper",
                "place the gripper above the puck",
                "move the gripper down around the puck",
                "close the gripper",
                "move the puck to the goal",
            ],
        )
        self.assertEqual(plan.steps[0].condition, "the gripper is closed and not near the puck")

    def test_reencoding_a_decoded_text(self):
        plan = decode_plan(FIG_THREE, PlanFormat.CHAIN_PY)
        again = decode_plan(encode_plan(plan, PlanFormat.CHAIN_PY), PlanFormat.CHAIN_PY)
        self.assertEqual(again, plan)

    def test_text_without_steps_is_an_error(self):
        for plan_format in PlanFormat:
            with self.assertRaises(PlanDecodeError) as caught:
                decode_plan("Sorry, I cannot help with that.\n", plan_format)
            self.assertEqual(caught.exception.raw_text, "Sorry, I cannot help with that.\n")

    def test_plain_list_tolerates_prose_and_numbering(self):
        text = (
            "Sure! Here is a plan:\n"
            "task: reach\n"
            "1. if the gripper is not near the goal: move the gripper to the goal.\n"
            "That should do it.\n"
        )
        plan = decode_plan(text, PlanFormat.PLAIN_LIST)
        self.assertEqual(plan.task, "reach")
        self.assertEqual(plan.pairs, [("the gripper is not near the goal", "move the gripper to the goal")])

    def test_basic_py_md_check_and_call_on_one_line(self):
        text = 'if check("the gripper is open"): skill("close the gripper")\n'
        plan = decode_plan(text, PlanFormat.BASIC_PY_MD, task="reach", description="x")
        self.assertEqual(plan.pairs, [("the gripper is open", "close the gripper")])
        self.assertEqual(plan.task, "reach")

    def test_unparsable_call_is_skipped(self):
        text = (
            'if check("the gripper is open"):\n'
            "    robot.close_gripper(force=2)\n"
            'elif check("the gripper is closed"):\n'
            "    robot.open_gripper()\n"
        )
        plan = decode_plan(text, PlanFormat.CHAIN_PY)
        self.assertEqual(plan.pairs, [("the gripper is closed", "open the gripper")])

    def test_note_comment_is_not_a_header(self):
        text = (
            "# Note: the handle sticks\n"
            "def drawer_open(robot):\n"
            '    if check("the gripper is open"):\n'
            "        robot.close_gripper()\n"
        )
        self.assertEqual(decode_plan(text, PlanFormat.CHAIN_PY).task, "")
        plan = decode_plan(text, PlanFormat.CHAIN_PY, task="drawer-open")
        self.assertEqual((plan.task, plan.description), ("drawer-open", ""))

    def test_caller_task_wins_over_the_header(self):
        plan = decode_plan(FIG_THREE, PlanFormat.CHAIN_PY, task="shelf-place")
        self.assertEqual(plan.task, "shelf-place")
        self.assertEqual(plan.description, "pick up the puck and place it at the goal")


class SkillCallTestCase(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(
            skill_call_to_description('robot.place("gripper above puck")'),
            "place the gripper above the puck",
        )
        self.assertEqual(skill_call_to_description("robot.close_gripper()"), "close the gripper")
        self.assertEqual(
            skill_call_to_description('robot.move("gripper to right of faucet handle")'),
            "move the gripper to the right of the faucet handle",
        )
        self.assertEqual(skill_call_to_description("robot.turn('faucet right')"), "turn the faucet right")

    def test_total_over_library_vocabulary(self):
        for description in DESCRIPTIONS:
            call = description_to_skill_call(description)
            self.assertEqual(skill_call_to_description(call), description)
            self.assertEqual(skill_call_to_description(call), skill_call_to_description(call))

    def test_existing_articles_are_not_doubled(self):
        self.assertEqual(
            skill_call_to_description('robot.move("the gripper to the goal")'),
            "move the gripper to the goal",
        )

    def test_non_matching_call(self):
        for call in ("place gripper above puck", "robot.place(gripper)", "arm.move()"):
            with self.assertRaises(PlanDecodeError):
                skill_call_to_description(call)


class BuildPromptTestCase(SimpleTestCase):
    def setUp(self):
        self.library = manual_library()

    def test_drawer_close_exemplars(self):
        target = get_task("drawer-close")
        distances = {
            task.name: edit_distance(task.description, target.description)
            for task in list_tasks(TaskSet.BASE10)
            if task.name not in ("drawer-close", "pick-place")
        }
        best = min(distances.values())
        exemplars = exemplar_tasks(target, self.library)
        self.assertEqual(exemplars[0], "pick-place")
        self.assertEqual(distances[exemplars[1]], best)
        self.assertIn("drawer-open", exemplars)
        prompt = build_prompt(target, PlanFormat.PLAIN_LIST, self.library)
        self.assertIn("task: pick-place\n", prompt)
        self.assertIn("task: drawer-open\n", prompt)

    def test_target_plan_never_in_its_prompt(self):
        for task in TASKS:
            for plan_format in PlanFormat:
                prompt = build_prompt(task, plan_format, self.library)
                self.assertNotIn(encode_plan(manual_plan(task), plan_format), prompt)
                self.assertTrue(
                    prompt.endswith(encode_header(task.name, task.description, plan_format))
                )
                self.assertEqual(len(exemplar_tasks(task, self.library)), 3)
                self.assertNotIn(task.name, exemplar_tasks(task, self.library))

    def test_prompt_is_deterministic(self):
        self.assertEqual(
            build_prompt("door-close", PlanFormat.CHAIN_PY, manual_library()),
            build_prompt("door-close", PlanFormat.CHAIN_PY, manual_library()),
        )

    def test_library_without_pick_place(self):
        library = dict(self.library)
        del library["pick-place"]
        with self.assertRaises(MissingPlanError):
            build_prompt("reach", PlanFormat.CHAIN_PY, library)

    def test_manual_library_covers_base_tasks(self):
        self.assertEqual(sorted(self.library), sorted(task.name for task in list_tasks(TaskSet.BASE10)))
        self.assertEqual(self.library["drawer-open"], TABLE_ONE)


class CompletionTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.store = FixtureStore(self.tmp.name)
        self.config = HttpBackendSchema().load({"endpoint": "http://llm.test/v1/complete"})

    def backend(self, handler):
        return HttpBackend(self.config, store=self.store, transport=httpx.MockTransport(handler))

    def test_replay_returns_stored_bytes(self):
        request = make_request("prompt text", sample_index=2)
        self.store.save(request, "  if check(\"x\"):\n\trobot.y()\n", "corpus")
        result = complete(request, ReplayBackend(self.store))
        self.assertEqual(result.text, "  if check(\"x\"):\n\trobot.y()\n")
        self.assertEqual(result.backend, "replay")
        self.assertEqual(result.key, fixture_key("prompt text", 2))

    def test_unknown_prompt_is_missing(self):
        with self.assertRaises(MissingFixtureError):
            complete(make_request("never stored"), ReplayBackend(self.store))

    def test_samples_are_keyed_separately(self):
        for index in range(4):
            self.store.save(make_request("p", sample_index=index), "sample %d" % index, "corpus")
        texts = [complete(make_request("p", sample_index=i), ReplayBackend(self.store)).text
                 for i in range(4)]
        self.assertEqual(texts, ["sample 0", "sample 1", "sample 2", "sample 3"])

    def test_key_ignores_sampling_parameters(self):
        self.store.save(make_request("p", temperature=0.0), "cold", "corpus")
        warm = make_request("p", temperature=1.0, max_tokens=64)
        result = complete(warm, ReplayBackend(self.store))
        self.assertEqual(result.text, "cold")
        self.assertEqual(result.key, "%s-0" % hashlib.sha256(b"p").hexdigest())

    def test_http_posts_and_logs_a_fixture(self):
        seen = []

        def handler(request):
            seen.append(request)
            return httpx.Response(200, json={"completion": "if check(\"a\"):\n    robot.b()\n"})

        with mock.patch.dict(os.environ, {self.config.credential_env: "sekret-value"}):
            result = complete(make_request("hello", temperature=0.5, max_tokens=64), self.backend(handler))
        self.assertEqual(result.backend, "http")
        self.assertEqual(result.text, "if check(\"a\"):\n    robot.b()\n")
        self.assertEqual(seen[0].headers["authorization"], "Bearer sekret-value")
        self.assertEqual(
            json.loads(seen[0].content),
            {"prompt": "hello", "temperature": 0.5, "max_tokens": 64},
        )
        replayed = complete(make_request("hello", temperature=0.5, max_tokens=64), ReplayBackend(self.store))
        self.assertEqual(replayed.text, result.text)
        for path in Path(self.tmp.name).iterdir():
            self.assertNotIn("sekret-value", path.read_text())

    def test_http_status_error(self):
        backend = self.backend(lambda request: httpx.Response(503, text="overloaded"))
        with self.assertRaises(CompletionStatusError) as caught:
            complete(make_request("hello"), backend)
        self.assertEqual(caught.exception.status_code, 503)
        self.assertEqual(list(Path(self.tmp.name).iterdir()), [])

    def test_http_transport_error(self):
        def handler(request):
            raise httpx.ConnectError("connection refused", request=request)

        with self.assertRaises(CompletionTransportError):
            complete(make_request("hello"), self.backend(handler))

    def test_http_malformed_body(self):
        backend = self.backend(lambda request: httpx.Response(200, json={"text": "x"}))
        with self.assertRaises(CompletionTransportError):
            complete(make_request("hello"), backend)

    def test_http_config_validation(self):
        with self.assertRaises(ValidationError):
            HttpBackendSchema().load({"endpoint": "not a url"})
        self.assertEqual(self.config.credential_env, "LANGWORLD_LLM_API_KEY")


class GroundPlanTestCase(SimpleTestCase):
    def test_canonical_plan_is_a_fixed_point(self):
        self.assertEqual(ground_plan(TABLE_ONE, "drawer-open"), TABLE_ONE)

    def test_paraphrased_table_one(self):
        paraphrased = ConditionalPlan("drawer-open", "open the drawer", (
            PlanStep("gripper is closed and not near drawer handle", "open gripper"),
            PlanStep("gripper is not near the drawer handle", "move gripper above drawer handle"),
            PlanStep("is the gripper above the drawer handle", "move gripper down around drawer handle"),
            PlanStep("gripper is open and around drawer", "close gripper"),
            PlanStep("gripper is closed and around drawer", "pull drawer open"),
        ))
        self.assertEqual(ground_plan(paraphrased, "drawer-open"), TABLE_ONE)

    def test_grounding_is_idempotent_and_closed(self):
        plan = decode_plan(FIG_THREE, PlanFormat.CHAIN_PY)
        once = ground_plan(plan, "pick-place")
        self.assertEqual(ground_plan(once, "pick-place"), once)
        catalog = set(supported_queries(get_task("pick-place")))
        for step in once.steps:
            self.assertIn(step.skill, DESCRIPTIONS)
            for literal in parse_query(step.condition, "pick-place").literals:
                self.assertIn(render_query(Query((literal,))), catalog)
        self.assertEqual(once.steps[1].skill, "move the gripper above the puck")

    def test_schema_load(self):
        plan = ConditionalPlanSchema().load({
            "task": "reach",
            "description": "reach the goal position with the gripper",
            "steps": [{"condition": "the gripper is not near the goal",
                       "skill": "move the gripper to the goal"}],
        })
        self.assertEqual(plan, manual_plan("reach"))
        with self.assertRaises(ValidationError):
            ConditionalPlanSchema().load({"task": "reach", "description": "x", "steps": []})


class CorpusTestCase(SimpleTestCase):
    def test_four_samples_per_held_out_task(self):
        corpus = load_corpus()
        held_out = sorted(task.name for task in TASKS if not task.is_base)
        self.assertEqual(sorted(corpus), held_out)
        for texts in corpus.values():
            self.assertEqual(len(texts), 4)

    def test_every_sample_grounds_into_the_vocabulary(self):
        for task, plans_ in grounded_corpus().items():
            catalog = set(supported_queries(get_task(task)))
            for plan in plans_:
                for step in plan.steps:
                    self.assertIn(step.skill, DESCRIPTIONS)
                    self.assertIn(get_skill(step.skill).reference, get_task(task).entities)
                    for literal in parse_query(step.condition, task).literals:
                        self.assertIn(render_query(Query((literal,))), catalog)

    def test_flawed_sample_is_kept(self):
        door = grounded_corpus()["door-close"]
        self.assertEqual(door[0].steps[-1].skill, "push the door closed")
        self.assertEqual(door[3].steps[-1].skill, "pull the door open")

    def test_seeded_fixtures_replay_the_corpus(self):
        with tempfile.TemporaryDirectory() as directory:
            store = FixtureStore(directory)
            written = seed_fixtures(store)
            self.assertEqual(len(written), 40)
            library = manual_library()
            corpus = load_corpus()
            for task in ("door-close", "reach-wall"):
                prompt = build_prompt(task, PlanFormat.CHAIN_PY, library)
                for index, text in enumerate(corpus[task]):
                    result = complete(make_request(prompt, sample_index=index), ReplayBackend(store))
                    self.assertEqual(result.text, text)
                    self.assertEqual(
                        decode_completion(task, result.text, PlanFormat.CHAIN_PY),
                        decode_completion(task, text, PlanFormat.CHAIN_PY),
                    )
