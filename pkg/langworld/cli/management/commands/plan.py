import logging
import sys
from pathlib import Path

from django.core.management.base import CommandError

from langworld.cli.base import LangWorldCommand, task_names
from langworld.evalkit.rollouts import best_of_plans
from langworld.exceptions import MissingFixtureError
from langworld.plans.completion import FixtureStore, ReplayBackend, complete, make_request
from langworld.plans.formats import decode_plan, encode_plan
from langworld.plans.grounding import decode_completion, ground_plan
from langworld.plans.models import PlanFormat
from langworld.plans.prompts import build_prompt, manual_library
from langworld.plans.schemas import ConditionalPlanSchema
from langworld.plans.seeding import task_plans
from langworld.utils import write_csv, write_json

logger = logging.getLogger(__name__)

FORMATS = [fmt.value for fmt in PlanFormat]
COMPARE_FIELDS = ("format", "task", "best", "rates")


def read_text(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


class Command(LangWorldCommand):
    help = "Encode, decode, ground and prompt for conditional plans."
    actions = ("encode", "decode", "ground", "prompt", "compare")

    def _plan_arguments(self, parser):
        parser.add_argument("task")
        parser.add_argument("--format", dest="plan_format", choices=FORMATS, default=None)

    def _text_arguments(self, parser):
        self._plan_arguments(parser)
        parser.add_argument("file", help="plan text, or - for stdin")
        parser.add_argument("--completion", action="store_true",
                            help="the text is a completion without the task header")

    def add_encode_arguments(self, parser):
        self._plan_arguments(parser)
        parser.add_argument("--source", choices=("manual", "corpus"), default=None)

    add_decode_arguments = _text_arguments
    add_ground_arguments = _text_arguments
    add_prompt_arguments = _plan_arguments

    def add_compare_arguments(self, parser):
        parser.add_argument("--tasks", default="held-out")
        parser.add_argument("--episodes", type=int, default=None)
        parser.add_argument("--fixtures", help="fixture directory (default: the checked-in one)")

    def _format(self, plan_format):
        return PlanFormat(plan_format) if plan_format else self.config.plan_format

    def _decode(self, task, plan_format, file, completion):
        text = read_text(file)
        if completion:
            return decode_completion(task, text, plan_format)
        return decode_plan(text, plan_format, task=task)

    def handle_encode(self, task, plan_format, source, **options):
        plan = task_plans([task], source or self.config.plan_source)[task]
        self.stdout.write(encode_plan(plan, self._format(plan_format)), ending="")

    def handle_decode(self, task, plan_format, file, completion, **options):
        plan = self._decode(task, self._format(plan_format), file, completion)
        self.stdout.write(ConditionalPlanSchema().dumps(plan, indent=2, sort_keys=True))

    def handle_ground(self, task, plan_format, file, completion, **options):
        plan_format = self._format(plan_format)
        plan = ground_plan(self._decode(task, plan_format, file, completion), task)
        self.stdout.write(encode_plan(plan, plan_format), ending="")

    def handle_prompt(self, task, plan_format, **options):
        self.stdout.write(build_prompt(task, self._format(plan_format), manual_library()), ending="")

    def handle_compare(self, tasks, episodes, fixtures, seed, **options):
        """Best-of-samples scripted success of replayed completions, per format."""
        backend = ReplayBackend(FixtureStore(fixtures))
        library = manual_library()
        seeds = range(seed, seed + (episodes or self.config.eval_episodes))
        samples = self.config.completion_samples
        rows = []
        for plan_format in PlanFormat:
            for task in task_names(tasks):
                prompt = build_prompt(task, plan_format, library)
                try:
                    plans = [
                        ground_plan(decode_completion(
                            task, complete(make_request(prompt, i), backend).text, plan_format
                        ), task)
                        for i in range(samples)
                    ]
                except MissingFixtureError:
                    logger.warning("no %s fixtures for %s; skipped", plan_format.value, task)
                    continue
                best, rates = best_of_plans(plans, task, seeds)
                rows.append({
                    "format": plan_format.value,
                    "task": task,
                    "best": best,
                    "rates": " ".join(repr(rate) for rate in rates),
                })
        if not rows:
            raise CommandError("missing-fixture: no replay fixtures for any format; run `lw llm seed`")
        out = self.out_dir()
        written = [
            write_csv(out / "compare.csv", COMPARE_FIELDS, rows),
            write_json(out / "compare.json", rows),
        ]
        self.finish(out, written, seeds=list(seeds))
