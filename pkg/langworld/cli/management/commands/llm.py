from django.core.management.base import CommandError

from langworld.cli.base import LangWorldCommand
from langworld.plans.completion import FixtureStore, HttpBackend, ReplayBackend, complete, make_request
from langworld.plans.models import PlanFormat
from langworld.plans.prompts import build_prompt, manual_library
from langworld.plans.seeding import seed_fixtures

FORMATS = [fmt.value for fmt in PlanFormat]


class Command(LangWorldCommand):
    help = "Complete plan prompts (replayed or over HTTP) and seed replay fixtures."
    actions = ("complete", "seed")

    def add_complete_arguments(self, parser):
        parser.add_argument("task")
        parser.add_argument("--format", dest="plan_format", choices=FORMATS, default=None)
        parser.add_argument("--backend", choices=("replay", "http"), default="replay")
        parser.add_argument("--samples", type=int, default=None)
        parser.add_argument("--fixtures", help="fixture directory (default: the checked-in one)")

    def add_seed_arguments(self, parser):
        parser.add_argument("--format", dest="plan_format", choices=FORMATS, default=None)
        parser.add_argument("--fixtures", help="fixture directory (default: the checked-in one)")
        parser.add_argument("--corpus", help="plan corpus directory (default: the checked-in one)")

    def _backend(self, name, store):
        if name == "replay":
            return ReplayBackend(store)
        if self.config.completion is None:
            raise CommandError("config: the http backend needs a `completion` block in --config")
        # fixture logging is the one write outside --out, and only when enabled
        return HttpBackend(self.config.completion,
                           store=store if self.config.completion.log_fixtures else None)

    def handle_complete(self, task, plan_format, backend, samples, fixtures, **options):
        plan_format = PlanFormat(plan_format) if plan_format else self.config.plan_format
        backend = self._backend(backend, FixtureStore(fixtures))
        prompt = build_prompt(task, plan_format, manual_library())
        for index in range(samples or self.config.completion_samples):
            result = complete(make_request(prompt, sample_index=index), backend)
            self.stdout.write("# sample %d (%s %s)" % (index, result.backend, result.key))
            self.stdout.write(result.text, ending="" if result.text.endswith("\n") else "\n")

    def handle_seed(self, plan_format, fixtures, corpus, **options):
        plan_format = PlanFormat(plan_format) if plan_format else self.config.plan_format
        written = seed_fixtures(FixtureStore(fixtures), corpus, plan_format)
        self.stdout.write("%d fixtures" % len(written))
