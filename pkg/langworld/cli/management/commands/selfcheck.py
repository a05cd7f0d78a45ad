from django.conf import settings
from django.core.management.base import CommandError
from django.test.utils import get_runner

from langworld.cli.base import LangWorldCommand
from langworld.pcbc.gradcheck import grad_check, random_instance
from langworld.pcbc.models import Architecture

# property and oracle suites: QAF oracle, edit distance, attention closed forms,
# plan round trips, co-learning composition
SUITES = (
    "langworld.queries.tests",
    "langworld.pcbc.tests.AttentionTestCase",
    "langworld.plans.tests.EncodePlanTestCase",
    "langworld.training.tests.SampleColearningTestCase",
)
GRADCHECK_SEEDS = 10


class Command(LangWorldCommand):
    help = "Gradient checks on random instances, then the oracle test suites."

    def add_command_arguments(self, parser):
        parser.add_argument("--skip-suites", action="store_true")

    def run(self, skip_suites, seed, **options):
        for offset in range(GRADCHECK_SEEDS):
            for architecture in Architecture:
                instance = random_instance(architecture, seed + offset)
                report = grad_check(instance, seed=seed + offset, strict=True)
                self.stdout.write("gradcheck %s seed %d: max relative error %.3g" % (
                    architecture.value, seed + offset, report.max_relative_error
                ))
        if skip_suites:
            return
        runner = get_runner(settings)(verbosity=0, interactive=False)
        failures = runner.run_tests(list(SUITES))
        if failures:
            raise CommandError("selfcheck: %d oracle suite failures" % failures)
        self.stdout.write("selfcheck ok")
