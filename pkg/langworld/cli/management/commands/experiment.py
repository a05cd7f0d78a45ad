from langworld.cli.base import LangWorldCommand
from langworld.cli.pipeline import EXPERIMENTS, run_experiment


class Command(LangWorldCommand):
    help = "Run a data configuration end to end: demos, training, evaluation, report."

    def add_command_arguments(self, parser):
        parser.add_argument("experiment", choices=EXPERIMENTS)

    def run(self, experiment, seed, jobs, **options):
        out = self.out_dir()
        written, volatile = run_experiment(experiment, self.config, seed, out, jobs)
        seeds = [seed + run for run in range(self.config.eval_seeds)]
        self.finish(out, written, seeds=seeds, volatile=volatile)
