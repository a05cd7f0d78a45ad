from langworld.cli.base import LangWorldCommand, task_names
from langworld.cli.pipeline import evaluation_policy
from langworld.evalkit.evaluation import cdf_bands, evaluate, summarize
from langworld.evalkit.policies import POLICY_KINDS
from langworld.evalkit.reports import write_report


class Command(LangWorldCommand):
    help = "Evaluate a policy and write results.csv, results.json and cdf.svg."

    def add_command_arguments(self, parser):
        parser.add_argument("--policy", choices=POLICY_KINDS, default="scripted")
        parser.add_argument("--tasks", default="full")
        parser.add_argument("--episodes", type=int, default=None)
        parser.add_argument("--checkpoint", nargs="+", default=None,
                            help="pcbc/dc checkpoints; one evaluation run each")
        parser.add_argument("--runs", type=int, default=1,
                            help="repeat scripted/plans/random runs on shifted seeds")

    def run(self, policy, tasks, episodes, checkpoint, runs, seed, jobs, **options):
        names = task_names(tasks)
        episodes = episodes or self.config.eval_episodes
        if checkpoint:
            policies = [evaluation_policy(policy, self.config, names, path) for path in checkpoint]
        else:
            policies = [evaluation_policy(policy, self.config, names, seed=seed)] * runs
        evaluations = [
            evaluate(candidate, names, episodes, seed + run * episodes, jobs)
            for run, candidate in enumerate(policies)
        ]
        out = self.out_dir()
        written = write_report(summarize(evaluations), cdf_bands(evaluations), out, runs=evaluations)
        self.finish(out, written, seeds=[seed], inputs=checkpoint or ())
