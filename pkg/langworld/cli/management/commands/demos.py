from pathlib import Path

from django.core.management.base import CommandError

from langworld.cli.base import LangWorldCommand, task_names
from langworld.skills.demos import MANIFEST, generate_demos, read_demoset, write_demoset
from langworld.training.datasets import demo_states
from langworld.world.models import Action
from langworld.world.trajectories import write_trajectory


class Command(LangWorldCommand):
    help = "Generate expert demonstrations or inspect a demo set."
    actions = ("generate", "show")

    def add_generate_arguments(self, parser):
        parser.add_argument("--tasks", default=None,
                            help="task selector (default: the config's data configuration)")
        parser.add_argument("--per-task", type=int, default=None,
                            help="successful episodes per task (default: the data configuration's)")

    def add_show_arguments(self, parser):
        parser.add_argument("demos", help="demo set directory")
        parser.add_argument("--task", help="only this task")
        parser.add_argument("--episode", type=int,
                            help="dump the replayed trajectory of the demo with this seed")

    def handle_generate(self, tasks, per_task, seed, jobs, **options):
        data = self.config.data
        names = task_names(tasks) if tasks else data.demo_tasks
        demoset = generate_demos(names, per_task or data.demos_per_task, seed, jobs=jobs)
        out = self.out_dir()
        written = write_demoset(demoset, out / "demos")
        self.finish(out, written, seeds=[seed])

    def handle_show(self, demos, task, episode, **options):
        demoset = read_demoset(demos, tasks=[task] if task else None)
        for name, episodes in demoset.demos.items():
            attempts = demoset.attempts.get(name, [])
            self.stdout.write("%s\t%d demos\t%d attempts\tseeds %s" % (
                name, len(episodes), len(attempts), ",".join(str(demo.seed) for demo in episodes)
            ))
        if episode is None:
            return
        if not task:
            raise CommandError("--episode needs --task")
        demo = next((demo for demo in demoset.demos.get(task, []) if demo.seed == episode), None)
        if demo is None:
            raise CommandError("no %s demo with seed %d" % (task, episode))
        out = self.out_dir()
        states = demo_states(demo)
        actions = [Action(*(float(v) for v in row)) for row in demo.actions]
        path = write_trajectory(out / ("%s-%d.jsonl" % (task, episode)), task, episode,
                                states, actions)
        self.finish(out, [path], seeds=[episode], inputs=[Path(demos) / MANIFEST])
