from langworld.cli.base import LangWorldCommand
from langworld.queries.catalog import supported_queries
from langworld.queries.evaluator import eval_query
from langworld.queries.grammar import parse_query, render_query
from langworld.queries.matching import nearest_query
from langworld.skills.executor import compile_plan
from langworld.skills.experts import expert_plan
from langworld.utils import read_json
from langworld.world.dynamics import reset, step
from langworld.world.schemas import WorldStateSchema


class Command(LangWorldCommand):
    help = "Answer, list or match queries about a task's scene."
    actions = ("eval", "list", "nearest")

    def _task_argument(self, parser):
        parser.add_argument("--task", required=True)

    def add_eval_arguments(self, parser):
        self._task_argument(parser)
        parser.add_argument("--query", required=True)
        parser.add_argument("--state", help="world state JSON file (default: reset from --seed)")
        parser.add_argument("--steps", type=int, default=0,
                            help="advance the scripted expert this many steps first")

    add_list_arguments = _task_argument

    def add_nearest_arguments(self, parser):
        self._task_argument(parser)
        parser.add_argument("text")

    def handle_eval(self, task, query, state, steps, seed, **options):
        parsed = parse_query(query, task)
        if state:
            current = WorldStateSchema().load(read_json(state))
        else:
            current = reset(task, seed)
        if steps:
            plan = compile_plan(task, expert_plan(task).steps)
            for _ in range(steps):
                current = step(current, plan.act(current))
        self.stdout.write("%s\t%s" % (str(eval_query(parsed, current)).lower(), render_query(parsed)))

    def handle_list(self, task, **options):
        self.emit(supported_queries(task))

    def handle_nearest(self, task, text, **options):
        self.stdout.write(nearest_query(text, task))
