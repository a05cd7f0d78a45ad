from langworld.cli.base import LangWorldCommand, task_names
from langworld.utils import write_json
from langworld.world.schemas import TaskSpecSchema
from langworld.world.tasks import TASKS


class Command(LangWorldCommand):
    help = "List the task registry or export it as JSON."
    actions = ("list", "export")

    def add_list_arguments(self, parser):
        parser.add_argument("--set", dest="task_set", default="full",
                            help="base, full, held-out or comma-separated names")

    def handle_list(self, task_set, **options):
        self.emit(task_names(task_set))

    def handle_export(self, **options):
        out = self.out_dir()
        path = write_json(out / "tasks.json", TaskSpecSchema(many=True).dump(TASKS))
        self.finish(out, [path], seeds=[options["seed"]])
