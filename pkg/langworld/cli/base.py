"""Shared plumbing of the ``lw`` commands.

Every command takes ``--seed``, ``--config``, ``--out`` and ``--jobs``.
Commands with actions (``lw tasks list``) take them after the action.
Library errors and invalid config files become ``CommandError`` (exit 1);
argparse usage errors exit 2.
"""

import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from marshmallow import ValidationError

from langworld.cli.manifests import build_manifest, write_manifest
from langworld.cli.schemas import RunConfigSchema
from langworld.exceptions import LangWorldError
from langworld.utils import config_hash, dumps, read_json
from langworld.world.tasks import resolve_tasks

logger = logging.getLogger(__name__)

GLOBAL_OPTIONS = ("seed", "config", "out", "jobs")
DJANGO_OPTIONS = (
    "verbosity", "settings", "pythonpath", "traceback", "no_color", "force_color", "skip_checks",
)
RESULTS_DIR = Path("results")


def add_global_arguments(parser):
    parser.add_argument("--seed", type=int, default=0, help="base seed of every random draw")
    parser.add_argument("--config", help="JSON run config; anything that changes results")
    parser.add_argument("--out", help="output directory (default results/<run-id>)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")


def task_names(selector):
    return [task.name for task in resolve_tasks(selector)]


def load_run_config(path=None):
    return RunConfigSchema().load(read_json(path) if path else {})


class LangWorldCommand(BaseCommand):
    requires_system_checks = []
    # sub-actions, e.g. ("list", "export"); empty for single-purpose commands
    actions = ()

    @property
    def name(self):
        return self.__module__.rsplit(".", 1)[-1]

    def add_arguments(self, parser):
        if not self.actions:
            add_global_arguments(parser)
            self.add_command_arguments(parser)
            return
        subparsers = parser.add_subparsers(dest="action", metavar="{%s}" % ",".join(self.actions))
        subparsers.required = True
        for action in self.actions:
            subparser = subparsers.add_parser(
                action, called_from_command_line=getattr(parser, "called_from_command_line", None)
            )
            add_global_arguments(subparser)
            adder = getattr(self, "add_%s_arguments" % action.replace("-", "_"), None)
            if adder is not None:
                adder(subparser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        self.options = options
        try:
            self.config = load_run_config(options.get("config"))
            if self.actions:
                action = options["action"]
                getattr(self, "handle_%s" % action.replace("-", "_"))(**options)
            else:
                self.run(**options)
        except ValidationError as error:
            raise CommandError("validation: %s" % dumps(error.messages))
        except LangWorldError as error:
            raise CommandError(str(error).replace("\n", " "))
        except (ValueError, OSError) as error:
            raise CommandError("%s: %s" % (type(error).__name__, error))

    def run(self, **options):
        raise NotImplementedError

    def run_id(self):
        selection = {
            key: value for key, value in self.options.items()
            if key not in DJANGO_OPTIONS and key not in ("out", "jobs", "config")
        }
        return config_hash({
            "command": self.name,
            "config": RunConfigSchema().dump(self.config),
            "selection": {key: str(value) for key, value in selection.items()},
        })

    def out_dir(self):
        if self.options.get("out"):
            return Path(self.options["out"])
        return RESULTS_DIR / self.run_id()

    def finish(self, out, outputs, seeds, inputs=(), volatile=()):
        """Write the run manifest and report where everything went."""
        command = self.name if not self.actions else "%s %s" % (self.name, self.options["action"])
        manifest = build_manifest(command, self.config, seeds, out, outputs, inputs, volatile)
        path = write_manifest(manifest, out)
        for entry in manifest.outputs:
            self.stdout.write(str(Path(out) / entry.path))
        self.stdout.write(str(path))
        return path

    def emit(self, lines):
        for line in lines:
            self.stdout.write(line)
