from langworld.cli.base import LangWorldCommand
from langworld.cli.pipeline import load_demos, plans_for, training_tasks
from langworld.pcbc.models import Architecture
from langworld.training.models import DataConfig
from langworld.training.trainer import train_models


class Command(LangWorldCommand):
    help = "Train PCBC or DC policies by behavioral cloning."

    def add_command_arguments(self, parser):
        parser.add_argument("--arch", choices=[arch.value for arch in Architecture], default="pcbc")
        parser.add_argument("--data", choices=[data.value for data in DataConfig], default=None,
                            help="data configuration (default: the config's)")
        parser.add_argument("--demos", help="demo set directory (default: generate from --seed)")

    def run(self, arch, data, demos, seed, jobs, **options):
        data = DataConfig(data) if data else self.config.data
        demoset, target_demos, inputs = load_demos(data, seed, demos, jobs)
        plans = plans_for(self.config, training_tasks(data)) if arch == "pcbc" else None
        out = self.out_dir()
        results = train_models(self.config.train, data, arch, demoset, plans, target_demos, out, jobs)
        self.finish(
            out,
            [result.checkpoint for result in results],
            seeds=[seed, self.config.train.seed],
            inputs=inputs,
            volatile=[result.log_file for result in results],
        )
