from langworld.cli.base import LangWorldCommand
from langworld.evalkit.evaluation import cdf_bands, summarize
from langworld.evalkit.reports import FORMATS, read_report, write_report


class Command(LangWorldCommand):
    help = "Merge results.json files into one report."

    def add_command_arguments(self, parser):
        parser.add_argument("results", nargs="+", help="results.json files")
        parser.add_argument("--formats", default=",".join(FORMATS))

    def run(self, results, formats, seed, **options):
        rows, bands, runs = [], [], []
        for path in results:
            file_rows, file_bands, file_runs = read_report(path)
            rows += file_rows
            bands += file_bands
            runs.append(file_runs)
        if all(runs):
            # re-aggregate from raw results so runs of different files line up by index
            merged = [sum((file_runs[k] for file_runs in runs if k < len(file_runs)), [])
                      for k in range(max(len(file_runs) for file_runs in runs))]
            rows, bands = summarize(merged), cdf_bands(merged)
        out = self.out_dir()
        formats = [fmt.strip() for fmt in formats.split(",") if fmt.strip()]
        written = write_report(rows, bands, out, formats=formats)
        self.finish(out, written, seeds=[seed], inputs=results)
