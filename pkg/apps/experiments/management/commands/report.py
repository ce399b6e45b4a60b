import os

from django.core.management.base import BaseCommand

from apps.corecode.commands import pipeline_errors, usage_error
from apps.corecode.utils import write_csv
from apps.experiments.reports import MERGED_COLUMNS, collect_rows


class Command(BaseCommand):
    help = "Merge training report CSVs and evaluation JSONs into one long-format CSV."

    def add_arguments(self, parser):
        parser.add_argument("sources", nargs="+", help="run or evaluation directories")
        parser.add_argument("--out", required=True, help="merged CSV path")

    def handle(self, *args, **options):
        with pipeline_errors():
            rows = []
            for source in options["sources"]:
                if not os.path.isdir(source):
                    raise usage_error(f"{source} is not a directory")
                rows.extend(collect_rows(source))
            write_csv(options["out"], MERGED_COLUMNS, rows)
        self.stdout.write(self.style.SUCCESS(f"{len(rows)} rows -> {options['out']}"))
