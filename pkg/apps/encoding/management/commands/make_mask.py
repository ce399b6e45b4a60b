from django.core.management.base import BaseCommand

from apps.corecode.commands import pipeline_errors
from apps.corecode.defaults import site_defaults
from apps.encoding.masks import make_mask, save_mask


class Command(BaseCommand):
    help = "Write a 1-D Cartesian line mask as a TNS1 0/1 tensor."

    def add_arguments(self, parser):
        parser.add_argument("--size", type=int)
        parser.add_argument("--af", type=float)
        parser.add_argument("--acs", type=int)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--out", required=True)

    def handle(self, *args, **options):
        site = site_defaults(size=options["size"], af=options["af"], acs=options["acs"])
        with pipeline_errors():
            mask = make_mask(
                site["size"], site["size"], site["af"], site["acs"], options["seed"]
            )
            save_mask(options["out"], mask)
        self.stdout.write(
            self.style.SUCCESS(
                f"{mask.count}/{mask.height} lines (af={mask.af}, acs={mask.acs}) "
                f"-> {options['out']}"
            )
        )
