import os

from django.core.management.base import BaseCommand, CommandError

from apps.corecode.commands import pipeline_errors
from apps.corecode.defaults import site_defaults
from apps.phantoms.datasets import (
    build_dataset,
    regenerate_mismatches,
    verify_checksums,
)
from apps.phantoms.generators import DOMAINS
from apps.phantoms.models import DatasetRecord


class Command(BaseCommand):
    help = "Simulate a multi-coil phantom dataset (train/val/test) into a directory."

    def add_arguments(self, parser):
        parser.add_argument("--domain", choices=DOMAINS, required=True)
        parser.add_argument("--out", required=True)
        parser.add_argument("--n-train", type=int, dest="n_train")
        parser.add_argument("--n-val", type=int, dest="n_val")
        parser.add_argument("--n-test", type=int, dest="n_test")
        parser.add_argument("--size", type=int)
        parser.add_argument("--coils", type=int)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--scale", choices=["desk", "full"], default="desk")
        parser.add_argument(
            "--verify",
            action="store_true",
            help="check an existing dataset against its manifest",
        )

    def handle(self, *args, **options):
        out = options["out"]
        with pipeline_errors():
            if options["verify"]:
                self.verify(out)
                return
            site = site_defaults(
                options["scale"], size=options["size"], coils=options["coils"]
            )
            split = site["split"]
            counts = {}
            for name in ("train", "val", "test"):
                given = options[f"n_{name}"]
                counts[name] = split[name] if given is None else given
            manifest = build_dataset(
                options["domain"],
                counts["train"],
                counts["val"],
                counts["test"],
                site["size"],
                site["coils"],
                options["seed"],
                out,
            )
        DatasetRecord.objects.update_or_create(
            path=os.path.abspath(out),
            defaults={
                "domain": manifest["domain"],
                "size": manifest["H"],
                "coils": manifest["C"],
                "n_train": counts["train"],
                "n_val": counts["val"],
                "n_test": counts["test"],
                "base_seed": manifest["base_seed"],
            },
        )
        self.stdout.write(
            self.style.SUCCESS(
                f"{manifest['domain']} dataset written to {out} "
                f"({counts['train']}/{counts['val']}/{counts['test']})"
            )
        )

    def verify(self, out):
        bad = verify_checksums(out)
        if bad:
            raise CommandError(f"checksum mismatch: {', '.join(sorted(bad))}")
        mismatched = regenerate_mismatches(out)
        if mismatched:
            raise CommandError(f"samples differ from their seeds: {mismatched}")
        self.stdout.write(self.style.SUCCESS(f"{out}: all samples verified"))
