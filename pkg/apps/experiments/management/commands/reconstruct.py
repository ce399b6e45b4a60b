import os

from django.core.management.base import BaseCommand

from apps.corecode.commands import pipeline_errors, usage_error
from apps.corecode.defaults import site_defaults
from apps.encoding.masks import load_mask, make_mask
from apps.experiments.reconstruction import (
    METHODS,
    ReconstructionSettings,
    reconstruct_dataset,
    write_reconstructions,
)
from apps.network.checkpoints import load_header, load_params
from apps.network.params import GeneratorConfig
from apps.phantoms.datasets import SPLITS, load_dataset


class Command(BaseCommand):
    help = "Reconstruct a dataset split and write magnitude, reference and error PGMs."

    def add_arguments(self, parser):
        parser.add_argument("--data", required=True)
        parser.add_argument("--method", choices=METHODS, required=True)
        parser.add_argument("--out", required=True)
        parser.add_argument("--ckpt")
        parser.add_argument("--split", choices=SPLITS, default="test")
        parser.add_argument("--af", type=float)
        parser.add_argument("--acs", type=int)
        parser.add_argument("--mask", help="TNS1 mask file instead of --af/--acs")
        parser.add_argument("--mask-seed", type=int, default=0, dest="mask_seed")
        parser.add_argument("--noise-sigma", type=float, dest="noise_sigma")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--cg-lambda", type=float, dest="cg_lambda")
        parser.add_argument("--cg-iters", type=int, dest="cg_max_iters")
        parser.add_argument("--cg-tol", type=float, dest="cg_tol")

    def handle(self, *args, **options):
        method = options["method"]
        ckpt = options.get("ckpt")
        if method == "gan" and not ckpt:
            raise usage_error("--method gan needs --ckpt")

        with pipeline_errors():
            dataset = load_dataset(options["data"], options["split"])
            width = dataset.metadata["W"]
            if options.get("mask"):
                mask = load_mask(options["mask"], width=width)
            else:
                site = site_defaults(af=options["af"], acs=options["acs"])
                mask = make_mask(
                    dataset.size, width, site["af"], site["acs"], options["mask_seed"]
                )
            params = None
            if method == "gan":
                header = load_header(ckpt)
                config = header.get("config")
                config = GeneratorConfig.from_dict(config) if config else None
                params = load_params(ckpt, config)
            settings = ReconstructionSettings.from_defaults(
                method,
                noise_sigma=options["noise_sigma"],
                seed=options["seed"],
                cg_lambda=options["cg_lambda"],
                cg_max_iters=options["cg_max_iters"],
                cg_tol=options["cg_tol"],
            )
            results = reconstruct_dataset(dataset, mask, settings, params)
            description = {
                "method": method,
                "data": os.path.abspath(options["data"]),
                "split": options["split"],
                "domain": dataset.metadata["domain"],
                "af": mask.af,
                "acs": mask.acs,
                "mask_rows": mask.rows.astype(int).tolist(),
                "checkpoint": os.path.abspath(ckpt) if ckpt else None,
                "settings": vars(settings),
            }
            write_reconstructions(options["out"], results, description)
        self.stdout.write(
            self.style.SUCCESS(
                f"{len(results)} {method} reconstructions -> {options['out']}"
            )
        )
