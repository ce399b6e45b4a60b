from django.core.management.base import BaseCommand

from apps.corecode.commands import pipeline_errors
from apps.corecode.utils import read_json
from apps.training.config import TrainConfig
from apps.training.runner import run_training


class TrainingCommand(BaseCommand):
    """Flags and flow shared by ``pretrain`` and ``finetune``."""

    kind = "pretrain"
    init_required = False

    def add_arguments(self, parser):
        parser.add_argument("--data", required=True, help="dataset directory")
        parser.add_argument("--out", required=True, help="output directory")
        parser.add_argument(
            "--init", required=self.init_required, help="PGN1 checkpoint to start from"
        )
        parser.add_argument("--config", help="training config JSON")
        parser.add_argument("--scale", choices=["desk", "full"], default="desk")
        parser.add_argument("--af", type=float)
        parser.add_argument("--acs", type=int)
        parser.add_argument("--epochs", type=int)
        parser.add_argument("--batch", type=int, dest="batch_size")
        parser.add_argument("--lr", type=float, dest="learning_rate")
        parser.add_argument("--seed", type=int)
        parser.add_argument("--mask-seed", type=int, dest="mask_seed")
        parser.add_argument("--noise-sigma", type=float, dest="noise_sigma")
        parser.add_argument(
            "--checkpoint-epochs", type=int, nargs="*", dest="checkpoint_epochs"
        )
        parser.add_argument(
            "--regenerate-mask",
            action="store_true",
            default=None,
            dest="regenerate_mask_each_epoch",
        )
        parser.add_argument(
            "--verbatim-sensitivity-terms",
            action="store_true",
            default=None,
            dest="verbatim_sensitivity_terms",
        )

    def train_config(self, options):
        base = read_json(options["config"]) if options.get("config") else None
        fields = (
            "af",
            "acs",
            "epochs",
            "batch_size",
            "learning_rate",
            "seed",
            "mask_seed",
            "noise_sigma",
            "checkpoint_epochs",
            "regenerate_mask_each_epoch",
            "verbatim_sensitivity_terms",
        )
        overrides = {name: options.get(name) for name in fields}
        return TrainConfig.from_defaults(
            self.kind, options["scale"], base=base, **overrides
        )

    def handle(self, *args, **options):
        with pipeline_errors():
            train_cfg = self.train_config(options)
            best_path, report = run_training(
                self.kind,
                options["data"],
                options["out"],
                train_cfg,
                init_path=options.get("init"),
                scale=options["scale"],
            )
        self.stdout.write(
            self.style.SUCCESS(
                f"{self.kind}: {len(report.epochs)} epochs, best epoch "
                f"{report.best_epoch} -> {best_path}"
            )
        )
