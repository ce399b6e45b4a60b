from django.core.management.base import BaseCommand

from apps.corecode.commands import pipeline_errors
from apps.experiments.recipes import ExperimentRecipe
from apps.experiments.runner import run_recipe

OVERRIDES = ("seeds", "pretrain_epochs", "finetune_epochs", "direct_epochs")


class Command(BaseCommand):
    help = "Run a transfer-learning recipe and write comparison/convergence reports."

    def add_arguments(self, parser):
        parser.add_argument("recipe", help="recipe JSON file")
        parser.add_argument("--out", required=True)
        parser.add_argument(
            "--seeds", type=int, nargs="+", help="override the recipe seeds"
        )
        parser.add_argument("--pretrain-epochs", type=int, dest="pretrain_epochs")
        parser.add_argument("--finetune-epochs", type=int, dest="finetune_epochs")
        parser.add_argument("--direct-epochs", type=int, dest="direct_epochs")

    def handle(self, *args, **options):
        with pipeline_errors():
            recipe = ExperimentRecipe.from_json(options["recipe"])
            overrides = {
                key: options[key]
                for key in OVERRIDES
                if options.get(key) is not None
            }
            if overrides:
                recipe = ExperimentRecipe.from_dict({**recipe.to_dict(), **overrides})
            summary = run_recipe(recipe, options["out"])
        for arm, value in summary["median_psnr"].items():
            self.stdout.write(f"{arm:>18}  {value:.2f} dB")
        self.stdout.write(self.style.SUCCESS(f"{recipe.name} -> {options['out']}"))
