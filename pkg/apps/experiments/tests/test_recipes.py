import csv
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.test import SimpleTestCase, TestCase

from apps.corecode.exceptions import ConfigurationError
from apps.corecode.utils import read_json, write_json
from apps.experiments.recipes import DataSpec, ExperimentRecipe
from apps.experiments.runner import COMPARISON_COLUMNS, run_recipe
from apps.training.models import TrainingRun

RECIPE_DIR = os.path.join(os.path.dirname(__file__), "..", "..", "..", "recipes")


def tiny_recipe(**overrides):
    data = {
        "name": "tumor-transfer",
        "source": {
            "domain": "brainlike",
            "n_train": 4,
            "n_val": 1,
            "n_test": 0,
            "seed": 7,
        },
        "target": {
            "domain": "liverlike",
            "n_train": 2,
            "n_val": 1,
            "n_test": 5,
            "seed": 11,
        },
        "pretrain_afs": [2.0],
        "target_af": 2.0,
        "acs": 4,
        "size": 16,
        "coils": 2,
        "base_width": 4,
        "bottleneck_width": 2,
        "batch_size": 2,
        "learning_rate": 1e-3,
        "pretrain_epochs": 1,
        "finetune_epochs": 2,
        "direct_epochs": 1,
        "seeds": [0],
    }
    data.update(overrides)
    return ExperimentRecipe.from_dict(data)


class RecipeTest(SimpleTestCase):
    def test_shipped_recipes_load(self):
        for name in ("tumor-transfer", "anatomy-transfer", "af-transfer"):
            path = os.path.join(RECIPE_DIR, f"{name}.json")
            recipe = ExperimentRecipe.from_json(path)
            self.assertEqual(recipe.name, name)
            self.assertEqual(recipe.source.n_train, 200)

    def test_round_trip(self):
        recipe = tiny_recipe()
        self.assertEqual(ExperimentRecipe.from_dict(recipe.to_dict()), recipe)
        self.assertEqual(recipe.target, DataSpec("liverlike", 2, 1, 5, 11))

    def test_invalid(self):
        for overrides in (
            {"name": "style-transfer"},
            {"seeds": []},
            {"pretrain_afs": []},
            {"optimizer": "sgd"},
            {"target": {"domain": "lunglike", "n_train": 1, "n_val": 1, "n_test": 1}},
        ):
            with self.subTest(**{k: str(v) for k, v in overrides.items()}):
                with self.assertRaises(ConfigurationError):
                    tiny_recipe(**overrides)

    def test_missing_section(self):
        data = tiny_recipe().to_dict()
        del data["target"]
        with self.assertRaises(ConfigurationError):
            ExperimentRecipe.from_dict(data)

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            ExperimentRecipe.from_json("/nonexistent/recipe.json")


class RecipeRunTest(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def read(self, *parts):
        with open(os.path.join(self.tmp.name, *parts), "rb") as fh:
            return fh.read()

    def test_outputs_are_reproducible(self):
        recipe = tiny_recipe()
        summary = run_recipe(recipe, os.path.join(self.tmp.name, "a"))
        run_recipe(recipe, os.path.join(self.tmp.name, "b"))
        for name in ("comparison.csv", "convergence.csv", "summary.json"):
            self.assertEqual(self.read("a", name), self.read("b", name), name)

        with open(os.path.join(self.tmp.name, "a", "comparison.csv"), newline="") as fh:
            rows = list(csv.DictReader(fh))
        self.assertEqual(list(rows[0]), COMPARISON_COLUMNS)
        self.assertEqual(
            [row["arm"] for row in rows],
            ["ZF", "CGSENSE", "DirectlyTrained", "ZeroShot_af2", "TL_af2"],
        )
        convergence = os.path.join(self.tmp.name, "a", "convergence.csv")
        with open(convergence, newline="") as fh:
            epochs = [int(row["epoch"]) for row in csv.DictReader(fh)]
        self.assertEqual(epochs, [0, 1, 2])
        self.assertEqual(
            set(summary["wilcoxon_psnr"]),
            {"TL_af2_vs_DirectlyTrained", "TL_af2_vs_ZeroShot_af2", "TL_af2_vs_ZF"},
        )
        self.assertEqual(TrainingRun.objects.filter(kind="finetune").count(), 2)
        self.assertEqual(
            set(summary["trends"]),
            {"training_beats_zf", "transfer_helps", "convergence", "af_transfer"},
        )
        self.assertIsNone(summary["trends"]["af_transfer"])
        self.assertIn("TL_af2", summary["trends"]["transfer_helps"])
        self.assertNotIn("roi_histogram", summary)
        self.assertEqual({row["kurtosis_mean"] for row in rows}, {""})

    def test_tumor_target_reports_roi_moments(self):
        target = {"domain": "tumorlike", "n_train": 2, "n_val": 1, "n_test": 3}
        recipe = tiny_recipe(target=dict(target, seed=11), size=32)
        summary = run_recipe(recipe, os.path.join(self.tmp.name, "tumor"))
        with open(os.path.join(self.tmp.name, "tumor", "comparison.csv")) as fh:
            rows = {row["arm"]: row for row in csv.DictReader(fh)}
        self.assertIn("GroundTruth", rows)
        self.assertEqual(rows["GroundTruth"]["psnr_mean"], "")
        self.assertNotEqual(rows["ZF"]["psnr_mean"], "")
        moments = summary["roi_histogram"]
        self.assertIn("GroundTruth", moments["arms"])
        self.assertLessEqual(set(moments["arms"]), set(rows))
        others = set(moments["arms"]) - {"GroundTruth"}
        self.assertIn(moments["closest_to_ground_truth"], others)
        for arm, values in moments["arms"].items():
            self.assertAlmostEqual(
                values["kurtosis"], float(rows[arm]["kurtosis_mean"]), places=12
            )

    def test_command_overrides(self):
        path = os.path.join(self.tmp.name, "recipe.json")
        write_json(path, tiny_recipe(finetune_epochs=5).to_dict())
        out = os.path.join(self.tmp.name, "cmd")
        args = [path, "--out", out, "--finetune-epochs", "1"]
        call_command("run_recipe", *args, stdout=StringIO())
        summary = read_json(os.path.join(out, "summary.json"))
        self.assertEqual(summary["recipe"]["finetune_epochs"], 1)
        self.assertIn("TL_af2", summary["median_psnr"])
