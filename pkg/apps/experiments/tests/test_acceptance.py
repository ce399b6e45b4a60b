"""Desk-scale trend runs of the shipped recipes.

These train every arm for three seeds and take tens of minutes on a CPU, so
they only run with ``RECON_ACCEPTANCE=1`` in the environment.
"""
import os
import tempfile
from unittest import skipUnless

from django.test import TestCase

from apps.experiments.recipes import ExperimentRecipe
from apps.experiments.runner import run_recipe

RECIPE_DIR = os.path.join(os.path.dirname(__file__), "..", "..", "..", "recipes")


@skipUnless(os.environ.get("RECON_ACCEPTANCE"), "set RECON_ACCEPTANCE=1 to run")
class RecipeTrendTest(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def trends(self, name):
        recipe = ExperimentRecipe.from_json(os.path.join(RECIPE_DIR, f"{name}.json"))
        return run_recipe(recipe, os.path.join(self.tmp.name, name))["trends"]

    def test_same_and_cross_domain_transfer(self):
        tumor = self.trends("tumor-transfer")
        self.assertTrue(tumor["training_beats_zf"]["passed"], tumor)
        self.assertTrue(tumor["convergence"]["TL_af4"]["passed"], tumor)

        anatomy = self.trends("anatomy-transfer")
        self.assertTrue(anatomy["transfer_helps"]["TL_af4"]["passed"], anatomy)
        self.assertFalse(anatomy["convergence"]["TL_af4"]["passed"], anatomy)

    def test_low_af_pretraining_transfers_best(self):
        trends = self.trends("af-transfer")
        self.assertTrue(trends["af_transfer"]["passed"], trends)
        self.assertTrue(trends["af_transfer"]["finetuning_beats_zero_shot"], trends)
