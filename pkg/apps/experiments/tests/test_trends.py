from django.test import SimpleTestCase

from apps.experiments.trends import (
    af_transfer,
    checkpoint_share,
    convergence_speed,
    median_by_arm,
    recipe_trends,
    roi_moments_summary,
    training_beats_zf,
    transfer_helps,
)


def psnr_rows(values):
    """Comparison rows from {arm: [psnr per seed]}."""
    return [
        {"seed": seed, "arm": arm, "psnr_mean": value}
        for arm, seeds in values.items()
        for seed, value in enumerate(seeds)
    ]


def trace_rows(arm, traces):
    """Convergence rows from one [(epoch, psnr), ...] trace per seed."""
    return [
        {"seed": seed, "arm": arm, "epoch": epoch, "psnr_mean": value}
        for seed, trace in enumerate(traces)
        for epoch, value in trace
    ]


class MedianTest(SimpleTestCase):
    def test_median_over_seeds_skips_empty_cells(self):
        rows = psnr_rows({"ZF": [20.0, 30.0, 22.0], "TL_af4": [25.0]})
        rows.append({"seed": 0, "arm": "GroundTruth", "psnr_mean": ""})
        self.assertEqual(median_by_arm(rows, "psnr_mean"), {"TL_af4": 25.0, "ZF": 22.0})


class PsnrOrderingTest(SimpleTestCase):
    def test_best_trained_arm_against_zf(self):
        medians = {"ZF": 24.0, "CGSENSE": 30.0, "DirectlyTrained": 26.0, "TL_af4": 27.5}
        verdict = training_beats_zf(medians)
        self.assertEqual(verdict["arm"], "TL_af4")
        self.assertAlmostEqual(verdict["margin_db"], 3.5)
        self.assertTrue(verdict["passed"])
        medians["TL_af4"] = 26.5
        self.assertFalse(training_beats_zf(medians)["passed"])

    def test_needs_zf_and_a_trained_arm(self):
        self.assertIsNone(training_beats_zf({"TL_af4": 30.0}))
        self.assertIsNone(training_beats_zf({"ZF": 20.0, "CGSENSE": 25.0}))

    def test_transfer_margin(self):
        medians = {"DirectlyTrained": 30.0, "ZeroShot_af4": 29.0, "TL_af4": 30.25}
        verdict = transfer_helps(medians)["TL_af4"]
        self.assertTrue(verdict["passed"])
        self.assertAlmostEqual(verdict["margin_db"]["DirectlyTrained"], 0.25)
        self.assertAlmostEqual(verdict["margin_db"]["ZeroShot_af4"], 1.25)
        medians["TL_af4"] = 30.1
        self.assertFalse(transfer_helps(medians)["TL_af4"]["passed"])
        self.assertIsNone(transfer_helps({"ZF": 20.0}))

    def test_af_ordering(self):
        medians = {
            "TL_af2": 31.0,
            "TL_af6": 30.0,
            "ZeroShot_af2": 28.0,
            "ZeroShot_af6": 27.0,
        }
        verdict = af_transfer(medians)
        self.assertEqual((verdict["lowest_af"], verdict["highest_af"]), (2.0, 6.0))
        self.assertTrue(verdict["passed"])
        self.assertTrue(verdict["finetuning_beats_zero_shot"])
        medians["ZeroShot_af6"] = 30.5
        medians["TL_af2"] = 29.0
        verdict = af_transfer(medians)
        self.assertFalse(verdict["passed"])
        self.assertFalse(verdict["finetuning_beats_zero_shot"])
        self.assertIsNone(af_transfer({"TL_af4": 30.0}))


class ConvergenceTest(SimpleTestCase):
    def test_share_of_checkpoints(self):
        fast = [(0, 20.0), (2, 29.6), (4, 29.8), (6, 29.9), (8, 30.0)]
        self.assertEqual(checkpoint_share(fast), 0.25)
        slow = [(0, 20.0), (2, 22.0), (4, 25.0), (6, 28.0), (8, 30.0)]
        self.assertEqual(checkpoint_share(slow), 1.0)

    def test_no_gain_or_no_checkpoints(self):
        self.assertIsNone(checkpoint_share([(0, 25.0), (5, 24.0)]))
        self.assertIsNone(checkpoint_share([(0, 25.0)]))
        self.assertIsNone(checkpoint_share([(5, 25.0), (10, 26.0)]))

    def test_median_over_seeds(self):
        fast = [(0, 20.0), (1, 29.7), (2, 29.9), (3, 29.95), (4, 30.0)]
        slow = [(0, 20.0), (1, 21.0), (2, 22.0), (3, 23.0), (4, 30.0)]
        verdict = convergence_speed(trace_rows("TL_af4", [fast, fast, slow]))
        self.assertEqual(verdict["TL_af4"], {"checkpoint_share": 0.25, "passed": True})
        verdict = convergence_speed(trace_rows("TL_af4", [fast, slow, slow]))
        self.assertEqual(verdict["TL_af4"], {"checkpoint_share": 1.0, "passed": False})
        self.assertIsNone(convergence_speed([]))

    def test_recipe_trends_block(self):
        comparison = psnr_rows(
            {"ZF": [20.0], "DirectlyTrained": [24.0], "ZeroShot_af4": [23.0]}
        )
        comparison += psnr_rows({"TL_af4": [25.0]})
        convergence = trace_rows("TL_af4", [[(0, 23.0), (1, 25.0)]])
        trends = recipe_trends(comparison, convergence)
        self.assertTrue(trends["training_beats_zf"]["passed"])
        self.assertTrue(trends["transfer_helps"]["TL_af4"]["passed"])
        self.assertEqual(trends["convergence"]["TL_af4"]["checkpoint_share"], 1.0)
        self.assertIsNone(trends["af_transfer"])


class RoiMomentsSummaryTest(SimpleTestCase):
    def rows(self, arm, kurtosis, skewness):
        return {"arm": arm, "kurtosis_mean": kurtosis, "skewness_mean": skewness}

    def test_closest_arm(self):
        comparison = [
            self.rows("GroundTruth", 3.0, 0.5),
            self.rows("ZF", 2.0, 0.1),
            self.rows("TL_af4", 3.2, 0.4),
            self.rows("CGSENSE", "", ""),
        ]
        summary = roi_moments_summary(comparison)
        self.assertEqual(set(summary["arms"]), {"GroundTruth", "ZF", "TL_af4"})
        self.assertEqual(summary["closest_to_ground_truth"], "TL_af4")

    def test_without_moments(self):
        self.assertIsNone(roi_moments_summary([self.rows("ZF", "", "")]))
        summary = roi_moments_summary([self.rows("ZF", 2.0, 0.1)])
        self.assertIsNone(summary["closest_to_ground_truth"])
