"""Run a transfer recipe end to end and tabulate every comparison arm.

Arms on the target test split: ZF, CG-SENSE, Directly Trained (scratch on
the small target set), zero-shot pretrained models and their fine-tuned
(transfer learning) versions. Fine-tune checkpoints form a convergence trace.
"""
import logging
import os

import numpy as np

from apps.corecode.exceptions import DomainError
from apps.corecode.utils import write_csv, write_json
from apps.encoding.masks import make_mask
from apps.metrics.quality import (
    MetricsReport,
    evaluate_pair,
    reference_metrics,
    summarize,
)
from apps.metrics.stats import wilcoxon_signed_rank
from apps.network.checkpoints import load_params
from apps.network.params import GeneratorConfig
from apps.phantoms.datasets import build_dataset, load_dataset
from apps.training.config import TrainConfig, sweep_epochs
from apps.training.runner import checkpoint_name, run_training

from .reconstruction import ReconstructionSettings, reconstruct_dataset
from .trends import (
    GROUND_TRUTH,
    af_label,
    median_by_arm,
    recipe_trends,
    roi_moments_summary,
)

logger = logging.getLogger(__name__)

COMPARISON_COLUMNS = [
    "seed",
    "arm",
    "psnr_mean",
    "psnr_std",
    "ssim_mean",
    "ssim_std",
    "nrmse_mean",
    "nrmse_std",
    "kurtosis_mean",
    "kurtosis_std",
    "skewness_mean",
    "skewness_std",
]
CONVERGENCE_COLUMNS = ["seed", "arm", "epoch", "psnr_mean", "ssim_mean"]
ROW_METRICS = ("psnr", "ssim", "nrmse", "kurtosis", "skewness")


def score(results, label):
    report = MetricsReport(label=label)
    for r in results:
        recon = np.clip(r.image, 0.0, 1.0)
        report.images.append(evaluate_pair(r.index, recon, r.reference, roi=r.roi))
    return report


def reference_scores(results):
    """Ground-truth ROI moments; ``None`` when no test image has an ROI."""
    report = MetricsReport(label=GROUND_TRUTH)
    for r in results:
        if r.roi is not None:
            report.images.append(reference_metrics(r.index, r.reference, r.roi))
    return report if report.images else None


def comparison_row(seed, report):
    """Mean and std of every metric; metrics the arm does not have stay empty."""
    row = {"seed": seed, "arm": report.label}
    for name in ROW_METRICS:
        column = report.column(name)
        if column:
            row[f"{name}_mean"], row[f"{name}_std"] = summarize(column)
        else:
            row[f"{name}_mean"] = row[f"{name}_std"] = ""
    return row


class RecipeRunner:
    """Executes one recipe under ``out_dir``; outputs depend only on the recipe."""

    def __init__(self, recipe, out_dir):
        self.recipe = recipe
        self.out_dir = out_dir
        self.comparison = []
        self.convergence = []
        self.per_image = {}
        self.gen_cfg = GeneratorConfig(
            coils=recipe.coils,
            base_width=recipe.base_width,
            bottleneck_width=recipe.bottleneck_width,
        )

    def path(self, *parts):
        return os.path.join(self.out_dir, *parts)

    def train_config(self, seed, af, epochs, checkpoint_epochs=()):
        r = self.recipe
        return TrainConfig.from_defaults(
            "pretrain",
            epochs=epochs,
            batch_size=r.batch_size,
            learning_rate=r.learning_rate,
            seed=seed,
            af=af,
            acs=r.acs,
            mask_seed=r.mask_seed,
            checkpoint_epochs=list(checkpoint_epochs),
        )

    def simulate(self, seed, role, spec):
        directory = self.path(f"seed_{seed}", "data", role)
        build_dataset(
            spec.domain,
            spec.n_train,
            spec.n_val,
            spec.n_test,
            self.recipe.size,
            self.recipe.coils,
            spec.seed + 1000 * seed,
            directory,
        )
        return directory

    def record(self, seed, results, label):
        report = score(results, label)
        self.comparison.append(comparison_row(seed, report))
        for m in report.images:
            self.per_image.setdefault(label, []).append((seed, m.index, m.psnr))
        return report

    def run_seed(self, seed):
        r = self.recipe
        source_dir = self.simulate(seed, "source", r.source)
        target_dir = self.simulate(seed, "target", r.target)
        test_set = load_dataset(target_dir, "test")
        mask = make_mask(r.size, r.size, r.target_af, r.acs, r.mask_seed)
        models = self.path(f"seed_{seed}", "models")

        for method in ("zf", "cgsense"):
            settings = ReconstructionSettings.from_defaults(method, seed=seed)
            results = reconstruct_dataset(test_set, mask, settings)
            self.record(seed, results, method.upper())
        reference = reference_scores(results)
        if reference is not None:
            self.comparison.append(comparison_row(seed, reference))

        gan = ReconstructionSettings.from_defaults("gan", seed=seed)
        direct_dir = os.path.join(models, "direct")
        direct_cfg = self.train_config(seed, r.target_af, r.direct_epochs)
        best_path, _ = run_training(
            "pretrain", target_dir, direct_dir, direct_cfg, gen_cfg=self.gen_cfg
        )
        direct = load_params(best_path)
        results = reconstruct_dataset(test_set, mask, gan, direct)
        self.record(seed, results, "DirectlyTrained")

        sweep = sweep_epochs(r.finetune_epochs)
        for af in r.pretrain_afs:
            tag = af_label(af)
            pre_dir = os.path.join(models, f"pretrain_af{tag}")
            pre_cfg = self.train_config(seed, af, r.pretrain_epochs)
            pretrained, _ = run_training(
                "pretrain", source_dir, pre_dir, pre_cfg, gen_cfg=self.gen_cfg
            )
            params = load_params(pretrained)
            results = reconstruct_dataset(test_set, mask, gan, params)
            zero_shot = self.record(seed, results, f"ZeroShot_af{tag}")
            self.convergence.append(
                {
                    "seed": seed,
                    "arm": f"TL_af{tag}",
                    "epoch": 0,
                    "psnr_mean": summarize(zero_shot.column("psnr"))[0],
                    "ssim_mean": summarize(zero_shot.column("ssim"))[0],
                }
            )
            tl_dir = os.path.join(models, f"finetune_af{tag}")
            cfg = self.train_config(seed, r.target_af, r.finetune_epochs, sweep)
            tuned_path, _ = run_training(
                "finetune", target_dir, tl_dir, cfg, init_path=pretrained
            )
            tuned = load_params(tuned_path)
            results = reconstruct_dataset(test_set, mask, gan, tuned)
            self.record(seed, results, f"TL_af{tag}")
            for epoch in sweep:
                ckpt = load_params(os.path.join(tl_dir, checkpoint_name(epoch)))
                results = reconstruct_dataset(test_set, mask, gan, ckpt)
                report = score(results, f"TL_af{tag}")
                self.convergence.append(
                    {
                        "seed": seed,
                        "arm": f"TL_af{tag}",
                        "epoch": epoch,
                        "psnr_mean": summarize(report.column("psnr"))[0],
                        "ssim_mean": summarize(report.column("ssim"))[0],
                    }
                )

    def paired_tests(self):
        """Wilcoxon p-values on per-image PSNR of TL arms versus the baselines."""
        tests = {}
        for arm in sorted(self.per_image):
            if not arm.startswith("TL_"):
                continue
            for other in ("DirectlyTrained", "ZeroShot_" + arm[3:], "ZF"):
                if other not in self.per_image:
                    continue
                a = np.array([v for _, _, v in self.per_image[arm]])
                b = np.array([v for _, _, v in self.per_image[other]])
                finite = np.isfinite(a) & np.isfinite(b)
                if finite.sum() < 5:
                    continue
                try:
                    p_value = wilcoxon_signed_rank(a[finite], b[finite])
                except DomainError as exc:
                    logger.warning("no paired test for %s vs %s: %s", arm, other, exc)
                    p_value = None
                tests[f"{arm}_vs_{other}"] = p_value
        return tests

    def summary(self):
        summary = {
            "recipe": self.recipe.to_dict(),
            "median_psnr": median_by_arm(self.comparison, "psnr_mean"),
            "wilcoxon_psnr": self.paired_tests(),
            "trends": recipe_trends(self.comparison, self.convergence),
        }
        moments = roi_moments_summary(self.comparison)
        if moments is not None:
            summary["roi_histogram"] = moments
        return summary

    def run(self):
        for seed in self.recipe.seeds:
            logger.info("recipe %s: seed %d", self.recipe.name, seed)
            self.run_seed(seed)
        write_csv(self.path("comparison.csv"), COMPARISON_COLUMNS, self.comparison)
        write_csv(self.path("convergence.csv"), CONVERGENCE_COLUMNS, self.convergence)
        summary = self.summary()
        write_json(self.path("summary.json"), summary)
        return summary


def run_recipe(recipe, out_dir):
    return RecipeRunner(recipe, out_dir).run()
