import os

from django.core.management.base import BaseCommand

from apps.corecode.commands import pipeline_errors, usage_error
from apps.corecode.utils import write_csv, write_json
from apps.metrics.evaluation import (
    IMAGE_COLUMNS,
    METRICS_CSV,
    METRICS_JSON,
    evaluate_directory,
    image_rows,
    paired_p_values,
    reference_report,
)
from apps.metrics.quality import NRMSE_NORMALIZATIONS
from apps.metrics.roi import load_roi
from apps.phantoms.datasets import SPLITS, load_dataset


class Command(BaseCommand):
    help = "Compute PSNR/SSIM/NRMSE and ROI moments for one or two recon directories."

    def add_arguments(self, parser):
        parser.add_argument("--recon-dir", nargs="+", required=True, dest="recon_dir")
        parser.add_argument("--gt-manifest", required=True, dest="gt_manifest")
        parser.add_argument("--split", choices=SPLITS, default="test")
        parser.add_argument("--roi")
        parser.add_argument(
            "--nrmse",
            choices=NRMSE_NORMALIZATIONS,
            default="euclidean",
            dest="normalization",
        )
        parser.add_argument("--out", required=True)

    def handle(self, *args, **options):
        recon_dirs = options["recon_dir"]
        if len(recon_dirs) > 2:
            raise usage_error("--recon-dir takes one or two directories")
        dataset_dir = options["gt_manifest"]
        if os.path.isfile(dataset_dir):
            dataset_dir = os.path.dirname(os.path.abspath(dataset_dir))
        out = options["out"]

        normalization = options["normalization"]
        with pipeline_errors():
            dataset = load_dataset(dataset_dir, options["split"])
            roi = load_roi(options["roi"]) if options.get("roi") else None
            reports = [
                evaluate_directory(d, dataset, roi=roi, normalization=normalization)
                for d in recon_dirs
            ]
            if len(reports) == 2 and reports[0].label == reports[1].label:
                reports[0].label, reports[1].label = "a", "b"
            if len(reports) == 2:
                reports[1].p_values = paired_p_values(*reports)
            payload = {
                "split": options["split"],
                "methods": [r.to_dict() for r in reports],
            }
            rows = [row for r in reports for row in image_rows(r)]
            reference = reference_report(dataset, roi=roi)
            if reference is not None:
                payload["reference"] = reference.to_dict()
                rows.extend(image_rows(reference))
            write_csv(os.path.join(out, METRICS_CSV), IMAGE_COLUMNS, rows)
            write_json(os.path.join(out, METRICS_JSON), payload)

        for report in reports:
            if not report.images:
                continue
            psnr = report.aggregate()["psnr"]
            self.stdout.write(
                self.style.SUCCESS(
                    f"{report.label}: {len(report.images)} images, "
                    f"PSNR {psnr['mean']:.2f} +/- {psnr['std']:.2f} dB"
                )
            )
