"""Flatten training and evaluation outputs into rows for plotting."""
import csv
import os

from apps.corecode.utils import read_json
from apps.metrics.evaluation import METRICS_JSON
from apps.training.reports import REPORT_COLUMNS
from apps.training.runner import REPORT_CSV

MERGED_COLUMNS = ["source", "kind", "label", "epoch", "metric", "value"]


def training_rows(source, path):
    with open(path, newline="", encoding="utf8") as fh:
        for record in csv.DictReader(fh):
            for metric in REPORT_COLUMNS[1:]:
                if record.get(metric, "") == "":
                    continue
                yield {
                    "source": source,
                    "kind": "training",
                    "label": "",
                    "epoch": record["epoch"],
                    "metric": metric,
                    "value": float(record[metric]),
                }


def evaluation_rows(source, path):
    payload = read_json(path)
    methods = list(payload.get("methods", []))
    if "reference" in payload:
        methods.append(payload["reference"])
    for method in methods:
        for metric, stats in sorted(method.get("aggregate", {}).items()):
            for stat in ("mean", "std"):
                yield {
                    "source": source,
                    "kind": "evaluation",
                    "label": method["label"],
                    "epoch": "",
                    "metric": f"{metric}_{stat}",
                    "value": stats[stat],
                }
        for metric, p in sorted(method.get("p_values", {}).items()):
            yield {
                "source": source,
                "kind": "evaluation",
                "label": method["label"],
                "epoch": "",
                "metric": f"wilcoxon_{metric}",
                "value": "" if p is None else p,
            }


def collect_rows(directory):
    """Rows from ``report.csv`` and ``metrics.json`` found in ``directory``."""
    source = os.path.basename(os.path.normpath(directory))
    rows = []
    train_csv = os.path.join(directory, REPORT_CSV)
    if os.path.exists(train_csv):
        rows.extend(training_rows(source, train_csv))
    metrics = os.path.join(directory, METRICS_JSON)
    if os.path.exists(metrics):
        rows.extend(evaluation_rows(source, metrics))
    return rows
