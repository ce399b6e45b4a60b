"""Training reports: a per-epoch CSV and a JSON summary."""
from apps.corecode.utils import write_csv, write_json

REPORT_COLUMNS = [
    "epoch",
    "lr",
    "L_GEN",
    "L_iMAE",
    "L_fMAE_M",
    "L_fMAE_notM",
    "L_DISC",
    "val_PSNR",
]


def report_rows(report):
    for record in report.epochs:
        yield {
            "epoch": record.epoch,
            "lr": record.lr,
            "L_GEN": record.gen,
            "L_iMAE": record.imae,
            "L_fMAE_M": record.fmae_m,
            "L_fMAE_notM": record.fmae_notm,
            "L_DISC": record.disc,
            "val_PSNR": "" if record.val_psnr is None else record.val_psnr,
        }


def write_report_csv(path, report):
    write_csv(path, REPORT_COLUMNS, report_rows(report))


def write_report_summary(path, report, **extra):
    """Summary JSON; ``extra`` adds run context such as af and domain."""
    payload = report.summary()
    payload.update(extra)
    write_json(path, payload)
