"""Run a training job end to end: data in, PGN1 checkpoints and reports out.

Files on disk are the record of a run; the ``TrainingRun``/``Checkpoint``
rows only index them.
"""
import logging
import math
import os
import shutil

from django.utils import timezone

from apps.corecode.defaults import site_defaults
from apps.corecode.exceptions import ConfigurationError, DivergenceError
from apps.network.checkpoints import load_header, load_params, save_params
from apps.network.params import GeneratorConfig
from apps.phantoms.datasets import load_dataset
from apps.phantoms.models import DatasetRecord

from .loops import train
from .models import Checkpoint, TrainingRun
from .reports import write_report_csv, write_report_summary

logger = logging.getLogger(__name__)

BEST_NAME = "best.pgn1"
REPORT_CSV = "report.csv"
REPORT_JSON = "report.json"


def checkpoint_name(epoch):
    return f"epoch_{epoch:04d}.pgn1"


def generator_config_for(dataset, scale="desk", init_path=None):
    """Architecture of a run: the init checkpoint's, else site defaults."""
    if init_path:
        header = load_header(init_path)
        if header.get("config"):
            return GeneratorConfig.from_dict(header["config"])
    site = site_defaults(scale)
    return GeneratorConfig(
        coils=dataset.coils,
        base_width=site["base_width"],
        bottleneck_width=site["bottleneck_width"],
    )


def training_header(kind, train_cfg, dataset, epoch, report=None, val_psnr=None):
    """Training-state summary stored in each checkpoint header."""
    header = {
        "kind": kind,
        "domain": dataset.metadata.get("domain"),
        "af": train_cfg.af,
        "acs": train_cfg.acs,
        "epoch": epoch,
        "seed": train_cfg.seed,
        "config": train_cfg.to_dict(),
    }
    if val_psnr is not None and math.isfinite(val_psnr):
        header["val_psnr"] = val_psnr
    if report is not None:
        header["best_epoch"] = report.best_epoch
    return header


def _register_run(kind, data_dir, out_dir, train_cfg, init_path):
    return TrainingRun.objects.create(
        kind=kind,
        dataset=DatasetRecord.objects.filter(path=os.path.abspath(data_dir)).first(),
        data_path=os.path.abspath(data_dir),
        out_dir=os.path.abspath(out_dir),
        init_checkpoint=os.path.abspath(init_path) if init_path else "",
        af=train_cfg.af,
        epochs=train_cfg.epochs,
        seed=train_cfg.seed,
    )


def run_training(
    kind, data_dir, out_dir, train_cfg, init_path=None, scale="desk", gen_cfg=None
):
    """Train on ``data_dir`` and write checkpoints plus reports under ``out_dir``.

    ``gen_cfg`` sets the architecture of a run without ``init_path``. Returns
    (path of the best checkpoint, TrainReport). A zero-epoch run with an init
    checkpoint copies that file unchanged.
    """
    if kind == "finetune" and not init_path:
        raise ConfigurationError("fine-tuning needs --init")
    train_set = load_dataset(data_dir, "train")
    if not len(train_set) and train_cfg.epochs:
        raise ConfigurationError(f"{data_dir} has no training samples")
    val_set = load_dataset(data_dir, "val")
    if init_path or gen_cfg is None:
        gen_cfg = generator_config_for(train_set, scale, init_path)
    init = load_params(init_path, gen_cfg) if init_path else None

    os.makedirs(out_dir, exist_ok=True)
    best_path = os.path.join(out_dir, BEST_NAME)
    run = _register_run(kind, data_dir, out_dir, train_cfg, init_path)

    def on_checkpoint(epoch, params, report):
        path = os.path.join(out_dir, checkpoint_name(epoch))
        val_psnr = report.epochs[-1].val_psnr
        header = training_header(kind, train_cfg, train_set, epoch, val_psnr=val_psnr)
        save_params(path, params, header)
        Checkpoint.objects.create(
            run=run, path=os.path.abspath(path), epoch=epoch, val_psnr=val_psnr
        )

    try:
        params, report = train(
            train_set,
            train_cfg.mask_config(),
            gen_cfg,
            train_cfg,
            init=init,
            val_set=val_set,
            on_checkpoint=on_checkpoint,
        )
    except DivergenceError:
        run.status = "diverged"
        run.finished = timezone.now()
        run.save()
        raise

    if train_cfg.epochs == 0 and init_path:
        if os.path.abspath(init_path) != os.path.abspath(best_path):
            shutil.copyfile(init_path, best_path)
    else:
        save_params(
            best_path,
            params,
            training_header(
                kind,
                train_cfg,
                train_set,
                report.best_epoch,
                report,
                report.best_val_psnr,
            ),
        )
    write_report_csv(os.path.join(out_dir, REPORT_CSV), report)
    write_report_summary(
        os.path.join(out_dir, REPORT_JSON),
        report,
        kind=kind,
        domain=train_set.metadata.get("domain"),
        af=train_cfg.af,
        acs=train_cfg.acs,
        config=train_cfg.to_dict(),
        generator=gen_cfg.to_dict(),
        lr_schedule=train_cfg.schedule_summary(),
    )

    run.status = "finished"
    run.best_epoch = report.best_epoch
    run.best_val_psnr = report.best_val_psnr
    run.finished = timezone.now()
    run.save()
    best = Checkpoint.objects.create(
        run=run,
        path=os.path.abspath(best_path),
        epoch=report.best_epoch or 0,
        val_psnr=report.best_val_psnr,
        is_best=True,
    )
    logger.info("%s run %s finished: %s", kind, run.pk, best.path)
    return best_path, report
