from django.db import models

from apps.phantoms.models import DatasetRecord


class TrainingRun(models.Model):
    """One pretrain or finetune invocation and where its outputs went."""

    KIND_CHOICES = [("pretrain", "Pretrain"), ("finetune", "Fine-tune")]
    STATUS_CHOICES = [
        ("running", "Running"),
        ("finished", "Finished"),
        ("diverged", "Diverged"),
    ]

    kind = models.CharField(max_length=10, choices=KIND_CHOICES, default="pretrain")
    status = models.CharField(max_length=10, choices=STATUS_CHOICES, default="running")
    dataset = models.ForeignKey(
        DatasetRecord, on_delete=models.SET_NULL, blank=True, null=True
    )
    data_path = models.CharField(max_length=500)
    out_dir = models.CharField(max_length=500)
    init_checkpoint = models.CharField(max_length=500, blank=True)
    af = models.FloatField()
    epochs = models.PositiveIntegerField()
    seed = models.BigIntegerField(default=0)
    best_epoch = models.PositiveIntegerField(blank=True, null=True)
    best_val_psnr = models.FloatField(blank=True, null=True)
    started = models.DateTimeField(auto_now_add=True)
    finished = models.DateTimeField(blank=True, null=True)

    class Meta:
        ordering = ["-started"]

    def __str__(self):
        return f"{self.kind} af={self.af} -> {self.out_dir}"


class Checkpoint(models.Model):
    run = models.ForeignKey(
        TrainingRun, on_delete=models.CASCADE, related_name="checkpoints"
    )
    path = models.CharField(max_length=500)
    epoch = models.PositiveIntegerField()
    val_psnr = models.FloatField(blank=True, null=True)
    is_best = models.BooleanField(default=False)

    class Meta:
        ordering = ["run", "epoch"]

    def __str__(self):
        return f"{self.path} (epoch {self.epoch})"
