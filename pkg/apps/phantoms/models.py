from django.db import models


class DatasetRecord(models.Model):
    """A simulated dataset directory registered by the simulate command."""

    DOMAIN_CHOICES = [
        ("brainlike", "Brain-like"),
        ("tumorlike", "Tumor-like"),
        ("kneelike", "Knee-like"),
        ("liverlike", "Liver-like"),
    ]

    path = models.CharField(max_length=500, unique=True)
    domain = models.CharField(max_length=20, choices=DOMAIN_CHOICES)
    size = models.PositiveIntegerField()
    coils = models.PositiveIntegerField()
    n_train = models.PositiveIntegerField(default=0)
    n_val = models.PositiveIntegerField(default=0)
    n_test = models.PositiveIntegerField(default=0)
    base_seed = models.BigIntegerField(default=0)
    created = models.DateTimeField(auto_now=True)

    class Meta:
        ordering = ["domain", "path"]

    def __str__(self):
        return f"{self.domain} ({self.path})"

    def total_samples(self):
        return self.n_train + self.n_val + self.n_test
