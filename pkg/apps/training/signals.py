from django.db.models.signals import post_save
from django.dispatch import receiver

from .models import Checkpoint


@receiver(post_save, sender=Checkpoint)
def after_saving_checkpoint(sender, created, instance, *args, **kwargs):
    """Only one checkpoint per run may be flagged best."""
    if instance.is_best is True:
        Checkpoint.objects.filter(run=instance.run).exclude(pk=instance.id).update(
            is_best=False
        )
