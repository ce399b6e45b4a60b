from ._training import TrainingCommand


class Command(TrainingCommand):
    help = "Fine-tune a pretrained checkpoint on a new dataset (transfer learning)."
    kind = "finetune"
    init_required = True
