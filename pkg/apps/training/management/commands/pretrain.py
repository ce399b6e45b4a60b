from ._training import TrainingCommand


class Command(TrainingCommand):
    help = "Train the generator and discriminator from scratch (or from --init)."
    kind = "pretrain"
