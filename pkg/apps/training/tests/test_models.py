from django.test import TestCase

from apps.training.models import Checkpoint, TrainingRun


class CheckpointSignalTest(TestCase):
    def setUp(self):
        self.run = TrainingRun.objects.create(
            kind="finetune",
            data_path="/data/tumor",
            out_dir="/runs/tl",
            af=4.0,
            epochs=30,
        )

    def checkpoint(self, run, name, epoch):
        return Checkpoint.objects.create(
            run=run, path=f"{run.out_dir}/{name}", epoch=epoch, is_best=True
        )

    def test_single_best_checkpoint(self):
        first = self.checkpoint(self.run, "a.pgn1", 6)
        second = self.checkpoint(self.run, "b.pgn1", 12)
        first.refresh_from_db()
        self.assertFalse(first.is_best)
        self.assertEqual(list(self.run.checkpoints.filter(is_best=True)), [second])

    def test_other_runs_untouched(self):
        other = TrainingRun.objects.create(
            kind="pretrain",
            data_path="/data/brain",
            out_dir="/runs/pre",
            af=4.0,
            epochs=60,
        )
        kept = self.checkpoint(other, "best.pgn1", 60)
        self.checkpoint(self.run, "best.pgn1", 30)
        kept.refresh_from_db()
        self.assertTrue(kept.is_best)

    def test_str(self):
        self.assertEqual(str(self.run), "finetune af=4.0 -> /runs/tl")
        self.assertEqual(self.run.status, "running")
