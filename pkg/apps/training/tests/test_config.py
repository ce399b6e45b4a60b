from django.conf import settings
from django.test import SimpleTestCase, override_settings

from apps.corecode.exceptions import ConfigurationError
from apps.training.config import LossWeights, TrainConfig, sweep_epochs


class TrainConfigTest(SimpleTestCase):
    def test_linear_schedule(self):
        config = TrainConfig(epochs=10, learning_rate=1e-3)
        trace = [config.learning_rate_at(e) for e in range(10)]
        self.assertEqual(trace[0], 1e-3)
        self.assertTrue(all(a >= b for a, b in zip(trace, trace[1:])))
        self.assertAlmostEqual(trace[-1], 1e-4, places=15)

    def test_schedule_summary(self):
        config = TrainConfig(epochs=4, learning_rate=1e-3)
        self.assertEqual(
            config.schedule_summary(),
            {
                "kind": "linear",
                "initial": 1e-3,
                "final_epoch_rate": config.learning_rate_at(3),
                "zero_at_epoch": 4,
            },
        )
        self.assertAlmostEqual(config.learning_rate_at(4), 0.0, places=18)
        constant = TrainConfig(epochs=4, learning_rate=1e-3, schedule="constant")
        summary = constant.schedule_summary()
        self.assertEqual(summary["final_epoch_rate"], 1e-3)
        self.assertIsNone(summary["zero_at_epoch"])

    def test_constant_schedule(self):
        config = TrainConfig(epochs=5, learning_rate=2e-4, schedule="constant")
        self.assertEqual({config.learning_rate_at(e) for e in range(5)}, {2e-4})

    def test_checkpoint_epochs_are_normalized(self):
        config = TrainConfig(epochs=10, checkpoint_epochs=[10, 2, 2, 6])
        self.assertEqual(config.checkpoint_epochs, [2, 6, 10])
        with self.assertRaises(ConfigurationError):
            TrainConfig(epochs=10, checkpoint_epochs=[11])
        with self.assertRaises(ConfigurationError):
            TrainConfig(epochs=10, checkpoint_epochs=[0])

    def test_invalid_values(self):
        invalid = (
            {"epochs": -1},
            {"batch_size": 0},
            {"schedule": "cosine"},
            {"beta": -1.0},
        )
        for bad in invalid:
            with self.subTest(**bad):
                with self.assertRaises(ConfigurationError):
                    TrainConfig(**bad).loss_weights

    def test_dict_round_trip(self):
        config = TrainConfig(epochs=3, af=6.0, checkpoint_epochs=[1, 3])
        self.assertEqual(TrainConfig.from_dict(config.to_dict()), config)
        with self.assertRaises(ConfigurationError):
            TrainConfig.from_dict({"epochs": 3, "momentum": 0.9})

    def test_missing_json(self):
        with self.assertRaises(ConfigurationError):
            TrainConfig.from_json("/nonexistent/train.json")

    def test_mask_config(self):
        mask_cfg = TrainConfig(af=6.0, acs=4, mask_seed=9).mask_config()
        self.assertEqual((mask_cfg.af, mask_cfg.acs, mask_cfg.seed), (6.0, 4, 9))

    def test_loss_weights(self):
        self.assertEqual(TrainConfig().loss_weights, LossWeights(1.0, 10.0, 10.0))


class DefaultsTest(SimpleTestCase):
    def test_pretrain_defaults(self):
        config = TrainConfig.from_defaults("pretrain")
        self.assertEqual(config.epochs, settings.RECON_DEFAULTS["pretrain_epochs"])
        self.assertEqual(config.checkpoint_epochs, [])

    def test_full_scale(self):
        config = TrainConfig.from_defaults("pretrain", "full")
        full = settings.RECON_FULL_DEFAULTS
        self.assertEqual(config.epochs, full["pretrain_epochs"])
        self.assertEqual(config.batch_size, full["batch_size"])

    def test_precedence(self):
        config = TrainConfig.from_defaults(
            "pretrain", base={"epochs": 7, "af": 2.0}, epochs=3, af=None
        )
        self.assertEqual((config.epochs, config.af), (3, 2.0))

    @override_settings(
        RECON_DEFAULTS={**settings.RECON_DEFAULTS, "finetune_epochs": 10}
    )
    def test_finetune_sweep(self):
        config = TrainConfig.from_defaults("finetune")
        self.assertEqual(config.checkpoint_epochs, [2, 4, 6, 8, 10])
        explicit = TrainConfig.from_defaults("finetune", checkpoint_epochs=[5])
        self.assertEqual(explicit.checkpoint_epochs, [5])

    def test_sweep_epochs(self):
        self.assertEqual(sweep_epochs(30), [6, 12, 18, 24, 30])
        self.assertEqual(sweep_epochs(2), [1, 2])
        self.assertEqual(sweep_epochs(0), [])
