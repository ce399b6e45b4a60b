import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        ("phantoms", "0001_initial"),
    ]

    operations = [
        migrations.CreateModel(
            name="TrainingRun",
            fields=[
                (
                    "id",
                    models.AutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "kind",
                    models.CharField(
                        choices=[("pretrain", "Pretrain"), ("finetune", "Fine-tune")],
                        default="pretrain",
                        max_length=10,
                    ),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[
                            ("running", "Running"),
                            ("finished", "Finished"),
                            ("diverged", "Diverged"),
                        ],
                        default="running",
                        max_length=10,
                    ),
                ),
                ("data_path", models.CharField(max_length=500)),
                ("out_dir", models.CharField(max_length=500)),
                ("init_checkpoint", models.CharField(blank=True, max_length=500)),
                ("af", models.FloatField()),
                ("epochs", models.PositiveIntegerField()),
                ("seed", models.BigIntegerField(default=0)),
                ("best_epoch", models.PositiveIntegerField(blank=True, null=True)),
                ("best_val_psnr", models.FloatField(blank=True, null=True)),
                ("started", models.DateTimeField(auto_now_add=True)),
                ("finished", models.DateTimeField(blank=True, null=True)),
                (
                    "dataset",
                    models.ForeignKey(
                        blank=True,
                        null=True,
                        on_delete=django.db.models.deletion.SET_NULL,
                        to="phantoms.datasetrecord",
                    ),
                ),
            ],
            options={
                "ordering": ["-started"],
            },
        ),
        migrations.CreateModel(
            name="Checkpoint",
            fields=[
                (
                    "id",
                    models.AutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("path", models.CharField(max_length=500)),
                ("epoch", models.PositiveIntegerField()),
                ("val_psnr", models.FloatField(blank=True, null=True)),
                ("is_best", models.BooleanField(default=False)),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="checkpoints",
                        to="training.trainingrun",
                    ),
                ),
            ],
            options={
                "ordering": ["run", "epoch"],
            },
        ),
    ]
