from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="DatasetRecord",
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
                ("path", models.CharField(max_length=500, unique=True)),
                (
                    "domain",
                    models.CharField(
                        choices=[
                            ("brainlike", "Brain-like"),
                            ("tumorlike", "Tumor-like"),
                            ("kneelike", "Knee-like"),
                            ("liverlike", "Liver-like"),
                        ],
                        max_length=20,
                    ),
                ),
                ("size", models.PositiveIntegerField()),
                ("coils", models.PositiveIntegerField()),
                ("n_train", models.PositiveIntegerField(default=0)),
                ("n_val", models.PositiveIntegerField(default=0)),
                ("n_test", models.PositiveIntegerField(default=0)),
                ("base_seed", models.BigIntegerField(default=0)),
                ("created", models.DateTimeField(auto_now=True)),
            ],
            options={
                "ordering": ["domain", "path"],
            },
        ),
    ]
