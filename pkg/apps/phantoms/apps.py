from django.apps import AppConfig


class PhantomsConfig(AppConfig):
    name = "apps.phantoms"
