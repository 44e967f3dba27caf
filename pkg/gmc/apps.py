from django.apps import AppConfig


class GmcConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'gmc'
    verbose_name = 'Regularized GMC functionals'
