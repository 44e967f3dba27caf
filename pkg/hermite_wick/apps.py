from django.apps import AppConfig


class HermiteWickConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'hermite_wick'
    verbose_name = 'Hermite polynomials and Wick calculus'
