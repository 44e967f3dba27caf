from django.apps import AppConfig


class FieldSamplerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'field_sampler'
    verbose_name = 'Layered field synthesis on the torus'
