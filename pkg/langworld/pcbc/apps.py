from django.apps import AppConfig


class PcbcConfig(AppConfig):
    name = 'langworld.pcbc'
    label = 'pcbc'
