from django.apps import AppConfig


class CliConfig(AppConfig):
    name = 'langworld.cli'
    label = 'cli'
