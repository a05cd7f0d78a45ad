from django.apps import AppConfig


class WorldConfig(AppConfig):
    name = 'langworld.world'
    label = 'world'
