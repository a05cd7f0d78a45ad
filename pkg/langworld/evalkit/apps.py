from django.apps import AppConfig


class EvalkitConfig(AppConfig):
    name = 'langworld.evalkit'
    label = 'evalkit'
