from django.apps import AppConfig


class TrainingConfig(AppConfig):
    name = 'langworld.training'
    label = 'training'
