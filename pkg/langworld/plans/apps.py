from django.apps import AppConfig


class PlansConfig(AppConfig):
    name = 'langworld.plans'
    label = 'plans'
