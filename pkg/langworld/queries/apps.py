from django.apps import AppConfig


class QueriesConfig(AppConfig):
    name = 'langworld.queries'
    label = 'queries'
