from django.apps import AppConfig


class SkillsConfig(AppConfig):
    name = 'langworld.skills'
    label = 'skills'
