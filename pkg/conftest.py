import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'langworld.settings')
django.setup()
