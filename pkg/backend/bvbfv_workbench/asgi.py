"""
ASGI config for bvbfv_workbench project.
"""

import os
from django.core.asgi import get_asgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'bvbfv_workbench.settings')

application = get_asgi_application()
