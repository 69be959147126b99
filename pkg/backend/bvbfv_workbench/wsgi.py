"""
WSGI config for bvbfv_workbench project.

Exposes the WSGI callable as a module-level variable named ``application``.
For deployment with Gunicorn.
"""

import os
from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'bvbfv_workbench.settings')

application = get_wsgi_application()
