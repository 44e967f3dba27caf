"""
WSGI config for the gmc_lab project.

Serves the read-only run registry API (``/api/runs/``) and the admin.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'gmc_lab.settings')

application = get_wsgi_application()
