"""Run ``python -m weyl_lab``."""

import sys

from .cli import main

sys.exit(main())
