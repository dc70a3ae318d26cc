"""Module entry point: ``python -m specialty_approx``."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
