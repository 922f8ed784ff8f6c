"""Entry point for ``python -m msflow``."""

import sys

from .cli import run

if __name__ == "__main__":
    sys.exit(run())
