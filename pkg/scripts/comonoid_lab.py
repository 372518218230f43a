#!/usr/bin/env python3
"""
comonoid-lab console: generate, check, close and analyze finite families of
subsets under the crossword-diagonal closure.

    python scripts/comonoid_lab.py gen down-up 3 -o down_up3.chu2
    python scripts/comonoid_lab.py check down_up3.chu2
    python scripts/comonoid_lab.py --debug close down_up3.chu2
"""

import os
import sys

# Make the package importable when run from a checkout
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))

from comonoid.cli import run  # noqa: E402


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
