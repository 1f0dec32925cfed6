"""
CFCN coloring - command-line entry point

Conflict-free coloring of closed neighborhoods with O(log^2 Delta) colors.
"""

import sys

from ui.cli_interface import main

if __name__ == "__main__":
    sys.exit(main())
