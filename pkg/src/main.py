#!/usr/bin/env python3
"""
invol - involutions and invertibility of polynomial maps of Q[x, y]
Main application entry point
"""

import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from api.commands import run_command


def main(argv=None) -> int:
    """Main entry point"""
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
