#!/usr/bin/env python3
"""
Startup script for the invol command line
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

try:
    from main import main
except ImportError as e:
    print(f"Import error: {e}", file=sys.stderr)
    print("Please install required packages:", file=sys.stderr)
    print("pip3 install -r requirements.txt", file=sys.stderr)
    sys.exit(3)

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
