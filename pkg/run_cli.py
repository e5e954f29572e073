#!/usr/bin/env python3
"""
Entanglement Sweep Launcher
Run this script to drive the command-line front end from the project root.
"""

import sys
from pathlib import Path

# Add the project root to the Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

# Import after adding to path
from config.settings import settings
from cli.app import main as cli_main


def main():
    """Print a short banner on the diagnostic stream, then hand over to the CLI."""
    print("Collective-spin entanglement toolkit", file=sys.stderr)
    print(f"   Frame epsilon: {settings.frame_epsilon:g}", file=sys.stderr)
    print(f"   Sweep workers: {settings.sweep_jobs}", file=sys.stderr)
    print("-" * 50, file=sys.stderr)

    try:
        return cli_main(sys.argv[1:])
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
