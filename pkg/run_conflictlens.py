"""
run_conflictlens.py - Single entry point for conflictlens from a source checkout.

Puts src/ on the path, then hands over to the CLI.
"""

import sys

# Add src to path for imports
sys.path.insert(0, 'src')


def main() -> int:
    """
    Main entry point.

    Execution order:
    1. Import the CLI (after the path fix)
    2. Run it with the process arguments
    3. Return its exit code
    """
    from conflictlens.cli import main as cli_main

    return cli_main()


if __name__ == "__main__":
    raise SystemExit(main())
