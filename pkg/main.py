#!/usr/bin/env python3
"""
NoisyLab Application

Command-line entry point for the noisy VQE / ADAPT-VQE simulation lab.
"""

import sys
from pathlib import Path

# Add src directory to Python path
src_dir = Path(__file__).parent / 'src'
sys.path.insert(0, str(src_dir))

try:
    from cli import main as cli_main
except ImportError as e:
    print(f"Import error: {e}", file=sys.stderr)
    print("Please ensure all dependencies are installed: pip install -r requirements.txt", file=sys.stderr)
    sys.exit(1)


def main():
    """Main entry point."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
