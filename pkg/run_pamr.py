"""Command-line entry point for running from a source checkout."""
import sys
from pathlib import Path

# Add src directory to Python path to ensure proper imports
src_dir = Path(__file__).parent / "src"
sys.path.insert(0, str(src_dir))

from pamr.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
