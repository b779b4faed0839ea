"""Main entry point for the pamr command-line tool."""
import logging
import sys
from typing import Optional, Sequence

from pamr.cli import parse_args, resolve_log_level, run

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str) -> None:
    """Send log records to stderr so command output on stdout stays clean."""
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger("pamr").setLevel(getattr(logging, level))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the toolkit.

    Returns:
        Process exit code
    """
    args = parse_args(argv)
    configure_logging(resolve_log_level(args))
    try:
        return run(args)
    except Exception as e:
        logger.exception(f"Application error: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())
