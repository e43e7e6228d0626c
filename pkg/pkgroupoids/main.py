import logging
import sys
from typing import List, Optional

from .cli.commands import build_parser, run_command
from .cli.formatters import dump_json, render
from .core.config import configure_settings, get_settings
from .core.exceptions import InputError, PKGroupoidError
from .services.workspace import get_workspace_service

logger = logging.getLogger(__name__)


def setup_logging(level: Optional[str] = None):
    """Configure root logging once; messages go to stderr so reports stay parseable"""
    settings = get_settings()
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
    )


def apply_overrides(args) -> None:
    """Command-line flags win over the environment and the workspace bounds"""
    configure_settings(
        DISPLAY_FLATS=args.flats,
        NORMALIZE_LABELS=args.normalize_labels,
        DEFAULT_SEED=args.seed,
        HOMSET_BRUTE_FORCE_LIMIT=args.bound,
        NET_SEARCH_BOUND=args.bound,
        BISECTION_ORDER_BOUND=args.bound,
    )
    if not get_settings().validate_bounds():
        raise InputError("Resource bounds must be positive")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    settings = get_settings()
    logger.debug(f"{settings.PROJECT_NAME} {settings.VERSION}: {args.command}")

    try:
        workspace = get_workspace_service().load(args.config)
        apply_overrides(args)
        result = run_command(workspace, args)
    except PKGroupoidError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unhandled exception: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1

    print(dump_json(result.report) if args.json else render(result.report))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
