"""Logging setup backed by rich."""

import logging

from rich.console import Console
from rich.logging import RichHandler

# Status output goes to stderr; stdout is reserved for the JSON summary line.
stderr_console = Console(stderr=True)


def configure_logging(verbose: bool = False) -> None:
    """
    Install a rich handler on the ``sacmt`` logger.

    Args:
        verbose: Log DEBUG records when True, INFO otherwise
    """
    logger = logging.getLogger("sacmt")
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)

    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = RichHandler(
        console=stderr_console,
        show_path=False,
        show_time=False,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.propagate = False
