from functools import wraps

import typer

from ...core.exceptions import MetalinError
from .logger import logger


def exit_on_error(func):
    """Turn a ``MetalinError`` into a logged message and its exit code."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except MetalinError as exc:
            logger.error(f"{type(exc).__name__}: {exc.detail}")
            raise typer.Exit(code=exc.exit_code) from exc

    return wrapper
