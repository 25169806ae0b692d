import math
from pathlib import Path

from loguru import logger


class DataFormatError(ValueError):
    """Malformed input file; ``line`` is the 1-based offending line."""

    def __init__(self, path: str | Path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def fail(path: str | Path, line: int, message: str) -> DataFormatError:
    """Log a format error and return it for raising."""
    error = DataFormatError(path, line, message)
    logger.error(str(error))
    return error


def parse_finite(token: str, path: str | Path, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise fail(path, line, f"not a number: {token!r}") from None
    if not math.isfinite(value):
        raise fail(path, line, f"non-finite value: {token!r}")
    return value


def parse_int(token: str, path: str | Path, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise fail(path, line, f"not an integer: {token!r}") from None


def content_lines(path: Path) -> list[str]:
    """Lines of a UTF-8 text file without trailing blank lines."""
    lines = path.read_text(encoding="utf-8").splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines
