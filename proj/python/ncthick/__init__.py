"""Noncommutative thickenings of polynomial charts."""

import json

from . import _core
from ._core import (
    DimensionError,
    ParseError,
    RunResult,
    bracket_string,
    bracketing,
    commands,
    lyndon_words,
    normalize_poly,
    quotient_dimensions,
    set_threads,
    threads,
)


class CommandError(RuntimeError):
    def __init__(self, result):
        super().__init__(result.message)
        self.result = result


def run(command, spec=None, *args, truncation=None, target=None, n=2, max_degree=5):
    """Runs a command and returns (artifact, report) as parsed JSON.

    Specs may be dicts or JSON text. Raises CommandError on a nonzero exit code.
    """

    def text(s):
        if s is None:
            return None
        return s if isinstance(s, str) else json.dumps(s)

    result = _core.run(command, text(spec) or "{}", list(args), truncation, text(target), n, max_degree)
    if result.exit_code != 0:
        raise CommandError(result)
    artifact = json.loads(result.artifact) if result.artifact else None
    report = json.loads(result.report) if result.report else None
    return artifact, report


__all__ = [
    "CommandError",
    "DimensionError",
    "ParseError",
    "RunResult",
    "bracket_string",
    "bracketing",
    "commands",
    "lyndon_words",
    "normalize_poly",
    "quotient_dimensions",
    "run",
    "set_threads",
    "threads",
]
