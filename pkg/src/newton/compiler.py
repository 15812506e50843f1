"""Source-to-IR pipeline."""

from __future__ import annotations

import os
from collections.abc import Iterable
from importlib import resources
from pathlib import Path

from newton.frontend import parse, tokenize
from newton.ir import NewtonIR
from newton.semantics import analyze

STDLIB_ENV = "NEWTON_STDLIB"


def stdlib_source() -> tuple[str, str]:
    """(text, file name) of the standard signal definitions.

    ``$NEWTON_STDLIB`` overrides the bundled ``stdlib.newton``.
    """
    override = os.environ.get(STDLIB_ENV)
    if override:
        return Path(override).read_text(encoding="utf-8"), override
    text = resources.files("newton").joinpath("stdlib.newton").read_text(encoding="utf-8")
    return text, "<stdlib>/stdlib.newton"


def compile_sources(sources: Iterable[tuple[str, str]]) -> NewtonIR:
    """Compile several ``(text, file_name)`` units as one specification, in order."""
    tokens = []
    for text, file_name in sources:
        tokens.extend(tokenize(text, file_name))
    return analyze(parse(tokens))


def compile_source(text: str, file_name: str = "<input>", stdlib: bool = False) -> NewtonIR:
    units = [stdlib_source()] if stdlib else []
    units.append((text, file_name))
    return compile_sources(units)


def compile_file(path: str | Path, stdlib: bool = False) -> NewtonIR:
    path = Path(path)
    return compile_source(path.read_text(encoding="utf-8"), str(path), stdlib=stdlib)
