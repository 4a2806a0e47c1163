"""Flat-file formats.

History files hold one completed run per line as ``wins,losses``; ``#``
starts a comment.  With the FIFA coding each line holds one or more result
codes 0-5 (comma or whitespace separated) for a 5-1 arena: code c < 5 is
result (c, 1), code 5 is (5, 0).

Win-loss matrix files hold one player per line as a string of ``0``/``1``
characters without separators.
"""
from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable

import numpy as np

from .arena import ArenaShape, State
from .errors import ValidationError
from .simulator import WinLossMatrix

FIFA_SHAPE = ArenaShape(5, 1)


def _lines(source) -> Iterable[tuple[int, str]]:
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {source}: {exc.strerror}") from None
        lines = text.splitlines()
    else:
        lines = list(source)
    for k, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line


def fifa_result(code: int) -> State:
    if not 0 <= code <= 5:
        raise ValidationError(f"FIFA result code must be 0..5, got {code}")
    return State(5, 0) if code == 5 else State(code, 1)


def read_history(source, shape: ArenaShape, fifa: bool = False) -> dict[State, int]:
    """Result counts from a history file (path) or an iterable of lines."""
    if fifa and shape != FIFA_SHAPE:
        raise ValidationError(f"FIFA coding describes a 5-1 arena, not {shape}")
    counts = {s: 0 for s in shape.boundary_states}
    for lineno, line in _lines(source):
        if fifa:
            for tok in re.split(r"[,\s]+", line):
                try:
                    counts[fifa_result(int(tok))] += 1
                except ValueError:
                    raise ValidationError(f"line {lineno}: bad result code {tok!r}") from None
            continue
        parts = [p.strip() for p in line.split(",")]
        try:
            i, j = (int(p) for p in parts)
        except ValueError:
            raise ValidationError(f"line {lineno}: expected 'wins,losses', got {line!r}") from None
        if (i, j) not in counts:
            raise ValidationError(f"line {lineno}: {i}-{j} is not a result of a {shape} arena")
        counts[State(i, j)] += 1
    return counts


def read_matrix(source) -> WinLossMatrix:
    rows = []
    width = None
    for lineno, line in _lines(source):
        if set(line) - {"0", "1"}:
            raise ValidationError(f"line {lineno}: only 0/1 characters allowed")
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise ValidationError(f"line {lineno}: row has {len(line)} cells, expected {width}")
        rows.append(np.frombuffer(line.encode(), dtype=np.uint8) - ord("0"))
    if not rows:
        raise ValidationError("matrix file has no rows")
    return WinLossMatrix(np.vstack(rows))


def format_matrix(matrix) -> str:
    a = matrix.entries if isinstance(matrix, WinLossMatrix) else np.asarray(matrix, dtype=np.uint8)
    return "".join((row + ord("0")).astype(np.uint8).tobytes().decode() + "\n" for row in a)


def write_matrix(path, matrix) -> None:
    Path(path).write_text(format_matrix(matrix))
