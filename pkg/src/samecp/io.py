"""Reading series files and writing segment tables.

Series files hold one observation per line, either a bare value or a
``position<sep>value`` pair separated by a tab or a comma.  A single header
line is recognised when the first row is not numeric.  Missing values are not
imputed: any unparsable or non-finite entry is an error pointing at its line.

All positions written out are 1-based, ``end`` inclusive.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .pipeline import Segment, Segmentation

SEGMENT_HEADER = ("start", "end", "length", "mean")
_SPLIT = re.compile(r"[\t,]")


class SeriesFormatError(ValueError):
    def __init__(self, path, line: int | None, message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = str(path)
        self.line = line


def _fields(line: str) -> list[str]:
    return [f.strip() for f in _SPLIT.split(line.strip())]


def _is_numeric(fields: list[str]) -> bool:
    try:
        for f in fields:
            float(f)
    except ValueError:
        return False
    return True


def read_series(path) -> np.ndarray:
    """Parse a one- or two-column series file into a float array (row order)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SeriesFormatError(path, None, f"cannot read file ({exc.strerror or exc})") from exc

    values: list[float] = []
    last_pos: float | None = None
    ncols: int | None = None
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        fields = _fields(raw)
        if first:
            first = False
            if not _is_numeric(fields):
                continue
        if len(fields) not in (1, 2):
            raise SeriesFormatError(path, lineno, f"expected 1 or 2 columns, found {len(fields)}")
        if ncols is None:
            ncols = len(fields)
        elif len(fields) != ncols:
            raise SeriesFormatError(
                path, lineno, f"expected {ncols} column(s) as on earlier rows, found {len(fields)}"
            )
        try:
            numbers = [float(f) for f in fields]
        except ValueError:
            raise SeriesFormatError(path, lineno, f"not a number: {raw.strip()!r}") from None
        if not all(math.isfinite(v) for v in numbers):
            raise SeriesFormatError(path, lineno, f"non-finite value: {raw.strip()!r}")
        if ncols == 2:
            pos = numbers[0]
            if last_pos is not None and pos <= last_pos:
                raise SeriesFormatError(
                    path, lineno, f"positions must increase strictly ({pos:g} after {last_pos:g})"
                )
            last_pos = pos
        values.append(numbers[-1])
    if not values:
        raise SeriesFormatError(path, None, "no observations found")
    return np.asarray(values, dtype=float)


def format_segments_tsv(seg: Segmentation) -> str:
    lines = ["\t".join(SEGMENT_HEADER)]
    for s in seg.segments:
        lines.append(f"{s.start}\t{s.end}\t{s.length}\t{s.mean:.6g}")
    return "\n".join(lines) + "\n"


def parse_segments_tsv(text: str) -> list[Segment]:
    rows = [r for r in text.splitlines() if r.strip()]
    if not rows or tuple(rows[0].split("\t")) != SEGMENT_HEADER:
        raise ValueError("segment table must start with the header start/end/length/mean")
    out = []
    for r in rows[1:]:
        start, end, length, mean = r.split("\t")
        seg = Segment(start=int(start), end=int(end), mean=float(mean))
        if seg.length != int(length):
            raise ValueError(f"inconsistent length in row {r!r}")
        out.append(seg)
    return out


def segmentation_to_json(seg: Segmentation, metadata: dict) -> str:
    doc = {
        "metadata": metadata,
        "change_points": list(seg.change_points),
        "segments": [
            {"start": s.start, "end": s.end, "length": s.length, "mean": s.mean}
            for s in seg.segments
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
