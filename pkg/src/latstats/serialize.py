"""Byte-stable text output: float formatting and small CSV writers.

All CSV emitted by this package uses LF line endings, a single header line,
and shortest-round-trip decimal formatting (never more than 17 significant
digits), so identical data always produces identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

__all__ = ["fmt", "write_csv"]


def fmt(x) -> str:
    """Canonical text form of a cell value."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int,)):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    try:
        import numpy as np

        if isinstance(x, np.integer):
            return str(int(x))
        if isinstance(x, np.floating):
            return repr(float(x))
    except ImportError:  # pragma: no cover
        pass
    return str(x)


def write_csv(path, header, rows, metadata: dict | None = None) -> None:
    """Write rows of cell values; optional metadata goes in a '# {...}' first line."""
    path = Path(path)
    lines = []
    if metadata is not None:
        lines.append("# " + json.dumps(metadata, sort_keys=True, separators=(", ", ": ")))
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(c) for c in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
