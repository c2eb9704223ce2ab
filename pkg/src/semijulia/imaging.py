"""Artifact emission: binary PGM mask images and CSV metric reports."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .grid import SetMask


def emit_mask_image(m: SetMask, path) -> None:
    """Write a mask as a binary PGM (P5): marked = 0, unmarked = 255.

    Row 0 is the top of the viewport (maximal imaginary part); the
    infinity flag is not rasterized.
    """
    path = Path(path)
    rows, cols = m.bits.shape
    payload = np.where(m.bits, 0, 255).astype(np.uint8)
    header = f"P5\n{cols} {rows}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as f:
            f.write(header)
            f.write(payload.tobytes())
    except OSError as exc:
        raise OSError(f"failed writing mask image to {path}: {exc}") from exc


def format_value(v) -> str:
    """Render a metric value with 6 significant digits for floats."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.6g}"
    return str(v)


def emit_report(rows: list[tuple[str, str, object]], path) -> None:
    """Write metric rows as CSV with a fixed header: stage,metric,value."""
    path = Path(path)
    lines = ["stage,metric,value"]
    for stage, metric, value in rows:
        lines.append(f"{stage},{metric},{format_value(value)}")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    except OSError as exc:
        raise OSError(f"failed writing report to {path}: {exc}") from exc
