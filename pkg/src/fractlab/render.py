"""Rendering of log-domain lengths for reports and manifests.

Values are primarily reported in log2 space with 12 significant digits; a
decimal rendering is attached where it is trustworthy and flagged as
approximate (omitted) below 2**-1000.
"""

from __future__ import annotations

from .loglength import LogLength

DECIMAL_FLOOR_LOG2 = -1000.0


def sig12(x: float) -> float:
    return float(f"{x:.12g}")


def render_length(x: LogLength) -> dict:
    if x.is_zero:
        return {"log2": None, "decimal": "0", "approx": False}
    out: dict = {"log2": sig12(x.log2)}
    if x.log2 >= DECIMAL_FLOOR_LOG2:
        out["decimal"] = f"{x.value():.12g}"
        out["approx"] = False
    else:
        out["decimal"] = None
        out["approx"] = True
    return out
