"""Exact covering numbers on the line.

``greedy_cover`` computes the minimal number of closed balls of radius r
needed to cover an ordered union of disjoint closed intervals and points:
sweep left to right, placing each ball so it covers the leftmost uncovered
target point, i.e. the segment [p, p + 2r].  Optimality of this greedy on
the line is a tested property (against an exhaustive stabbing search), not
an assumption.

``local_cover`` evaluates N_r(B(x,R) & E) on an approximation with certified
one-sided bounds: any cover of E covers the placed endpoints (lower bound),
and E is contained in the placed endpoints plus the residual intervals
(upper bound).  All window geometry is computed relative to R, so queries
remain well scaled even when absolute positions underflow floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import DomainError, RefinementNeeded, SizeLimitError
from .loglength import LogLength
from .arrange import Approximation, PlacedGap, Residual

Component = tuple[float, float]


@dataclass(frozen=True)
class CoverQuery:
    """A ball query B(x, R) counted at radius r; x is an endpoint id."""

    center: int
    R: LogLength
    r: LogLength

    def __post_init__(self) -> None:
        if self.r.is_zero or not self.r < self.R:
            raise DomainError("cover query needs 0 < r < R")


@dataclass(frozen=True)
class CoverBounds:
    lower: int
    upper: int
    certified: bool

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise DomainError("cover bounds must satisfy lower <= upper")


def _as_float_radius(r: Union[float, LogLength]) -> float:
    val = r.value() if isinstance(r, LogLength) else float(r)
    if val <= 0.0:
        raise DomainError(f"radius must be positive, got {val}")
    return val


def greedy_cover(components: Iterable[Component], r: Union[float, LogLength]) -> int:
    """Minimal closed-ball cover count of sorted disjoint intervals/points.

    Points are zero-length components (lo == hi).  Returns 0 on an empty
    target.
    """
    two_r = 2.0 * _as_float_radius(r)
    covered = -math.inf
    count = 0
    for lo, hi in components:
        if hi < lo:
            raise DomainError(f"component ({lo}, {hi}) has negative length")
        while hi > covered:
            place = lo if lo > covered else covered
            covered = place + two_r
            count += 1
    return count


def brute_force_cover(points: Sequence[float], r: Union[float, LogLength]) -> int:
    """Exact minimum via exhaustive interval stabbing; test oracle only.

    Every ball in some optimal cover can be slid right until its left edge
    touches a target point, so it suffices to enumerate ball placements with
    left edges at the points.  Hard size bound of 16 points.
    """
    pts = sorted(set(float(p) for p in points))
    if len(pts) > 16:
        raise SizeLimitError(f"brute-force cover limited to 16 points, got {len(pts)}")
    if not pts:
        return 0
    two_r = 2.0 * _as_float_radius(r)

    @lru_cache(maxsize=None)
    def best(i: int) -> int:
        if i >= len(pts):
            return 0
        out = len(pts) + 1
        for j in range(i + 1):
            q = pts[j]
            if q < pts[i] - two_r:
                continue
            k = i
            while k < len(pts) and pts[k] <= q + two_r:
                k += 1
            out = min(out, 1 + best(k))
        return out

    return best(0)


# ---------------------------------------------------------------------------
# windowed queries on approximations
# ---------------------------------------------------------------------------


def _item_rel_width(item, log_R: float) -> float:
    if isinstance(item, PlacedGap):
        log_w = item.length.log
    else:
        log_w = item.mass.log
    if log_w == -math.inf:
        return 0.0
    d = log_w - log_R
    return math.exp(d) if d > -745.0 else 0.0


def window_view(
    approx: Approximation, boundary: int, R: LogLength
) -> tuple[list[Component], list[Component], list[LogLength]]:
    """Target components of B(x, R) around boundary index `boundary`.

    Returns (point components, interval components, max unplaced gaps of the
    residuals met), all in coordinates centred at x in units of R (the ball
    is [-1, 1]).
    """
    items = approx.items
    log_R = R.log
    points: list[Component] = []
    intervals: list[Component] = []
    residual_gaps: list[LogLength] = []

    # right sweep
    cursor = 0.0
    points.append((0.0, 0.0))
    for i in range(boundary, len(items)):
        w = _item_rel_width(items[i], log_R)
        if isinstance(items[i], Residual):
            blk = items[i].block
            lo, hi = cursor, min(cursor + w, 1.0)
            if lo <= 1.0 and blk is not None:
                intervals.append((lo, hi))
                residual_gaps.append(items[i].max_gap())
        cursor += w
        if cursor <= 1.0:
            points.append((cursor, cursor))
        else:
            break

    # left sweep
    cursor = 0.0
    for i in range(boundary - 1, -1, -1):
        w = _item_rel_width(items[i], log_R)
        if isinstance(items[i], Residual):
            blk = items[i].block
            lo, hi = max(-cursor - w, -1.0), -cursor
            if hi >= -1.0 and blk is not None:
                intervals.append((lo, hi))
                residual_gaps.append(items[i].max_gap())
        cursor += w
        if cursor <= 1.0:
            points.append((-cursor, -cursor))
        else:
            break

    points.sort()
    intervals.sort()
    return points, intervals, residual_gaps


def _merge_components(
    points: list[Component], intervals: list[Component]
) -> list[Component]:
    return sorted(points + intervals)


def local_cover(approx: Approximation, query: CoverQuery) -> CoverBounds:
    """Certified bounds on N_r(B(x, R) & E).

    lower: greedy over placed endpoints in the ball (they lie in E, so any
    cover of E covers them).  upper: greedy over endpoints plus residual
    intervals (E is contained in that union).  certified is True when every
    residual met has max unplaced gap <= r, which makes each residual
    (r/2)-dense in E and the upper bound attainable up to that slack.
    """
    eps = approx.endpoints()
    if not 0 <= query.center < len(eps):
        raise DomainError(f"endpoint id {query.center} out of range")
    boundary = eps[query.center][1]
    points, intervals, residual_gaps = window_view(approx, boundary, query.R)
    for g in residual_gaps:
        if g > query.R:
            raise RefinementNeeded(
                "query window meets a residual with max unplaced gap above R; "
                "refine the approximation first"
            )
    # window coordinates are in units of R
    r_rel = math.exp(query.r.log - query.R.log)
    lower = greedy_cover(points, r_rel)
    upper = greedy_cover(_merge_components(points, intervals), r_rel)
    certified = all(g <= query.r for g in residual_gaps)
    # a cover of the containing union never beats a cover of a subset
    upper = max(upper, lower)
    return CoverBounds(lower=lower, upper=upper, certified=certified)
