"""Complementary-set arrangements as refinable finite approximations.

An arrangement assigns every gap index a position on the line.  A finite
stage of it (an :class:`Approximation`) is an ordered list of placed gaps
and residual closed intervals; each residual carries a descriptor of the
gap indices still unplaced inside it and the largest such gap.  Endpoints
are exact cumulative sums of gap lengths, stored once at placement time and
never recomputed, so later refinement stages agree bit for bit.

Zero-length residuals are retained as singleton points (they are points of
the limit set, e.g. between adjacent gaps of the decreasing arrangement).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

from .errors import (
    ArrangementError,
    ConfigError,
    ConstructionError,
    DomainError,
    RangeError,
)
from .loglength import ZERO, LogLength
from .models import GapSequence, level_of

_MASS_REL_TOL = 1e-9


# ---------------------------------------------------------------------------
# residual blocks (descriptors of unplaced gap-index sets)
# ---------------------------------------------------------------------------


class GapBlock:
    """A set of unplaced gap indices together with its routing rule."""

    model: GapSequence

    def mass(self) -> LogLength:
        raise NotImplementedError

    def max_gap(self) -> LogLength:
        raise NotImplementedError

    def split(self) -> tuple[Optional["GapBlock"], int, Optional["GapBlock"]]:
        """Place this block's first gap: (left child, gap index, right child)."""
        raise NotImplementedError

    def with_model(self, model: GapSequence) -> "GapBlock":
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class SuffixBlock(GapBlock):
    """Indices >= start, placed in decreasing order from the right."""

    model: GapSequence
    start: int

    def mass(self) -> LogLength:
        return self.model.tail(self.start - 1)

    def max_gap(self) -> LogLength:
        lim = self.model.max_index
        if lim is not None and self.start > lim:
            return ZERO
        return self.model.term(self.start)

    def split(self):
        return (SuffixBlock(self.model, self.start + 1), self.start, None)

    def with_model(self, model: GapSequence) -> "SuffixBlock":
        return SuffixBlock(model, self.start)

    def describe(self) -> dict:
        return {"rule": "suffix", "start": self.start}


def _subtree_mass(model: GapSequence, level: int, offset: int) -> LogLength:
    """Mass of all indices at levels m >= level whose offset prefix is `offset`.

    Level-constant models admit the closed form 2**-level * (mass of levels
    >= level).  Otherwise the per-level slices (contiguous index ranges) are
    summed with a certified cutoff: the neglected remainder is bounded by the
    full tail beyond the last level taken, which strictly decreases.
    """
    if model.has_levels:
        suffix = model.level_suffix_mass(level)
        return LogLength(suffix.log - level * math.log(2.0)) if not suffix.is_zero else ZERO
    parts: list[LogLength] = []
    running = ZERO
    m = level
    while True:
        lo = (1 << m) + offset * (1 << (m - level))
        hi = lo + (1 << (m - level)) - 1
        lim = model.max_index
        if lim is not None and lo > lim:
            break
        if lim is not None:
            hi = min(hi, lim)
        piece = model.index_range_mass(lo, hi)
        if not piece.is_zero:
            parts.append(piece)
            running = running + piece
        bound = model.tail((1 << (m + 1)) - 1)
        if bound.is_zero:
            break
        if not running.is_zero and bound.log - running.log < -60 * math.log(2.0):
            break
        m += 1
        if m > level + 4096:
            raise RangeError("subtree mass summation did not converge")
    return LogLength.sum(parts)


@dataclass(frozen=True, slots=True)
class SubtreeBlock(GapBlock):
    """Binary-routed subtree: gap 2**level + offset and everything below it.

    The level-order rule routes index 2**m + t (level m >= level) here iff
    t >> (m - level) == offset.
    """

    model: GapSequence
    level: int
    offset: int

    def root_index(self) -> int:
        return (1 << self.level) + self.offset

    def mass(self) -> LogLength:
        return _subtree_mass(self.model, self.level, self.offset)

    def max_gap(self) -> LogLength:
        # the root carries the smallest index, hence the largest gap of the
        # subtree for decreasing models
        lim = self.model.max_index
        if lim is not None and self.root_index() > lim:
            return ZERO
        return self.model.term(self.root_index())

    def split(self):
        left = SubtreeBlock(self.model, self.level + 1, 2 * self.offset)
        right = SubtreeBlock(self.model, self.level + 1, 2 * self.offset + 1)
        return (left, self.root_index(), right)

    def with_model(self, model: GapSequence) -> "SubtreeBlock":
        return SubtreeBlock(model, self.level, self.offset)

    def describe(self) -> dict:
        return {"rule": "subtree", "level": self.level, "offset": self.offset}


class PermutedCantorRouter:
    """Binary routing with a seeded shuffle of the first 2**depth - 1 indices.

    Slot h of the heap (level m = bit_length(h)-1, offset h - 2**m) receives
    gap index perm[h]; slots beyond the permuted range follow the identity
    rule.  Subtree masses and minimum indices are precomputed bottom-up, so
    splits are O(1).
    """

    def __init__(self, model: GapSequence, depth: int, seed: int):
        if not model.has_levels:
            raise ArrangementError(
                "permuted placement needs a level-structured model"
            )
        if depth < 1:
            raise ConfigError(f"permuted depth must be >= 1, got {depth}")
        self.model = model
        self.depth = depth
        self.seed = seed
        n_slots = (1 << depth) - 1
        perm = list(range(1, n_slots + 1))
        random.Random(seed).shuffle(perm)
        self.assign = [0] + perm  # 1-based slots

        leaf_mass = _subtree_mass(model, depth, 0)
        size = 1 << depth
        mass = [ZERO] * size
        min_idx = [0] * size
        for h in range(size - 1, 0, -1):
            g = self.assign[h]
            if 2 * h >= size:
                below = leaf_mass + leaf_mass
                min_below = (1 << depth) + 2 * (h - (size >> 1))
            else:
                below = mass[2 * h] + mass[2 * h + 1]
                min_below = min(min_idx[2 * h], min_idx[2 * h + 1])
            mass[h] = model.term(g) + below
            min_idx[h] = min(g, min_below)
        self._mass = mass
        self._min_idx = min_idx

    def with_model(self, model: GapSequence) -> "PermutedCantorRouter":
        return PermutedCantorRouter(model, self.depth, self.seed)


@dataclass(frozen=True, slots=True)
class HeapBlock(GapBlock):
    """A slot subtree of a :class:`PermutedCantorRouter`."""

    router: PermutedCantorRouter
    h: int

    @property
    def model(self) -> GapSequence:  # type: ignore[override]
        return self.router.model

    def mass(self) -> LogLength:
        return self.router._mass[self.h]

    def max_gap(self) -> LogLength:
        return self.router.model.term(self.router._min_idx[self.h])

    def split(self):
        r = self.router
        gap_index = r.assign[self.h]
        size = 1 << r.depth
        if 2 * self.h >= size:
            o = 2 * (self.h - (size >> 1))
            left = SubtreeBlock(r.model, r.depth, o)
            right = SubtreeBlock(r.model, r.depth, o + 1)
        else:
            left = HeapBlock(r, 2 * self.h)
            right = HeapBlock(r, 2 * self.h + 1)
        return (left, gap_index, right)

    def with_model(self, model: GapSequence) -> "HeapBlock":
        return HeapBlock(self.router.with_model(model), self.h)

    def describe(self) -> dict:
        return {"rule": "permuted", "slot": self.h, "seed": self.router.seed}


# ---------------------------------------------------------------------------
# approximation items
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PlacedGap:
    index: int
    length: LogLength
    left: LogLength

    @property
    def right(self) -> LogLength:
        return self.left + self.length


@dataclass(frozen=True, slots=True)
class Residual:
    left: LogLength
    mass: LogLength
    block: Optional[GapBlock]  # None marks a singleton point

    @property
    def right(self) -> LogLength:
        return self.left + self.mass

    def max_gap(self) -> LogLength:
        return ZERO if self.block is None else self.block.max_gap()


Item = Union[PlacedGap, Residual]


def _item_width_zero(item: Item) -> bool:
    if isinstance(item, PlacedGap):
        return item.length.is_zero
    return item.mass.is_zero


def _split_residual(res: Residual, should_split: Callable[[Residual], bool]) -> list[Item]:
    out: list[Item] = []
    stack: list[Item] = [res]
    while stack:
        cur = stack.pop()
        if isinstance(cur, PlacedGap) or cur.block is None or not should_split(cur):
            out.append(cur)
            continue
        lblock, gap_index, rblock = cur.block.split()
        glen = cur.block.model.term(gap_index)
        lmass = lblock.mass() if lblock is not None else ZERO
        rmass = rblock.mass() if rblock is not None else ZERO
        whole = LogLength.sum((lmass, glen, rmass))
        if glen.log > cur.mass.log + _MASS_REL_TOL or (
            not whole.is_zero
            and not cur.mass.is_zero
            and abs(whole.log - cur.mass.log) > _MASS_REL_TOL
        ):
            raise ConstructionError(
                f"gap {gap_index} does not fit its host interval "
                "(model inconsistent or not decreasing)"
            )
        left_item = Residual(cur.left, lmass, lblock if not lmass.is_zero else None)
        gap_item = PlacedGap(gap_index, glen, cur.left + lmass)
        right_item = Residual(gap_item.right, rmass, rblock if not rmass.is_zero else None)
        stack.append(right_item)
        stack.append(gap_item)
        stack.append(left_item)
    return out


class Approximation:
    """Immutable finite stage of a complementary set."""

    def __init__(
        self,
        items: Sequence[Item],
        total: LogLength,
        meta: Optional[dict] = None,
        model: Optional[GapSequence] = None,
    ):
        self.items: tuple[Item, ...] = tuple(items)
        self.total = total
        self.meta = dict(meta or {})
        self.model = model
        self._endpoints: Optional[list] = None

    # -- structure ----------------------------------------------------------

    def placed(self) -> list[PlacedGap]:
        return [it for it in self.items if isinstance(it, PlacedGap)]

    def residuals(self) -> list[Residual]:
        return [it for it in self.items if isinstance(it, Residual)]

    def endpoints(self) -> list[tuple[LogLength, int]]:
        """Placed endpoints of the limit set: (position, boundary index).

        Boundary i sits left of item i (i = len(items) is the right edge L).
        Two consecutive boundaries are the same point exactly when the item
        between them carries zero mass, so deduplication is structural, not
        a float comparison (coincident boundaries can drift by an ulp).
        """
        if self._endpoints is None:
            eps: list[tuple[LogLength, int]] = []
            for i, it in enumerate(self.items):
                if i > 0 and _item_width_zero(self.items[i - 1]):
                    continue
                eps.append((it.left, i))
            if not self.items or not _item_width_zero(self.items[-1]):
                eps.append((self.total, len(self.items)))
            self._endpoints = eps
        return self._endpoints

    def mass_check(self, rel: float = 1e-10) -> None:
        parts = [
            it.length if isinstance(it, PlacedGap) else it.mass for it in self.items
        ]
        got = LogLength.sum(parts)
        if abs(got.log - self.total.log) > rel:
            raise ConstructionError(
                f"mass conservation violated: sum log {got.log} vs total {self.total.log}"
            )

    # -- refinement ---------------------------------------------------------

    def _refined(self, should_split: Callable[[Residual], bool], meta: dict) -> "Approximation":
        out: list[Item] = []
        for it in self.items:
            if isinstance(it, Residual) and it.block is not None and should_split(it):
                out.extend(_split_residual(it, should_split))
            else:
                out.append(it)
        # singleton points at the ambient endpoints 0 and L duplicate the
        # interval boundary; interior singletons are retained
        while (
            out
            and isinstance(out[0], Residual)
            and out[0].block is None
            and out[0].mass.is_zero
            and out[0].left.is_zero
        ):
            out.pop(0)
        while (
            out
            and isinstance(out[-1], Residual)
            and out[-1].block is None
            and out[-1].mass.is_zero
            and out[-1].left.log == self.total.log
        ):
            out.pop()
        return Approximation(out, self.total, {**self.meta, **meta}, self.model)

    def refine(self, gap_floor: LogLength) -> "Approximation":
        """Place every gap of length >= gap_floor."""
        if gap_floor.is_zero:
            raise DomainError("gap_floor must be positive")
        return self._refined(
            lambda res: res.max_gap() >= gap_floor,
            {"gap_floor_log2": gap_floor.log2},
        )

    def refine_levels(self, depth: int) -> "Approximation":
        """Split every binary-routed block above slot level `depth`."""

        def pred(res: Residual) -> bool:
            blk = res.block
            if isinstance(blk, SubtreeBlock):
                return blk.level < depth
            if isinstance(blk, HeapBlock):
                return True  # permuted slots are always within their depth
            return False

        return self._refined(pred, {"depth": depth})

    # -- export -------------------------------------------------------------

    def to_json(self) -> dict:
        from .render import render_length  # local import to avoid a cycle

        residuals = []
        placed = []
        for it in self.items:
            if isinstance(it, PlacedGap):
                placed.append(
                    {
                        "index": it.index,
                        "length": render_length(it.length),
                        "left": render_length(it.left),
                    }
                )
            else:
                residuals.append(
                    {
                        "left": render_length(it.left),
                        "mass": render_length(it.mass),
                        "singleton": it.block is None,
                        "indices": None if it.block is None else it.block.describe(),
                        "max_gap": render_length(it.max_gap()),
                    }
                )
        return {
            "total": render_length(self.total),
            "stage": self.meta,
            "placed_gaps": placed,
            "residuals": residuals,
            "endpoint_count": len(self.endpoints()),
        }


# ---------------------------------------------------------------------------
# arrangements
# ---------------------------------------------------------------------------

_PLACEMENTS = ("decreasing", "cantor", "central", "permuted")


@dataclass(frozen=True)
class Arrangement:
    """A placement plan for a gap sequence; refines to Approximations."""

    model: GapSequence
    placement: str
    depth: Optional[int] = None  # permuted prefix depth
    seed: Optional[int] = None
    _router: Optional[PermutedCantorRouter] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.placement not in _PLACEMENTS:
            raise ConfigError(f"unknown placement {self.placement!r}")
        if self.placement == "central" and not self.model.has_levels:
            raise ConfigError("central placement needs a level-constant model")
        if self.placement == "permuted":
            if self.depth is None or self.seed is None:
                raise ConfigError("permuted placement needs depth and seed")
            object.__setattr__(
                self,
                "_router",
                PermutedCantorRouter(self.model, self.depth, self.seed),
            )

    def root(self) -> Approximation:
        if self.placement == "decreasing":
            block: GapBlock = SuffixBlock(self.model, 1)
        elif self.placement in ("cantor", "central"):
            block = SubtreeBlock(self.model, 0, 0)
        else:
            block = HeapBlock(self._router, 1)
        total = self.model.total
        return Approximation(
            [Residual(ZERO, total, block)],
            total,
            {"placement": self.placement, "seed": self.seed},
            self.model,
        )

    def approximation(
        self,
        gap_floor: Optional[LogLength] = None,
        depth: Optional[int] = None,
    ) -> Approximation:
        root = self.root()
        if depth is not None:
            root = root.refine_levels(depth)
        if gap_floor is not None:
            root = root.refine(gap_floor)
        if gap_floor is None and depth is None and self.placement == "permuted":
            root = root.refine_levels(self.depth)
        return root

    def with_model(self, model: GapSequence) -> "Arrangement":
        return Arrangement(model, self.placement, self.depth, self.seed)


# ---------------------------------------------------------------------------
# builders and maps
# ---------------------------------------------------------------------------


def build_cantor(model: GapSequence, depth: int) -> Approximation:
    """The 2**depth step-`depth` intervals of the binary construction."""
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    try:
        model.check_decreasing(min(1 << depth, 4096))
    except DomainError as exc:
        raise ConstructionError(f"binary construction precondition: {exc}") from exc
    approx = Arrangement(model, "cantor").approximation(depth=depth)
    approx.mass_check()
    return approx


@dataclass(frozen=True)
class DecreasingSet:
    """Points x_j = tail(j-1), plus the remaining-mass residual [0, x_count]."""

    model: GapSequence
    points: tuple[LogLength, ...]

    @property
    def remaining_mass(self) -> LogLength:
        return self.points[-1]


def build_decreasing(model: GapSequence, count: int) -> DecreasingSet:
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    lim = model.max_index
    pts = []
    for j in range(1, count + 1):
        if lim is not None and j - 1 > lim:
            raise RangeError(f"point x_{j} beyond the model's range")
        pts.append(model.tail(j - 1))
    return DecreasingSet(model, tuple(pts))


def refine(approx: Approximation, gap_floor: LogLength) -> Approximation:
    out = approx.refine(gap_floor)
    out.mass_check()
    return out


def correspondence_map(
    approx: Approximation, target: GapSequence
) -> Approximation:
    """Resize every gap n from a_n to b_n, keeping the placement order.

    Endpoints of the image are the maps pi(x) = sum of target terms over the
    gaps left of x, with unplaced blocks contributing their exact target
    mass.  Positions are rebuilt by one cumulative left-to-right pass.
    """
    items: list[Item] = []
    cursor = ZERO
    for it in approx.items:
        if isinstance(it, PlacedGap):
            ln = target.term(it.index)
            items.append(PlacedGap(it.index, ln, cursor))
            cursor = cursor + ln
        else:
            blk = None if it.block is None else it.block.with_model(target)
            mass = ZERO if blk is None else blk.mass()
            items.append(Residual(cursor, mass, blk if not mass.is_zero else None))
            cursor = cursor + mass
    out = Approximation(items, target.total, {**approx.meta, "mapped": True}, target)
    out.mass_check()
    return out


def gap_level_stats(approx: Approximation, K: int) -> list[int]:
    """m_k for k = 1..K: the largest number of level-k gaps lying between
    consecutive strictly larger gaps (the unbounded outer intervals count
    as infinitely large gaps)."""
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")
    if K == 0:
        return []
    model = approx.model
    if model is None:
        raise ArrangementError("approximation carries no model reference")
    if not model.has_levels:
        raise ConfigError("gap level stats need a level-constant model")
    # strictly larger <=> strictly shallower level, so levels must strictly
    # decrease in length
    for n in range(K):
        if not model.level_length(n) > model.level_length(n + 1):
            raise ConfigError("m_k stats need strictly decreasing level lengths")
    g_K = model.level_length(K)
    for it in approx.items:
        if isinstance(it, Residual) and it.block is not None and it.max_gap() >= g_K:
            raise ArrangementError(
                f"levels <= {K} not fully placed; refine before computing m_k"
            )
    placed_levels = [
        level_of(it.index) for it in approx.items if isinstance(it, PlacedGap)
    ]
    out = []
    for k in range(1, K + 1):
        best = run = 0
        for lvl in [-1] + placed_levels + [-1]:
            if lvl == k:
                run += 1
            elif lvl < k:
                best = max(best, run)
                run = 0
        out.append(best)
    return out
