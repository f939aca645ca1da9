"""Gap-sequence models and their diagnostics.

A gap sequence is a positive, summable sequence ``a_1 >= a_2 >= ...`` of
removed-interval lengths; its sum L is the ambient interval length.  Models
are rules with closed-form (or certified) tail sums, so the scale sequence

    s_n = 2**-n * sum_{j >= 2**n} a_j

is computable exactly at any addressable n.  Index convention throughout:
index j >= 1 sits at level ``j.bit_length() - 1``, level n holds the 2**n
indices ``2**n .. 2**(n+1) - 1``.

A model without a certified tail cannot produce values beyond its explicit
range; that is a hard :class:`RangeError`, never a silent truncation.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import ConfigError, DegeneracyError, DomainError, RangeError
from .loglength import LN2, ONE, ZERO, LogLength

# ---------------------------------------------------------------------------
# ratio sequences
# ---------------------------------------------------------------------------


class RatioSequence(ABC):
    """Subdivision ratios r_j in (0, 1/2), queried for j >= 1."""

    inf_r: Optional[float] = None
    sup_r: Optional[float] = None
    normalization: float = 1.0

    @abstractmethod
    def ratio(self, j: int) -> float: ...

    @property
    def max_level(self) -> Optional[int]:
        """Largest j for which ratio(j) is defined (None = unbounded)."""
        return None

    def log_ratio(self, j: int) -> float:
        return math.log(self.ratio(j))

    def prefix_log(self, n: int) -> float:
        """log(r_1 * ... * r_n); empty product for n = 0."""
        if n == 0:
            return 0.0
        return math.fsum(self.log_ratio(i) for i in range(1, n + 1))

    def checked(self, j: int, value: float) -> float:
        if not 0.0 < value < 0.5:
            raise DegeneracyError(
                f"ratio r_{j} = {value!r} outside (0, 1/2); "
                "sequence is not central-Cantor-compatible"
            )
        return value

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantRatio(RatioSequence):
    value: float

    def __post_init__(self) -> None:
        self.checked(1, self.value)
        object.__setattr__(self, "inf_r", self.value)
        object.__setattr__(self, "sup_r", self.value)

    def ratio(self, j: int) -> float:
        if j < 1:
            raise RangeError(f"ratio index must be >= 1, got {j}")
        return self.value

    def prefix_log(self, n: int) -> float:
        return n * math.log(self.value)

    def describe(self) -> dict:
        return {"kind": "ratios", "constant": self.value}


@dataclass(frozen=True)
class ExplicitRatios(RatioSequence):
    values: tuple[float, ...]
    declared_inf: Optional[float] = None
    declared_sup: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.values:
            raise ConfigError("explicit ratio sequence must be nonempty")
        for i, v in enumerate(self.values, start=1):
            self.checked(i, v)
        object.__setattr__(
            self, "inf_r",
            self.declared_inf if self.declared_inf is not None else None,
        )
        object.__setattr__(
            self, "sup_r",
            self.declared_sup if self.declared_sup is not None else None,
        )

    @property
    def max_level(self) -> Optional[int]:
        return len(self.values)

    def ratio(self, j: int) -> float:
        if j < 1:
            raise RangeError(f"ratio index must be >= 1, got {j}")
        if j > len(self.values):
            raise RangeError(
                f"ratio r_{j} beyond explicit prefix of length {len(self.values)}"
            )
        return self.values[j - 1]

    def describe(self) -> dict:
        out: dict = {"kind": "ratios", "values": list(self.values)}
        if self.inf_r is not None:
            out["inf_r"] = self.inf_r
        if self.sup_r is not None:
            out["sup_r"] = self.sup_r
        return out


class DerivedRatios(RatioSequence):
    """Ratios recovered from a gap model via r_j = s_j / s_{j-1}.

    The conversion is scale invariant; the model's total is recorded as the
    normalization factor that would rescale it to the unit interval.
    """

    def __init__(self, scales: "ScaleSequence"):
        self._scales = scales
        self.normalization = scales.model.total.value()
        self._cache: dict[int, float] = {}

    @property
    def max_level(self) -> Optional[int]:
        lim = self._scales.max_n
        return None if lim is None else lim

    def ratio(self, j: int) -> float:
        if j < 1:
            raise RangeError(f"ratio index must be >= 1, got {j}")
        got = self._cache.get(j)
        if got is None:
            s_prev = self._scales.s(j - 1)
            s_cur = self._scales.s(j)
            if s_cur.is_zero:
                raise DegeneracyError(
                    f"ratio r_{j} = 0 forced (no gap mass beyond level {j - 1})"
                )
            got = self._cache[j] = s_cur.ratio(s_prev)
        return self.checked(j, got)

    def log_ratio(self, j: int) -> float:
        self.ratio(j)
        return self._scales.s(j).log - self._scales.s(j - 1).log

    def prefix_log(self, n: int) -> float:
        for j in range(1, n + 1):
            self.ratio(j)
        return self._scales.s(n).log - self._scales.s(0).log

    def describe(self) -> dict:
        return {
            "kind": "ratios",
            "derived_from": self._scales.model.describe(),
            "normalization": self.normalization,
        }


# ---------------------------------------------------------------------------
# gap-sequence models
# ---------------------------------------------------------------------------


def level_of(j: int) -> int:
    if j < 1:
        raise RangeError(f"gap index must be >= 1, got {j}")
    return j.bit_length() - 1


class GapSequence(ABC):
    """Rule-based gap sequence with certified tails."""

    kind: str = "abstract"
    #: True when level n consists of 2**n equal gaps (level-constant family)
    has_levels: bool = False

    @abstractmethod
    def term(self, j: int) -> LogLength:
        """a_j for j >= 1."""

    @abstractmethod
    def tail(self, m: int) -> LogLength:
        """sum_{j > m} a_j for m >= 0, exact within the addressable range."""

    @property
    def total(self) -> LogLength:
        return self.tail(0)

    @property
    def max_index(self) -> Optional[int]:
        """Largest addressable gap index (None = unbounded)."""
        return None

    # level protocol (only meaningful when has_levels is True)

    def level_length(self, n: int) -> LogLength:
        raise RangeError(f"{self.kind} model has no level structure")

    def level_suffix_mass(self, n: int) -> LogLength:
        """sum over levels m >= n of 2**m * g_m."""
        raise RangeError(f"{self.kind} model has no level structure")

    def index_range_mass(self, p: int, q: int) -> LogLength:
        """sum a_p + ... + a_q (contiguous indices, 1 <= p <= q)."""
        if p > q:
            return ZERO
        return self.tail(p - 1) - self.tail(q)

    def check_decreasing(self, upto: int = 64) -> None:
        lim = upto if self.max_index is None else min(upto, self.max_index)
        prev = None
        for j in range(1, lim + 1):
            cur = self.term(j)
            if cur.is_zero:
                raise DomainError(f"gap a_{j} is zero; terms must be positive")
            if prev is not None and cur > prev:
                raise DomainError(
                    f"sequence not decreasing: a_{j} > a_{j - 1}"
                )
            prev = cur

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class GeometricGaps(GapSequence):
    """a_j = scale * lam**j, exact geometric tails."""

    lam: float
    scale: float = 1.0

    kind = "geometric"
    has_levels = False

    def __post_init__(self) -> None:
        if not 0.0 < self.lam < 1.0:
            raise ConfigError(f"geometric ratio must be in (0,1), got {self.lam}")
        if self.scale <= 0.0:
            raise ConfigError(f"geometric scale must be positive, got {self.scale}")

    def term(self, j: int) -> LogLength:
        if j < 1:
            raise RangeError(f"gap index must be >= 1, got {j}")
        return LogLength(math.log(self.scale) + j * math.log(self.lam))

    def tail(self, m: int) -> LogLength:
        if m < 0:
            raise RangeError(f"tail cutoff must be >= 0, got {m}")
        log_val = (
            math.log(self.scale)
            + (m + 1) * math.log(self.lam)
            - math.log1p(-self.lam)
        )
        return LogLength(log_val)

    def index_range_mass(self, p: int, q: int) -> LogLength:
        if p > q:
            return ZERO
        # scale * lam**p * (1 - lam**(q-p+1)) / (1 - lam)
        drop = (q - p + 1) * math.log(self.lam)
        correction = math.log1p(-math.exp(drop)) if drop > -700.0 else 0.0
        log_val = (
            math.log(self.scale)
            + p * math.log(self.lam)
            + correction
            - math.log1p(-self.lam)
        )
        return LogLength(log_val)

    def describe(self) -> dict:
        return {"kind": "geometric", "lambda": self.lam, "scale": self.scale}


class _LevelStructured(GapSequence):
    """Shared term/tail plumbing for level-constant models."""

    has_levels = True

    def _max_level(self) -> Optional[int]:
        """Largest level with a defined length (None = unbounded)."""
        return None

    @property
    def max_index(self) -> Optional[int]:
        lim = self._max_level()
        return None if lim is None else (1 << (lim + 1)) - 1

    def term(self, j: int) -> LogLength:
        n = level_of(j)
        lim = self._max_level()
        if lim is not None and n > lim:
            raise RangeError(f"gap index {j} (level {n}) beyond explicit levels")
        return self.level_length(n)

    def tail(self, m: int) -> LogLength:
        if m < 0:
            raise RangeError(f"tail cutoff must be >= 0, got {m}")
        if m == 0:
            return self.level_suffix_mass(0)
        n = level_of(m + 1)
        lim = self._max_level()
        if lim is not None and n > lim:
            raise RangeError(f"tail({m}) beyond explicit levels of {self.kind} model")
        count = (1 << (n + 1)) - 1 - m
        rest = self.level_suffix_mass(n + 1)
        if count == 0:
            return rest
        return LogLength.sum((self.level_length(n).times(count), rest))


@dataclass(frozen=True)
class LevelConstantGaps(_LevelStructured):
    """Explicit per-level lengths g_0..g_{K-1}, each with multiplicity 2**k.

    ``tail_mass`` is the exact gap mass sitting beyond the explicit levels;
    when ratio bounds are declared, tails beyond the explicit range can be
    bracketed (never returned as a single value).
    """

    levels: tuple[LogLength, ...]
    tail_mass: LogLength = ZERO
    ratio_bounds: Optional[tuple[float, float]] = None
    _suffix: tuple[LogLength, ...] = field(init=False, repr=False, compare=False)

    kind = "level_constant"

    def __post_init__(self) -> None:
        if not self.levels:
            raise ConfigError("level_constant model needs at least one level")
        for g in self.levels:
            if g.is_zero:
                raise ConfigError("level lengths must be positive")
        k = len(self.levels)
        suffix = [self.tail_mass] * (k + 1)
        for n in range(k - 1, -1, -1):
            parts = [self.levels[m].times(1 << m) for m in range(n, k)]
            parts.append(self.tail_mass)
            suffix[n] = LogLength.sum(parts)
        object.__setattr__(self, "_suffix", tuple(suffix))

    def _max_level(self) -> Optional[int]:
        return len(self.levels) - 1

    def level_length(self, n: int) -> LogLength:
        if not 0 <= n < len(self.levels):
            raise RangeError(f"level {n} beyond explicit levels")
        return self.levels[n]

    def level_suffix_mass(self, n: int) -> LogLength:
        if n >= len(self._suffix):
            if self.tail_mass.is_zero:
                return ZERO
            raise RangeError(f"level suffix {n} beyond explicit levels")
        return self._suffix[n]

    def tail(self, m: int) -> LogLength:
        if m >= self.max_index and self.tail_mass.is_zero:
            return ZERO
        if m == self.max_index:
            return self.tail_mass
        return super().tail(m)

    def tail_bracket(self, m: int) -> tuple[LogLength, LogLength]:
        """Certified two-sided bound on tail(m), valid beyond the range."""
        if m <= self.max_index:
            t = self.tail(m)
            return (t, t)
        if self.ratio_bounds is None:
            raise ConfigError(
                "tail beyond explicit levels requires declared ratio bounds"
            )
        inf_r, sup_r = self.ratio_bounds
        k = len(self.levels)
        n = level_of(m + 1)
        upper = self.tail_mass * LogLength.from_value((2 * sup_r) ** (n - k))
        lower = self.tail_mass * LogLength.from_value((2 * inf_r) ** (n + 1 - k))
        return (lower, upper)

    def describe(self) -> dict:
        out: dict = {
            "kind": "level_constant",
            "levels_log2": [g.log2 for g in self.levels],
        }
        if not self.tail_mass.is_zero:
            out["tail_mass_log2"] = self.tail_mass.log2
        if self.ratio_bounds is not None:
            out["ratio_bounds"] = list(self.ratio_bounds)
        return out


@dataclass(frozen=True)
class RatioGaps(_LevelStructured):
    """Gap sequence of the central construction for a ratio sequence.

    Level n has the 2**n gaps of length r_1...r_n (1 - 2 r_{n+1}); the total
    is exactly 1, and 2**n * s_n telescopes to r_1...r_n.
    """

    ratios: RatioSequence

    kind = "from_ratios"

    def _max_level(self) -> Optional[int]:
        lim = self.ratios.max_level
        return None if lim is None else lim - 1

    def scale_log(self, n: int) -> float:
        return self.ratios.prefix_log(n)

    def level_length(self, n: int) -> LogLength:
        lim = self._max_level()
        if n < 0 or (lim is not None and n > lim):
            raise RangeError(f"level {n} needs ratio r_{n + 1} beyond range")
        r_next = self.ratios.ratio(n + 1)
        return LogLength(self.scale_log(n) + math.log1p(-2.0 * r_next))

    def level_suffix_mass(self, n: int) -> LogLength:
        # sum_{m >= n} 2**m g_m = 2**n s_n
        lim = self._max_level()
        if lim is not None and n > lim + 1:
            raise RangeError(f"level suffix {n} beyond ratio range")
        return LogLength(n * LN2 + self.scale_log(n))

    def describe(self) -> dict:
        return {"kind": "from_ratios", "ratios": self.ratios.describe()}


@dataclass(frozen=True)
class ExplicitGaps(GapSequence):
    """Explicit finite list of gap lengths; tail beyond the list is zero."""

    values: tuple[LogLength, ...]
    _suffix: tuple[LogLength, ...] = field(init=False, repr=False, compare=False)

    kind = "explicit"

    def __post_init__(self) -> None:
        if not self.values:
            raise ConfigError("explicit model needs at least one gap")
        suffix = [ZERO] * (len(self.values) + 1)
        for i in range(len(self.values) - 1, -1, -1):
            if self.values[i].is_zero:
                raise ConfigError("explicit gaps must be positive")
            suffix[i] = suffix[i + 1] + self.values[i]
        object.__setattr__(self, "_suffix", tuple(suffix))

    @property
    def max_index(self) -> Optional[int]:
        return len(self.values)

    def term(self, j: int) -> LogLength:
        if not 1 <= j <= len(self.values):
            raise RangeError(f"gap index {j} beyond explicit list")
        return self.values[j - 1]

    def tail(self, m: int) -> LogLength:
        if m < 0:
            raise RangeError(f"tail cutoff must be >= 0, got {m}")
        if m >= len(self.values):
            return ZERO
        return self._suffix[m]

    def describe(self) -> dict:
        return {"kind": "explicit", "values_log2": [g.log2 for g in self.values]}


@dataclass(frozen=True)
class RapidDecayGaps(_LevelStructured):
    """Level-constant sequence with doubly superexponential decay.

    Level lengths follow g_0 = 1, g_k = g_{k-1} * 2**(-k*(k+4)); the log2
    exponents are integers, so structural conditions on this sequence can be
    verified in exact arithmetic (see constructions).  Levels are addressable
    up to K; tails fold in the rule's own remainder, which falls below one
    ulp after a single extra level.
    """

    K: int
    _exps: tuple[int, ...] = field(init=False, repr=False, compare=False)

    kind = "example35"

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ConfigError(f"K must be >= 1, got {self.K}")
        exps = [0]
        for k in range(1, self.K + 4):
            exps.append(exps[-1] - k * (k + 4))
        object.__setattr__(self, "_exps", tuple(exps))

    def _max_level(self) -> Optional[int]:
        return self.K

    @property
    def exponents_log2(self) -> tuple[int, ...]:
        """Exact integer log2 of g_0..g_K."""
        return self._exps[: self.K + 1]

    def level_length(self, n: int) -> LogLength:
        if not 0 <= n <= self.K:
            raise RangeError(f"level {n} beyond K = {self.K}")
        return LogLength.from_log2(self._exps[n])

    def level_suffix_mass(self, n: int) -> LogLength:
        if not 0 <= n <= self.K + 1:
            raise RangeError(f"level suffix {n} beyond K = {self.K}")
        # extend two levels past K by the rule; the next term is smaller by
        # a factor 2**(-(K+4)*(K+8)+1), below any representable ulp
        parts = [
            LogLength.from_log2(m + self._exps[m])
            for m in range(n, min(self.K + 3, len(self._exps)))
        ]
        return LogLength.sum(parts)

    def describe(self) -> dict:
        return {"kind": "example35", "K": self.K}


@dataclass(frozen=True)
class RemainderGaps(GapSequence):
    """A level-structured source minus finitely many consumed gaps per level.

    Used for the remainder subsequences left over by the dimension-targeting
    constructions.  Not level-constant in its own index levels (counts are
    no longer powers of two), so only the generic index interface is exposed.
    """

    source: GapSequence
    consumed: tuple[tuple[int, int], ...]  # (source level, count) pairs

    kind = "remainder"

    def __post_init__(self) -> None:
        if not self.source.has_levels:
            raise ConfigError("remainder model needs a level-structured source")
        for lvl, cnt in self.consumed:
            if cnt < 0 or cnt > (1 << lvl):
                raise ConfigError(f"consumed count {cnt} invalid at level {lvl}")

    def _count(self, n: int) -> int:
        full = 1 << n
        for lvl, cnt in self.consumed:
            if lvl == n:
                full -= cnt
        return full

    def _cum_counts(self, upto_level: int) -> list[int]:
        cums = [0]
        for n in range(upto_level + 1):
            cums.append(cums[-1] + self._count(n))
        return cums

    def _locate(self, j: int) -> int:
        """Source level containing remainder index j."""
        n, cum = 0, 0
        while True:
            lim = self.source.max_index
            if lim is not None and (1 << n) > lim:
                raise RangeError(f"remainder index {j} beyond source levels")
            cum_next = cum + self._count(n)
            if j <= cum_next:
                return n
            cum, n = cum_next, n + 1
            if n > 4096:
                raise RangeError("remainder index lookup ran away")

    def term(self, j: int) -> LogLength:
        if j < 1:
            raise RangeError(f"gap index must be >= 1, got {j}")
        return self.source.level_length(self._locate(j))

    def tail(self, m: int) -> LogLength:
        if m < 0:
            raise RangeError(f"tail cutoff must be >= 0, got {m}")
        if m == 0:
            removed = [
                self.source.level_length(lvl).times(cnt)
                for lvl, cnt in self.consumed
                if cnt > 0
            ]
            return self.source.level_suffix_mass(0) - LogLength.sum(removed)
        n = self._locate(m + 1)
        cums = self._cum_counts(n)
        within = cums[n + 1] - m  # indices of level n still beyond m
        removed_beyond = [
            self.source.level_length(lvl).times(cnt)
            for lvl, cnt in self.consumed
            if lvl > n and cnt > 0
        ]
        rest = self.source.level_suffix_mass(n + 1)
        if removed_beyond:
            rest = rest - LogLength.sum(removed_beyond)
        if within == 0:
            return rest
        return LogLength.sum((self.source.level_length(n).times(within), rest))

    @property
    def max_index(self) -> Optional[int]:
        return self.source.max_index

    def describe(self) -> dict:
        return {
            "kind": "remainder",
            "source": self.source.describe(),
            "consumed": [list(pair) for pair in self.consumed],
        }


# ---------------------------------------------------------------------------
# scale sequence and conversions
# ---------------------------------------------------------------------------


def scale(model: GapSequence, n: int) -> LogLength:
    """s_n = 2**-n * tail(2**n - 1), the average step-n interval length."""
    if n < 0:
        raise RangeError(f"scale index must be >= 0, got {n}")
    lim = model.max_index
    if lim is not None and (1 << n) - 1 > lim:
        raise RangeError(
            f"s_{n} needs indices up to 2**{n}, beyond the model's range"
        )
    t = model.tail((1 << n) - 1)
    if t.is_zero:
        return ZERO
    return LogLength(t.log - n * LN2)


class ScaleSequence:
    """Cached view of s_n for a fixed model."""

    def __init__(self, model: GapSequence):
        self.model = model
        self._cache: dict[int, LogLength] = {}

    @property
    def max_n(self) -> Optional[int]:
        lim = self.model.max_index
        if lim is None:
            return None
        return (lim + 1).bit_length() - 1

    def s(self, n: int) -> LogLength:
        got = self._cache.get(n)
        if got is None:
            got = self._cache[n] = scale(self.model, n)
        return got

    def check_halving(self, upto: int) -> None:
        """Assert 2 s_{n+1} < s_n strictly on 0..upto."""
        for n in range(upto):
            nxt = self.s(n + 1)
            if nxt.is_zero or not nxt.times(2) < self.s(n):
                raise DomainError(f"strict halving fails at n = {n}")


def ratios_from_gaps(model: GapSequence) -> DerivedRatios:
    """Recover central-construction ratios from a decreasing gap model.

    Works on the internally normalized sequence (dimensions are scale
    invariant); the rescale factor is recorded on the result.  Any computed
    ratio outside (0, 1/2) raises :class:`DegeneracyError`.
    """
    return DerivedRatios(ScaleSequence(model))


def gaps_from_ratios(ratios: RatioSequence, depth: int) -> LevelConstantGaps:
    """Materialize the first `depth` gap levels of a ratio sequence.

    The mass beyond the explicit levels (exactly 2**depth * s_depth) is
    attached, along with declared ratio bounds for bracketing deeper tails.
    """
    if depth < 1:
        raise ConfigError(f"depth must be >= 1, got {depth}")
    gaps = RatioGaps(ratios)
    levels = tuple(gaps.level_length(n) for n in range(depth))
    tail_mass = gaps.level_suffix_mass(depth)
    bounds = None
    if ratios.inf_r is not None and ratios.sup_r is not None:
        bounds = (ratios.inf_r, ratios.sup_r)
    return LevelConstantGaps(levels=levels, tail_mass=tail_mass, ratio_bounds=bounds)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DoublingReport:
    tau_star: float
    verdict: str  # "doubling-so-far" | "diverging"
    horizon: int


def doubling_constant(model: GapSequence, horizon: int) -> DoublingReport:
    """tau* = max_{n <= horizon} a_n / a_{2n}, with a finite-horizon verdict.

    The verdict compares tau* against the half-horizon value: a ratio still
    growing there is flagged "diverging".  Existence of a uniform constant is
    not decidable from a prefix; callers see the trend.
    """
    if horizon < 2:
        raise DomainError(f"doubling horizon must be >= 2, got {horizon}")
    lim = model.max_index
    if lim is not None:
        horizon = min(horizon, lim // 2)
        if horizon < 2:
            raise DomainError("model too short for a doubling horizon")

    def tau(upto: int) -> float:
        worst = 0.0
        for n in range(1, upto + 1):
            worst = max(worst, model.term(n).ratio(model.term(2 * n)))
        return worst

    half = tau(horizon // 2)
    full = tau(horizon)
    verdict = "diverging" if full > 1.25 * half else "doubling-so-far"
    return DoublingReport(tau_star=full, verdict=verdict, horizon=horizon)


def lacunarity_inf(model: GapSequence, horizon: int) -> float:
    """eps* = min_{j <= horizon} a_j / tail(j), over indices with mass left."""
    if horizon < 1:
        raise DomainError(f"lacunarity horizon must be >= 1, got {horizon}")
    lim = model.max_index
    if lim is not None:
        horizon = min(horizon, lim)
    best = math.inf
    for j in range(1, horizon + 1):
        t = model.tail(j)
        if t.is_zero:
            break
        best = min(best, model.term(j).ratio(t))
    return best


def equivalence_constant(a: GapSequence, b: GapSequence, horizon: int) -> float:
    """c* = max_{n <= horizon} max(a_n/b_n, b_n/a_n)."""
    if horizon < 1:
        raise DomainError(f"equivalence horizon must be >= 1, got {horizon}")
    for m in (a.max_index, b.max_index):
        if m is not None and horizon > m:
            raise RangeError(f"horizon {horizon} beyond model range {m}")
    worst = 1.0
    for n in range(1, horizon + 1):
        d = abs(a.term(n).log - b.term(n).log)
        worst = max(worst, math.exp(d))
    return worst


# classical middle-thirds gap sequence, used all over the tests
def classical_cantor() -> RatioGaps:
    return RatioGaps(ConstantRatio(1.0 / 3.0))


def constant_ratio_gaps(r: float) -> RatioGaps:
    return RatioGaps(ConstantRatio(r))
