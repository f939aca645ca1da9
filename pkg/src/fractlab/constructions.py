"""Dimension-targeting constructions.

Three builders:

* ``generate_rapid_decay`` produces the doubly superexponential level
  sequence whose complementary sets only attain dimensions 0 or 1, and
  verifies its two structural conditions in exact integer arithmetic.

* ``build_assouad_target`` assembles, from a doubling central-construction
  gap sequence, a set E = (chain of finite blocks A_k) + (corresponding
  image of the remaining gaps) whose blocks witness a prescribed Assouad
  dimension s.  Stage quantities d_k are chosen greedily as the largest
  admissible gap level (any sufficiently small choice is valid; the greedy
  keeps magnitudes representable longest).

* ``build_lower_target`` assembles a subsequence construction C_b whose
  scale sequence tracks d**n with d = 2**(-1/alpha), targeting a prescribed
  lower Assouad dimension alpha, next to the corresponding image of the
  remaining gaps.

Builders only verify the finite-stage structural conditions and witness
exponents; they do not certify the limiting set's dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .arrange import (
    Approximation,
    Arrangement,
    PlacedGap,
    Residual,
    SubtreeBlock,
)
from .covering import CoverQuery, local_cover
from .errors import ConfigError, ConstructionError, DomainError, RangeError
from .loglength import LN2, ZERO, LogLength
from .models import (
    GapSequence,
    RapidDecayGaps,
    RatioGaps,
    RatioSequence,
    RemainderGaps,
    ScaleSequence,
    _LevelStructured,
    equivalence_constant,
)
from .dimension import assouad_formula, lower_formula

# ---------------------------------------------------------------------------
# rapid-decay level sequence (JSON kind "example35")
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RapidDecayBuild:
    model: RapidDecayGaps
    K: int
    condition1_margins_log2: tuple[float, ...]  # log2(g_k/2) - log2(sum beyond)
    condition2_margins: tuple[int, ...]  # (e_{k-1} - e_k) - k (k+4), exact

    def to_manifest(self) -> dict:
        return {
            "kind": "example35",
            "K": self.K,
            "exponents_log2": list(self.model.exponents_log2),
            "condition1_margins_log2": list(self.condition1_margins_log2),
            "condition2_margins": list(self.condition2_margins),
        }


def generate_rapid_decay(K: int) -> RapidDecayBuild:
    """Levels g_0 = 1, g_k = g_{k-1} * 2**(-k(k+4)), verified exactly.

    Condition checks run in exact rational arithmetic on the integer log2
    exponents: (1) the weighted tail beyond each level stays below half the
    level length (the infinite remainder beyond K is bounded by twice the
    first omitted term, since consecutive terms shrink by far more than 2);
    (2) the decay ratio condition holds with equality by construction.
    """
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    model = RapidDecayGaps(K)
    exps = model.exponents_log2

    # condition (2): e_{k-1} - e_k >= k (k + 4), exact integers
    margins2 = []
    for k in range(1, K + 1):
        margin = (exps[k - 1] - exps[k]) - k * (k + 4)
        if margin < 0:
            raise ConstructionError(f"decay condition (2) violated at k={k}")
        margins2.append(margin)

    # condition (1): sum_{j >= k+1} 2**j g_j < g_k / 2, exact rationals;
    # the rule's tail beyond K is bounded by 2 * 2**(K+1) g_{K+1}
    e_next = exps[K] - (K + 1) * (K + 5)
    tail_bound = 2 * _pow2(K + 1 + e_next)
    margins1 = []
    suffix = tail_bound
    for k in range(K - 1, -1, -1):
        suffix += _pow2(k + 1 + exps[k + 1])
        half = _pow2(exps[k] - 1)
        if not suffix < half:
            raise ConstructionError(f"tail condition (1) violated at k={k}")
        margins1.append(_frac_log2(half / suffix))
    margins1.reverse()

    return RapidDecayBuild(
        model=model,
        K=K,
        condition1_margins_log2=tuple(margins1),
        condition2_margins=tuple(margins2),
    )


def _pow2(e: int) -> Fraction:
    return Fraction(2) ** e


def _frac_log2(fr: Fraction) -> float:
    """log2 of a positive Fraction whose value may far exceed float range."""
    p, q = fr.numerator, fr.denominator
    shift = p.bit_length() - q.bit_length()
    if shift > 0:
        q <<= shift
    else:
        p <<= -shift
    return shift + math.log2(p / q)


# ---------------------------------------------------------------------------
# shared helpers for the two target builders
# ---------------------------------------------------------------------------


def _step_gap(model: GapSequence, t: int) -> LogLength:
    """Gap length at construction step t >= 1 (2**(t-1) many of them)."""
    return model.level_length(t - 1)


def measure_level_doubling(model: GapSequence, horizon: int) -> float:
    """alpha >= 1 with g_t/alpha <= g_{t+1} <= alpha g_t on steps <= horizon."""
    worst = 1.0
    for t in range(1, horizon + 1):
        d = abs(_step_gap(model, t).log - _step_gap(model, t + 1).log)
        worst = max(worst, math.exp(d))
    return worst


def in_order_levels(k: int) -> list[int]:
    """Vertex levels of the depth-k full binary tree in in-order sequence."""
    if k == 0:
        return [0]
    below = in_order_levels(k - 1)
    shifted = [lvl + 1 for lvl in below]
    return shifted + [0] + shifted


# ---------------------------------------------------------------------------
# Assouad-dimension target build
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockStage:
    k: int
    d: LogLength
    d_step: int  # source step whose gap length is d_k
    n_k: int
    i_offsets: tuple[int, ...]  # i_0..i_k
    gap_steps: tuple[int, ...]  # n_k + i_j per tree level j
    rho: LogLength
    diam: LogLength
    skip_distance: int  # chosen step minus the first admissible step


@dataclass(frozen=True)
class WitnessRecord:
    k: int
    endpoint_id: int
    R_log2: float
    r_log2: float
    count: int
    exponent: float
    delta_bound: float  # formula slack bound from (alpha, gamma)
    observed_slack: float

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "endpoint_id": self.endpoint_id,
            "R_log2": self.R_log2,
            "r_log2": self.r_log2,
            "N": self.count,
            "exponent": self.exponent,
            "delta_bound": self.delta_bound,
            "observed_slack": self.observed_slack,
        }


@dataclass(frozen=True)
class AssouadTargetBuild:
    target: float
    gamma: float
    alpha: float
    base_dimension: float  # formula value of the source on the stated window
    stages: tuple[BlockStage, ...]
    consumed: tuple[tuple[int, int], ...]  # (source spec level, count)
    separator_index: int
    separator_step: int
    remainder: GapSequence
    remainder_equivalence: float
    approximation: Approximation
    witnesses: tuple[WitnessRecord, ...]
    checks: tuple[tuple[str, bool], ...]

    def to_manifest(self) -> dict:
        return {
            "kind": "assouad-target",
            "target": self.target,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "base_dimension": self.base_dimension,
            "stages": [
                {
                    "k": st.k,
                    "d_log2": st.d.log2,
                    "d_step": st.d_step,
                    "n_k": st.n_k,
                    "i_offsets": list(st.i_offsets),
                    "gap_steps": list(st.gap_steps),
                    "rho_log2": st.rho.log2,
                    "diam_log2": st.diam.log2,
                    "skip_distance": st.skip_distance,
                }
                for st in self.stages
            ],
            "consumed_levels": [list(p) for p in self.consumed],
            "separator_step": self.separator_step,
            "remainder_equivalence": self.remainder_equivalence,
            "witnesses": [w.to_json() for w in self.witnesses],
            "checks": [list(c) for c in self.checks],
        }


def build_assouad_target(
    ratios: RatioSequence,
    s: float,
    stages: int,
    alpha_horizon: int = 64,
    formula_window: tuple[int, int, int] = (12, 8, 16),
) -> AssouadTargetBuild:
    """Assemble the block construction hitting Assouad dimension s.

    Preconditions: the source's formula dimension (on the stated window) is
    at most s < 1, and the gap sequence is doubling with measured constant
    alpha.  Each stage k >= 2 picks d_k as the largest gap level i >= k + 4
    satisfying the growth condition (7) and the packing condition (8).
    """
    if stages < 1:
        raise DomainError(f"stages must be >= 1, got {stages}")
    source = RatioGaps(ratios)
    scales = ScaleSequence(source)
    k_max, n_min, n_max = formula_window
    base = assouad_formula(scales, k_max, n_min, n_max).raw_value
    if s >= 1.0:
        raise DomainError(
            "target s = 1 is realized by the decreasing arrangement; "
            "this builder handles s < 1 only"
        )
    if s < base:
        raise DomainError(
            f"target s = {s} below the source dimension {base:.6f} on the "
            f"stated window k<={k_max}, {n_min}<=n<={n_max}"
        )

    alpha = measure_level_doubling(source, alpha_horizon)
    half_alpha = measure_level_doubling(source, alpha_horizon // 2)
    if alpha > 1.25 * half_alpha:
        raise DomainError(
            "gap sequence does not look doubling: level ratio bound still "
            f"growing ({half_alpha:.3g} -> {alpha:.3g})"
        )

    gamma = 2.0 ** (-1.0 / s)
    if not (0.0 < gamma < 0.5) or abs(gamma**s - 0.5) > 1e-12:
        raise ConstructionError(f"gamma = 2**(-1/s) check failed for s={s}")
    log_gamma = -LN2 / s
    packing_factor = LogLength.from_value(alpha * alpha / (1.0 - 2.0 * gamma))
    diam_factor = LogLength.from_value(alpha / (1.0 - 2.0 * gamma))

    checks: list[tuple[str, bool]] = []

    def check(name: str, ok: bool) -> None:
        checks.append((name, bool(ok)))
        if not ok:
            raise ConstructionError(f"{name} violated")

    # -- stage selection -----------------------------------------------------
    stage_rows: list[BlockStage] = []
    d_list: list[LogLength] = []
    consumed: dict[int, int] = {}  # source spec level -> count

    def consume(step: int, count: int) -> None:
        lvl = step - 1
        consumed[lvl] = consumed.get(lvl, 0) + count
        if consumed[lvl] > (1 << lvl) // 2:
            raise ConstructionError(
                f"gap budget exceeded: over half of level {lvl} consumed"
            )

    used_steps: set[int] = set()
    prev_step = None
    for k in range(1, stages + 1):
        if k == 1:
            step = 5
            skip = 0
        else:
            first = max(k + 4, prev_step + 1)
            step = first
            while True:
                cand = _step_gap(source, step)
                ok7 = k * LN2 <= s * (d_list[-1].log - cand.log)
                ok8 = True
                for j in range(1, k):
                    tail_sum = LogLength.sum(d_list[j:] + [cand])
                    bound = d_list[j - 1] * LogLength(j * log_gamma)
                    if not packing_factor * tail_sum < bound:
                        ok8 = False
                        break
                if ok7 and ok8:
                    break
                step += 1
                if step > first + 4096:
                    raise ConstructionError(
                        f"no admissible gap level for stage {k} within range"
                    )
            skip = step - first
        d_k = _step_gap(source, step)
        prev_step = step

        # n_k + 1 = max{i : g_i >= d_k}
        n_k = step - 1
        while _step_gap(source, n_k + 2) >= d_k:
            n_k += 1
        check(f"stage {k}: n_k > k+2", n_k > k + 2)
        if stage_rows:
            check(f"stage {k}: n_k increasing", n_k > stage_rows[-1].n_k)
        check(
            f"stage {k}: g_(n_k+2) < d_k <= g_(n_k+1)",
            _step_gap(source, n_k + 2) < d_k <= _step_gap(source, n_k + 1),
        )

        # i_j selection: n_k + i_j = max{l : g_l >= d_k gamma**j}
        i_offsets = []
        gap_steps = []
        l = n_k
        for j in range(k + 1):
            target_len = LogLength(d_k.log + j * log_gamma)
            while _step_gap(source, l + 1) >= target_len:
                l += 1
            i_j = l - n_k
            i_offsets.append(i_j)
            gap_steps.append(n_k + i_j)
            g_here = _step_gap(source, n_k + i_j)
            check(
                f"stage {k} level {j}: gap sandwich",
                _step_gap(source, n_k + i_j + 1) < target_len <= g_here
                and g_here.log <= target_len.log + math.log(alpha) + 1e-12,
            )
        check(f"stage {k}: i_0 = 1", i_offsets[0] == 1)
        check(
            f"stage {k}: i_j nondecreasing",
            all(a <= b for a, b in zip(i_offsets, i_offsets[1:])),
        )

        for j, step_j in enumerate(gap_steps):
            consume(step_j, 1 << j)
        stage_levels = set(gap_steps)
        check(
            f"stage {k}: gap levels disjoint from earlier stages",
            not (stage_levels & used_steps),
        )
        used_steps |= stage_levels

        rho = LogLength(d_k.log + k * log_gamma)
        diam = LogLength.sum(
            _step_gap(source, st).times(1 << j) for j, st in enumerate(gap_steps)
        )
        check(f"stage {k}: d_k <= diam A_k", d_k <= diam)
        check(f"stage {k}: diam A_k < alpha d_k/(1-2 gamma)", diam < diam_factor * d_k)

        d_list.append(d_k)
        stage_rows.append(
            BlockStage(
                k=k,
                d=d_k,
                d_step=step,
                n_k=n_k,
                i_offsets=tuple(i_offsets),
                gap_steps=tuple(gap_steps),
                rho=rho,
                diam=diam,
                skip_distance=skip,
            )
        )

    # growth condition (7) across stages, exact in log space
    for a, b in zip(stage_rows, stage_rows[1:]):
        check(
            f"condition (7) at k={b.k}",
            b.k * LN2 <= s * (a.d.log - b.d.log),
        )
    # packing condition (8) on the final stage set
    K = stages
    for j in range(1, K):
        tail_sum = LogLength.sum(d_list[j:])
        check(
            f"condition (8) at j={j}",
            packing_factor * tail_sum < d_list[j - 1] * LogLength(j * log_gamma),
        )
    # scale interleaving: R_{k+1} < rho_k < R_k, and the full right-tail of
    # diameters stays below rho_k
    for idx in range(K - 1):
        st, nxt = stage_rows[idx], stage_rows[idx + 1]
        check(f"interleaving rho_{st.k} < R_{st.k}", st.rho < st.diam)
        check(f"interleaving R_{nxt.k} < rho_{st.k}", nxt.diam < st.rho)
        right_tail = LogLength.sum(r.diam for r in stage_rows[idx + 1 :])
        check(f"interleaving sum R below rho_{st.k}", right_tail < st.rho)

    # -- separator and remainder ---------------------------------------------
    # the separating gap between the block chain and the corresponding image
    # is the largest gap the blocks left untouched (the half-level budget
    # constrains only the block selection); recorded, not budget-checked
    separator_step = 1
    while consumed.get(separator_step - 1, 0) >= (1 << (separator_step - 1)):
        separator_step += 1
    consumed[separator_step - 1] = consumed.get(separator_step - 1, 0) + 1
    separator_len = _step_gap(source, separator_step)

    consumed_tuple = tuple(sorted(consumed.items()))
    remainder = RemainderGaps(source=source, consumed=consumed_tuple)
    rem_equiv = equivalence_constant(remainder, source, 1 << 10)

    # -- assembly -------------------------------------------------------------
    items: list = []
    cursor = ZERO
    next_in_level: dict[int, int] = {}
    block_start_boundaries: dict[int, int] = {}

    def next_index(step: int) -> int:
        lvl = step - 1
        base_idx = 1 << lvl
        got = next_in_level.get(lvl, base_idx)
        next_in_level[lvl] = got + 1
        return got

    for st in reversed(stage_rows):  # A_K leftmost, chained down to A_1
        block_start_boundaries[st.k] = len(items)
        for j in in_order_levels(st.k):
            step_j = st.gap_steps[j]
            ln = _step_gap(source, step_j)
            items.append(PlacedGap(next_index(step_j), ln, cursor))
            cursor = cursor + ln
    items.append(PlacedGap(next_index(separator_step), separator_len, cursor))
    cursor = cursor + separator_len
    rem_block = SubtreeBlock(remainder, 0, 0)
    rem_mass = rem_block.mass()
    items.append(Residual(cursor, rem_mass, rem_block))

    approx = Approximation(
        items,
        source.total,
        {"construction": "assouad-target", "target": s, "stages": stages},
        source,
    )
    approx.mass_check(1e-9)

    # -- witness exponents -----------------------------------------------------
    boundary_to_eid = {b: e for e, (_, b) in enumerate(approx.endpoints())}
    witnesses = []
    delta_base = math.log(alpha / (1.0 - 2.0 * gamma)) * s
    for st in stage_rows:
        eid = boundary_to_eid[block_start_boundaries[st.k]]
        bounds = local_cover(approx, CoverQuery(eid, st.diam, st.rho))
        expo = math.log(bounds.lower) / (st.diam.log - st.rho.log)
        delta_k = delta_base / (st.k * (-log_gamma))
        check(f"stage {st.k}: witness count >= 2**k", bounds.lower >= 1 << st.k)
        check(
            f"stage {st.k}: witness exponent in [s - delta, 1]",
            s - delta_k - 1e-12 <= expo <= 1.0 + 1e-12,
        )
        witnesses.append(
            WitnessRecord(
                k=st.k,
                endpoint_id=eid,
                R_log2=st.diam.log2,
                r_log2=st.rho.log2,
                count=bounds.lower,
                exponent=expo,
                delta_bound=delta_k,
                observed_slack=s - expo,
            )
        )

    return AssouadTargetBuild(
        target=s,
        gamma=gamma,
        alpha=alpha,
        base_dimension=base,
        stages=tuple(stage_rows),
        consumed=consumed_tuple,
        separator_index=items[-2].index,
        separator_step=separator_step,
        remainder=remainder,
        remainder_equivalence=rem_equiv,
        approximation=approx,
        witnesses=tuple(witnesses),
        checks=tuple(checks),
    )


# ---------------------------------------------------------------------------
# lower-dimension target build
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubseqCantorGaps(_LevelStructured):
    """Level-constant model whose level-n gaps copy the source's step-k_{n+N}
    gaps, where k_j is pinned by s_{k_j} <= d**j < s_{k_j - 1}."""

    ratios: RatioSequence
    d: float
    start: int  # N
    _kcache: dict = field(default_factory=dict, repr=False, compare=False)

    kind = "subsequence"

    def k_of(self, j: int) -> int:
        got = self._kcache.get(j)
        if got is not None:
            return got
        source = RatioGaps(self.ratios)
        scales = ScaleSequence(source)
        target = j * math.log(self.d)
        k = self._kcache.get(j - 1, j)  # k_j >= k_{j-1} and > j
        while scales.s(k).log > target:
            k += 1
            if k > 64 * (j + 2):
                raise ConstructionError(f"k_{j} search ran away")
        while k >= 1 and scales.s(k - 1).log <= target:
            k -= 1
        self._kcache[j] = k
        return k

    def level_length(self, n: int) -> LogLength:
        if n < 0:
            raise RangeError(f"level must be >= 0, got {n}")
        source = RatioGaps(self.ratios)
        return _step_gap(source, self.k_of(n + self.start))

    def level_suffix_mass(self, n: int) -> LogLength:
        # certified truncation: with sup r < 1/2 and inf r > 0, the term
        # 2**m g_m is bounded by (2d)**m * d**start / inf_r, a geometric
        # envelope with ratio 2d < 1
        inf_r = self.ratios.inf_r
        if inf_r is None or self.ratios.sup_r is None:
            raise ConfigError("subsequence model needs declared ratio bounds")
        parts = []
        running = ZERO
        two_d = 2.0 * self.d
        m = n
        while True:
            term = self.level_length(m).times(1 << m)
            parts.append(term)
            running = running + term
            bound_log = (
                (m + 1) * math.log(two_d)
                + self.start * math.log(self.d)
                - math.log(inf_r)
                - math.log1p(-two_d)
            )
            if bound_log - running.log < -60 * LN2:
                break
            m += 1
            if m > n + 4096:
                raise ConstructionError("suffix mass summation did not converge")
        return LogLength.sum(parts)

    def describe(self) -> dict:
        return {
            "kind": "subsequence",
            "ratios": self.ratios.describe(),
            "d": self.d,
            "start": self.start,
        }


@dataclass(frozen=True)
class SubseqRemainderGaps(GapSequence):
    """Source gaps minus everything consumed by a :class:`SubseqCantorGaps`
    (plus one separator gap at a recorded step)."""

    subseq: SubseqCantorGaps
    separator_step: int

    kind = "subseq-remainder"

    @property
    def source(self) -> RatioGaps:
        return RatioGaps(self.subseq.ratios)

    def _consumed(self, lvl: int) -> int:
        # count of source level lvl gaps used by the subsequence: levels m
        # with k_{m+start} = lvl + 1 contribute 2**m each; k_j > j bounds the
        # scan by lvl
        count = 0
        for m in range(0, lvl + 1):
            kj = self.subseq.k_of(m + self.subseq.start)
            if kj == lvl + 1:
                count += 1 << m
            if kj > lvl + 1:
                break
        if self.separator_step - 1 == lvl:
            count += 1
        return count

    def level_count(self, lvl: int) -> int:
        full = 1 << lvl
        used = self._consumed(lvl)
        if used > full:
            raise ConstructionError(f"over-consumed source level {lvl}")
        return full - used

    def term(self, j: int) -> LogLength:
        if j < 1:
            raise RangeError(f"gap index must be >= 1, got {j}")
        lvl, cum = 0, 0
        while True:
            cum_next = cum + self.level_count(lvl)
            if j <= cum_next:
                return self.source.level_length(lvl)
            cum, lvl = cum_next, lvl + 1
            if lvl > 4096:
                raise RangeError("remainder index lookup ran away")

    def _suffix(self, lvl: int) -> LogLength:
        # mass of remainder levels >= lvl: source suffix minus the
        # subsequence suffix from its first level mapping to a step past lvl
        # (k_j is nondecreasing, so the consumed steps >= lvl+1 are exactly
        # the subsequence levels >= m0)
        src = self.source.level_suffix_mass(lvl)
        m0 = 0
        while self.subseq.k_of(m0 + self.subseq.start) < lvl + 1:
            m0 += 1
        out = src - self.subseq.level_suffix_mass(m0)
        if self.separator_step - 1 >= lvl:
            out = out - self.source.level_length(self.separator_step - 1)
        return out

    def tail(self, m: int) -> LogLength:
        if m < 0:
            raise RangeError(f"tail cutoff must be >= 0, got {m}")
        if m == 0:
            return self._suffix(0)
        lvl, cum = 0, 0
        while True:
            cum_next = cum + self.level_count(lvl)
            if m + 1 <= cum_next:
                within = cum_next - m
                rest = self._suffix(lvl + 1)
                if within == 0:
                    return rest
                return LogLength.sum(
                    (self.source.level_length(lvl).times(within), rest)
                )
            cum, lvl = cum_next, lvl + 1
            if lvl > 4096:
                raise RangeError("remainder tail lookup ran away")

    def describe(self) -> dict:
        return {
            "kind": "subseq-remainder",
            "subsequence": self.subseq.describe(),
            "separator_step": self.separator_step,
        }


@dataclass(frozen=True)
class LowerTargetBuild:
    alpha: float
    d: Optional[float]
    start: Optional[int]
    k_table: tuple[tuple[int, int], ...]  # (j, k_j) over the built range
    subsequence: Optional[SubseqCantorGaps]
    remainder: Optional[SubseqRemainderGaps]
    remainder_equivalence: Optional[float]
    scale_ratio_bound: Optional[float]  # c with s_n(b)/d**n in [1/c, c]
    separator_step: Optional[int]
    approximation: Approximation
    checks: tuple[tuple[str, bool], ...]

    def to_manifest(self) -> dict:
        return {
            "kind": "lower-target",
            "alpha": self.alpha,
            "d": self.d,
            "start": self.start,
            "k_table": [list(p) for p in self.k_table],
            "remainder_equivalence": self.remainder_equivalence,
            "scale_ratio_bound": self.scale_ratio_bound,
            "separator_step": self.separator_step,
            "checks": [list(c) for c in self.checks],
        }


def build_lower_target(
    ratios: RatioSequence,
    alpha: float,
    depth: int,
    formula_window: tuple[int, int, int] = (10, 6, 14),
) -> LowerTargetBuild:
    """Assemble the subsequence construction hitting lower dimension alpha.

    alpha = 0 degenerates to the decreasing arrangement (any countable
    rearrangement works).  Otherwise requires declared ratio bounds with
    0 < inf r <= sup r < 1/2 and alpha below the source's formula value on
    the stated window.
    """
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    source = RatioGaps(ratios)
    if alpha == 0.0:
        arr = Arrangement(source, "decreasing")
        approx = arr.approximation(gap_floor=source.level_length(depth))
        return LowerTargetBuild(
            alpha=0.0,
            d=None,
            start=None,
            k_table=(),
            subsequence=None,
            remainder=None,
            remainder_equivalence=None,
            scale_ratio_bound=None,
            separator_step=None,
            approximation=approx,
            checks=(("alpha=0 decreasing arrangement", True),),
        )
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if ratios.inf_r is None or ratios.sup_r is None:
        raise ConfigError("lower-target build needs declared ratio bounds")
    if not (0.0 < ratios.inf_r and ratios.sup_r < 0.5):
        raise DomainError("need 0 < inf r <= sup r < 1/2")
    scales = ScaleSequence(source)
    k_max, n_min, n_max = formula_window
    base = lower_formula(scales, k_max, n_min, n_max).raw_value
    if alpha >= base:
        raise DomainError(
            f"alpha = {alpha} not below the source lower dimension "
            f"{base:.6f} on the stated window"
        )
    d = 2.0 ** (-1.0 / alpha)
    checks: list[tuple[str, bool]] = []

    def check(name: str, ok: bool) -> None:
        checks.append((name, bool(ok)))
        if not ok:
            raise ConstructionError(f"{name} violated")

    check("d < 1/2", d < 0.5)

    # start index: smallest N with k_j > j across the built range
    subseq = None
    start = None
    for cand in range(1, 10 * depth + 10):
        probe = SubseqCantorGaps(ratios=ratios, d=d, start=cand)
        if all(
            probe.k_of(j) > j for j in range(cand, cand + depth)
        ):
            start = cand
            subseq = probe
            break
    if subseq is None:
        raise ConstructionError(
            "no start index makes k_j > j over the built range"
        )

    k_table = tuple((j, subseq.k_of(j)) for j in range(start, start + depth))
    for j, kj in k_table:
        check(
            f"sandwich at j={j}",
            scales.s(kj).log <= j * math.log(d) < scales.s(kj - 1).log,
        )
        check(f"k_{j} > {j}", kj > j)
    # half-budget: level n of the subsequence takes 2**n of the 2**(k_j - 1)
    # source step-k_j gaps
    per_step: dict[int, int] = {}
    for n, (j, kj) in enumerate(k_table):
        per_step[kj] = per_step.get(kj, 0) + (1 << n)
    for kj, used in per_step.items():
        check(
            f"half budget at step {kj}",
            used <= (1 << (kj - 1)) // 2,
        )

    # scale tracking: s_n(b) / d**n bounded both ways on the built range
    b_scales = ScaleSequence(subseq)
    ratios_list = [
        math.exp(b_scales.s(n).log - n * math.log(d)) for n in range(depth)
    ]
    c_bound = max(max(ratios_list), 1.0 / min(ratios_list))
    check("scale ratio bounded", math.isfinite(c_bound))

    separator_step = 1  # step 1 is never consumed since k_j >= 2
    check("separator untouched", all(kj != separator_step for _, kj in k_table))
    remainder = SubseqRemainderGaps(subseq=subseq, separator_step=separator_step)
    rem_equiv = equivalence_constant(remainder, source, 1 << 10)

    # assembly: [C_b block][separator gap][corresponding-image block]
    items: list = []
    cursor = ZERO
    b_block = SubtreeBlock(subseq, 0, 0)
    b_mass = b_block.mass()
    items.append(Residual(cursor, b_mass, b_block))
    cursor = cursor + b_mass
    sep_len = _step_gap(source, separator_step)
    items.append(PlacedGap(1, sep_len, cursor))
    cursor = cursor + sep_len
    rem_block = SubtreeBlock(remainder, 0, 0)
    rem_mass = rem_block.mass()
    items.append(Residual(cursor, rem_mass, rem_block))
    approx = Approximation(
        items,
        source.total,
        {"construction": "lower-target", "alpha": alpha, "depth": depth},
        source,
    )
    approx.mass_check(1e-9)

    return LowerTargetBuild(
        alpha=alpha,
        d=d,
        start=start,
        k_table=k_table,
        subsequence=subseq,
        remainder=remainder,
        remainder_equivalence=rem_equiv,
        scale_ratio_bound=c_bound,
        separator_step=separator_step,
        approximation=approx,
        checks=tuple(checks),
    )
