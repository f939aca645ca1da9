import math
import random

import pytest

from fractlab.arrange import Arrangement, build_cantor
from fractlab.dimension import (
    DimensionReport,
    assouad_empirical,
    assouad_formula,
    block_witness_plan,
    classify_decreasing,
    grid_plan,
    lower_empirical,
    lower_formula,
    lower_zero_test,
    reevaluate_witness,
    resolve_center,
    upper_box_dim,
    ScaleSample,
    SamplingPlan,
)
from fractlab.errors import DomainError, RangeError
from fractlab.loglength import LogLength
from fractlab.models import (
    ConstantRatio,
    ExplicitGaps,
    GeometricGaps,
    ScaleSequence,
    classical_cantor,
    constant_ratio_gaps,
)

LOG23 = math.log(2) / math.log(3)


# -- formulas ----------------------------------------------------------------


def test_assouad_formula_classical():
    rep = assouad_formula(ScaleSequence(classical_cantor()), 40, 10, 40)
    assert rep.value == pytest.approx(LOG23, abs=1e-9)
    assert rep.bounds_status == "finite-window"


def test_lower_formula_classical():
    rep = lower_formula(ScaleSequence(classical_cantor()), 40, 10, 40)
    assert rep.value == pytest.approx(LOG23, abs=1e-9)


def test_formula_constant_ratios():
    for r in (0.25, 1 / 3, 0.4):
        sc = ScaleSequence(constant_ratio_gaps(r))
        want = math.log(2) / abs(math.log(r))
        assert assouad_formula(sc, 20, 5, 20).value == pytest.approx(want, abs=1e-9)
        assert lower_formula(sc, 20, 5, 20).value == pytest.approx(want, abs=1e-9)


def test_formula_geometric_grid():
    sc = ScaleSequence(GeometricGaps(0.5))
    rep = assouad_formula(sc, 10, 2, 20)
    # closed form: max at k = 0, n = 2 of n/(n + 2**k (2**n - 1))
    assert rep.value == pytest.approx(2 / 5, abs=1e-12)
    assert rep.witness == {"k": 0, "n": 2}
    low = lower_formula(sc, 10, 2, 20)
    assert low.value < 1e-6


def test_formula_dominates_lower_and_box():
    for model in (classical_cantor(), GeometricGaps(0.5), constant_ratio_gaps(0.4)):
        sc = ScaleSequence(model)
        hi = assouad_formula(sc, 12, 2, 12)
        lo = lower_formula(sc, 12, 2, 12)
        assert hi.raw_value >= lo.raw_value
        # the k = 0 column of the same grid is dominated by the max over k
        for n in range(2, 13):
            v0 = n * math.log(2) / (sc.s(0).log - sc.s(n).log)
            assert hi.raw_value >= v0 - 1e-15


def test_upper_box_examples():
    sc = ScaleSequence(classical_cantor())
    rep = upper_box_dim(sc, 20)
    assert rep.value == pytest.approx(LOG23, abs=1e-9)
    geo = upper_box_dim(ScaleSequence(GeometricGaps(0.5)), 20)
    # n log2 / |log s_n| = n / (n + 2**n - 1), maximal at n = 1
    assert geo.raw_value == pytest.approx(0.5, abs=1e-12)
    assert geo.witness == {"n": 1}
    const = upper_box_dim(ScaleSequence(constant_ratio_gaps(0.25)), 12)
    assert const.value == pytest.approx(0.5, abs=1e-9)


def test_formula_convergence_table():
    sc = ScaleSequence(GeometricGaps(0.5))
    rep = assouad_formula(sc, 4, 2, 10)
    assert rep.convergence[0] == (2, rep.raw_value)
    values = [v for _, v in rep.convergence]
    assert values == sorted(values, reverse=True)  # suffix maxima shrink


def test_formula_window_validation():
    sc = ScaleSequence(classical_cantor())
    with pytest.raises(DomainError):
        assouad_formula(sc, 10, 1, 5)
    with pytest.raises(DomainError):
        lower_formula(sc, -1, 2, 5)
    fin = ScaleSequence(ExplicitGaps(tuple(LogLength.from_value(0.5**j) for j in range(1, 9))))
    with pytest.raises(RangeError):
        assouad_formula(fin, 0, 2, 12)


def test_lower_zero_test_values():
    assert lower_zero_test(ScaleSequence(classical_cantor()), 20) == pytest.approx(
        1 / 3, abs=1e-12
    )
    assert lower_zero_test(ScaleSequence(constant_ratio_gaps(0.25)), 15) == pytest.approx(
        0.25, abs=1e-12
    )
    geo = lower_zero_test(ScaleSequence(GeometricGaps(0.5)), 8)
    assert geo < 2.0**-200  # s_{k+1}/s_k = 2**(-1-2**k) collapses fast


# -- classifier ---------------------------------------------------------------


def test_classify_geometric_zero():
    for lam in (0.3, 0.5, 0.7):
        rep = classify_decreasing(GeometricGaps(lam))
        assert rep.verdict == "zero", lam
    rep = classify_decreasing(GeometricGaps(0.5))
    assert rep.epsilons[-1][1] == pytest.approx(1.0, rel=1e-9)


def test_classify_level_constant_one():
    for r in (0.25, 1 / 3, 0.4):
        rep = classify_decreasing(constant_ratio_gaps(r))
        assert rep.verdict == "one", r


def test_classify_perturbed_geometric_zero():
    # c1 lam**j <= a_j <= c2 lam**j forces verdict zero
    rng = random.Random(3)
    lam = 0.6
    vals = []
    cur = 1.0
    for j in range(1, 400):
        cur = lam**j * rng.uniform(0.8, 1.0)
        vals.append(cur)
    vals = sorted(vals, reverse=True)
    model = ExplicitGaps(tuple(LogLength.from_value(v) for v in vals))
    rep = classify_decreasing(model, horizons=(64, 128, 256))
    assert rep.verdict == "zero"


# -- empirical estimators -----------------------------------------------------


def test_assouad_empirical_cantor_depth14():
    model = classical_cantor()
    sc = ScaleSequence(model)
    approx = build_cantor(model, 14)
    plan = grid_plan(approx, sc, [(1, 11), (2, 11), (3, 11)], max_centers=16)
    rep = assouad_empirical(approx, plan)
    assert 0.58 <= rep.value <= 0.70
    assert rep.witness["certified"]


def test_lower_empirical_cantor_depth14():
    model = classical_cantor()
    sc = ScaleSequence(model)
    approx = build_cantor(model, 14)
    plan = grid_plan(approx, sc, [(1, 11), (2, 11), (3, 11)], max_centers=16)
    rep = lower_empirical(approx, plan)
    assert 0.55 <= rep.value <= 0.68


def test_dichotomy_witness_plan_monotone():
    model = classical_cantor()
    arr = Arrangement(model, "decreasing")
    values = []
    for k in (6, 8, 10):
        approx = arr.approximation(gap_floor=model.level_length(k + 1))
        rep = assouad_empirical(approx, block_witness_plan(model, [k]))
        values.append(rep.raw_value)
    assert values == sorted(values)
    assert values[-1] >= 0.9


def test_lower_empirical_isolated_point_window():
    # the rightmost point of the decreasing set is isolated: a window with
    # R below the first gap sees one point, exponent 0
    model = GeometricGaps(0.5)
    arr = Arrangement(model, "decreasing")
    approx = arr.approximation(gap_floor=model.term(10))
    plan = SamplingPlan(
        samples=(
            ScaleSample(
                center="endpoint:last",
                R=LogLength.from_value(0.4),  # below a_1 = 0.5
                r=LogLength.from_value(0.01),
            ),
        )
    )
    rep = lower_empirical(approx, plan)
    assert rep.value == 0.0
    assert rep.witness["N"] == 1


def test_empirical_no_valid_pairs_returns_zero():
    model = classical_cantor()
    approx = Arrangement(model, "cantor").approximation(depth=2)
    plan = SamplingPlan(
        samples=(
            ScaleSample(
                center=0,
                R=LogLength.from_value(3.0**-6),
                r=LogLength.from_value(3.0**-8),
            ),
        )
    )
    rep = lower_empirical(approx, plan)  # window unrefined: advisory skip
    assert rep.value == 0.0
    assert rep.skipped


def test_uncertified_pairs_are_skipped_and_logged():
    model = classical_cantor()
    approx = build_cantor(model, 5)
    plan = SamplingPlan(
        samples=(
            ScaleSample(
                center=0,
                R=LogLength.from_value(1 / 3),
                r=LogLength.from_value(3.0**-9),  # finer than the refinement
            ),
            ScaleSample(
                center=0,
                R=LogLength.from_value(1 / 3),
                r=LogLength.from_value(3.0**-4),
            ),
        )
    )
    rep = assouad_empirical(approx, plan)
    assert len(rep.skipped) == 1
    assert rep.skipped[0]["reason"] == "uncertified"
    assert len(rep.samples) == 1


def test_witness_reproducibility():
    model = classical_cantor()
    sc = ScaleSequence(model)
    approx = build_cantor(model, 10)
    plan = grid_plan(approx, sc, [(1, 7), (2, 7)], max_centers=8)
    for rep in (assouad_empirical(approx, plan), lower_empirical(approx, plan)):
        again = reevaluate_witness(rep, approx)
        assert again == rep.raw_value  # exact reproduction


def test_empirical_clamps_to_unit_interval():
    model = classical_cantor()
    arr = Arrangement(model, "decreasing")
    approx = arr.approximation(gap_floor=model.level_length(9))
    rep = assouad_empirical(approx, block_witness_plan(model, [4, 6, 8]))
    assert 0.0 <= rep.value <= 1.0
    assert rep.raw_value == pytest.approx(rep.value) or rep.raw_value > 1.0


def test_resolve_center_specs():
    model = classical_cantor()
    approx = build_cantor(model, 4)
    eps = approx.endpoints()
    assert resolve_center(approx, 3) == 3
    assert resolve_center(approx, "endpoint:first") == 0
    assert resolve_center(approx, "endpoint:last") == len(eps) - 1
    gid = resolve_center(approx, "gap_left:1")
    # gap 1 is the middle-thirds gap; its left endpoint is at 1/3
    assert eps[gid][0].value() == pytest.approx(1 / 3, rel=1e-12)
    with pytest.raises(DomainError):
        resolve_center(approx, "gap_left:999")
    with pytest.raises(DomainError):
        resolve_center(approx, "nonsense:1")
