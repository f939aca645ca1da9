import math

import pytest

from fractlab.constructions import (
    SubseqCantorGaps,
    build_assouad_target,
    build_lower_target,
    generate_rapid_decay,
    in_order_levels,
    measure_level_doubling,
)
from fractlab.dimension import lower_formula
from fractlab.errors import ConfigError, ConstructionError, DomainError
from fractlab.models import (
    ConstantRatio,
    ExplicitRatios,
    RatioGaps,
    ScaleSequence,
    classical_cantor,
)

THIRD = ConstantRatio(1 / 3)


# -- rapid-decay generator ----------------------------------------------------


def test_rapid_decay_small_values():
    b = generate_rapid_decay(3)
    assert b.model.exponents_log2 == (0, -5, -17, -38)
    assert set(b.condition2_margins) == {0}  # recurrence achieves equality


def test_rapid_decay_condition1_sum():
    # at k = 0: 2 g_1 + 4 g_2 + ... = 2**-4 + 2**-15 + ... < 1/2
    b = generate_rapid_decay(4)
    direct = sum(2 ** (j + e) for j, e in enumerate(b.model.exponents_log2))
    beyond0 = direct - 1.0  # drop the j = 0 term
    assert beyond0 < 0.5
    assert b.condition1_margins_log2[0] == pytest.approx(
        math.log2(0.5 / beyond0), abs=1e-6
    )


def test_rapid_decay_deep_is_exact_and_fast():
    b = generate_rapid_decay(40)
    assert len(b.condition1_margins_log2) == 40
    assert len(b.condition2_margins) == 40
    assert min(b.condition1_margins_log2) > 0
    assert b.model.exponents_log2[40] == -sum(i * (i + 4) for i in range(1, 41))


def test_rapid_decay_rejects_bad_K():
    with pytest.raises(DomainError):
        generate_rapid_decay(0)


# -- in-order layout ----------------------------------------------------------


def test_in_order_levels_matches_tree():
    assert in_order_levels(0) == [0]
    assert in_order_levels(1) == [1, 0, 1]
    assert in_order_levels(2) == [2, 1, 2, 0, 2, 1, 2]
    seq = in_order_levels(5)
    assert len(seq) == 2**6 - 1
    for j in range(6):
        assert seq.count(j) == 2**j


def test_measure_level_doubling():
    assert measure_level_doubling(classical_cantor(), 32) == pytest.approx(3.0, rel=1e-12)


# -- Assouad-dimension target build --------------------------------------------


@pytest.fixture(scope="module")
def third_build():
    return build_assouad_target(THIRD, 0.8, 6)


def test_target_gamma(third_build):
    assert third_build.gamma == pytest.approx(2.0**-1.25, abs=1e-12)
    assert third_build.gamma**0.8 == pytest.approx(0.5, abs=1e-12)


def test_target_first_stage(third_build):
    st = third_build.stages[0]
    assert st.d_step == 5  # d_1 is the step-5 gap
    assert st.n_k == 4
    assert st.i_offsets[0] == 1


def test_target_all_checks_pass(third_build):
    failed = [name for name, ok in third_build.checks if not ok]
    assert failed == []
    # conditions (7), (8), the gap sandwich, diameter bounds and the
    # interleaving chain are all individually present
    names = [name for name, _ in third_build.checks]
    assert any("condition (7)" in n for n in names)
    assert any("condition (8)" in n for n in names)
    assert any("gap sandwich" in n for n in names)
    assert any("diam" in n for n in names)
    assert any("interleaving" in n for n in names)


def test_target_witnesses(third_build):
    for w in third_build.witnesses:
        assert w.count >= 2**w.k
        assert 0.8 - w.delta_bound - 1e-12 <= w.exponent <= 1.0
    last = third_build.witnesses[-1]
    assert last.k == 6
    assert last.observed_slack < 0.15


def test_target_gap_accounting(third_build):
    # consumed plus remainder reproduces the full sequence level by level
    consumed = dict(third_build.consumed)
    source = RatioGaps(THIRD)
    for lvl in range(0, 45):
        used = consumed.get(lvl, 0)
        # remainder exposes level counts via its internal counter
        left = third_build.remainder._count(lvl)
        assert used + left == 1 << lvl
    # blocks never take more than half a level (separator exempt)
    sep_lvl = third_build.separator_step - 1
    for lvl, used in third_build.consumed:
        block_used = used - (1 if lvl == sep_lvl else 0)
        assert block_used <= (1 << lvl) // 2


def test_target_remainder_equivalence(third_build):
    assert third_build.remainder_equivalence <= 3.0 * (1 + 1e-9)


def test_target_mass_conserved(third_build):
    third_build.approximation.mass_check(1e-9)


def test_target_rejects_bad_inputs():
    with pytest.raises(DomainError):
        build_assouad_target(THIRD, 1.0, 3)  # s = 1 -> decreasing arrangement
    with pytest.raises(DomainError):
        build_assouad_target(THIRD, 0.5, 3)  # below the source dimension


def test_target_manifest_round_trip(third_build):
    import json

    text = json.dumps(third_build.to_manifest(), sort_keys=True)
    back = json.loads(text)
    assert back["target"] == 0.8
    assert len(back["stages"]) == 6
    assert all(ok for _, ok in back["checks"])


# -- lower-dimension target build ----------------------------------------------


@pytest.fixture(scope="module")
def lower_build():
    return build_lower_target(THIRD, 0.5, 12)


def test_lower_d_and_table(lower_build):
    assert lower_build.d == pytest.approx(0.25, abs=1e-15)
    assert lower_build.start == 1
    expected = [(j, math.ceil(j * math.log(4) / math.log(3))) for j in range(1, 13)]
    assert list(lower_build.k_table) == expected


def test_lower_formula_on_subsequence(lower_build):
    rep = lower_formula(ScaleSequence(lower_build.subsequence), 6, 4, 8)
    assert 0.45 <= rep.value <= 0.55


def test_lower_scale_tracking(lower_build):
    # s_n(b) / d**n stays within the reported two-sided constant
    sc = ScaleSequence(lower_build.subsequence)
    c = lower_build.scale_ratio_bound
    for n in range(12):
        ratio = math.exp(sc.s(n).log - n * math.log(0.25))
        assert 1 / c - 1e-12 <= ratio <= c + 1e-12


def test_lower_remainder_equivalence(lower_build):
    assert lower_build.remainder_equivalence <= 3.0 * (1 + 1e-9)


def test_lower_mass_and_separation(lower_build):
    lower_build.approximation.mass_check(1e-9)
    items = lower_build.approximation.items
    assert len(items) == 3  # C_b block, separator gap, image block
    assert not items[1].length.is_zero  # strictly positive separation


def test_lower_alpha_zero_gives_decreasing(lower_build):
    b0 = build_lower_target(THIRD, 0.0, 6)
    assert b0.subsequence is None
    assert b0.approximation.meta["placement"] == "decreasing"


def test_lower_rejects_alpha_at_or_above_dim():
    with pytest.raises(DomainError):
        build_lower_target(THIRD, 0.631, 8)
    with pytest.raises(DomainError):
        build_lower_target(THIRD, -0.2, 8)


def test_lower_needs_ratio_bounds():
    unbounded = ExplicitRatios(tuple([1 / 3] * 30))
    with pytest.raises(ConfigError):
        build_lower_target(unbounded, 0.5, 6)


def test_subsequence_model_consistency(lower_build):
    b = lower_build.subsequence
    # level n copies the source step k_{n+1} gap, which is 3**-k for r = 1/3
    for n in range(6):
        kj = b.k_of(n + 1)
        assert b.level_length(n).value() == pytest.approx(3.0**-kj, rel=1e-9)
    # tails stay consistent with terms
    for m in (1, 2, 5, 9):
        diff = b.tail(m - 1) - b.tail(m)
        assert diff.log == pytest.approx(b.term(m).log, abs=1e-7)


def test_lower_remainder_counts(lower_build):
    rem = lower_build.remainder
    # source level 1 (step 2) loses the single subsequence level-0 gap
    assert rem.level_count(1) == 2 - 1
    # source level 0 (step 1) is the separator
    assert rem.level_count(0) == 0
    # an untouched deep level keeps its full multiplicity
    assert rem.level_count(4) == 16  # step 5 = k_j for no j in the table
