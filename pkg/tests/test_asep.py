from fractions import Fraction as F

import pytest
from hypothesis import given

from biorth import (
    InvalidParams,
    SizeLimit,
    StationaryDistribution,
    ansatz_weight,
    bimoment_block,
    compare,
    stationary_ansatz,
    stationary_exact,
    to_rates,
)
from biorth.asep import VARIANTS, config_bits, config_string, generator

from conftest import valid_params


def test_config_helpers():
    assert config_string(5, 4) == "0101"
    assert config_bits(5, 4) == (0, 1, 0, 1)
    with pytest.raises(InvalidParams):
        config_string(16, 4)
    with pytest.raises(InvalidParams):
        config_string(-1, 4)


def test_distribution_validation():
    with pytest.raises(InvalidParams):
        StationaryDistribution(length=1, probabilities=(F(1),), normalization=F(1))
    with pytest.raises(InvalidParams):
        StationaryDistribution(
            length=1, probabilities=(F(1, 2), F(1, 3)), normalization=F(1)
        )


def test_generator_single_site(canonical):
    rates = to_rates(canonical)
    gen = generator(1, rates)
    assert gen[(0, 1)] == rates.alpha + rates.delta
    assert gen[(1, 0)] == rates.beta + rates.gamma
    assert gen[(0, 0)] == -gen[(0, 1)]


def test_generator_bonds_and_row_sums(canonical):
    rates = to_rates(canonical)
    gen = generator(2, rates)
    assert gen[(2, 1)] == 1  # 10 -> 01 forward hop
    assert gen[(1, 2)] == rates.q
    for s in range(4):
        assert sum(rate for (src, _), rate in gen.items() if src == s) == 0


def test_stationary_single_site(canonical):
    rates = to_rates(canonical)
    dist = stationary_exact(1, rates)
    total = rates.alpha + rates.beta + rates.gamma + rates.delta
    assert dist.probability(1) == (rates.alpha + rates.delta) / total
    assert dist.probability(1) == F(31, 72)


@given(valid_params())
def test_stationary_solves_balance(p):
    rates = to_rates(p)
    dist = stationary_exact(2, rates)
    gen = generator(2, rates)
    # pi is a left null vector of the rate matrix
    for j in range(4):
        flow = sum(
            dist.probability(i) * rate for (i, jj), rate in gen.items() if jj == j
        )
        assert flow == 0


def test_ansatz_weights_single_site(canonical):
    block = bimoment_block(canonical, 1)
    b10 = block.entry(1, 0)
    assert ansatz_weight((1,), canonical, "shifted") == b10
    assert ansatz_weight((1,), canonical, "unshifted") == (1 + b10) / canonical.qprime
    with pytest.raises(InvalidParams):
        ansatz_weight((2,), canonical)
    with pytest.raises(InvalidParams):
        ansatz_weight((1,), canonical, "other")


def test_ansatz_weights_two_sites(canonical):
    # occupied-then-empty reads the (1, 1) moment in the shifted letters
    assert ansatz_weight((1, 0), canonical, "shifted") == bimoment_block(
        canonical, 1
    ).entry(1, 1)


def test_ansatz_matches_oracle(grid):
    for p in grid:
        dist = stationary_ansatz(3, p, "unshifted")
        oracle = stationary_exact(3, to_rates(p))
        assert dist.probabilities == oracle.probabilities


def test_shifted_variant_is_not_stationary(canonical):
    dist = stationary_ansatz(2, canonical, "shifted")
    oracle = stationary_exact(2, to_rates(canonical))
    assert dist.probabilities != oracle.probabilities


def test_compare_reports(canonical):
    report = compare(3, canonical)
    assert report.matching_variants == ("unshifted",)
    by_name = {v.name: v for v in report.variants}
    assert by_name["unshifted"].max_abs_discrepancy == 0
    assert by_name["shifted"].max_abs_discrepancy > 0
    payload = report.to_json_dict()
    assert set(payload) == {"params", "rates", "L", "variants", "oracle"}


def test_compare_across_lengths(grid):
    for p in (grid[0], grid[1], grid[5]):
        for length in range(1, 5):
            report = compare(length, p)
            assert "unshifted" in report.matching_variants


def test_particle_hole_reflection_symmetry(canonical):
    # swapping a<->b, c<->d exchanges the boundary roles; the stationary
    # state transforms by complementing and reversing each configuration
    length = 3
    swapped = canonical.swap_ab_cd()
    dist = stationary_exact(length, to_rates(canonical))
    image = stationary_exact(length, to_rates(swapped))
    mask = (1 << length) - 1
    for s in range(1 << length):
        flipped = 0
        for i in range(length):
            flipped |= ((1 - ((s >> i) & 1)) << (length - 1 - i))
        assert image.probability(flipped) == dist.probability(s)
        assert flipped ^ mask == int(config_string(s, length)[::-1], 2)


def test_size_guards(canonical):
    rates = to_rates(canonical)
    with pytest.raises(SizeLimit):
        generator(13, rates)
    with pytest.raises(SizeLimit):
        stationary_exact(11, rates)
    with pytest.raises(SizeLimit):
        compare(7, canonical)
    assert set(VARIANTS) == {"shifted", "unshifted"}
