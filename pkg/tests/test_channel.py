import numpy as np
import pytest

from imgdna.channel import (
    ChannelConfig,
    parse_channel_config,
    perturb_pool,
    perturb_strand,
    strand_rng,
)


def test_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(rate=-0.1)
    with pytest.raises(ValueError):
        ChannelConfig(rate=1.5)
    with pytest.raises(ValueError):
        ChannelConfig(rate=0.1, sub_weight=0, ins_weight=0, del_weight=0)
    with pytest.raises(ValueError):
        ChannelConfig(rate=0.1, copies=0)
    assert ChannelConfig(rate=0.5).fractions == (1 / 3, 1 / 3, 1 / 3)


def test_zero_rate_is_identity():
    rng = np.random.default_rng(1)
    strand = rng.integers(0, 4, size=200).astype(np.uint8)
    out = perturb_pool([strand], ChannelConfig(rate=0.0, copies=3), seed=9)
    for copy in out[0]:
        assert np.array_equal(copy, strand)


def test_full_rate_substitutions_change_every_eligible_position():
    rng = np.random.default_rng(2)
    strand = rng.integers(0, 4, size=150).astype(np.uint8)
    cfg = ChannelConfig(rate=1.0, sub_weight=1, ins_weight=0, del_weight=0)
    out = perturb_pool([strand], cfg, seed=5, protect=(20, 20))[0][0]
    assert out.size == strand.size
    assert np.array_equal(out[:20], strand[:20])  # primers spared
    assert np.array_equal(out[-20:], strand[-20:])
    assert np.all(out[20:-20] != strand[20:-20])  # substitution never repeats the nt


def test_corrupt_primers_reaches_the_ends():
    strand = np.zeros(100, dtype=np.uint8)
    cfg = ChannelConfig(rate=1.0, sub_weight=1, ins_weight=0, del_weight=0, corrupt_primers=True)
    out = perturb_pool([strand], cfg, seed=5, protect=(20, 20))[0][0]
    assert np.all(out != 0)


def test_determinism_and_seed_sensitivity():
    rng = np.random.default_rng(3)
    strands = [rng.integers(0, 4, size=250).astype(np.uint8) for _ in range(5)]
    cfg = ChannelConfig(rate=0.05, copies=2)
    a = perturb_pool(strands, cfg, seed=11)
    b = perturb_pool(strands, cfg, seed=11)
    c = perturb_pool(strands, cfg, seed=12)
    for ga, gb in zip(a, b):
        for ca, cb in zip(ga, gb):
            assert np.array_equal(ca, cb)
    assert any(
        not np.array_equal(ca, cc) for ga, gc in zip(a, c) for ca, cc in zip(ga, gc)
    )


def test_noise_is_per_strand_not_per_pool():
    # a strand's noise must not depend on what else is in the pool
    rng = np.random.default_rng(4)
    s0 = rng.integers(0, 4, size=250).astype(np.uint8)
    s1 = rng.integers(0, 4, size=250).astype(np.uint8)
    cfg = ChannelConfig(rate=0.05)
    small = perturb_pool([s0], cfg, seed=7)
    big = perturb_pool([s0, s1], cfg, seed=7)
    assert np.array_equal(small[0][0], big[0][0])


def test_copies_receive_independent_noise():
    rng = np.random.default_rng(5)
    strand = rng.integers(0, 4, size=250).astype(np.uint8)
    out = perturb_pool([strand], ChannelConfig(rate=0.1, copies=3), seed=8)[0]
    assert not np.array_equal(out[0], out[1])
    assert not np.array_equal(out[1], out[2])


def test_event_counts_match_binomial():
    n = 200_000
    rate = 0.01
    strand = np.zeros(n, dtype=np.uint8)
    cfg = ChannelConfig(rate=rate, sub_weight=1, ins_weight=0, del_weight=0)
    out = perturb_strand(strand, cfg, strand_rng(1, 0, 0), 0, n)
    events = int((out != 0).sum())
    mean = n * rate
    sigma = (n * rate * (1 - rate)) ** 0.5
    assert abs(events - mean) < 4 * sigma


def test_error_kind_split_matches_weights():
    # insertion-only grows, deletion-only shrinks; mixed hits the weights
    n = 120_000
    rate = 0.01
    strand = np.zeros(n, dtype=np.uint8)
    grow = perturb_strand(
        strand, ChannelConfig(rate=rate, sub_weight=0, ins_weight=1, del_weight=0),
        strand_rng(2, 0, 0), 0, n,
    )
    shrink = perturb_strand(
        strand, ChannelConfig(rate=rate, sub_weight=0, ins_weight=0, del_weight=1),
        strand_rng(3, 0, 0), 0, n,
    )
    sigma = (n * rate * (1 - rate)) ** 0.5
    assert abs((grow.size - n) - n * rate) < 4 * sigma
    assert abs((n - shrink.size) - n * rate) < 4 * sigma
    # 2:1:1 weights: length is unchanged in expectation, subs dominate
    cfg = ChannelConfig(rate=rate, sub_weight=2.0, ins_weight=1.0, del_weight=1.0)
    out = perturb_strand(strand, cfg, strand_rng(4, 0, 0), 0, n)
    assert abs(out.size - n) < 4 * sigma


def test_insertion_goes_after_the_position():
    strand = np.array([0, 1, 2, 3], dtype=np.uint8)
    cfg = ChannelConfig(rate=1.0, sub_weight=0, ins_weight=1, del_weight=0)
    out = perturb_strand(strand, cfg, strand_rng(5, 0, 0), 0, 1)
    assert out.size == 5
    assert out[0] == 0  # original nt kept, insertion lands behind it
    assert np.array_equal(out[2:], strand[1:])


def test_parse_channel_config():
    cfg = parse_channel_config(
        """
        # synthesis + sequencing model
        rate = 0.003
        sub_weight = 2
        ins_weight = 1
        del_weight = 1
        copies = 3
        corrupt_primers = false
        """
    )
    assert cfg == ChannelConfig(
        rate=0.003, sub_weight=2, ins_weight=1, del_weight=1, copies=3
    )
    assert parse_channel_config("rate=0.01").copies == 1
    with pytest.raises(ValueError):
        parse_channel_config("speed=1")
    with pytest.raises(ValueError):
        parse_channel_config("rate")
    with pytest.raises(ValueError):
        parse_channel_config("")  # rate is mandatory
    with pytest.raises(ValueError):
        parse_channel_config("rate=0.1\ncorrupt_primers=maybe")
