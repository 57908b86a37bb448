import numpy as np
import pytest

from imgdna.rotation import A, seq_to_string
from imgdna.strands import (
    STREAM_AC,
    STREAM_DC,
    StrandGeometry,
    assemble_strand,
    decode_index,
    default_primer_pair,
    disassemble_pool,
    encode_index,
    generate_primer,
    index_width_for,
    int_to_trits,
    trits_to_int,
    validate_constraints,
)


def test_default_primers_obey_rules():
    fwd, rev = default_primer_pair()
    for p in (fwd, rev):
        assert p.size == 20
        gc = np.isin(p, (1, 2)).mean()
        assert 0.4 <= gc <= 0.6
        text = seq_to_string(p)
        for ch in "ACGT":
            assert ch * 3 not in text
    assert rev[0] != A  # guards the trailing 'AA' marker against run growth
    assert not np.array_equal(fwd, rev)
    again = default_primer_pair()
    assert np.array_equal(again[0], fwd) and np.array_equal(again[1], rev)


def test_generate_primer_respects_leading_ban():
    rng = np.random.default_rng(3)
    for _ in range(20):
        assert generate_primer(rng, 18, forbid_leading_a=True)[0] != A


def test_index_width_for_matches_capacity():
    # width w must hold 2 * max_strands distinct values in base 3
    assert index_width_for(1) == 1
    assert index_width_for(4) == 2
    assert index_width_for(13) == 3
    assert index_width_for(14) == 4  # 27 < 28 <= 81
    assert index_width_for(364) == 6
    for n in (1, 2, 5, 40, 365, 1000):
        w = index_width_for(n)
        assert 3**w >= 2 * n
        assert w == 1 or 3 ** (w - 1) < 2 * n


def test_trit_integer_round_trip():
    for v in (0, 1, 5, 80, min(3**6 - 1, 728)):
        assert trits_to_int(int_to_trits(v, 6)) == v
    with pytest.raises(ValueError):
        int_to_trits(729, 6)


def test_index_round_trip_all_values():
    width = 5
    for v in range(0, 3**width, 7):
        nts = encode_index(v, width, seed=2)
        assert nts.size == 3 * width
        assert decode_index(nts, width, seed=2, limit=3**width) == v


def test_index_survives_any_single_substitution():
    # two copies stay aligned and intact, and their agreement wins outright
    rng = np.random.default_rng(8)
    for width in (4, 5, 6, 7):
        for _ in range(200):
            v = int(rng.integers(0, 3**width))
            nts = encode_index(v, width, seed=1)
            hit = nts.copy()
            pos = int(rng.integers(0, nts.size))
            hit[pos] = (hit[pos] + int(rng.integers(1, 4))) % 4
            assert decode_index(hit, width, seed=1, limit=3**width) == v


def test_index_indel_failure_rate_is_small():
    # the decoder may give up on an indel-damaged index (None -> quarantine)
    # but must never hand back some other strand's address
    width = 6
    rng = np.random.default_rng(8)
    gave_up = 0
    wrong = 0
    trials = 2000
    for trial in range(trials):
        v = int(rng.integers(0, 3**width))
        nts = encode_index(v, width, seed=1)
        if trial % 2:
            hit = np.insert(nts, int(rng.integers(0, nts.size + 1)), int(rng.integers(0, 4)))
        else:
            hit = np.delete(nts, int(rng.integers(0, nts.size)))
        got = decode_index(hit, width, seed=1, limit=3**width)
        if got is None:
            gave_up += 1
        elif got != v:
            wrong += 1
    assert wrong == 0, wrong
    assert gave_up / trials < 0.01, gave_up


def test_geometry_capacity():
    geom = StrandGeometry(strand_len=250, index_width=6)
    assert geom.fwd_len == geom.rev_len == 20
    assert geom.index_len == 18
    assert geom.capacity == 192
    with pytest.raises(ValueError):
        StrandGeometry(strand_len=60, index_width=6)


def test_assemble_layout():
    geom = StrandGeometry(strand_len=250, index_width=6)
    payload = np.ones(100, dtype=np.uint8)
    s = assemble_strand(geom, 5, payload)
    assert s.size == 20 + 18 + 100 + 20
    assert np.array_equal(s[:20], geom.fwd_primer)
    assert np.array_equal(s[-20:], geom.rev_primer)
    with pytest.raises(ValueError):
        assemble_strand(geom, 5, np.ones(geom.capacity + 1, dtype=np.uint8))


def _make_pool(geom, n_dc, n_ac, rng):
    strands = []
    payloads = {STREAM_DC: [], STREAM_AC: []}
    for stream, count in ((STREAM_DC, n_dc), (STREAM_AC, n_ac)):
        for off in range(count):
            payload = rng.integers(0, 4, size=geom.capacity - 2).astype(np.uint8)
            payloads[stream].append(payload)
            strands.append(assemble_strand(geom, off * 2 + stream, payload))
    return strands, payloads


def test_disassemble_clean_pool():
    geom = StrandGeometry(strand_len=250, index_width=6)
    rng = np.random.default_rng(10)
    strands, payloads = _make_pool(geom, 7, 13, rng)
    result = disassemble_pool([[s] for s in strands], geom, {STREAM_DC: 7, STREAM_AC: 13})
    assert result.quarantined == 0
    for stream, count in ((STREAM_DC, 7), (STREAM_AC, 13)):
        for off in range(count):
            assert np.array_equal(result.streams[stream][off], payloads[stream][off])


def test_disassemble_handles_missing_and_bogus_strands():
    geom = StrandGeometry(strand_len=250, index_width=6)
    rng = np.random.default_rng(11)
    strands, payloads = _make_pool(geom, 5, 5, rng)
    del strands[2]  # lost strand -> empty slot
    strands.append(rng.integers(0, 4, size=30).astype(np.uint8))  # junk read
    result = disassemble_pool([[s] for s in strands], geom, {STREAM_DC: 5, STREAM_AC: 5})
    assert result.streams[STREAM_DC][2] is None
    assert result.quarantined == 1
    assert np.array_equal(result.streams[STREAM_DC][3], payloads[STREAM_DC][3])


def test_disassemble_votes_across_copies():
    geom = StrandGeometry(strand_len=250, index_width=6)
    rng = np.random.default_rng(12)
    strands, payloads = _make_pool(geom, 3, 0, rng)
    groups = []
    for s in strands:
        bad = s.copy()
        bad[40] = (bad[40] + 1) % 4
        groups.append([bad, s.copy(), s.copy()])  # majority is clean
    result = disassemble_pool(groups, geom, {STREAM_DC: 3, STREAM_AC: 0})
    for off in range(3):
        assert np.array_equal(result.streams[STREAM_DC][off], payloads[STREAM_DC][off])


def test_duplicate_claims_keep_first():
    geom = StrandGeometry(strand_len=250, index_width=6)
    rng = np.random.default_rng(13)
    strands, payloads = _make_pool(geom, 2, 0, rng)
    clone = strands[0].copy()
    clone[50] = (clone[50] + 1) % 4
    result = disassemble_pool(
        [[strands[0]], [strands[1]], [clone]], geom, {STREAM_DC: 2, STREAM_AC: 0}
    )
    assert result.duplicates == 1
    assert np.array_equal(result.streams[STREAM_DC][0], payloads[STREAM_DC][0])


def test_validate_constraints_flags_bad_strands():
    good = np.array([0, 1, 2, 3] * 50, dtype=np.uint8)
    runny = np.array([0, 1, 1, 1, 1, 2] * 10, dtype=np.uint8)
    long = np.zeros(1000, dtype=np.uint8)
    report = validate_constraints([good, runny, long])
    assert not report.ok
    assert report.max_homopolymer == 1000
    assert any("homopolymer" in v for v in report.violations)
    assert any("length" in v for v in report.violations)
    clean = validate_constraints([good])
    assert clean.ok
    assert clean.gc_mean == 0.5
