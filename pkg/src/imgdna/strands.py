"""Strand assembly: primers, replicated index, barriered payload.

A strand is fwd_primer | index | payload | rev_primer. The index holds
(offset * 2 + stream_bit) in base 3, written three times so a single hit
cannot orphan the whole strand; each copy is rotation-encoded from the
last primer nucleotide. The decoder votes over the three copy windows
plus one-shifted variants, so an indel inside the index region still
recovers the value.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .rotation import A, rotate_decode, rotate_encode, seq_to_string

STREAM_DC = 0  # also carries the single interleaved stream
STREAM_AC = 1

MAX_STRAND_LEN = 1000
MAX_HOMOPOLYMER = 3  # longest run the rotating code plus markers can emit


def generate_primer(
    rng: np.random.Generator,
    length: int = 20,
    forbid_leading_a: bool = False,
) -> np.ndarray:
    """Random primer with balanced GC and no runs longer than two."""
    if length < 4:
        raise ValueError("primer length must be >= 4")
    while True:
        cand = rng.integers(0, 4, size=length).astype(np.uint8)
        if forbid_leading_a and cand[0] == A:
            continue
        gc = np.isin(cand, (1, 2)).mean()
        if not 0.4 <= gc <= 0.6:
            continue
        if _max_run(cand) > 2:
            continue
        return cand


def default_primer_pair(length: int = 20, seed: int = 0x1D9A) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic primer pair. The reverse primer never starts with A,
    so a trailing 'AA' marker cannot extend into a longer run."""
    rng = np.random.default_rng(seed)
    fwd = generate_primer(rng, length)
    while True:
        rev = generate_primer(rng, length, forbid_leading_a=True)
        if not np.array_equal(rev, fwd):
            return fwd, rev


def _max_run(nts: np.ndarray) -> int:
    if nts.size == 0:
        return 0
    changes = np.flatnonzero(np.diff(nts.astype(np.int64)) != 0)
    edges = np.concatenate([[-1], changes, [nts.size - 1]])
    return int(np.diff(edges).max())


@dataclass
class StrandGeometry:
    """Fixed layout shared by every strand in a pool."""

    strand_len: int = 250
    fwd_primer: np.ndarray = None
    rev_primer: np.ndarray = None
    index_width: int = 6  # trits per index copy

    def __post_init__(self):
        if self.fwd_primer is None or self.rev_primer is None:
            fwd, rev = default_primer_pair()
            self.fwd_primer = fwd if self.fwd_primer is None else self.fwd_primer
            self.rev_primer = rev if self.rev_primer is None else self.rev_primer
        self.fwd_primer = np.asarray(self.fwd_primer, dtype=np.uint8)
        self.rev_primer = np.asarray(self.rev_primer, dtype=np.uint8)
        if self.index_width < 1:
            raise ValueError("index width must be >= 1")
        if self.capacity < 10:
            raise ValueError("strand too short for its primers and index")

    @property
    def fwd_len(self) -> int:
        return int(self.fwd_primer.size)

    @property
    def rev_len(self) -> int:
        return int(self.rev_primer.size)

    @property
    def index_len(self) -> int:
        return 3 * self.index_width

    @property
    def index_seed(self) -> int:
        return int(self.fwd_primer[-1])

    @property
    def capacity(self) -> int:
        """Payload nucleotides available per strand."""
        return self.strand_len - self.fwd_len - self.rev_len - self.index_len


def index_width_for(max_strands: int) -> int:
    """Smallest trit width holding offset*2+stream for max_strands offsets."""
    width = 1
    while 3**width < 2 * max(max_strands, 1):
        width += 1
    return width


def int_to_trits(value: int, width: int) -> np.ndarray:
    if value < 0 or value >= 3**width:
        raise ValueError(f"value {value} does not fit {width} trits")
    out = np.zeros(width, dtype=np.uint8)
    for i in range(width - 1, -1, -1):
        out[i] = value % 3
        value //= 3
    return out


def trits_to_int(trits: np.ndarray) -> int:
    value = 0
    for t in trits:
        value = value * 3 + int(t)
    return value


def _copy_mask(width: int, k: int) -> np.ndarray:
    # position-dependent trit offset, distinct per copy
    return (np.arange(1, width + 1, dtype=np.int64) * k) % 3


def encode_index(value: int, width: int, seed: int) -> np.ndarray:
    """Three rotation-encoded copies of the value, each masked differently.

    The rotation code is additive, so plain repeats yield copies that are
    elementwise shifts of one another, and then decode windows misaligned
    by the same amount read the same wrong value out of two copies and
    can outvote the intact reads. Masking copy k with k*(position+1) mod 3
    makes equally misaligned windows disagree in every digit instead.
    """
    trits = int_to_trits(value, width).astype(np.int64)
    return np.concatenate(
        [rotate_encode((trits + _copy_mask(width, k)) % 3, seed=seed) for k in range(3)]
    )


def _prefix_edit_within_one(expected: np.ndarray, observed: np.ndarray) -> bool:
    """True when expected aligns to a prefix of observed with <= 1 edit.

    Anchored at the start, free at the observed tail, so a trailing payload
    nucleotide after the index region never counts as damage.
    """
    n, m = expected.size, observed.size
    if m >= n and np.array_equal(observed[:n], expected):
        return True
    prev = np.arange(m + 1)
    for i in range(1, n + 1):
        cur = np.empty(m + 1, dtype=np.int64)
        cur[0] = i
        for j in range(1, m + 1):
            cost = 0 if expected[i - 1] == observed[j - 1] else 1
            cur[j] = min(prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return int(prev.min()) <= 1


def decode_index(nts: np.ndarray, width: int, seed: int, limit: int) -> int | None:
    """Vote across the three copies, tolerating one-off shifts.

    Each copy region contributes at most one vote per value, whichever of
    its shifted windows produced it; a corrupt copy then cannot outvote
    the two intact ones with misaligned-window noise. Every candidate,
    however strong its vote, must re-encode to within one edit of the
    observed index region before it is accepted: distinct values sit >= 3
    edits apart, so a single-error strand can never pass under another
    strand's address, no matter how the votes fall.
    """
    copy_windows = (
        (0, 1),
        (width - 1, width, width + 1),
        (2 * width - 1, 2 * width, 2 * width + 1),
    )
    copy_votes: Counter = Counter()
    raw_votes: Counter = Counter()
    for k, windows in enumerate(copy_windows):
        seen = set()
        for off in windows:
            if off < 0 or off + width > nts.size:
                continue
            decoded = rotate_decode(nts[off : off + width], seed=seed).astype(np.int64)
            value = trits_to_int((decoded - _copy_mask(width, k)) % 3)
            if value < limit:
                seen.add(value)
                raw_votes[value] += 1
        for value in seen:
            copy_votes[value] += 1
    ranked = sorted(
        copy_votes, key=lambda v: (copy_votes[v], raw_votes[v], -v), reverse=True
    )
    for value in ranked:
        if _prefix_edit_within_one(encode_index(value, width, seed), nts):
            return value
    return None


def assemble_strand(geom: StrandGeometry, index_value: int, payload: np.ndarray) -> np.ndarray:
    if payload.size > geom.capacity:
        raise ValueError(f"payload {payload.size} nt exceeds capacity {geom.capacity}")
    index = encode_index(index_value, geom.index_width, geom.index_seed)
    return np.concatenate([geom.fwd_primer, index, payload, geom.rev_primer])


@dataclass
class DisassemblyResult:
    """Payloads slotted by (stream, offset); None marks a missing strand."""

    streams: dict[int, list]
    quarantined: int = 0
    duplicates: int = 0


def _vote_copies(copies: list[np.ndarray]) -> np.ndarray:
    if len(copies) == 1:
        return copies[0]
    tally: Counter = Counter(c.tobytes() for c in copies)
    top = max(tally.values())
    for c in copies:  # first-seen wins among equally common reads
        if tally[c.tobytes()] == top:
            return c
    raise AssertionError("unreachable")


def disassemble_pool(
    strand_groups: list[list[np.ndarray]],
    geom: StrandGeometry,
    stream_counts: dict[int, int],
) -> DisassemblyResult:
    """Recover per-stream payload slots from received strands.

    strand_groups holds the noisy copies of each synthesized strand.
    Primer regions are stripped by position; the voted index routes the
    payload to its slot. Unroutable strands are quarantined, their slots
    stay None for the caller's gap fill.
    """
    result = DisassemblyResult(
        streams={s: [None] * n for s, n in stream_counts.items()}
    )
    limit = 2 * max(stream_counts.values())
    for copies in strand_groups:
        strand = _vote_copies(copies)
        if strand.size <= geom.fwd_len + geom.rev_len + geom.index_len:
            result.quarantined += 1
            continue
        body = strand[geom.fwd_len : strand.size - geom.rev_len]
        value = decode_index(body[: geom.index_len + 1], geom.index_width, geom.index_seed, limit)
        if value is None:
            result.quarantined += 1
            continue
        stream, offset = value & 1, value >> 1
        slots = result.streams.get(stream)
        if slots is None or offset >= len(slots):
            result.quarantined += 1
            continue
        if slots[offset] is not None:
            result.duplicates += 1
            continue
        slots[offset] = body[geom.index_len :]
    return result


@dataclass
class ConstraintReport:
    strand_count: int
    max_homopolymer: int
    max_length: int
    gc_mean: float
    gc_min: float
    gc_max: float
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_constraints(strands: list[np.ndarray]) -> ConstraintReport:
    """Check biochemical plausibility rules over a pool of strands."""
    runs, lens, gcs = [], [], []
    violations = []
    for i, s in enumerate(strands):
        runs.append(_max_run(s))
        lens.append(s.size)
        gcs.append(float(np.isin(s, (1, 2)).mean()) if s.size else 0.0)
        if runs[-1] > MAX_HOMOPOLYMER:
            violations.append(f"strand {i}: homopolymer run {runs[-1]} > {MAX_HOMOPOLYMER}")
        if lens[-1] >= MAX_STRAND_LEN:
            violations.append(f"strand {i}: length {lens[-1]} >= {MAX_STRAND_LEN}")
    return ConstraintReport(
        strand_count=len(strands),
        max_homopolymer=max(runs, default=0),
        max_length=max(lens, default=0),
        gc_mean=float(np.mean(gcs)) if gcs else 0.0,
        gc_min=float(np.min(gcs)) if gcs else 0.0,
        gc_max=float(np.max(gcs)) if gcs else 0.0,
        violations=violations,
    )
