"""Error-containment barriers between independently encoded trit partitions.

A trit stream is cut into fixed-length partitions. Each partition is
rotation-encoded on its own (seeded from A), and partitions are joined with
the two-nucleotide marker 'AA', which the rotating code can never emit.
An insertion or deletion inside one partition shifts only that partition's
nucleotides; the decoder re-anchors at the next marker, so damage does not
spread down the stream.

The decoder knows the expected trit count, searches a +/- window around each
expected marker position, and when a marker was destroyed it merges the two
neighbouring partitions and carries on at the following one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rotation import A, rotate_decode, rotate_encode

BARRIER = np.array([A, A], dtype=np.uint8)


@dataclass(frozen=True)
class BarrierConfig:
    """Partition length in trits and marker search window in nucleotides.

    partition_len None disables barriers entirely (one unbounded partition).
    """

    partition_len: int | None = 50
    window: int = 12
    trailing: bool = False  # emit a marker after the final partition too

    def __post_init__(self):
        if self.window < 2 or self.window % 2:
            raise ValueError("window must be an even number >= 2")
        if self.partition_len is not None:
            if self.partition_len < 2:
                raise ValueError("partition_len must be >= 2")
            if self.window >= 2 * self.partition_len:
                raise ValueError("window must be smaller than two partitions")


@dataclass
class BarrieredSequence:
    """Nucleotide sequence produced by insert_barriers."""

    nts: np.ndarray
    trit_count: int
    partition_count: int
    config: BarrierConfig

    @property
    def barrier_nt_count(self) -> int:
        n = self.partition_count - 1
        if self.config.trailing and self.partition_count:
            n += 1
        return max(n, 0) * 2


def _partition_lengths(trit_count: int, cfg: BarrierConfig) -> list[int]:
    if trit_count == 0:
        return []
    pl = cfg.partition_len
    if pl is None:
        return [trit_count]
    full, rest = divmod(trit_count, pl)
    return [pl] * full + ([rest] if rest else [])


def insert_barriers(trits, cfg: BarrierConfig) -> BarrieredSequence:
    """Encode a trit stream as partitions separated by 'AA' markers."""
    trits = np.asarray(trits, dtype=np.uint8)
    lengths = _partition_lengths(trits.size, cfg)
    pieces = []
    off = 0
    for n in lengths:
        pieces.append(rotate_encode(trits[off : off + n], seed=A))
        pieces.append(BARRIER)
        off += n
    if pieces and not cfg.trailing:
        pieces.pop()  # separators, not terminators
    nts = np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.uint8)
    return BarrieredSequence(nts, trits.size, len(lengths), cfg)


@dataclass
class ResyncResult:
    """Decoded trits plus per-partition damage verdicts."""

    trits: np.ndarray
    damaged: list[bool] = field(default_factory=list)

    @property
    def damaged_count(self) -> int:
        return sum(self.damaged)


def _find_marker(nts: np.ndarray, expected: int, low: int, half: int) -> int | None:
    """Nearest 'AA' start around the expected position; ties go left.

    Candidates inside one A-run are snapped to the run's last 'AA':
    partitions never start with A, so a true marker always sits at the
    tail of its run (a partition may end with A and extend it leftward).
    """
    best = None
    best_key = None
    lo = max(low, expected - half)
    hi = min(nts.size - 2, expected + half)
    for s in range(lo, hi + 1):
        if nts[s] != A or nts[s + 1] != A:
            continue
        while s + 2 < nts.size and s + 1 <= hi and nts[s + 2] == A:
            s += 1
        key = (abs(s - expected), s)
        if best_key is None or key < best_key:
            best, best_key = s, key
    return best


def resync_decode(nts, cfg: BarrierConfig, expected_trits: int) -> ResyncResult:
    """Decode a barriered sequence back to expected_trits trits.

    Damaged partitions are padded with trit 0 or truncated so every
    partition lands at its original offset in the output stream.
    """
    nts = np.asarray(nts, dtype=np.uint8)
    lengths = _partition_lengths(expected_trits, cfg)
    n = len(lengths)
    if n == 0:
        return ResyncResult(np.zeros(0, dtype=np.uint8))

    half = (cfg.window - 2) // 2
    marker_count = n - 1 + (1 if cfg.trailing else 0)

    out = np.zeros(expected_trits, dtype=np.uint8)
    damaged = [False] * n
    offsets = np.concatenate([[0], np.cumsum(lengths)])

    pos = 0  # cursor into nts
    chunk_first = 0  # first partition of the open chunk
    merged = 0  # markers missed inside the open chunk

    def close_chunk(last_part: int, end: int) -> None:
        """Decode nts[pos:end] into partitions chunk_first..last_part."""
        span = int(offsets[last_part + 1] - offsets[chunk_first])
        chunk = rotate_decode(nts[pos:end], seed=A)
        clean = merged == 0 and chunk.size == span
        at = 0
        for j in range(chunk_first, last_part + 1):
            take = min(lengths[j], max(chunk.size - at, 0))
            out[offsets[j] : offsets[j] + take] = chunk[at : at + take]
            at += lengths[j]
            if not clean:
                damaged[j] = True

    for i in range(marker_count):
        last_part = i  # marker i follows partition i
        expected = pos + int(offsets[i + 1] - offsets[chunk_first]) + 2 * merged
        s = _find_marker(nts, expected, pos, half)
        if s is None:
            merged += 1
            continue
        close_chunk(last_part, s)
        pos = s + 2
        chunk_first = i + 1
        merged = 0

    if chunk_first < n:
        close_chunk(n - 1, nts.size)

    return ResyncResult(out, damaged)
