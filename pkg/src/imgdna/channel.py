"""Synthesis and sequencing error simulation.

Every nucleotide independently suffers an error with the configured rate;
the error is a substitution (uniform different nucleotide), an insertion
(uniform nucleotide placed after the position) or a deletion, picked by
the configured weights. Primer regions are spared unless corrupt_primers
is set, matching their role as handles rather than data.

Noise is reproducible: each (pool seed, strand uid, copy) triple seeds its
own generator, so a strand's noise never depends on pool size or on how
many other strands were processed first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelConfig:
    rate: float
    sub_weight: float = 1.0
    ins_weight: float = 1.0
    del_weight: float = 1.0
    copies: int = 1
    corrupt_primers: bool = False

    def __post_init__(self):
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("rate must be in [0, 1]")
        weights = (self.sub_weight, self.ins_weight, self.del_weight)
        if min(weights) < 0 or sum(weights) <= 0:
            raise ValueError("error weights must be nonnegative with a positive sum")
        if self.copies < 1:
            raise ValueError("copies must be >= 1")

    @property
    def fractions(self) -> tuple[float, float, float]:
        total = self.sub_weight + self.ins_weight + self.del_weight
        return (self.sub_weight / total, self.ins_weight / total, self.del_weight / total)

    def describe(self) -> str:
        fs, fi, fd = self.fractions
        return (
            f"rate={self.rate:g} sub={fs:.3f} ins={fi:.3f} del={fd:.3f} "
            f"copies={self.copies} corrupt_primers={self.corrupt_primers}"
        )


def strand_rng(seed: int, uid: int, copy: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, uid, copy]))


def perturb_strand(
    nts: np.ndarray, cfg: ChannelConfig, rng: np.random.Generator, lo: int, hi: int
) -> np.ndarray:
    """One noisy read of a strand, errors confined to positions [lo, hi)."""
    hi = max(hi, lo)
    draws = rng.random(hi - lo)
    hits = np.flatnonzero(draws < cfg.rate) + lo
    if hits.size == 0:
        return nts.copy()
    kinds = rng.choice(3, size=hits.size, p=cfg.fractions)
    pieces = []
    prev = 0
    for pos, kind in zip(hits.tolist(), kinds.tolist()):
        if kind == 0:  # substitution: uniform different nucleotide
            pieces.append(nts[prev:pos])
            pieces.append(np.array([(nts[pos] + rng.integers(1, 4)) % 4], dtype=np.uint8))
            prev = pos + 1
        elif kind == 1:  # insertion after the position
            pieces.append(nts[prev : pos + 1])
            pieces.append(np.array([rng.integers(0, 4)], dtype=np.uint8))
            prev = pos + 1
        else:  # deletion
            pieces.append(nts[prev:pos])
            prev = pos + 1
    pieces.append(nts[prev:])
    return np.concatenate(pieces)


def perturb_pool(
    strands: list[np.ndarray],
    cfg: ChannelConfig,
    seed: int,
    protect: tuple[int, int] = (0, 0),
) -> list[list[np.ndarray]]:
    """Noisy copies of every strand: result[uid][copy].

    protect gives the (prefix, suffix) primer lengths spared by default.
    """
    out = []
    for uid, strand in enumerate(strands):
        lo, hi = 0, strand.size
        if not cfg.corrupt_primers:
            lo = min(protect[0], strand.size)
            hi = max(strand.size - protect[1], lo)
        out.append(
            [
                perturb_strand(strand, cfg, strand_rng(seed, uid, copy), lo, hi)
                for copy in range(cfg.copies)
            ]
        )
    return out


_BOOL_WORDS = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def parse_channel_config(text: str) -> ChannelConfig:
    """Parse key=value lines; '#' starts a comment. Unknown keys are errors."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key == "rate":
            values["rate"] = float(val)
        elif key in ("sub_weight", "ins_weight", "del_weight"):
            values[key] = float(val)
        elif key == "copies":
            values["copies"] = int(val)
        elif key == "corrupt_primers":
            flag = _BOOL_WORDS.get(val.lower())
            if flag is None:
                raise ValueError(f"line {lineno}: bad boolean {val!r}")
            values["corrupt_primers"] = flag
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if "rate" not in values:
        raise ValueError("channel config must set rate")
    return ChannelConfig(**values)


def load_channel_config(path) -> ChannelConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_channel_config(fh.read())
