"""Trit-to-nucleotide rotating code.

Each trit selects one of the three nucleotides that differ from the previous
output, so the encoded sequence never repeats a nucleotide back to back.
With A,C,G,T numbered 0..3 the rotation is next = (prev + trit + 1) mod 4,
which realizes the table:

    prev A: 0->C 1->G 2->T      prev G: 0->T 1->A 2->C
    prev C: 0->G 1->T 2->A      prev T: 0->A 1->C 2->G

Decoding inverts the rotation; a nucleotide equal to its predecessor cannot
occur in clean data and is mapped to trit 0.
"""

from __future__ import annotations

import numpy as np

NUCLEOTIDES = "ACGT"
A, C, G, T = range(4)

_NT_FROM_CHAR = {ch: i for i, ch in enumerate(NUCLEOTIDES)}
_CHAR_FROM_NT = np.frombuffer(NUCLEOTIDES.encode("ascii"), dtype=np.uint8)


def seq_to_string(nts: np.ndarray) -> str:
    """Nucleotide code array -> string like 'ACGT'."""
    return _CHAR_FROM_NT[np.asarray(nts, dtype=np.uint8)].tobytes().decode("ascii")


def string_to_seq(text: str) -> np.ndarray:
    """String like 'ACGT' -> nucleotide code array."""
    try:
        return np.array([_NT_FROM_CHAR[ch] for ch in text], dtype=np.uint8)
    except KeyError as exc:
        raise ValueError(f"invalid nucleotide {exc.args[0]!r}") from None


def rotate_encode(trits, seed: int = A) -> np.ndarray:
    """Encode trits as nucleotides, rotating away from the previous output.

    The seed is the imaginary predecessor of the first nucleotide, so the
    first output always differs from it.
    """
    trits = np.asarray(trits, dtype=np.int64)
    if trits.size and (trits.min() < 0 or trits.max() > 2):
        raise ValueError("trit values must be 0, 1 or 2")
    steps = np.cumsum(trits + 1)
    return ((seed + steps) % 4).astype(np.uint8)


def rotate_decode(nts, seed: int = A) -> np.ndarray:
    """Invert rotate_encode; repeated nucleotides decode as trit 0."""
    nts = np.asarray(nts, dtype=np.int64)
    if nts.size == 0:
        return np.zeros(0, dtype=np.uint8)
    prev = np.empty_like(nts)
    prev[0] = seed
    prev[1:] = nts[:-1]
    deltas = (nts - prev - 1) % 4
    return np.where(deltas == 3, 0, deltas).astype(np.uint8)
