"""Built-in synthetic test corpus.

Deterministic grayscale images used by the demos and the acceptance
harness. Each image is a hard two-level plateau field (dark regions near
43, bright regions near 213) overlaid with a handful of oriented cosine
gratings and light grain. The plateau scale is one to three blocks so
brightness carries real structure, while the gratings spread entropy
across many small AC coefficients without inflating per-block variance.
"""

from __future__ import annotations

import numpy as np

CORPUS_SEED = 0x1C0B

__all__ = ["CORPUS_SEED", "corpus_image", "build_corpus"]


def _coords(height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    ys = np.arange(height, dtype=np.float64)[:, None]
    xs = np.arange(width, dtype=np.float64)[None, :]
    return ys, xs


def _plateau_sines(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    """Two-level field from the sign of a product of sines."""
    ys, xs = _coords(height, width)
    lam1 = rng.uniform(12.0, 22.0)
    lam2 = rng.uniform(13.0, 24.0)
    ph1 = rng.uniform(0.0, 2.0 * np.pi)
    ph2 = rng.uniform(0.0, 2.0 * np.pi)
    wave = np.sin(2.0 * np.pi * xs / lam1 + ph1) * np.sin(2.0 * np.pi * ys / lam2 + ph2)
    return np.tanh(6.0 * wave)


def _diagonal_bands(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    ys, xs = _coords(height, width)
    theta = rng.uniform(0.15, 1.4)
    lam = rng.uniform(11.0, 20.0)
    u = xs * np.cos(theta) + ys * np.sin(theta)
    return np.tanh(7.0 * np.sin(2.0 * np.pi * u / lam + rng.uniform(0.0, 2.0 * np.pi)))


def _blob_field(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    """Bright blobs on a dark ground, hardened to two levels."""
    ys, xs = _coords(height, width)
    field = np.full((height, width), -1.2)
    count = rng.integers(10, 16)
    for _ in range(count):
        cy = rng.uniform(0.0, height)
        cx = rng.uniform(0.0, width)
        r = rng.uniform(7.0, 14.0)
        field += 2.6 * np.exp(-(((ys - cy) ** 2 + (xs - cx) ** 2) / (2.0 * r * r)))
    return np.tanh(3.0 * field)


def _plateau_tiles(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    """Random checker-like tiles, cell edges offset from the block grid."""
    cell = int(rng.integers(10, 17))
    gh = height // cell + 2
    gw = width // cell + 2
    coarse = np.where(rng.random((gh, gw)) < 0.5, -1.0, 1.0)
    tiled = np.kron(coarse, np.ones((cell, cell)))
    oy = int(rng.integers(0, cell))
    ox = int(rng.integers(0, cell))
    return tiled[oy : oy + height, ox : ox + width]


def _hard_ramps(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    ys, xs = _coords(height, width)
    lam = rng.uniform(14.0, 26.0)
    theta = rng.uniform(0.0, np.pi)
    u = (xs * np.cos(theta) + ys * np.sin(theta)) / lam
    saw = 2.0 * (u - np.floor(u)) - 1.0
    return np.tanh(5.0 * (0.8 * saw + 0.4 * np.sin(2.0 * np.pi * u * 0.5)))


_FIELDS = (_plateau_sines, _diagonal_bands, _blob_field, _plateau_tiles, _hard_ramps)


def _gratings(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    """Oriented cosine gratings split across the quantizer's cheap bands."""
    ys, xs = _coords(height, width)
    tex = np.zeros((height, width))
    # (count, period range, amplitude range); periods in pixels
    bands = (
        (2, (9.0, 16.0), (18.0, 26.0)),
        (5, (2.9, 5.2), (14.0, 20.0)),
        (2, (2.1, 2.7), (8.0, 12.0)),
    )
    for count, (p_lo, p_hi), (a_lo, a_hi) in bands:
        for _ in range(count):
            period = rng.uniform(p_lo, p_hi)
            theta = rng.uniform(0.0, np.pi)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            amp = rng.uniform(a_lo, a_hi)
            u = xs * np.cos(theta) + ys * np.sin(theta)
            tex += amp * np.cos(2.0 * np.pi * u / period + phase)
    return tex


def corpus_image(idx: int, seed: int = CORPUS_SEED) -> np.ndarray:
    """Deterministic corpus member `idx` as a uint8 grayscale array."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, idx]))
    if idx == 7:
        height, width = 130, 140
    elif idx == 15:
        height, width = 136, 120
    else:
        height, width = 128, 128
    amp = rng.uniform(80.0, 90.0)
    field = _FIELDS[idx % len(_FIELDS)](rng, height, width)
    tex = _gratings(rng, height, width)
    grain = rng.normal(0.0, rng.uniform(58.0, 68.0), size=(height, width))
    img = 128.0 + amp * field + tex + grain
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


def build_corpus(count: int = 20, seed: int = CORPUS_SEED) -> list[np.ndarray]:
    return [corpus_image(i, seed) for i in range(count)]
