"""End-to-end encode / perturb / decode orchestration and experiments.

Encoding turns an image into a strand pool in five stages: block transform,
per-segment entropy coding, byte-to-trit conversion, barrier insertion, and
strand assembly with a triplicated address index. Three schemes share the
stages and differ only in stream layout:

  IMG-DNA              DC and AC in separate strand sets, barriers on both
  NoBarrier-Separated  same split, no barriers (unbounded partitions)
  Raw-DNA              one interleaved stream, no barriers, one segment

Byte segments are block-aligned so a damaged segment tail corrupts a known
block range: every AC segment covers one block, DC segments a few blocks,
and Raw-DNA deliberately uses a single whole-image segment. Segment extents
live in the mapping sidecar (the error-free side channel), so the decoder
can carve the repaired trit stream back into segments no matter what the
noisy channel did to individual strands.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .barriers import BarrierConfig, insert_barriers, resync_decode
from .channel import ChannelConfig, perturb_pool
from .formats import MappingTable, SegmentRecord, StreamMap
from .jpeg import ZIGZAG, ImageMetadata, forward_transform, inverse_transform
from .metrics import barrier_overhead, ci90_half_width, encoding_density, ssim, write_csv
from .rotation import A, rotate_decode, seq_to_string, string_to_seq
from .strands import (
    STREAM_AC,
    STREAM_DC,
    StrandGeometry,
    assemble_strand,
    decode_index,
    default_primer_pair,
    disassemble_pool,
    index_width_for,
    validate_constraints,
)
from .streams import (
    HuffmanTable,
    build_tables,
    decode_ac_segment,
    decode_dc_segment,
    decode_interleaved_segment,
    encode_ac_segment,
    encode_dc_segment,
    encode_interleaved_segment,
    zigzag_flatten,
    zigzag_unflatten,
)
from .ternary import CODE_LENGTHS, bytes_to_trits, trits_to_bytes

SCHEME_IMG_DNA = "IMG-DNA"
SCHEME_RAW_DNA = "Raw-DNA"
SCHEME_NO_BARRIER = "NoBarrier-Separated"
SCHEMES = (SCHEME_IMG_DNA, SCHEME_RAW_DNA, SCHEME_NO_BARRIER)

DEFAULT_RATES = (0.001, 0.005, 0.01, 0.02)


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str = SCHEME_IMG_DNA
    quality: int = 75
    strand_len: int = 250
    dc_partition_len: int | None = 20
    ac_partition_len: int | None = 50
    barrier_window: int = 12
    dc_segment_blocks: int = 6
    seed: int = 0x5EED

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise PipelineError(f"unknown scheme {self.scheme!r}")
        if not 1 <= self.quality <= 100:
            raise PipelineError("quality must be in [1, 100]")
        if self.dc_segment_blocks < 1:
            raise PipelineError("dc_segment_blocks must be >= 1")
        self.stream_configs()  # fail fast on bad barrier parameters

    def stream_configs(self) -> dict[int, BarrierConfig]:
        """Barrier layout per stream id under this scheme."""
        none = BarrierConfig(partition_len=None, window=self.barrier_window)
        if self.scheme == SCHEME_RAW_DNA:
            return {STREAM_DC: none}
        if self.scheme == SCHEME_NO_BARRIER:
            return {STREAM_DC: none, STREAM_AC: none}
        return {
            STREAM_DC: BarrierConfig(
                self.dc_partition_len, self.barrier_window, trailing=True
            ),
            STREAM_AC: BarrierConfig(
                self.ac_partition_len, self.barrier_window, trailing=True
            ),
        }


@dataclass
class EncodedImage:
    """A strand pool plus everything the decoder gets on the side channel."""

    strands: list[np.ndarray]
    mapping: MappingTable
    metadata: ImageMetadata
    stream_trits: dict[int, np.ndarray]
    stream_payload_bits: dict[int, int]
    stream_barrier_nt: dict[int, int]
    dc_trit_ranges: list[tuple[int, int]] | None = None  # Raw-DNA only

    @property
    def payload_nt(self) -> int:
        return sum(t.size for t in self.stream_trits.values()) + sum(
            self.stream_barrier_nt.values()
        )

    @property
    def payload_bits(self) -> int:
        return sum(self.stream_payload_bits.values())

    @property
    def payload_density(self) -> float:
        return encoding_density(self.payload_bits, self.payload_nt)

    @property
    def strand_density(self) -> float:
        return encoding_density(self.payload_bits, sum(s.size for s in self.strands))

    def barrier_overhead_for(self, stream_id: int) -> float:
        trits = self.stream_trits.get(stream_id)
        if trits is None or trits.size == 0:
            return 0.0
        raw_bytes = self.metadata.width * self.metadata.height
        return barrier_overhead(
            self.stream_barrier_nt[stream_id],
            self.stream_payload_bits[stream_id],
            trits.size,
            raw_bytes,
        )

    def geometry(self) -> StrandGeometry:
        return _geometry_from_mapping(self.mapping)


def _geometry_from_mapping(mapping: MappingTable) -> StrandGeometry:
    return StrandGeometry(
        strand_len=mapping.strand_len,
        fwd_primer=string_to_seq(mapping.fwd_primer),
        rev_primer=string_to_seq(mapping.rev_primer),
        index_width=mapping.index_width,
    )


def _per_strand_trits(bc: BarrierConfig, capacity: int) -> int:
    if bc.partition_len is None:
        return capacity
    per = capacity // (bc.partition_len + 2)
    if per < 1:
        raise PipelineError(
            f"strand capacity {capacity} nt cannot hold one {bc.partition_len}-trit "
            "partition plus its marker"
        )
    return per * bc.partition_len


def _strand_count(total_trits: int, per_strand: int) -> int:
    return -(-total_trits // per_strand) if total_trits else 0


def _resolve_geometry(
    cfg: ExperimentConfig, totals: dict[int, int]
) -> tuple[StrandGeometry, dict[int, int]]:
    """Fixed-point search for the smallest self-consistent index width."""
    fwd, rev = default_primer_pair(seed=cfg.seed)
    stream_cfgs = cfg.stream_configs()
    width = 1
    while True:
        geom = StrandGeometry(
            strand_len=cfg.strand_len, fwd_primer=fwd, rev_primer=rev, index_width=width
        )
        counts = {
            sid: _strand_count(totals[sid], _per_strand_trits(stream_cfgs[sid], geom.capacity))
            for sid in totals
        }
        need = index_width_for(max(max(counts.values()), 1))
        if need <= width:
            return geom, counts
        width = need


def _segment_plan(block_count: int, cfg: ExperimentConfig) -> dict[int, list[tuple[int, int]]]:
    def chunks(step: int) -> list[tuple[int, int]]:
        return [(b, min(b + step, block_count)) for b in range(0, block_count, step)]

    if cfg.scheme == SCHEME_RAW_DNA:
        # one stream, one segment: the whole entropy-coded image as a unit,
        # exactly like storing the compressed file as an opaque byte string
        return {STREAM_DC: [(0, block_count)]}
    return {
        STREAM_DC: chunks(cfg.dc_segment_blocks),
        STREAM_AC: chunks(1),
    }


def encode_image(image: np.ndarray, cfg: ExperimentConfig) -> EncodedImage:
    blocks, meta = forward_transform(image, cfg.quality)
    flat = zigzag_flatten(blocks)
    dc_table, ac_table = build_tables(flat)
    meta.dc_code_lengths = dict(dc_table.lengths)
    meta.ac_code_lengths = dict(ac_table.lengths)

    plan = _segment_plan(meta.block_count, cfg)
    stream_cfgs = cfg.stream_configs()
    interleaved = cfg.scheme == SCHEME_RAW_DNA

    stream_trits: dict[int, np.ndarray] = {}
    stream_bits: dict[int, int] = {}
    segments: dict[int, list[SegmentRecord]] = {}
    dc_trit_ranges: list[tuple[int, int]] | None = [] if interleaved else None

    for sid in sorted(plan):
        chunks = []
        records = []
        byte_total = 0
        trit_total = 0
        for b0, b1 in plan[sid]:
            if interleaved:
                spans: list = []
                data = encode_interleaved_segment(flat[b0:b1], dc_table, ac_table, spans)
            elif sid == STREAM_DC:
                data = encode_dc_segment(flat[b0:b1, 0], dc_table)
            else:
                data = encode_ac_segment(flat[b0:b1, 1:], ac_table)
            trits = bytes_to_trits(data)
            records.append(SegmentRecord(b0, b1 - b0, len(data), trits.size))
            chunks.append(trits)
            byte_total += len(data)
            if interleaved:
                # nucleotide extents of the DC terms, for targeted injection
                cum = np.concatenate(
                    [[0], np.cumsum(CODE_LENGTHS[np.frombuffer(data, dtype=np.uint8)])]
                )
                for s_bit, e_bit in spans:
                    lo = int(cum[s_bit // 8])
                    hi = int(cum[min((e_bit + 7) // 8, len(data))])
                    dc_trit_ranges.append((trit_total + lo, trit_total + hi))
            trit_total += trits.size
        stream_trits[sid] = (
            np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.uint8)
        )
        stream_bits[sid] = 8 * byte_total
        segments[sid] = records

    geom, counts = _resolve_geometry(cfg, {s: t.size for s, t in stream_trits.items()})

    strands: list[np.ndarray] = []
    stream_maps: list[StreamMap] = []
    barrier_nt: dict[int, int] = {}
    for sid in sorted(stream_trits):
        bc = stream_cfgs[sid]
        per = _per_strand_trits(bc, geom.capacity)
        trits = stream_trits[sid]
        first_uid = len(strands)
        nts = 0
        for offset in range(counts[sid]):
            chunk = trits[offset * per : (offset + 1) * per]
            seq = insert_barriers(chunk, bc)
            nts += seq.barrier_nt_count
            strands.append(assemble_strand(geom, offset * 2 + sid, seq.nts))
        barrier_nt[sid] = nts
        stream_maps.append(
            StreamMap(
                stream_id=sid,
                partition_len=bc.partition_len,
                window=bc.window,
                trailing=bc.trailing,
                total_trits=trits.size,
                strand_count=counts[sid],
                first_uid=first_uid,
                segments=segments[sid],
            )
        )

    mapping = MappingTable(
        scheme=cfg.scheme,
        quality=cfg.quality,
        strand_len=cfg.strand_len,
        index_width=geom.index_width,
        fwd_primer=seq_to_string(geom.fwd_primer),
        rev_primer=seq_to_string(geom.rev_primer),
        pool_seed=cfg.seed,
        streams=stream_maps,
    )
    return EncodedImage(
        strands=strands,
        mapping=mapping,
        metadata=meta,
        stream_trits=stream_trits,
        stream_payload_bits=stream_bits,
        stream_barrier_nt=barrier_nt,
        dc_trit_ranges=dc_trit_ranges,
    )


# --------------------------------------------------------------------- decode


@dataclass
class DecodeResult:
    image: np.ndarray
    damaged_partitions: int = 0
    missing_strands: int = 0
    quarantined: int = 0
    duplicates: int = 0


def _normalize_pool(pool) -> list[list[np.ndarray]]:
    if isinstance(pool, dict):
        return [pool[uid] for uid in sorted(pool)]
    if pool and isinstance(pool[0], np.ndarray):
        return [[s] for s in pool]
    return list(pool)


def _strand_trit_layout(sm: StreamMap, capacity: int) -> tuple[BarrierConfig, int]:
    bc = BarrierConfig(
        partition_len=sm.partition_len, window=sm.window, trailing=sm.trailing
    )
    return bc, _per_strand_trits(bc, capacity)


def decode_pool(pool, mapping: MappingTable, meta: ImageMetadata) -> DecodeResult:
    """Reassemble an image from a (possibly noisy) strand pool."""
    geom = _geometry_from_mapping(mapping)
    counts = {sm.stream_id: sm.strand_count for sm in mapping.streams}
    dis = disassemble_pool(_normalize_pool(pool), geom, counts)

    dc_table = HuffmanTable(meta.dc_code_lengths)
    ac_table = HuffmanTable(meta.ac_code_lengths)
    quant_zig = meta.quant_table.ravel()[ZIGZAG]
    interleaved = mapping.scheme == SCHEME_RAW_DNA

    flat = np.zeros((meta.block_count, 64), dtype=np.int32)
    result = DecodeResult(image=None, quarantined=dis.quarantined, duplicates=dis.duplicates)

    for sm in mapping.streams:
        bc, per = _strand_trit_layout(sm, geom.capacity)
        slots = dis.streams[sm.stream_id]
        pieces = []
        for k in range(sm.strand_count):
            expected = min(per, sm.total_trits - k * per)
            payload = slots[k]
            if payload is None:
                result.missing_strands += 1
                pieces.append(np.zeros(expected, dtype=np.uint8))
                continue
            if bc.partition_len is None:
                trits = rotate_decode(payload, seed=A)
                if trits.size < expected:
                    trits = np.pad(trits, (0, expected - trits.size))
                pieces.append(trits[:expected])
            else:
                r = resync_decode(payload, bc, expected)
                result.damaged_partitions += r.damaged_count
                pieces.append(r.trits)
        trits = (
            np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.uint8)
        )

        pos = 0
        for seg in sm.segments:
            data = trits_to_bytes(trits[pos : pos + seg.trit_count], tolerant=True)
            pos += seg.trit_count
            b0 = seg.block_start
            b1 = b0 + seg.block_count
            if interleaved:
                vals, _ = decode_interleaved_segment(
                    data, dc_table, ac_table, seg.block_count, quant_zig
                )
                flat[b0:b1] = vals
            elif sm.stream_id == STREAM_DC:
                vals, _ = decode_dc_segment(
                    data, dc_table, seg.block_count, int(quant_zig[0])
                )
                flat[b0:b1, 0] = vals
            else:
                vals, _ = decode_ac_segment(
                    data, ac_table, seg.block_count, quant_zig
                )
                flat[b0:b1, 1:] = vals

    result.image = inverse_transform(zigzag_unflatten(flat), meta)
    return result


def reference_image(image: np.ndarray, quality: int = 75) -> np.ndarray:
    """The lossy-but-error-free reconstruction every run is scored against."""
    blocks, meta = forward_transform(image, quality)
    return inverse_transform(blocks, meta)


# ------------------------------------------------------------------- reports


@dataclass
class QualityReport:
    scheme: str
    error_rate: float
    ssim: float
    payload_density: float
    strand_density: float
    barrier_overhead_dc: float
    barrier_overhead_ac: float
    gc_fraction: float
    max_homopolymer: int
    quarantined: int = 0
    missing_strands: int = 0
    damaged_partitions: int = 0

    def summary(self) -> str:
        lines = [
            f"scheme               {self.scheme}",
            f"error rate           {self.error_rate:.4%}",
            f"ssim                 {self.ssim:.4f}",
            f"payload density      {self.payload_density:.4f} bits/nt",
            f"whole-strand density {self.strand_density:.4f} bits/nt",
            f"barrier overhead DC  {self.barrier_overhead_dc:.4%} of image bytes",
            f"barrier overhead AC  {self.barrier_overhead_ac:.4%} of image bytes",
            f"pool GC fraction     {self.gc_fraction:.4f}",
            f"max homopolymer      {self.max_homopolymer}",
            f"strands missing      {self.missing_strands} (+{self.quarantined} quarantined)",
            f"partitions damaged   {self.damaged_partitions}",
        ]
        return "\n".join(lines)


def run_pipeline(
    image: np.ndarray,
    cfg: ExperimentConfig,
    channel: ChannelConfig,
    channel_seed: int = 0,
    enc: EncodedImage | None = None,
) -> tuple[QualityReport, np.ndarray]:
    """Full encode → channel → decode cycle; returns (report, decoded image)."""
    if enc is None:
        enc = encode_image(image, cfg)
    noisy = perturb_pool(
        enc.strands, channel, channel_seed, protect=_primer_bounds(enc)
    )
    dec = decode_pool(noisy, enc.mapping, enc.metadata)
    reference = reference_image(image, cfg.quality)
    constraints = validate_constraints(enc.strands)
    report = QualityReport(
        scheme=cfg.scheme,
        error_rate=channel.rate,
        ssim=ssim(reference, dec.image),
        payload_density=enc.payload_density,
        strand_density=enc.strand_density,
        barrier_overhead_dc=enc.barrier_overhead_for(STREAM_DC),
        barrier_overhead_ac=enc.barrier_overhead_for(STREAM_AC),
        gc_fraction=constraints.gc_mean,
        max_homopolymer=constraints.max_homopolymer,
        quarantined=dec.quarantined,
        missing_strands=dec.missing_strands,
        damaged_partitions=dec.damaged_partitions,
    )
    return report, dec.image


def _primer_bounds(enc: EncodedImage) -> tuple[int, int]:
    geom = enc.geometry()
    return geom.fwd_len, geom.rev_len


def _trial_seed(*key: int) -> int:
    return int(np.random.SeedSequence(list(key)).generate_state(1)[0])


# -------------------------------------------------------------------- sweeps

SWEEP_HEADER = ["scheme", "error_rate", "mean_ssim", "ci90_half_width", "density"]


def run_sweep(
    images: list[np.ndarray],
    points: list[tuple[str, ExperimentConfig]],
    rates=DEFAULT_RATES,
    trials: int = 5,
    base_seed: int = 0xABC0,
    out_path=None,
) -> list[list]:
    """Mean SSIM per (configuration, error rate) over images x trials.

    Returns CSV rows; identical arguments always produce identical rows.
    """
    rows = []
    for pi, (label, cfg) in enumerate(points):
        encs = [encode_image(img, cfg) for img in images]
        refs = [reference_image(img, cfg.quality) for img in images]
        density = float(np.mean([e.payload_density for e in encs]))
        for ri, rate in enumerate(rates):
            channel = ChannelConfig(rate=rate)
            scores = []
            for ii, enc in enumerate(encs):
                for trial in range(trials):
                    seed = _trial_seed(base_seed, pi, ri, ii, trial)
                    noisy = perturb_pool(
                        enc.strands, channel, seed, protect=_primer_bounds(enc)
                    )
                    dec = decode_pool(noisy, enc.mapping, enc.metadata)
                    scores.append(ssim(refs[ii], dec.image))
            rows.append(
                [label, rate, float(np.mean(scores)), ci90_half_width(scores), density]
            )
    if out_path is not None:
        write_csv(out_path, SWEEP_HEADER, rows)
    return rows


# -------------------------------------------------- coefficient-class injection


def _payload_len(strand: np.ndarray, geom: StrandGeometry) -> int:
    return strand.size - geom.fwd_len - geom.rev_len - geom.index_len


def _target_positions(enc: EncodedImage, target: int) -> list[tuple[int, int]]:
    """(uid, absolute position) choices for errors aimed at one stream."""
    geom = enc.geometry()
    body = geom.fwd_len + geom.index_len
    out = []
    if enc.mapping.scheme != SCHEME_RAW_DNA:
        for sm in enc.mapping.streams:
            if sm.stream_id != target:
                continue
            for k in range(sm.strand_count):
                uid = sm.first_uid + k
                for p in range(_payload_len(enc.strands[uid], geom)):
                    out.append((uid, body + p))
        return out
    # interleaved payloads: map global trit positions through the DC extents
    sm = enc.mapping.streams[0]
    _, per = _strand_trit_layout(sm, geom.capacity)
    mask = np.zeros(sm.total_trits, dtype=bool)
    for lo, hi in enc.dc_trit_ranges:
        mask[lo:hi] = True
    want = mask if target == STREAM_DC else ~mask
    for t in np.flatnonzero(want):
        out.append((int(t) // per, body + int(t) % per))
    return out


def _inject(strands: list[np.ndarray], hits, rng) -> list[list[np.ndarray]]:
    """Apply (uid, position, kind) point errors; kinds: 0 sub, 1 ins, 2 del."""
    pool = [[s.copy()] for s in strands]
    by_uid: dict[int, list[tuple[int, int]]] = {}
    for uid, pos, kind in hits:
        by_uid.setdefault(uid, []).append((pos, kind))
    for uid, edits in by_uid.items():
        seq = pool[uid][0]
        for pos, kind in sorted(edits, reverse=True):
            if kind == 0:
                seq[pos] = (seq[pos] + rng.integers(1, 4)) % 4
            elif kind == 1:
                seq = np.insert(seq, pos + 1, rng.integers(0, 4))
            else:
                seq = np.delete(seq, pos)
        pool[uid][0] = seq
    return pool


ISOLATION_HEADER = ["scheme", "target", "error_rate", "mean_ssim", "ci90_half_width"]


def run_coefficient_isolation(
    images: list[np.ndarray],
    schemes=(SCHEME_IMG_DNA, SCHEME_NO_BARRIER, SCHEME_RAW_DNA),
    rates=(0.01,),
    trials: int = 5,
    base_seed: int = 0xD0C5,
    out_path=None,
    cfg: ExperimentConfig | None = None,
) -> list[list]:
    """Equal error budgets aimed at DC versus AC coefficients.

    The budget for both targets is rate x total payload nucleotides, so the
    comparison isolates which coefficient class the errors land in.
    """
    base = cfg or ExperimentConfig()
    rows = []
    for si, scheme in enumerate(schemes):
        scheme_cfg = replace(base, scheme=scheme)
        encs = [encode_image(img, scheme_cfg) for img in images]
        refs = [reference_image(img, scheme_cfg.quality) for img in images]
        targets = [(STREAM_DC, "dc"), (STREAM_AC, "ac")]
        positions = [
            [_target_positions(enc, t) for enc in encs] for t, _ in targets
        ]
        for ri, rate in enumerate(rates):
            for ti, (target, label) in enumerate(targets):
                scores = []
                for ii, enc in enumerate(encs):
                    total_payload = sum(
                        _payload_len(s, enc.geometry()) for s in enc.strands
                    )
                    budget = max(1, round(rate * total_payload))
                    choices = positions[ti][ii]
                    for trial in range(trials):
                        rng = np.random.default_rng(
                            np.random.SeedSequence(
                                [base_seed, si, ri, ti, ii, trial]
                            )
                        )
                        picks = rng.choice(
                            len(choices), size=min(budget, len(choices)), replace=False
                        )
                        kinds = rng.integers(0, 3, size=picks.size)
                        hits = [
                            (*choices[int(p)], int(k)) for p, k in zip(picks, kinds)
                        ]
                        noisy = _inject(enc.strands, hits, rng)
                        dec = decode_pool(noisy, enc.mapping, enc.metadata)
                        scores.append(ssim(refs[ii], dec.image))
                rows.append(
                    [scheme, label, rate, float(np.mean(scores)), ci90_half_width(scores)]
                )
    if out_path is not None:
        write_csv(out_path, ISOLATION_HEADER, rows)
    return rows


# ------------------------------------------------------- containment trials


@dataclass
class ContainmentStats:
    trials: int = 0
    within_two_partitions: int = 0
    confined_to_strand: int = 0
    damage_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def within_two_fraction(self) -> float:
        return self.within_two_partitions / self.trials if self.trials else 1.0

    @property
    def confined_fraction(self) -> float:
        return self.confined_to_strand / self.trials if self.trials else 1.0


def _partition_damage(got: np.ndarray, want: np.ndarray, pl: int | None) -> int:
    if want.size == 0:
        return 0
    if got.size != want.size:
        got = np.pad(got[: want.size], (0, max(want.size - got.size, 0)))
    diff = got != want
    if pl is None:
        return int(diff.any())
    n = -(-want.size // pl)
    return sum(1 for j in range(n) if diff[j * pl : (j + 1) * pl].any())


def run_containment(
    image: np.ndarray,
    cfg: ExperimentConfig | None = None,
    trials: int = 10_000,
    seed: int = 0xC2C2,
) -> ContainmentStats:
    """Single-error injections: how far does the damage spread?

    Each trial mutates one nucleotide (uniform position incl. primers and
    index, uniform type) in one strand, decodes that strand, and counts
    damaged partitions against the pristine trit stream. Misrouting to a
    different strand's slot counts as unconfined.
    """
    cfg = cfg or ExperimentConfig()
    enc = encode_image(image, cfg)
    geom = enc.geometry()
    limit = 2 * max(sm.strand_count for sm in enc.mapping.streams)
    layouts = {
        sm.stream_id: _strand_trit_layout(sm, geom.capacity)
        for sm in enc.mapping.streams
    }
    uid_map: dict[int, tuple[int, int]] = {}
    for sm in enc.mapping.streams:
        for k in range(sm.strand_count):
            uid_map[sm.first_uid + k] = (sm.stream_id, k)

    lengths = np.array([s.size for s in enc.strands], dtype=np.int64)
    cum = np.concatenate([[0], np.cumsum(lengths)])
    rng = np.random.default_rng(seed)
    stats = ContainmentStats(trials=trials)

    for _ in range(trials):
        flat_pos = int(rng.integers(0, cum[-1]))
        uid = int(np.searchsorted(cum, flat_pos, side="right")) - 1
        pos = flat_pos - int(cum[uid])
        kind = int(rng.integers(0, 3))
        strand = enc.strands[uid].copy()
        if kind == 0:
            strand[pos] = (strand[pos] + rng.integers(1, 4)) % 4
        elif kind == 1:
            strand = np.insert(strand, pos + 1, rng.integers(0, 4))
        else:
            strand = np.delete(strand, pos)

        sid, offset = uid_map[uid]
        bc, per = layouts[sid]
        total = next(
            sm.total_trits for sm in enc.mapping.streams if sm.stream_id == sid
        )
        expected = min(per, total - offset * per)
        want = enc.stream_trits[sid][offset * per : offset * per + expected]

        confined = True
        if strand.size <= geom.fwd_len + geom.rev_len + geom.index_len:
            damage = _partition_damage(np.zeros_like(want), want, bc.partition_len)
        else:
            body = strand[geom.fwd_len : strand.size - geom.rev_len]
            value = decode_index(
                body[: geom.index_len + 1], geom.index_width, geom.index_seed, limit
            )
            if value is None:
                # quarantined: the whole strand drops out
                damage = _partition_damage(
                    np.zeros_like(want), want, bc.partition_len
                )
            elif (value & 1, value >> 1) != (sid, offset):
                confined = False
                damage = _partition_damage(
                    np.zeros_like(want), want, bc.partition_len
                )
            else:
                payload = body[geom.index_len :]
                if bc.partition_len is None:
                    got = rotate_decode(payload, seed=A)
                else:
                    got = resync_decode(payload, bc, expected).trits
                damage = _partition_damage(got, want, bc.partition_len)

        stats.within_two_partitions += damage <= 2
        stats.confined_to_strand += confined
        stats.damage_histogram[damage] = stats.damage_histogram.get(damage, 0) + 1

    return stats
