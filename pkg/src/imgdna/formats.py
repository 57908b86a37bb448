"""Persistent file formats.

Three artifacts travel together:
  * pool file      - FASTA-like text, one record per strand read
  * mapping table  - binary sidecar: geometry plus per-stream layout
  * image metadata - binary sidecar: dimensions, quant table, code lengths

The sidecars model the error-free side channel; the pool file is the part
exposed to the noisy channel. All binary fields are little-endian and
length-prefixed so the files stay self-describing.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass, field

import numpy as np

from .jpeg import ImageMetadata
from .rotation import seq_to_string, string_to_seq

MAPPING_MAGIC = b"IDNM"
METADATA_MAGIC = b"IDNI"
FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------- pool file

_HEADER_RE = re.compile(r"^>s(\d+)(?:\s+copy=(\d+))?\s*$")


def write_pool(path, strands) -> None:
    """Write strands as FASTA-like records.

    Accepts either a list of sequences (one synthesis per strand id) or a
    list of copy lists (a sequenced pool with several reads per strand).
    """
    with open(path, "w", encoding="ascii") as fh:
        for uid, entry in enumerate(strands):
            copies = entry if isinstance(entry, list) else [entry]
            for copy_idx, seq in enumerate(copies):
                fh.write(f">s{uid} copy={copy_idx}\n")
                text = seq_to_string(seq)
                for at in range(0, len(text), 80):
                    fh.write(text[at : at + 80] + "\n")


def read_pool(path) -> dict[int, list[np.ndarray]]:
    """Read a pool file back into {strand id: [copies in copy order]}."""
    groups: dict[int, dict[int, np.ndarray]] = {}
    uid = copy_idx = None
    chunks: list[str] = []

    def flush():
        if uid is None:
            return
        if not chunks:
            raise FormatError(f"strand s{uid} has no sequence")
        seq = string_to_seq("".join(chunks))
        slot = groups.setdefault(uid, {})
        if copy_idx in slot:
            raise FormatError(f"duplicate record for s{uid} copy={copy_idx}")
        slot[copy_idx] = seq

    with open(path, "r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith(">"):
                flush()
                m = _HEADER_RE.match(line)
                if not m:
                    raise FormatError(f"line {line_no}: bad record header {line!r}")
                uid = int(m.group(1))
                copy_idx = int(m.group(2) or 0)
                chunks = []
            else:
                if uid is None:
                    raise FormatError(f"line {line_no}: sequence before any header")
                chunks.append(line.strip())
    flush()
    return {u: [seqs[k] for k in sorted(seqs)] for u, seqs in groups.items()}


# ------------------------------------------------------------ mapping table


@dataclass
class SegmentRecord:
    """One independently decodable byte segment inside a stream."""

    block_start: int
    block_count: int
    byte_count: int
    trit_count: int


@dataclass
class StreamMap:
    stream_id: int  # 0 = DC (or the single interleaved stream), 1 = AC
    partition_len: int | None
    window: int
    trailing: bool
    total_trits: int
    strand_count: int
    first_uid: int
    segments: list[SegmentRecord] = field(default_factory=list)


@dataclass
class MappingTable:
    scheme: str
    quality: int
    strand_len: int
    index_width: int
    fwd_primer: str
    rev_primer: str
    pool_seed: int
    streams: list[StreamMap] = field(default_factory=list)


def _pack_str(value: str) -> bytes:
    raw = value.encode("ascii")
    if len(raw) > 255:
        raise FormatError("string field too long")
    return struct.pack("<B", len(raw)) + raw


class _Cursor:
    def __init__(self, data: bytes, label: str):
        self.data = data
        self.pos = 0
        self.label = label

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise FormatError(f"{self.label}: truncated file")
        out = struct.unpack_from(fmt, self.data, self.pos)
        self.pos = size + self.pos
        return out if len(out) > 1 else out[0]

    def take_str(self) -> str:
        n = self.take("<B")
        if self.pos + n > len(self.data):
            raise FormatError(f"{self.label}: truncated string")
        raw = self.data[self.pos : self.pos + n]
        self.pos += n
        return raw.decode("ascii")

    def done(self):
        if self.pos != len(self.data):
            raise FormatError(f"{self.label}: {len(self.data) - self.pos} trailing bytes")


def write_mapping(path, table: MappingTable) -> None:
    out = bytearray()
    out += MAPPING_MAGIC
    out += struct.pack("<H", FORMAT_VERSION)
    out += _pack_str(table.scheme)
    out += struct.pack(
        "<HIH", table.quality, table.strand_len, table.index_width
    )
    out += _pack_str(table.fwd_primer)
    out += _pack_str(table.rev_primer)
    out += struct.pack("<Q", table.pool_seed)
    out += struct.pack("<B", len(table.streams))
    for sm in table.streams:
        out += struct.pack(
            "<BIIBQII",
            sm.stream_id,
            sm.partition_len or 0,
            sm.window,
            1 if sm.trailing else 0,
            sm.total_trits,
            sm.strand_count,
            sm.first_uid,
        )
        out += struct.pack("<I", len(sm.segments))
        for seg in sm.segments:
            out += struct.pack(
                "<IIII", seg.block_start, seg.block_count, seg.byte_count, seg.trit_count
            )
    with open(path, "wb") as fh:
        fh.write(out)


def read_mapping(path) -> MappingTable:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAPPING_MAGIC:
        raise FormatError("not a mapping table file")
    cur = _Cursor(data[4:], "mapping table")
    version = cur.take("<H")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported mapping version {version}")
    scheme = cur.take_str()
    quality, strand_len, index_width = cur.take("<HIH")
    fwd = cur.take_str()
    rev = cur.take_str()
    pool_seed = cur.take("<Q")
    table = MappingTable(scheme, quality, strand_len, index_width, fwd, rev, pool_seed)
    for _ in range(cur.take("<B")):
        sid, pl, window, trailing, total_trits, strand_count, first_uid = cur.take(
            "<BIIBQII"
        )
        sm = StreamMap(
            stream_id=sid,
            partition_len=pl or None,
            window=window,
            trailing=bool(trailing),
            total_trits=total_trits,
            strand_count=strand_count,
            first_uid=first_uid,
        )
        for _ in range(cur.take("<I")):
            sm.segments.append(SegmentRecord(*cur.take("<IIII")))
        table.streams.append(sm)
    cur.done()
    return table


# ------------------------------------------------------------ image metadata


def _pack_lengths(lengths: dict[int, int]) -> bytes:
    out = struct.pack("<H", len(lengths))
    for sym in sorted(lengths):
        out += struct.pack("<HB", sym, lengths[sym])
    return out


def write_metadata(path, meta: ImageMetadata) -> None:
    if meta.dc_code_lengths is None or meta.ac_code_lengths is None:
        raise FormatError("metadata is missing entropy code lengths")
    out = bytearray()
    out += METADATA_MAGIC
    out += struct.pack("<H", FORMAT_VERSION)
    out += struct.pack("<II", meta.width, meta.height)
    out += struct.pack("<64H", *meta.quant_table.ravel().tolist())
    out += struct.pack("<I", meta.block_count)
    out += _pack_lengths(meta.dc_code_lengths)
    out += _pack_lengths(meta.ac_code_lengths)
    with open(path, "wb") as fh:
        fh.write(out)


def read_metadata(path) -> ImageMetadata:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != METADATA_MAGIC:
        raise FormatError("not an image metadata file")
    cur = _Cursor(data[4:], "image metadata")
    version = cur.take("<H")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported metadata version {version}")
    width, height = cur.take("<II")
    quant = np.array(cur.take("<64H"), dtype=np.int64).reshape(8, 8)
    block_count = cur.take("<I")

    def lengths() -> dict[int, int]:
        return dict(cur.take("<HB") for _ in range(cur.take("<H")))

    dc = lengths()
    ac = lengths()
    cur.done()
    return ImageMetadata(
        width=width,
        height=height,
        quant_table=quant,
        block_count=block_count,
        dc_code_lengths=dc,
        ac_code_lengths=ac,
    )
