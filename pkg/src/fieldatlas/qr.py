"""Offline dataset transfer as self-describing text frames.

Frame grammar (the interoperability contract, bit-exact):

    ULSP1|{transfer_id}|{index}|{total}|{checksum}|{chunk}

transfer_id and checksum are 8 lowercase hex chars; index and total are
decimal, 0 <= index < total; chunk is a slice of the base64 text of the
zlib-compressed canonical GeoJSON serialization. The checksum is the CRC32 of
the complete base64 text (ASCII), shared by all frames of one transfer and
checked before any decoding, so any corrupted character in any chunk is
caught as a checksum mismatch. Chunks are slices, not standalone base64:
only the concatenation in index order decodes.

Rendering frames as QR images is the publisher's and editor's concern; this
module is a pure text codec.
"""

from __future__ import annotations

import base64
import binascii
import os
import re
import zlib
from dataclasses import dataclass, field

from .errors import (
    ChecksumMismatchError,
    ChunkConflictError,
    DecompressError,
    FrameFormatError,
    QrError,
    TransferMismatchError,
)
from .model import UlspDataset
from .registry import FormatRegistry

MAGIC = "ULSP1"
MIN_CHUNK_CHARS = 64
DEFAULT_CHUNK_CHARS = 800
# frame overhead: magic 5 + transfer id 8 + checksum 8 + 5 pipes = 26, plus
# index/total digits; 40 covers transfers of up to a million frames.
HEADER_ALLOWANCE = 40

_HEX8 = re.compile(r"^[0-9a-f]{8}$")
_DECIMAL = re.compile(r"^[0-9]+$")
_CHUNK = re.compile(r"^[A-Za-z0-9+/=]+$")


@dataclass(frozen=True)
class QrFrame:
    transfer_id: str
    index: int
    total: int
    checksum: str
    chunk: str

    def text(self) -> str:
        return (f"{MAGIC}|{self.transfer_id}|{self.index}|{self.total}"
                f"|{self.checksum}|{self.chunk}")


def _crc32_hex(text: str) -> str:
    return f"{zlib.crc32(text.encode('ascii')) & 0xFFFFFFFF:08x}"


def encode_frames(ds: UlspDataset, max_chunk_chars: int = DEFAULT_CHUNK_CHARS,
                  reg: FormatRegistry | None = None) -> list[str]:
    """Split a dataset into frame texts, in index order.

    The payload is the canonical serialization (after canonicalization),
    zlib-compressed at maximum level. The transfer id is random per call;
    everything else is deterministic, so two calls differ only in that id.
    """
    from .export import serialize_geojson
    from .schema import canonicalize

    if max_chunk_chars < MIN_CHUNK_CHARS:
        raise ValueError(f"max_chunk_chars must be at least {MIN_CHUNK_CHARS}")
    payload = serialize_geojson(canonicalize(ds), reg)
    b64 = base64.b64encode(zlib.compress(payload, 9)).decode("ascii")
    checksum = _crc32_hex(b64)
    transfer_id = os.urandom(4).hex()
    chunks = [b64[i:i + max_chunk_chars] for i in range(0, len(b64), max_chunk_chars)]
    total = len(chunks)
    return [f"{MAGIC}|{transfer_id}|{index}|{total}|{checksum}|{chunk}"
            for index, chunk in enumerate(chunks)]


def decode_frame(text: str) -> QrFrame:
    """Parse one frame text, rejecting anything outside the grammar.

    Errors name the offending part and its character position. The checksum
    is carried, not verified here; verification happens on assembly, once the
    full payload text is known.
    """
    parts = text.split("|")
    if len(parts) != 6:
        raise FrameFormatError(
            f"frame must have 6 pipe-delimited parts, got {len(parts)}",
            part="frame", position=0)
    positions = []
    offset = 0
    for part in parts:
        positions.append(offset)
        offset += len(part) + 1

    magic, transfer_id, index_text, total_text, checksum, chunk = parts
    if magic != MAGIC:
        raise FrameFormatError(f"bad magic {magic!r}, expected {MAGIC!r}",
                               part="magic", position=positions[0])
    if not _HEX8.match(transfer_id):
        raise FrameFormatError("transfer id must be 8 lowercase hex chars",
                               part="transfer_id", position=positions[1])
    if not _DECIMAL.match(index_text):
        raise FrameFormatError(f"index must be a decimal integer, got {index_text!r}",
                               part="index", position=positions[2])
    if not _DECIMAL.match(total_text):
        raise FrameFormatError(f"total must be a decimal integer, got {total_text!r}",
                               part="total", position=positions[3])
    index = int(index_text)
    total = int(total_text)
    if total < 1:
        raise FrameFormatError("total must be at least 1",
                               part="total", position=positions[3])
    if index >= total:
        raise FrameFormatError(f"index {index} out of range for total {total}",
                               part="index", position=positions[2])
    if not _HEX8.match(checksum):
        raise FrameFormatError("checksum must be 8 lowercase hex chars",
                               part="checksum", position=positions[4])
    if not chunk:
        raise FrameFormatError("chunk must not be empty",
                               part="chunk", position=positions[5])
    if not _CHUNK.match(chunk):
        raise FrameFormatError("chunk contains characters outside the base64 alphabet",
                               part="chunk", position=positions[5])
    return QrFrame(transfer_id=transfer_id, index=index, total=total,
                   checksum=checksum, chunk=chunk)


@dataclass
class MissingReport:
    """Assembly outcome when frames are still missing."""

    transfer_id: str
    total: int
    missing: list[int] = field(default_factory=list)


class AssemblyState:
    """Collects frames of one transfer; single-owner session object."""

    def __init__(self):
        self.transfer_id: str | None = None
        self.total: int | None = None
        self.checksum: str | None = None
        self.received: dict[int, str] = {}

    def add(self, frame: QrFrame) -> None:
        if self.transfer_id is None:
            self.transfer_id = frame.transfer_id
            self.total = frame.total
            self.checksum = frame.checksum
        elif frame.transfer_id != self.transfer_id:
            raise TransferMismatchError(
                f"frame belongs to transfer {frame.transfer_id}, "
                f"assembling {self.transfer_id}")
        elif frame.total != self.total or frame.checksum != self.checksum:
            raise TransferMismatchError(
                f"frame disagrees on total/checksum for transfer {self.transfer_id}")
        if frame.index in self.received:
            if self.received[frame.index] != frame.chunk:
                raise ChunkConflictError(
                    f"two different chunks claim index {frame.index}")
            return
        self.received[frame.index] = frame.chunk

    def missing(self) -> list[int]:
        if self.total is None:
            return []
        return sorted(set(range(self.total)) - set(self.received))

    @property
    def complete(self) -> bool:
        return self.total is not None and not self.missing()

    def payload_text(self) -> str:
        return "".join(self.received[i] for i in range(self.total or 0))

    def result(self, reg: FormatRegistry | None = None) -> UlspDataset:
        from .ingest import parse_geojson

        if not self.complete:
            raise QrError("transfer is incomplete; check missing() first")
        text = self.payload_text()
        actual = _crc32_hex(text)
        if actual != self.checksum:
            raise ChecksumMismatchError(expected=self.checksum, actual=actual)
        try:
            compressed = base64.b64decode(text, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise DecompressError(f"payload is not valid base64: {exc}") from exc
        try:
            payload = zlib.decompress(compressed)
        except zlib.error as exc:
            raise DecompressError(f"payload does not decompress: {exc}") from exc
        return parse_geojson(payload, reg)


def assemble(frames: list[QrFrame],
             reg: FormatRegistry | None = None) -> UlspDataset | MissingReport:
    """Rebuild a dataset from frames in any order.

    Returns a MissingReport naming absent indices when the transfer is
    incomplete; otherwise verifies the checksum, inflates and parses.
    """
    if not frames:
        raise QrError("no frames to assemble")
    state = AssemblyState()
    for frame in frames:
        state.add(frame)
    if not state.complete:
        return MissingReport(transfer_id=state.transfer_id or "",
                             total=state.total or 0, missing=state.missing())
    return state.result(reg)
