"""QR symbol generation: byte mode, versions 1-40, four EC levels, PNG output.

Self-contained implementation of the symbol construction pipeline:
Reed-Solomon over GF(256) with the 0x11D polynomial, block interleaving,
mask selection by penalty score, BCH-protected format and version fields.
Capacity/EC parameters are stored as (ec codewords per block, block count);
the per-block data sizes follow from the symbol's total codeword count, which
is computed from the module layout rather than transcribed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache

from PIL import Image

from .errors import QrError

EC_LEVELS = ("L", "M", "Q", "H")
_EC_BITS = {"L": 0b01, "M": 0b00, "Q": 0b11, "H": 0b10}
_EC_INDEX = {"L": 0, "M": 1, "Q": 2, "H": 3}

# (ec codewords per block, number of blocks) for L, M, Q, H per version.
_EC_PARAMS = (
    ((7, 1), (10, 1), (13, 1), (17, 1)),        # 1
    ((10, 1), (16, 1), (22, 1), (28, 1)),       # 2
    ((15, 1), (26, 1), (18, 2), (22, 2)),       # 3
    ((20, 1), (18, 2), (26, 2), (16, 4)),       # 4
    ((26, 1), (24, 2), (18, 4), (22, 4)),       # 5
    ((18, 2), (16, 4), (24, 4), (28, 4)),       # 6
    ((20, 2), (18, 4), (18, 6), (26, 5)),       # 7
    ((24, 2), (22, 4), (22, 6), (26, 6)),       # 8
    ((30, 2), (22, 5), (20, 8), (24, 8)),       # 9
    ((18, 4), (26, 5), (24, 8), (28, 8)),       # 10
    ((20, 4), (30, 5), (28, 8), (24, 11)),      # 11
    ((24, 4), (22, 8), (26, 10), (28, 11)),     # 12
    ((26, 4), (22, 9), (24, 12), (22, 16)),     # 13
    ((30, 4), (24, 9), (20, 16), (24, 16)),     # 14
    ((22, 6), (24, 10), (30, 12), (24, 18)),    # 15
    ((24, 6), (28, 10), (24, 17), (30, 16)),    # 16
    ((28, 6), (28, 11), (28, 16), (28, 19)),    # 17
    ((30, 6), (26, 13), (28, 18), (28, 21)),    # 18
    ((28, 7), (26, 14), (26, 21), (26, 25)),    # 19
    ((28, 8), (26, 16), (30, 20), (28, 25)),    # 20
    ((28, 8), (26, 17), (28, 23), (30, 25)),    # 21
    ((28, 9), (28, 17), (30, 23), (24, 34)),    # 22
    ((30, 9), (28, 18), (30, 25), (30, 30)),    # 23
    ((30, 10), (28, 20), (30, 27), (30, 32)),   # 24
    ((26, 12), (28, 21), (30, 29), (30, 35)),   # 25
    ((28, 12), (28, 23), (28, 34), (30, 37)),   # 26
    ((30, 12), (28, 25), (30, 34), (30, 40)),   # 27
    ((30, 13), (28, 26), (30, 35), (30, 42)),   # 28
    ((30, 14), (28, 28), (30, 38), (30, 45)),   # 29
    ((30, 15), (28, 29), (30, 40), (30, 48)),   # 30
    ((30, 16), (28, 31), (30, 43), (30, 51)),   # 31
    ((30, 17), (28, 33), (30, 45), (30, 54)),   # 32
    ((30, 18), (28, 35), (30, 48), (30, 57)),   # 33
    ((30, 19), (28, 37), (30, 51), (30, 60)),   # 34
    ((30, 19), (28, 38), (30, 53), (30, 63)),   # 35
    ((30, 20), (28, 40), (30, 56), (30, 66)),   # 36
    ((30, 21), (28, 43), (30, 59), (30, 70)),   # 37
    ((30, 22), (28, 45), (30, 62), (30, 74)),   # 38
    ((30, 24), (28, 47), (30, 65), (30, 77)),   # 39
    ((30, 25), (28, 49), (30, 68), (30, 81)),   # 40
)

# Alignment pattern center coordinates per version (version 1 has none).
_ALIGNMENT = (
    (), (6, 18), (6, 22), (6, 26), (6, 30), (6, 34),
    (6, 22, 38), (6, 24, 42), (6, 26, 46), (6, 28, 50), (6, 30, 54),
    (6, 32, 58), (6, 34, 62), (6, 26, 46, 66), (6, 26, 48, 70),
    (6, 26, 50, 74), (6, 30, 54, 78), (6, 30, 56, 82), (6, 30, 58, 86),
    (6, 34, 62, 90), (6, 28, 50, 72, 94), (6, 26, 50, 74, 98),
    (6, 30, 54, 78, 102), (6, 28, 54, 80, 106), (6, 32, 58, 84, 110),
    (6, 30, 58, 86, 114), (6, 34, 62, 90, 118), (6, 26, 50, 74, 98, 122),
    (6, 30, 54, 78, 102, 126), (6, 26, 52, 78, 104, 130),
    (6, 30, 56, 82, 108, 134), (6, 34, 60, 86, 112, 138),
    (6, 30, 58, 86, 114, 142), (6, 34, 62, 90, 118, 146),
    (6, 30, 54, 78, 102, 126, 150), (6, 24, 50, 76, 102, 128, 154),
    (6, 28, 54, 80, 106, 132, 158), (6, 32, 58, 84, 110, 136, 162),
    (6, 26, 54, 82, 110, 138, 166), (6, 30, 58, 86, 114, 142, 170),
)

_FORMAT_GEN = 0b10100110111   # BCH(15,5)
_FORMAT_MASK = 0b101010000010010
_VERSION_GEN = 0x1F25         # BCH(18,6)

# GF(256) log/antilog tables for the 0x11D field.
_EXP = [0] * 512
_LOG = [0] * 256
_value = 1
for _i in range(255):
    _EXP[_i] = _value
    _LOG[_value] = _i
    _value <<= 1
    if _value & 0x100:
        _value ^= 0x11D
for _i in range(255, 512):
    _EXP[_i] = _EXP[_i - 255]


def _gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


@lru_cache(maxsize=None)
def _generator_poly(n: int) -> tuple[int, ...]:
    poly = [1]
    for i in range(n):
        factor = (1, _EXP[i])  # x + a^i, highest degree first
        out = [0] * (len(poly) + 1)
        for j, c in enumerate(poly):
            out[j] ^= _gf_mul(c, factor[0])
            out[j + 1] ^= _gf_mul(c, factor[1])
        poly = out
    return tuple(poly)


def _rs_ec(data: bytes, n: int) -> bytes:
    gen = _generator_poly(n)
    rem = list(data) + [0] * n
    for i in range(len(data)):
        factor = rem[i]
        if factor:
            for j in range(1, len(gen)):
                rem[i + j] ^= _gf_mul(gen[j], factor)
    return bytes(rem[len(data):])


@dataclass(frozen=True)
class _Layout:
    size: int
    modules: tuple          # function module values, row-major tuples
    is_function: tuple      # includes reserved format/version cells
    positions: tuple        # data cell coordinates in placement order
    total_codewords: int
    remainder_bits: int


def _place_finder(modules, is_function, row0: int, col0: int, size: int) -> None:
    for dr in range(-1, 8):
        for dc in range(-1, 8):
            r, c = row0 + dr, col0 + dc
            if not (0 <= r < size and 0 <= c < size):
                continue
            inside = 0 <= dr <= 6 and 0 <= dc <= 6
            dark = inside and (dr in (0, 6) or dc in (0, 6)
                               or (2 <= dr <= 4 and 2 <= dc <= 4))
            modules[r][c] = dark
            is_function[r][c] = True


@lru_cache(maxsize=None)
def _layout(version: int) -> _Layout:
    size = 17 + 4 * version
    modules = [[False] * size for _ in range(size)]
    is_function = [[False] * size for _ in range(size)]

    _place_finder(modules, is_function, 0, 0, size)
    _place_finder(modules, is_function, 0, size - 7, size)
    _place_finder(modules, is_function, size - 7, 0, size)

    centers = _ALIGNMENT[version - 1]
    finder_corners = {(6, 6), (6, size - 7), (size - 7, 6)}
    for r in centers:
        for c in centers:
            if (r, c) in finder_corners:
                continue
            for dr in range(-2, 3):
                for dc in range(-2, 3):
                    modules[r + dr][c + dc] = max(abs(dr), abs(dc)) != 1
                    is_function[r + dr][c + dc] = True

    for i in range(8, size - 8):
        if not is_function[6][i]:
            modules[6][i] = i % 2 == 0
            is_function[6][i] = True
        if not is_function[i][6]:
            modules[i][6] = i % 2 == 0
            is_function[i][6] = True

    modules[size - 8][8] = True  # dark module
    is_function[size - 8][8] = True

    for c in list(range(0, 6)) + [7, 8]:  # format areas, filled per mask
        is_function[8][c] = True
    for r in list(range(0, 6)) + [7, 8]:
        is_function[r][8] = True
    for r in range(size - 7, size):
        is_function[r][8] = True
    for c in range(size - 8, size):
        is_function[8][c] = True

    if version >= 7:
        for i in range(18):
            is_function[size - 11 + i % 3][i // 3] = True
            is_function[i // 3][size - 11 + i % 3] = True

    positions = []
    col = size - 1
    upward = True
    while col > 0:
        if col == 6:
            col -= 1
        rows = range(size - 1, -1, -1) if upward else range(size)
        for row in rows:
            for c in (col, col - 1):
                if not is_function[row][c]:
                    positions.append((row, c))
        upward = not upward
        col -= 2

    data_bits = len(positions)
    return _Layout(
        size=size,
        modules=tuple(tuple(row) for row in modules),
        is_function=tuple(tuple(row) for row in is_function),
        positions=tuple(positions),
        total_codewords=data_bits // 8,
        remainder_bits=data_bits % 8,
    )


def block_structure(version: int, level: str) -> tuple[int, list[int]]:
    """(ec codewords per block, data codewords of each block)."""
    ec_per_block, blocks = _EC_PARAMS[version - 1][_EC_INDEX[level]]
    total = _layout(version).total_codewords
    data_total = total - ec_per_block * blocks
    base = data_total // blocks
    longer = data_total % blocks
    return ec_per_block, [base] * (blocks - longer) + [base + 1] * longer


def data_capacity(version: int, level: str) -> int:
    """Byte-mode capacity in bytes."""
    _, sizes = block_structure(version, level)
    count_bits = 8 if version <= 9 else 16
    return (sum(sizes) * 8 - 4 - count_bits) // 8


def _choose_version(nbytes: int, level: str, min_version: int = 1) -> int:
    for version in range(min_version, 41):
        if data_capacity(version, level) >= nbytes:
            return version
    raise QrError(f"data too long for any QR version at level {level}: {nbytes} bytes")


def _build_codewords(data: bytes, version: int, level: str) -> bytes:
    ec_per_block, sizes = block_structure(version, level)
    capacity = sum(sizes)

    bits: list[int] = []

    def push(value: int, width: int) -> None:
        for shift in range(width - 1, -1, -1):
            bits.append((value >> shift) & 1)

    push(0b0100, 4)  # byte mode
    push(len(data), 8 if version <= 9 else 16)
    for byte in data:
        push(byte, 8)
    if len(bits) > capacity * 8:
        raise QrError("internal: data does not fit the chosen version")
    push(0, min(4, capacity * 8 - len(bits)))  # terminator
    if len(bits) % 8:
        push(0, 8 - len(bits) % 8)
    codewords = bytearray(
        sum(bit << (7 - j) for j, bit in enumerate(bits[i:i + 8]))
        for i in range(0, len(bits), 8))
    pad = (0xEC, 0x11)
    for i in range(capacity - len(codewords)):
        codewords.append(pad[i % 2])

    data_blocks: list[bytes] = []
    offset = 0
    for size in sizes:
        data_blocks.append(bytes(codewords[offset:offset + size]))
        offset += size
    ec_blocks = [_rs_ec(block, ec_per_block) for block in data_blocks]

    out = bytearray()
    for i in range(max(sizes)):
        for block in data_blocks:
            if i < len(block):
                out.append(block[i])
    for i in range(ec_per_block):
        for block in ec_blocks:
            out.append(block[i])
    return bytes(out)


_MASKS = (
    lambda r, c: (r + c) % 2 == 0,
    lambda r, c: r % 2 == 0,
    lambda r, c: c % 3 == 0,
    lambda r, c: (r + c) % 3 == 0,
    lambda r, c: (r // 2 + c // 3) % 2 == 0,
    lambda r, c: (r * c) % 2 + (r * c) % 3 == 0,
    lambda r, c: ((r * c) % 2 + (r * c) % 3) % 2 == 0,
    lambda r, c: ((r + c) % 2 + (r * c) % 3) % 2 == 0,
)


def _format_value(level: str, mask: int) -> int:
    data = (_EC_BITS[level] << 3) | mask
    rem = data << 10
    for bit in range(14, 9, -1):
        if rem & (1 << bit):
            rem ^= _FORMAT_GEN << (bit - 10)
    return ((data << 10) | rem) ^ _FORMAT_MASK


def _version_value(version: int) -> int:
    rem = version << 12
    for bit in range(17, 11, -1):
        if rem & (1 << bit):
            rem ^= _VERSION_GEN << (bit - 12)
    return (version << 12) | rem


def _write_format(matrix, size: int, level: str, mask: int) -> None:
    value = _format_value(level, mask)

    def bit(i: int) -> bool:  # i counts down from the MSB (b14)
        return bool((value >> i) & 1)

    coords_a = [(8, 0), (8, 1), (8, 2), (8, 3), (8, 4), (8, 5), (8, 7), (8, 8),
                (7, 8), (5, 8), (4, 8), (3, 8), (2, 8), (1, 8), (0, 8)]
    for i, (r, c) in enumerate(coords_a):
        matrix[r][c] = bit(14 - i)
    for i in range(7):  # b14..b8 down the left column copy
        matrix[size - 1 - i][8] = bit(14 - i)
    for i in range(8):  # b7..b0 along the bottom row copy
        matrix[8][size - 8 + i] = bit(7 - i)


def _write_version(matrix, size: int, version: int) -> None:
    if version < 7:
        return
    value = _version_value(version)
    for i in range(18):
        bit = bool((value >> i) & 1)
        matrix[size - 11 + i % 3][i // 3] = bit
        matrix[i // 3][size - 11 + i % 3] = bit


def _penalty(matrix, size: int) -> int:
    score = 0

    def runs(line) -> int:
        total = 0
        run = 1
        for i in range(1, size):
            if line[i] == line[i - 1]:
                run += 1
            else:
                if run >= 5:
                    total += 3 + run - 5
                run = 1
        if run >= 5:
            total += 3 + run - 5
        return total

    columns = [[matrix[r][c] for r in range(size)] for c in range(size)]
    for r in range(size):
        score += runs(matrix[r])
    for col in columns:
        score += runs(col)

    for r in range(size - 1):
        row, below = matrix[r], matrix[r + 1]
        for c in range(size - 1):
            if row[c] == row[c + 1] == below[c] == below[c + 1]:
                score += 3

    pattern_a = [True, False, True, True, True, False, True,
                 False, False, False, False]
    pattern_b = pattern_a[::-1]
    for line in list(matrix) + columns:
        for i in range(size - 10):
            window = line[i:i + 11]
            if window == pattern_a or window == pattern_b:
                score += 40

    dark = sum(sum(1 for v in row if v) for row in matrix)
    percent = dark * 100 // (size * size)
    score += 10 * (abs(percent - 50) // 5)
    return score


def encode_matrix(data: bytes | str, level: str = "M",
                  min_version: int = 1) -> list[list[bool]]:
    """Encode bytes (text is UTF-8) into a module matrix, True = dark."""
    if level not in _EC_INDEX:
        raise QrError(f"unknown error-correction level {level!r}")
    if isinstance(data, str):
        data = data.encode("utf-8")
    version = _choose_version(len(data), level, min_version)
    layout = _layout(version)
    size = layout.size
    codewords = _build_codewords(data, version, level)

    bits: list[bool] = []
    for byte in codewords:
        for shift in range(7, -1, -1):
            bits.append(bool((byte >> shift) & 1))
    bits.extend([False] * layout.remainder_bits)
    if len(bits) != len(layout.positions):
        raise QrError("internal: bit count does not match data cells")

    best_matrix = None
    best_score = None
    for mask in range(8):
        mask_fn = _MASKS[mask]
        matrix = [list(row) for row in layout.modules]
        for (r, c), bit in zip(layout.positions, bits):
            matrix[r][c] = bit ^ mask_fn(r, c)
        _write_format(matrix, size, level, mask)
        _write_version(matrix, size, version)
        score = _penalty(matrix, size)
        if best_score is None or score < best_score:
            best_score = score
            best_matrix = matrix
    return best_matrix


def render_png(data: bytes | str, level: str = "M", scale: int = 8,
               border: int = 4, min_version: int = 1) -> bytes:
    """Deterministic PNG bytes of the symbol with a quiet zone."""
    if scale < 1 or border < 0:
        raise QrError("scale must be >= 1 and border >= 0")
    matrix = encode_matrix(data, level, min_version)
    size = len(matrix)
    raw = bytes(0 if cell else 255 for row in matrix for cell in row)
    img = Image.frombytes("L", (size, size), raw)
    if border:
        bordered = Image.new("L", (size + 2 * border, size + 2 * border), 255)
        bordered.paste(img, (border, border))
        img = bordered
    img = img.resize((img.width * scale, img.height * scale), Image.NEAREST)
    buffer = io.BytesIO()
    img.save(buffer, format="PNG")
    return buffer.getvalue()
