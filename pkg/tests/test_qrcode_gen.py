import io
import random

import cv2
import numpy as np
import pytest
from PIL import Image

from fieldatlas.errors import QrError
from fieldatlas.qrcode_gen import (
    block_structure,
    data_capacity,
    encode_matrix,
    render_png,
    _choose_version,
    _format_value,
    _version_value,
)

_DET_ARUCO = cv2.QRCodeDetectorAruco()
_DET_CLASSIC = cv2.QRCodeDetector()


def oracle_decode(png: bytes) -> str:
    """Read a symbol back with OpenCV, independently of our encoder.

    The classic detector chokes on some pixel-perfect synthetic symbols (its
    own encoder's output included), so a Gaussian blur pass emulating camera
    optics is tried as well, and the Aruco-based detector goes first.
    """
    arr = cv2.imdecode(np.frombuffer(png, np.uint8), cv2.IMREAD_GRAYSCALE)
    for det in (_DET_ARUCO, _DET_CLASSIC):
        for soften in (False, True):
            img = cv2.GaussianBlur(arr, (3, 3), 0) if soften else arr
            data, _, _ = det.detectAndDecode(img)
            if data:
                return data
    return ""


# --- published constants ----------------------------------------------------
# Byte-mode capacities and block shapes as printed in the symbology standard.


@pytest.mark.parametrize("version,level,capacity", [
    (1, "L", 17), (1, "M", 14), (1, "Q", 11), (1, "H", 7),
    (5, "Q", 60),
    (10, "L", 271),
    (40, "L", 2953), (40, "H", 1273),
])
def test_data_capacity_anchors(version, level, capacity):
    assert data_capacity(version, level) == capacity


@pytest.mark.parametrize("version,level,ec,blocks", [
    (5, "Q", 18, [15, 15, 16, 16]),
    (7, "H", 26, [13, 13, 13, 13, 14]),
])
def test_block_structure_anchors(version, level, ec, blocks):
    assert block_structure(version, level) == (ec, blocks)


def test_version_info_anchor():
    # worked example from the BCH(18,6) specification text
    assert _version_value(7) == 0x07C94


def test_format_values_distinct():
    values = {_format_value(level, mask)
              for level in "LMQH" for mask in range(8)}
    assert len(values) == 32


def test_version_choice():
    assert _choose_version(17, "L") == 1
    assert _choose_version(18, "L") == 2
    assert _choose_version(11, "Q") == 1
    assert _choose_version(17, "L", min_version=3) == 3
    with pytest.raises(QrError, match="too long"):
        _choose_version(2954, "L")


def test_capacity_is_monotonic():
    for level in "LMQH":
        caps = [data_capacity(v, level) for v in range(1, 41)]
        assert caps == sorted(caps)
        assert all(b > a for a, b in zip(caps, caps[1:]))


# --- matrix and PNG shape -----------------------------------------------------


def test_matrix_size_and_quiet_zone():
    matrix = encode_matrix(b"ciao", "M")
    assert len(matrix) == 21  # version 1
    assert all(len(row) == 21 for row in matrix)
    png = render_png(b"ciao", "M", scale=8, border=4)
    img = Image.open(io.BytesIO(png))
    assert img.size == ((21 + 8) * 8,) * 2
    edge = np.asarray(img.convert("L"))
    assert (edge[:32, :] == 255).all() and (edge[:, :32] == 255).all()


def test_render_png_is_deterministic():
    assert render_png("stesso testo") == render_png("stesso testo")


def test_render_png_guards():
    with pytest.raises(QrError):
        render_png(b"x", scale=0)
    with pytest.raises(QrError):
        render_png(b"x", border=-1)
    with pytest.raises(QrError, match="level"):
        encode_matrix(b"x", "X")


def test_over_capacity_raises():
    with pytest.raises(QrError, match="too long"):
        encode_matrix(b"x" * 2954, "L")
    with pytest.raises(QrError, match="too long"):
        encode_matrix(b"x" * 1274, "H")


# --- independent decoder round trips ------------------------------------------


@pytest.mark.parametrize("level", ["L", "M", "Q", "H"])
def test_oracle_reads_each_level(level):
    text = f"https://example.org/tag#livello-{level}"
    assert oracle_decode(render_png(text, level)) == text


@pytest.mark.parametrize("nbytes", [7, 17, 60, 100, 271, 500, 1000])
def test_oracle_reads_sizes(nbytes):
    rng = random.Random(nbytes)
    text = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz0123456789") for _ in range(nbytes))
    assert oracle_decode(render_png(text, "M" if nbytes <= 1000 else "L")) == text


def test_oracle_reads_exact_capacity_boundaries():
    for version, level in ((1, "H"), (1, "L"), (5, "Q"), (10, "L")):
        n = data_capacity(version, level)
        text = "A" * n
        matrix = encode_matrix(text, level)
        assert len(matrix) == 17 + 4 * version  # fills the version exactly
        assert oracle_decode(render_png(text, level)) == text


def test_oracle_reads_frame_text(reg, rng):
    # the real workload: one transfer frame per symbol
    from conftest import dataset_of_size
    from fieldatlas.qr import encode_frames
    from fieldatlas.schema import canonicalize

    ds = canonicalize(dataset_of_size(rng, 2_000, reg))
    frames = encode_frames(ds, max_chunk_chars=800, reg=reg)
    decoded = oracle_decode(render_png(frames[0], "M"))
    assert decoded == frames[0]


def test_oracle_reads_utf8_payload():
    text = "Cavità già nota: càrsica, più žmulà"
    assert oracle_decode(render_png(text, "Q")) == text
