"""Deterministic JSON rendering for canonical dataset serialization.

The emitter fixes everything ``json.dumps`` leaves to chance across
implementations: float formatting, indentation shape and inline rules. The
browser editor reimplements these exact rules, so the two sides produce
byte-identical files; keep any change mirrored there.

Rules:
  * two-space indentation, ``": "`` after keys, one item per line;
  * empty objects/arrays render inline as ``{}`` / ``[]``;
  * arrays whose elements are all numbers render inline (coordinate pairs);
  * coordinates are written with at most six decimal places, trailing zeros
    stripped (``round6``/``format_coord`` are the shared rounding rule);
  * other floats use the shortest round-trip form; integral floats render as
    integers;
  * strings escape only what JSON requires, non-ASCII stays raw UTF-8.
"""

from __future__ import annotations

import math

_ESCAPES = {
    '"': '\\"',
    "\\": "\\\\",
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


class RawNumber(str):
    """A pre-formatted number emitted verbatim (used for coordinates)."""


def round6(value: float) -> float:
    """Round to six decimal places, exactly as the emitter will print it."""
    return float(format(float(value), ".6f"))


def format_coord(value: float) -> str:
    """Fixed six-decimal rendering with trailing zeros stripped.

    Never produces exponent notation, so the browser editor's
    ``toFixed(6)``-based twin yields identical text.
    """
    text = format(float(value), ".6f")
    text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        text = "0"
    return text


def format_number(value) -> str:
    if isinstance(value, RawNumber):
        return str(value)
    if isinstance(value, bool):  # bool is an int subclass; handled by caller
        raise TypeError("bool is not a number here")
    if isinstance(value, int):
        return str(value)
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite number {value!r}")
    if value == int(value) and abs(value) <= 2**53:
        return str(int(value))
    return repr(value)


def format_string(value: str) -> str:
    out = ['"']
    for ch in value:
        esc = _ESCAPES.get(ch)
        if esc is not None:
            out.append(esc)
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _is_number(value) -> bool:
    return (isinstance(value, (int, float, RawNumber))
            and not isinstance(value, bool)) or isinstance(value, RawNumber)


def _emit(value, indent: int, pieces: list[str]) -> None:
    pad = "  " * indent
    child_pad = "  " * (indent + 1)
    if value is None:
        pieces.append("null")
    elif value is True:
        pieces.append("true")
    elif value is False:
        pieces.append("false")
    elif isinstance(value, str) and not isinstance(value, RawNumber):
        pieces.append(format_string(value))
    elif _is_number(value):
        pieces.append(format_number(value))
    elif isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, item) in enumerate(value.items()):
            if not isinstance(key, str):
                raise TypeError(f"object keys must be strings, got {key!r}")
            pieces.append(child_pad)
            pieces.append(format_string(key))
            pieces.append(": ")
            _emit(item, indent + 1, pieces)
            pieces.append(",\n" if i < len(value) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            pieces.append("[]")
            return
        if all(_is_number(item) for item in value):
            pieces.append("[" + ", ".join(format_number(item) for item in value) + "]")
            return
        pieces.append("[\n")
        for i, item in enumerate(value):
            pieces.append(child_pad)
            _emit(item, indent + 1, pieces)
            pieces.append(",\n" if i < len(value) - 1 else "\n")
        pieces.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(document) -> bytes:
    """Render a document tree to canonical UTF-8 bytes with a final newline."""
    pieces: list[str] = []
    _emit(document, 0, pieces)
    pieces.append("\n")
    return "".join(pieces).encode("utf-8")
