#!/usr/bin/env python3
"""Regenerate the editor parity fixtures from the command-line tool.

The editor test suite proves byte equality against files produced by the
installed ``fieldatlas`` command, so the fixtures under
``tests/fixtures/scenarios/golden/`` and the QR goldens are never written by
hand: this script derives every one of them. Rerunning it must be a no-op on
a clean tree; the QR transfer ids, normally random per encode, are pinned
here by rewriting the id field of each frame, which the frame grammar allows
because the checksum covers only the payload text.

Run from anywhere:

    python3 frontend/scripts/make_goldens.py
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

from fieldatlas.ingest import parse_geojson
from fieldatlas.qr import encode_frames
from fieldatlas.qrcode_gen import encode_matrix

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
SCENARIOS = FIXTURES / "scenarios"
GOLDEN = SCENARIOS / "golden"

CANTINA_TRANSFER_ID = "c0ffee42"
CANTINA_CHUNK_CHARS = 96
FRAMES_TRANSFER_ID = "ab12cd34"
FRAMES_CHUNK_CHARS = 100

MATRIX_CASES = [
    {"name": "short-default-level", "data": "pozzo", "level": "M"},
    {"name": "short-high-level", "data": "ULSP1", "level": "H"},
    {"name": "min-version-pins-size", "data": "pieve", "level": "M",
     "min_version": 7},
    {"name": "multibyte-text", "data": "Grotta dell'Arenà \U0001f987",
     "level": "Q"},
    {"name": "hundred-chars-low-level",
     "data": "ULSP1|c0ffee42|0|3|00000000|" + "A" * 72, "level": "L"},
    {"name": "interleaved-blocks",
     "data": "|".join(f"segmento-{i:03d}" for i in range(75)), "level": "M"},
]


def run_cli(args: list[str]) -> None:
    proc = subprocess.run(["fieldatlas", *args], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"fieldatlas {' '.join(args)} failed:\n{proc.stderr}")


def pinned_frames(dataset_path: Path, chunk_chars: int, transfer_id: str) -> list[str]:
    ds = parse_geojson(dataset_path.read_bytes())
    frames = []
    for text in encode_frames(ds, max_chunk_chars=chunk_chars):
        parts = text.split("|")
        parts[1] = transfer_id
        frames.append("|".join(parts))
    return frames


def write_cantina_frames() -> None:
    frames = pinned_frames(SCENARIOS / "cantina.geojson",
                           CANTINA_CHUNK_CHARS, CANTINA_TRANSFER_ID)
    path = SCENARIOS / "cantina_frames.txt"
    path.write_text("\n".join(frames) + "\n", encoding="ascii")
    print(f"wrote {path.name} ({len(frames)} frames)")


def write_frames_golden() -> None:
    frames = pinned_frames(SCENARIOS / "cantina.geojson",
                           FRAMES_CHUNK_CHARS, FRAMES_TRANSFER_ID)
    doc = {
        "source": "scenarios/cantina.geojson",
        "maxChunkChars": FRAMES_CHUNK_CHARS,
        "transferId": FRAMES_TRANSFER_ID,
        "frames": frames,
    }
    path = FIXTURES / "qr_frames_golden.json"
    path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    print(f"wrote {path.name} ({len(frames)} frames)")


def write_matrix_goldens() -> None:
    cases = []
    for case in MATRIX_CASES:
        matrix = encode_matrix(case["data"], level=case["level"],
                               min_version=case.get("min_version", 1))
        cases.append({
            "name": case["name"],
            "data": case["data"],
            "level": case["level"],
            "minVersion": case.get("min_version", 1),
            "size": len(matrix),
            "rows": ["".join("1" if cell else "0" for cell in row)
                     for row in matrix],
        })
    path = FIXTURES / "qr_matrix_goldens.json"
    path.write_text(json.dumps(cases, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    sizes = ", ".join(str(c["size"]) for c in cases)
    print(f"wrote {path.name} (sizes {sizes})")


def load_sources(scenario: dict, workdir: Path) -> list[Path]:
    paths = []
    for index, load in enumerate(scenario["loads"]):
        source = SCENARIOS / load["file"]
        if load["type"] == "geojson":
            paths.append(source)
        elif load["type"] == "csv":
            out = workdir / f"load_{index}.geojson"
            run_cli(["from-csv", str(source), "--kind", load["kind"],
                     "-o", str(out)])
            paths.append(out)
        elif load["type"] == "qr":
            out = workdir / f"load_{index}.geojson"
            run_cli(["qr", "decode", str(source), "-o", str(out)])
            paths.append(out)
        else:
            sys.exit(f"unknown load type {load['type']!r}")
    return paths


def run_scenario(scenario: dict, workdir: Path) -> None:
    name = scenario["name"]
    merged = workdir / "merged.geojson"
    run_cli(["merge", *map(str, load_sources(scenario, workdir)),
             "-o", str(merged)])

    removed = workdir / "removed.geojson"
    run_cli(["filter", str(merged), "--drop", "--id", scenario["remove"],
             "-o", str(removed)])

    adopted = workdir / "adopted.geojson"
    adopt = scenario["adopt"]
    run_cli(["adopt", str(removed), "--id", adopt["id"],
             "--from", adopt["from"], "--to", adopt["to"],
             "-o", str(adopted)])

    retyped = workdir / "retyped.geojson"
    retype = scenario["retype"]
    run_cli(["retype", str(adopted), "--id", retype["id"],
             "--to", retype["to"], "-o", str(retyped)])

    final = workdir / "final.geojson"
    meta = scenario["meta"]
    run_cli(["set-meta", str(retyped),
             "--nome", meta["nome"],
             "--descrizione", meta["descrizione"],
             "--umap-key", meta["umapKey"],
             "--web-page-url", meta["webPageUrl"],
             "-o", str(final)])

    for export in scenario["exports"]:
        target = GOLDEN / export["golden"]
        if export["format"] == "geojson":
            shutil.copyfile(final, target)
        elif export["format"] == "gpx":
            run_cli(["export", "gpx", str(final), "-o", str(target)])
        elif export["format"] == "csv":
            run_cli(["export", "csv", str(final), "--kind", export["kind"],
                     "-o", str(target)])
        else:
            sys.exit(f"unknown export format {export['format']!r}")
        print(f"wrote golden/{target.name}")
    print(f"scenario {name} done")


def main() -> None:
    if shutil.which("fieldatlas") is None:
        sys.exit("the fieldatlas command is not on PATH; install the package first")
    GOLDEN.mkdir(exist_ok=True)
    write_cantina_frames()
    write_frames_golden()
    write_matrix_goldens()
    scenarios = json.loads((SCENARIOS / "scenarios.json").read_text("utf-8"))
    for scenario in scenarios:
        with tempfile.TemporaryDirectory(prefix=f"golden_{scenario['name']}_") as tmp:
            run_scenario(scenario, Path(tmp))


if __name__ == "__main__":
    main()
