"""Readers that turn source documents into datasets.

Three front doors: lenient GeoJSON (the native format plus anything
FeatureCollection-shaped), Gaia GPS exports (tracks and waypoints restructured
into Percorso/POI), and per-kind CSV tables.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .errors import CsvStructureError, ParseError, StructureError, UnsupportedKindError
from .model import (
    CollectionMeta,
    FeatureKind,
    ID_KEY,
    MultiLineGeom,
    POINT_KINDS,
    PointGeom,
    RawGeom,
    TYPE_KEY,
    UlspDataset,
    UlspFeature,
)
from .registry import FormatRegistry, default_registry
from .schema import classify_feature, coerce_field_text


def _load_json(source: bytes):
    try:
        text = source.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}",
                         position=exc.pos, line=exc.lineno, column=exc.colno) from exc


def _load_collection(source: bytes) -> dict:
    doc = _load_json(source)
    if not isinstance(doc, dict):
        raise StructureError("top level must be a JSON object")
    top = doc.get("type")
    if top != "FeatureCollection":
        raise StructureError(f"top-level type must be 'FeatureCollection', got {top!r}")
    features = doc.get("features", [])
    if not isinstance(features, list):
        raise StructureError("'features' must be a list")
    return doc


def _meta_text(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return coerce_field_text(value)


def _parse_meta(raw: object) -> CollectionMeta:
    if not isinstance(raw, dict):
        return CollectionMeta()
    return CollectionMeta(
        nome=_meta_text(raw.get("Nome")),
        descrizione=_meta_text(raw.get("Descrizione")),
        umap_key=_meta_text(raw.get("umapKey")),
        web_page_url=_meta_text(raw.get("WebPageURL")),
    )


def _is_num(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _parse_point_coords(coords: object) -> PointGeom | None:
    if not isinstance(coords, list) or not 2 <= len(coords) <= 3:
        return None
    if not all(_is_num(c) for c in coords):
        return None
    ele = float(coords[2]) if len(coords) == 3 else None
    return PointGeom(lon=float(coords[0]), lat=float(coords[1]), ele=ele)


def _parse_line(line: object) -> list[tuple[float, ...]] | None:
    """One coordinate sequence; structural defects (too short) are kept for
    validation to flag, only non-numeric content rejects the line."""
    if not isinstance(line, list):
        return None
    out = []
    for coord in line:
        if not isinstance(coord, list) or not 2 <= len(coord) <= 3:
            return None
        if not all(_is_num(c) for c in coord):
            return None
        out.append(tuple(float(c) for c in coord))
    return out


def _parse_geometry(raw: object):
    """Typed geometry when the shape allows it, RawGeom pass-through otherwise."""
    if not isinstance(raw, dict):
        return RawGeom(raw)
    gtype = raw.get("type")
    if gtype == "Point":
        point = _parse_point_coords(raw.get("coordinates"))
        return point if point is not None else RawGeom(raw)
    if gtype == "MultiLineString":
        coords = raw.get("coordinates")
        if isinstance(coords, list):
            lines = [_parse_line(line) for line in coords]
            if all(line is not None for line in lines):
                return MultiLineGeom(lines=lines)
        return RawGeom(raw)
    return RawGeom(raw)


def _id_text(value: object) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, float, bool)):
        return coerce_field_text(value)
    return ""


def _parse_feature(index: int, raw: object, reg: FormatRegistry) -> UlspFeature:
    if not isinstance(raw, dict):
        raise StructureError(f"features[{index}] must be a JSON object")
    props = raw.get("properties")
    if not isinstance(props, dict):
        props = {}
    geometry_raw = raw.get("geometry")
    gtype = geometry_raw.get("type") if isinstance(geometry_raw, dict) else ""
    kind = classify_feature(props, gtype if isinstance(gtype, str) else "")

    raw_type = None
    if kind is FeatureKind.UNKNOWN:
        source_type = props.get(TYPE_KEY)
        if isinstance(source_type, str):
            raw_type = source_type

    recognized: dict[str, str] = {}
    unrecognized: dict[str, object] = {}
    field_map = reg.field_map(kind)
    for key, value in props.items():
        if key in (TYPE_KEY, ID_KEY):
            continue
        spec = field_map.get(key)
        if spec is not None:
            recognized[key] = coerce_field_text(value, spec)
        else:
            unrecognized[key] = value

    return UlspFeature(
        id=_id_text(props.get(ID_KEY)),
        kind=kind,
        geometry=_parse_geometry(geometry_raw),
        recognized=recognized,
        unrecognized=unrecognized,
        raw_type=raw_type,
    )


def parse_geojson(source: bytes, reg: FormatRegistry | None = None) -> UlspDataset:
    """Read a FeatureCollection leniently.

    Collection properties map onto the metadata keys (Nome, Descrizione,
    umapKey, WebPageURL); other collection-level properties are dropped.
    Feature properties are partitioned against the registry entry for the
    classified kind. Geometries other than well-formed Point/MultiLineString
    are carried through untouched and the feature stays serializable.
    """
    reg = reg or default_registry()
    doc = _load_collection(source)
    features = [_parse_feature(i, raw, reg)
                for i, raw in enumerate(doc.get("features", []))]
    return UlspDataset(meta=_parse_meta(doc.get("properties")), features=features)


@dataclass
class GaiaMapping:
    """Property keys a Gaia GPS export uses; overridable if the vendor changes them."""

    track_name_key: str = "title"
    waypoint_name_key: str = "title"
    waypoint_notes_key: str = "notes"
    waypoint_photo_key: str = "photos"

    def __post_init__(self):
        for name in ("track_name_key", "waypoint_name_key",
                     "waypoint_notes_key", "waypoint_photo_key"):
            if not getattr(self, name):
                raise ValueError(f"GaiaMapping.{name} must not be empty")


@dataclass
class GaiaSplit:
    dataset: UlspDataset
    warnings: list[str] = field(default_factory=list)


def _point_in_range(geom: PointGeom) -> bool:
    return -180.0 <= geom.lon <= 180.0 and -90.0 <= geom.lat <= 90.0


def _lines_in_range(geom: MultiLineGeom) -> bool:
    if not geom.lines:
        return False
    for line in geom.lines:
        if len(line) < 2:
            return False
        for coord in line:
            if not (-180.0 <= coord[0] <= 180.0 and -90.0 <= coord[1] <= 90.0):
                return False
    return True


def _photo_url(value: object) -> str:
    if isinstance(value, list):
        value = value[0] if value else None
    if isinstance(value, dict):
        value = value.get("url")
    if isinstance(value, str):
        return value.strip()
    return ""


def gaia_split(source: bytes, mapping: GaiaMapping | None = None,
               reg: FormatRegistry | None = None) -> GaiaSplit:
    """Restructure a Gaia GPS export: tracks become Percorso, waypoints become POI.

    Unusable features (unsupported geometry, broken or out-of-range
    coordinates) are skipped with a warning, so the result always validates
    cleanly. The dataset name is a placeholder pending editing.
    """
    mapping = mapping or GaiaMapping()
    reg = reg or default_registry()
    doc = _load_collection(source)

    photo_field = reg.first_field(FeatureKind.POI, "image_url")
    warnings: list[str] = []
    features: list[UlspFeature] = []
    tracks = 0
    waypoints = 0

    for index, raw in enumerate(doc.get("features", [])):
        if not isinstance(raw, dict):
            warnings.append(f"feature {index}: not an object; skipped")
            continue
        props = raw.get("properties")
        if not isinstance(props, dict):
            props = {}
        geometry_raw = raw.get("geometry")
        gtype = geometry_raw.get("type") if isinstance(geometry_raw, dict) else None

        consumed: set[str]
        if gtype in ("LineString", "MultiLineString"):
            coords = geometry_raw.get("coordinates")
            if gtype == "LineString":
                line = _parse_line(coords)
                geom = MultiLineGeom(lines=[line]) if line is not None else None
            else:
                lines = ([_parse_line(l) for l in coords]
                         if isinstance(coords, list) else [None])
                geom = (MultiLineGeom(lines=lines)
                        if all(l is not None for l in lines) else None)
            if geom is None or not _lines_in_range(geom):
                warnings.append(f"feature {index}: unusable {gtype} coordinates; skipped")
                continue
            tracks += 1
            name = _meta_text(props.get(mapping.track_name_key)).strip() or f"Track {tracks}"
            recognized = {"Nome": name}
            consumed = {mapping.track_name_key}
            kind = FeatureKind.PERCORSO
        elif gtype == "Point":
            geom = _parse_point_coords(geometry_raw.get("coordinates"))
            if geom is None or not _point_in_range(geom):
                warnings.append(f"feature {index}: unusable Point coordinates; skipped")
                continue
            waypoints += 1
            name = _meta_text(props.get(mapping.waypoint_name_key)).strip() or f"Waypoint {waypoints}"
            recognized = {"Nome": name}
            notes = _meta_text(props.get(mapping.waypoint_notes_key)).strip()
            if notes:
                recognized["Descrizione"] = notes
            photo = _photo_url(props.get(mapping.waypoint_photo_key))
            if photo and photo_field is not None:
                recognized[photo_field.key] = photo
            consumed = {mapping.waypoint_name_key, mapping.waypoint_notes_key,
                        mapping.waypoint_photo_key}
            kind = FeatureKind.POI
        else:
            label = gtype if gtype else "no geometry"
            warnings.append(f"feature {index}: {label} has no conversion; skipped")
            continue

        unrecognized = {k: v for k, v in props.items()
                        if k not in consumed and k not in (TYPE_KEY, ID_KEY)}
        features.append(UlspFeature(id="", kind=kind, geometry=geom,
                                    recognized=recognized, unrecognized=unrecognized))

    if not features:
        warnings.append("no convertible features found")
    meta = CollectionMeta(nome="gaia-import")
    return GaiaSplit(dataset=UlspDataset(meta=meta, features=features), warnings=warnings)


@dataclass
class CsvImport:
    features: list[UlspFeature]
    skipped: list[tuple[int, str]] = field(default_factory=list)  # (row number, reason)


# Column names with structural meaning; never treated as property columns.
CSV_SPECIAL_COLUMNS = ("lat", "lon", "ele", ID_KEY, TYPE_KEY)


def _parse_csv_float(cell: str, column: str) -> float:
    try:
        value = float(cell.strip())
    except ValueError:
        raise ValueError(f"column {column!r}: not a number: {cell!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"column {column!r}: not a finite number: {cell!r}")
    return value


def import_csv(source: bytes, kind: FeatureKind,
               reg: FormatRegistry | None = None) -> CsvImport:
    """Read one CSV table into features of a single point kind.

    First row is the header; `lat` and `lon` are required columns, `ele` and
    `ulsp_id` are honored when present, a `ulsp_type` column is ignored (the
    kind is fixed by the caller). Columns matching registry field keys fill
    recognized values, everything else lands in unrecognized. Rows are
    independent: a broken row is skipped and reported with its row number,
    counting the header as row 1. Blank rows are ignored.
    """
    reg = reg or default_registry()
    if kind not in POINT_KINDS:
        raise UnsupportedKindError(
            f"CSV import handles point kinds only, not {kind}")
    try:
        text = source.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from exc

    rows = list(csv.reader(io.StringIO(text, newline="")))
    if not rows:
        raise CsvStructureError("empty input: a header row is required")
    header = rows[0]
    missing = [c for c in ("lat", "lon") if c not in header]
    if missing:
        raise CsvStructureError(f"missing required column(s): {', '.join(missing)}")
    columns: dict[str, int] = {}
    for i, name in enumerate(header):
        if name and name not in columns:  # first occurrence wins
            columns[name] = i

    field_map = reg.field_map(kind)
    features: list[UlspFeature] = []
    skipped: list[tuple[int, str]] = []

    for row_number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) > len(header):
            skipped.append((row_number,
                            f"row has {len(row)} cells, header has {len(header)}"))
            continue
        cells = row + [""] * (len(header) - len(row))

        def cell(name: str) -> str:
            index = columns.get(name)
            return cells[index] if index is not None else ""

        try:
            lat = _parse_csv_float(cell("lat"), "lat")
            lon = _parse_csv_float(cell("lon"), "lon")
            ele_text = cell("ele").strip()
            ele = _parse_csv_float(ele_text, "ele") if ele_text else None
        except ValueError as exc:
            skipped.append((row_number, str(exc)))
            continue

        recognized: dict[str, str] = {}
        unrecognized: dict[str, object] = {}
        for name, index in columns.items():
            if name in CSV_SPECIAL_COLUMNS:
                continue
            value = cells[index]
            if value == "":
                continue
            if name in field_map:
                recognized[name] = value
            else:
                unrecognized[name] = value

        features.append(UlspFeature(
            id=cell(ID_KEY),
            kind=kind,
            geometry=PointGeom(lon=lon, lat=lat, ele=ele),
            recognized=recognized,
            unrecognized=unrecognized,
        ))

    return CsvImport(features=features, skipped=skipped)
