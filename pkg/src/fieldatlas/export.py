"""Serializers: canonical GeoJSON, GPX 1.1, uMap layer files, CSV tables.

serialize_geojson and to_csv are byte-deterministic given the same dataset and
registry; to_gpx and to_umap_layers are deterministic too (no timestamps
anywhere). The browser editor mirrors these exact byte rules.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .canonical_json import RawNumber, dumps, format_coord
from .errors import UnsupportedKindError
from .model import (
    CONCRETE_KINDS,
    CollectionMeta,
    FeatureKind,
    ID_KEY,
    LINE_KINDS,
    MultiLineGeom,
    POINT_KINDS,
    PointGeom,
    RawGeom,
    TYPE_KEY,
    UlspDataset,
    UlspFeature,
)
from .registry import FormatRegistry, default_registry


def _coord_doc(coord) -> list:
    return [RawNumber(format_coord(c)) for c in coord]


def _geometry_doc(geom):
    if isinstance(geom, PointGeom):
        return {"type": "Point", "coordinates": _coord_doc(geom.coordinate())}
    if isinstance(geom, MultiLineGeom):
        return {"type": "MultiLineString",
                "coordinates": [[_coord_doc(c) for c in line] for line in geom.lines]}
    if isinstance(geom, RawGeom):
        return geom.data
    raise TypeError(f"unexpected geometry {type(geom).__name__}")


def _properties_doc(feat: UlspFeature, reg: FormatRegistry) -> dict:
    """Fixed key order: ulsp_type, ulsp_id, registry fields, leftovers, then
    unrecognized keys sorted by codepoint."""
    props: dict = {}
    if feat.kind is not FeatureKind.UNKNOWN:
        props[TYPE_KEY] = feat.kind.value
    elif feat.raw_type is not None:
        props[TYPE_KEY] = feat.raw_type
    if feat.id:
        props[ID_KEY] = feat.id
    listed = set()
    for spec in reg.fields_for(feat.kind):
        listed.add(spec.key)
        if spec.key in feat.recognized:
            props[spec.key] = feat.recognized[spec.key]
    for key in sorted(k for k in feat.recognized if k not in listed):
        props[key] = feat.recognized[key]
    for key in sorted(feat.unrecognized):
        props[key] = feat.unrecognized[key]
    return props


def _feature_doc(feat: UlspFeature, reg: FormatRegistry) -> dict:
    return {"type": "Feature",
            "geometry": _geometry_doc(feat.geometry),
            "properties": _properties_doc(feat, reg)}


def _meta_doc(meta: CollectionMeta) -> dict:
    return {"Nome": meta.nome, "Descrizione": meta.descrizione,
            "umapKey": meta.umap_key, "WebPageURL": meta.web_page_url}


def serialize_geojson(ds: UlspDataset, reg: FormatRegistry | None = None) -> bytes:
    """Canonical FeatureCollection bytes: UTF-8, fixed key order, six-decimal
    coordinates, trailing newline."""
    reg = reg or default_registry()
    doc = {"type": "FeatureCollection",
           "properties": _meta_doc(ds.meta),
           "features": [_feature_doc(f, reg) for f in ds.features]}
    return dumps(doc)


# --- GPX ---------------------------------------------------------------

_XML_ESCAPES = (("&", "&amp;"), ("<", "&lt;"), (">", "&gt;"), ('"', "&quot;"))


def _xml_escape(text: str) -> str:
    for raw, esc in _XML_ESCAPES:
        text = text.replace(raw, esc)
    return text


def _gpx_lon(lon: float) -> str:
    # The GPX schema excludes +180.0; it is the same meridian as -180.0.
    return format_coord(-180.0 if lon == 180.0 else lon)


def _display_name(feat: UlspFeature) -> str:
    return feat.recognized.get("Nome", "") or feat.id


@dataclass
class GpxExport:
    data: bytes
    skipped: int = 0  # Unknown-kind features left out


def to_gpx(ds: UlspDataset) -> GpxExport:
    """GPX 1.1: point kinds become waypoints, line kinds become tracks with one
    segment per line. Waypoints precede tracks (schema-required order); within
    each group dataset order is preserved. Unknown-kind features, and features
    whose geometry does not fit their kind, are skipped and counted."""
    lines: list[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<gpx version="1.1" creator="fieldatlas" '
        'xmlns="http://www.topografix.com/GPX/1/1">',
    ]
    if ds.meta.nome or ds.meta.descrizione:
        lines.append("  <metadata>")
        if ds.meta.nome:
            lines.append(f"    <name>{_xml_escape(ds.meta.nome)}</name>")
        if ds.meta.descrizione:
            lines.append(f"    <desc>{_xml_escape(ds.meta.descrizione)}</desc>")
        lines.append("  </metadata>")

    skipped = 0
    waypoints: list[UlspFeature] = []
    tracks: list[UlspFeature] = []
    for feat in ds.features:
        if feat.kind in POINT_KINDS and isinstance(feat.geometry, PointGeom):
            waypoints.append(feat)
        elif feat.kind in LINE_KINDS and isinstance(feat.geometry, MultiLineGeom):
            tracks.append(feat)
        else:
            skipped += 1

    for feat in waypoints:
        geom = feat.geometry
        lines.append(f'  <wpt lat="{format_coord(geom.lat)}" lon="{_gpx_lon(geom.lon)}">')
        if geom.ele is not None:
            lines.append(f"    <ele>{format_coord(geom.ele)}</ele>")
        lines.append(f"    <name>{_xml_escape(_display_name(feat))}</name>")
        desc = feat.recognized.get("Descrizione", "")
        if desc:
            lines.append(f"    <desc>{_xml_escape(desc)}</desc>")
        lines.append("  </wpt>")

    for feat in tracks:
        lines.append("  <trk>")
        lines.append(f"    <name>{_xml_escape(_display_name(feat))}</name>")
        desc = feat.recognized.get("Descrizione", "")
        if desc:
            lines.append(f"    <desc>{_xml_escape(desc)}</desc>")
        for line in feat.geometry.lines:
            lines.append("    <trkseg>")
            for coord in line:
                open_tag = (f'      <trkpt lat="{format_coord(coord[1])}" '
                            f'lon="{_gpx_lon(coord[0])}">')
                if len(coord) > 2:
                    lines.append(open_tag)
                    lines.append(f"        <ele>{format_coord(coord[2])}</ele>")
                    lines.append("      </trkpt>")
                else:
                    lines.append(open_tag + "</trkpt>")
            lines.append("    </trkseg>")
        lines.append("  </trk>")

    lines.append("</gpx>")
    return GpxExport(data=("\n".join(lines) + "\n").encode("utf-8"), skipped=skipped)


# --- uMap layers --------------------------------------------------------


def popup_text(feat: UlspFeature, meta: CollectionMeta, reg: FormatRegistry,
               repo_url: str = "", prefix: str = "") -> str:
    """uMap popup body: heading, description, one image embed, tags line,
    then link directives. uMap renders {{url}} as an embedded image and
    [[url|label]] as a link."""
    parts: list[str] = []
    if prefix:
        parts.append(f"**{prefix}**")
    parts.append(f"# {_display_name(feat)}")
    desc = feat.recognized.get("Descrizione", "")
    if desc:
        parts.append(desc)
    image_field = reg.first_field(feat.kind, "image_url")
    image = feat.recognized.get(image_field.key, "") if image_field else ""
    if image:
        parts.append("{{" + image + "}}")
    tags_field = reg.first_field(feat.kind, "tags")
    tags = feat.recognized.get(tags_field.key, "") if tags_field else ""
    if tags:
        parts.append(f"Tags: {tags}")
    if meta.web_page_url:
        parts.append(f"[[{meta.web_page_url}|Pagina web]]")
    if repo_url:
        parts.append(f"[[{repo_url}|Repository]]")
    return "\n".join(parts)


def _umap_options(feat: UlspFeature, reg: FormatRegistry) -> dict:
    style = reg.style_for(feat.kind)
    options: dict = {"color": style.color}
    if feat.kind in POINT_KINDS:
        icon = style.icon
        for token in _tag_list(feat, reg):
            if token in reg.icon_map:
                icon = reg.icon_map[token]
                break
        options["iconUrl"] = reg.icon_url(icon)
    return options


def _tag_list(feat: UlspFeature, reg: FormatRegistry) -> list[str]:
    tags_field = reg.first_field(feat.kind, "tags")
    if tags_field is None:
        return []
    raw = feat.recognized.get(tags_field.key, "")
    return [token.strip() for token in raw.split(",") if token.strip()]


def _layer_feature_doc(feat: UlspFeature, meta: CollectionMeta, reg: FormatRegistry,
                       repo_url: str, prefix: str) -> dict:
    props: dict = {
        "name": _display_name(feat),
        "description": popup_text(feat, meta, reg, repo_url=repo_url, prefix=prefix),
        "_umap_options": _umap_options(feat, reg),
    }
    props.update(_properties_doc(feat, reg))
    return {"type": "Feature",
            "geometry": _geometry_doc(feat.geometry),
            "properties": props}


@dataclass
class UmapLayers:
    """Per-kind layer documents (name, GeoJSON bytes) plus a manifest."""

    layers: list[tuple[str, bytes]] = field(default_factory=list)
    manifest: bytes = b""

    def layer_names(self) -> list[str]:
        return [name for name, _ in self.layers]


def to_umap_layers(ds: UlspDataset, reg: FormatRegistry | None = None,
                   repo_url: str = "") -> UmapLayers:
    """One uMap-importable GeoJSON file per kind present in the dataset.

    Every feature gains `name`, a popup `description`, and `_umap_options`
    (kind color; icon by first tag hit in the registry icon map for points).
    Unknown-kind features are not exported. The manifest records the dataset
    metadata and per-layer feature counts.
    """
    reg = reg or default_registry()
    layers: list[tuple[str, bytes]] = []
    counts: list[dict] = []
    for kind in CONCRETE_KINDS:
        feats = [f for f in ds.features if f.kind is kind]
        if not feats:
            continue
        doc = {"type": "FeatureCollection",
               "name": kind.value,
               "features": [_layer_feature_doc(f, ds.meta, reg, repo_url, "")
                            for f in feats]}
        layers.append((kind.value, dumps(doc)))
        counts.append({"name": kind.value, "count": len(feats)})
    manifest = dumps({"dataset": _meta_doc(ds.meta), "layers": counts})
    return UmapLayers(layers=layers, manifest=manifest)


# --- CSV ----------------------------------------------------------------


def to_csv(ds: UlspDataset, kind: FeatureKind,
           reg: FormatRegistry | None = None) -> bytes:
    """One CSV table of the dataset's features of one point kind.

    Header: lat, lon, ele, ulsp_id, then the registry field keys in registry
    order. Unrecognized properties are not exported. import_csv of the output
    reproduces the features (given canonical input).
    """
    reg = reg or default_registry()
    if kind not in POINT_KINDS:
        raise UnsupportedKindError(f"CSV export handles point kinds only, not {kind}")
    field_keys = [spec.key for spec in reg.fields_for(kind)]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["lat", "lon", "ele", ID_KEY] + field_keys)
    for feat in ds.features:
        if feat.kind is not kind or not isinstance(feat.geometry, PointGeom):
            continue
        geom = feat.geometry
        row = [format_coord(geom.lat), format_coord(geom.lon),
               format_coord(geom.ele) if geom.ele is not None else "",
               feat.id]
        row.extend(feat.recognized.get(key, "") for key in field_keys)
        writer.writerow(row)
    return buffer.getvalue().encode("utf-8")
