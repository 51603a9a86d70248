"""Classification, validation and canonicalization of datasets."""

from __future__ import annotations

import json
import uuid
from typing import Mapping

from .canonical_json import format_number, round6
from .model import (
    CollectionMeta,
    FeatureKind,
    KIND_NAMES,
    LINE_KINDS,
    MultiLineGeom,
    POINT_KINDS,
    PointGeom,
    RawGeom,
    UlspDataset,
    UlspFeature,
    ValidationReport,
    required_geometry,
    validate_meta_fields,
)
from .registry import FieldSpec, FormatRegistry, default_registry


def classify_feature(raw_properties: Mapping, geometry_type: str) -> FeatureKind:
    """Kind named by ``ulsp_type``, matched exactly and case-sensitively.

    Geometry is deliberately not consulted: a kind/geometry mismatch is a
    validation error, not a classification input.
    """
    del geometry_type
    value = raw_properties.get("ulsp_type")
    if isinstance(value, str) and value in KIND_NAMES:
        return FeatureKind(value)
    return FeatureKind.UNKNOWN


def coerce_field_text(value: object, spec: FieldSpec | None = None) -> str:
    """Render an arbitrary JSON value as the text stored in a recognized field."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return format_number(value)
    if (spec is not None and spec.kind == "tags" and isinstance(value, list)
            and all(isinstance(v, (str, int, float, bool)) for v in value)):
        return ",".join(coerce_field_text(v) for v in value)
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"))


def _subject(feature: UlspFeature, index: int) -> str:
    return feature.id if feature.id else f"#{index}"


def _check_coordinate(report: ValidationReport, subject: str, coord) -> None:
    lon, lat = coord[0], coord[1]
    if not -180.0 <= lon <= 180.0:
        report.error(subject, "", f"longitude {lon} out of range [-180, 180]")
    if not -90.0 <= lat <= 90.0:
        report.error(subject, "", f"latitude {lat} out of range [-90, 90]")


def validate_dataset(ds: UlspDataset, reg: FormatRegistry | None = None) -> ValidationReport:
    """Check every invariant; errors block publication, warnings never do."""
    reg = reg or default_registry()
    report = ValidationReport()

    for field_key, message in validate_meta_fields(ds.meta):
        report.error("collection", field_key, message)
    if not ds.meta.umap_key:
        report.warning("collection", "umapKey", "no uMap cross-reference set")
    if not ds.meta.web_page_url:
        report.warning("collection", "WebPageURL", "no web page cross-reference set")

    seen_ids: set[str] = set()
    for index, feat in enumerate(ds.features):
        subject = _subject(feat, index)

        if feat.id:
            if feat.id in seen_ids:
                report.error(subject, "", f"duplicate feature id {feat.id!r}")
            seen_ids.add(feat.id)

        if feat.kind is FeatureKind.UNKNOWN:
            report.warning(subject, "", "feature kind is Unknown; it will be ignored by exports")
        else:
            wanted = required_geometry(feat.kind)
            if wanted is not None and not isinstance(feat.geometry, wanted):
                want_name = "Point" if wanted is PointGeom else "MultiLineString"
                report.error(subject, "",
                             f"kind/geometry mismatch: {feat.kind} requires {want_name} geometry")

        geom = feat.geometry
        if isinstance(geom, PointGeom):
            _check_coordinate(report, subject, (geom.lon, geom.lat))
        elif isinstance(geom, MultiLineGeom):
            if not geom.lines:
                report.error(subject, "", "MultiLineString must have at least one line")
            for li, line in enumerate(geom.lines):
                if len(line) < 2:
                    report.error(subject, "", f"line {li} has fewer than 2 coordinates")
                for coord in line:
                    _check_coordinate(report, subject, coord)

        field_map = reg.field_map(feat.kind)
        for spec in field_map.values():
            value = feat.recognized.get(spec.key, "")
            if spec.required and not value.strip():
                report.error(subject, spec.key, "required field is not set")
        for key, value in feat.recognized.items():
            spec = field_map.get(key)
            if spec is None:
                continue
            if not value.strip():
                continue
            if spec.kind == "enum" and value not in spec.options:
                report.error(subject, key,
                             f"value {value!r} is not one of: {', '.join(spec.options)}")
            elif spec.kind == "number":
                try:
                    float(value.strip())
                except ValueError:
                    report.error(subject, key, f"value {value!r} is not a number")

        if feat.unrecognized:
            keys = ", ".join(sorted(feat.unrecognized))
            report.warning(subject, "", f"unrecognized properties: {keys}")

    return report


def _clean_unrecognized(value: object) -> object:
    return value.strip() if isinstance(value, str) else value


def canonicalize(ds: UlspDataset) -> UlspDataset:
    """Normal form: fresh UUIDs where ids are missing, six-decimal coordinates,
    trimmed text, empty recognized values dropped. Idempotent."""
    out = ds.copy()
    meta = out.meta
    meta.nome = meta.nome.strip()
    meta.descrizione = meta.descrizione.strip()
    meta.umap_key = meta.umap_key.strip()
    meta.web_page_url = meta.web_page_url.strip()

    for feat in out.features:
        if not feat.id:
            feat.id = str(uuid.uuid4())
        geom = feat.geometry
        if isinstance(geom, PointGeom):
            geom.lon = round6(geom.lon)
            geom.lat = round6(geom.lat)
            if geom.ele is not None:
                geom.ele = round6(geom.ele)
        elif isinstance(geom, MultiLineGeom):
            geom.lines = [[tuple(round6(c) for c in coord) for coord in line]
                          for line in geom.lines]
        cleaned: dict[str, str] = {}
        for key, value in feat.recognized.items():
            trimmed = value.strip()
            if trimmed:
                cleaned[key] = trimmed
        feat.recognized = cleaned
        feat.unrecognized = {k: _clean_unrecognized(v) for k, v in feat.unrecognized.items()}
    return out


__all__ = [
    "classify_feature",
    "coerce_field_text",
    "validate_dataset",
    "canonicalize",
    "CollectionMeta",
    "RawGeom",
    "POINT_KINDS",
    "LINE_KINDS",
]
