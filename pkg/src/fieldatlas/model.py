"""Core data model: feature kinds, geometries, features, datasets, reports.

A dataset is a single FeatureCollection: collection-level metadata plus an
ordered list of typed features. Features carry their properties split into
``recognized`` (keys the format registry knows for the feature's kind, values
always text) and ``unrecognized`` (everything else, values kept raw so nothing
is lost on round trips).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Union
from urllib.parse import urlparse


class FeatureKind(str, Enum):
    SITO = "Sito"
    POI = "POI"
    QRTAG = "QRtag"
    RISORSA = "Risorsa"
    PERCORSO = "Percorso"
    ITINERARIO = "Itinerario"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:  # keep "Sito", not "FeatureKind.SITO"
        return self.value


# Fixed presentation order for layers, tables and manifests.
CONCRETE_KINDS: tuple[FeatureKind, ...] = (
    FeatureKind.SITO,
    FeatureKind.POI,
    FeatureKind.QRTAG,
    FeatureKind.RISORSA,
    FeatureKind.PERCORSO,
    FeatureKind.ITINERARIO,
)

POINT_KINDS = frozenset((
    FeatureKind.SITO, FeatureKind.POI, FeatureKind.QRTAG, FeatureKind.RISORSA,
))
LINE_KINDS = frozenset((FeatureKind.PERCORSO, FeatureKind.ITINERARIO))

KIND_NAMES = frozenset(k.value for k in CONCRETE_KINDS)

# Property keys lifted out of the properties map into the feature itself.
TYPE_KEY = "ulsp_type"
ID_KEY = "ulsp_id"

# Collection-level property keys, in canonical serialization order.
META_KEYS = ("Nome", "Descrizione", "umapKey", "WebPageURL")


# A coordinate is (lon, lat) or (lon, lat, ele), WGS84 decimal degrees.
Coordinate = tuple[float, ...]


@dataclass
class PointGeom:
    lon: float
    lat: float
    ele: float | None = None

    def coordinate(self) -> Coordinate:
        if self.ele is None:
            return (self.lon, self.lat)
        return (self.lon, self.lat, self.ele)


@dataclass
class MultiLineGeom:
    lines: list[list[Coordinate]] = field(default_factory=list)


@dataclass
class RawGeom:
    """Pass-through for geometry this toolkit does not type (or null geometry)."""

    data: object = None


Geometry = Union[PointGeom, MultiLineGeom, RawGeom]


@dataclass
class CollectionMeta:
    """Collection metadata. Empty string means "not set" for every field."""

    nome: str = ""
    descrizione: str = ""
    umap_key: str = ""
    web_page_url: str = ""


@dataclass
class UlspFeature:
    """One geolocated record.

    ``raw_type`` preserves a source ``ulsp_type`` value that did not match any
    concrete kind name, so foreign files survive a round trip untouched.
    """

    id: str = ""
    kind: FeatureKind = FeatureKind.UNKNOWN
    geometry: Geometry = field(default_factory=RawGeom)
    recognized: dict[str, str] = field(default_factory=dict)
    unrecognized: dict[str, object] = field(default_factory=dict)
    raw_type: str | None = None


@dataclass
class UlspDataset:
    meta: CollectionMeta = field(default_factory=CollectionMeta)
    features: list[UlspFeature] = field(default_factory=list)

    def feature_by_id(self, feature_id: str) -> UlspFeature | None:
        for feat in self.features:
            if feat.id == feature_id:
                return feat
        return None

    def kind_counts(self) -> dict[FeatureKind, int]:
        counts: dict[FeatureKind, int] = {}
        for feat in self.features:
            counts[feat.kind] = counts.get(feat.kind, 0) + 1
        return counts

    def copy(self) -> "UlspDataset":
        return copy.deepcopy(self)


@dataclass
class ValidationIssue:
    subject: str  # feature id (or "#<index>" when the feature has none) or "collection"
    field: str    # field key, or "" when the issue is not about one field
    message: str

    def __str__(self) -> str:
        where = self.subject if not self.field else f"{self.subject}.{self.field}"
        return f"{where}: {self.message}"


@dataclass
class ValidationReport:
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def error(self, subject: str, field_key: str, message: str) -> None:
        self.errors.append(ValidationIssue(subject, field_key, message))

    def warning(self, subject: str, field_key: str, message: str) -> None:
        self.warnings.append(ValidationIssue(subject, field_key, message))


def is_absolute_url(text: str) -> bool:
    try:
        parts = urlparse(text)
    except ValueError:
        return False
    return bool(parts.scheme) and bool(parts.netloc)


def validate_meta_fields(meta: CollectionMeta) -> list[tuple[str, str]]:
    """Return (field, message) pairs for metadata invariant violations."""
    problems: list[tuple[str, str]] = []
    if not meta.nome.strip():
        problems.append(("Nome", "dataset name must not be empty"))
    if meta.umap_key and not is_absolute_url(meta.umap_key):
        problems.append(("umapKey", f"not an absolute URL: {meta.umap_key!r}"))
    if meta.web_page_url and not is_absolute_url(meta.web_page_url):
        problems.append(("WebPageURL", f"not an absolute URL: {meta.web_page_url!r}"))
    return problems


def required_geometry(kind: FeatureKind) -> type | None:
    """Geometry class a concrete kind requires; None when unconstrained."""
    if kind in POINT_KINDS:
        return PointGeom
    if kind in LINE_KINDS:
        return MultiLineGeom
    return None
