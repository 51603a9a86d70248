"""Shared deterministic generators. Everything derives from a seeded
random.Random so failures reproduce exactly; no generator touches the
network or the clock."""

import random
import uuid

import pytest

from fieldatlas.model import (
    CONCRETE_KINDS,
    POINT_KINDS,
    CollectionMeta,
    FeatureKind,
    MultiLineGeom,
    PointGeom,
    UlspDataset,
    UlspFeature,
)
from fieldatlas.registry import default_registry

WORDS = (
    "grotta", "sentiero", "borgo", "pieve", "fonte", "mulino", "rocca",
    "eremo", "ponte", "cava", "miniera", "castagno", "valle", "poggio",
)


def stable_uuid(rng: random.Random) -> str:
    return str(uuid.UUID(int=rng.getrandbits(128), version=4))


def random_text(rng: random.Random, lo: int = 1, hi: int = 4) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def random_point(rng: random.Random) -> PointGeom:
    lon = rng.uniform(-179.9, 179.9)
    lat = rng.uniform(-89.9, 89.9)
    if rng.random() < 0.4:
        return PointGeom(lon, lat, rng.uniform(-100.0, 3000.0))
    return PointGeom(lon, lat)


def random_line(rng: random.Random) -> MultiLineGeom:
    lines = []
    for _ in range(rng.randint(1, 3)):
        count = rng.randint(2, 6)
        lines.append([(rng.uniform(-179.0, 179.0), rng.uniform(-89.0, 89.0))
                      for _ in range(count)])
    return MultiLineGeom(lines)


def random_feature(rng: random.Random, reg=None, kind: FeatureKind | None = None) -> UlspFeature:
    reg = reg or default_registry()
    kind = kind or rng.choice(CONCRETE_KINDS)
    geom = random_point(rng) if kind in POINT_KINDS else random_line(rng)
    feat = UlspFeature(id=stable_uuid(rng), kind=kind, geometry=geom)
    feat.recognized["Nome"] = random_text(rng).title()
    if rng.random() < 0.7:
        feat.recognized["Descrizione"] = random_text(rng, 2, 8)
    tags_spec = reg.first_field(kind, "tags")
    if tags_spec and rng.random() < 0.5:
        picks = sorted({rng.choice(WORDS) for _ in range(rng.randint(1, 3))})
        feat.recognized[tags_spec.key] = ", ".join(picks)
    image_spec = reg.first_field(kind, "image_url")
    if image_spec and rng.random() < 0.3:
        feat.recognized[image_spec.key] = f"https://img.example/{stable_uuid(rng)[:8]}.png"
    url_spec = reg.first_field(kind, "url")
    if url_spec and rng.random() < 0.5:
        feat.recognized[url_spec.key] = f"https://example.org/t/{stable_uuid(rng)[:8]}"
    enum_specs = [s for s in reg.fields_for(kind) if s.kind == "enum"]
    if enum_specs and rng.random() < 0.5:
        spec = rng.choice(enum_specs)
        feat.recognized[spec.key] = rng.choice(list(spec.options))
    if rng.random() < 0.2:
        feat.unrecognized["fonte"] = random_text(rng)
    if rng.random() < 0.1:
        feat.unrecognized["quota_gps"] = rng.uniform(0.0, 2000.0)
    return feat


def random_dataset(rng: random.Random, max_features: int = 12, reg=None) -> UlspDataset:
    """A dataset that passes validation with zero errors."""
    reg = reg or default_registry()
    meta = CollectionMeta(
        nome=random_text(rng).title() + f" {rng.randint(1, 9999)}",
        descrizione=random_text(rng, 3, 10),
        umap_key=f"https://umap.example/map/{rng.randint(1, 99999)}",
        web_page_url=f"https://example.org/ds/{rng.randint(1, 99999)}",
    )
    features = [random_feature(rng, reg) for _ in range(rng.randint(0, max_features))]
    return UlspDataset(meta=meta, features=features)


def dataset_of_size(rng: random.Random, at_least: int, reg=None) -> UlspDataset:
    """Grow a dataset until its canonical serialization reaches `at_least` bytes."""
    from fieldatlas.export import serialize_geojson

    reg = reg or default_registry()
    ds = random_dataset(rng, max_features=4, reg=reg)
    while len(serialize_geojson(ds, reg)) < at_least:
        ds.features.append(random_feature(rng, reg))
    return ds


@pytest.fixture
def reg():
    return default_registry()


@pytest.fixture
def rng():
    return random.Random(20260816)
