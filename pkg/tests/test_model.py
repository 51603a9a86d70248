import pytest

from fieldatlas.model import (
    CONCRETE_KINDS,
    LINE_KINDS,
    POINT_KINDS,
    CollectionMeta,
    FeatureKind,
    MultiLineGeom,
    PointGeom,
    UlspDataset,
    UlspFeature,
    is_absolute_url,
    required_geometry,
    validate_meta_fields,
)


def test_kind_names_match_wire_values():
    assert [k.value for k in CONCRETE_KINDS] == [
        "Sito", "POI", "QRtag", "Risorsa", "Percorso", "Itinerario"]
    assert str(FeatureKind.SITO) == "Sito"
    assert FeatureKind("Percorso") is FeatureKind.PERCORSO


def test_kind_partition():
    assert POINT_KINDS | LINE_KINDS == frozenset(CONCRETE_KINDS)
    assert not POINT_KINDS & LINE_KINDS
    assert FeatureKind.UNKNOWN not in POINT_KINDS | LINE_KINDS


@pytest.mark.parametrize("kind,geom", [
    (FeatureKind.SITO, PointGeom),
    (FeatureKind.POI, PointGeom),
    (FeatureKind.QRTAG, PointGeom),
    (FeatureKind.RISORSA, PointGeom),
    (FeatureKind.PERCORSO, MultiLineGeom),
    (FeatureKind.ITINERARIO, MultiLineGeom),
    (FeatureKind.UNKNOWN, None),
])
def test_required_geometry(kind, geom):
    assert required_geometry(kind) is geom


def test_point_coordinate_with_and_without_elevation():
    assert PointGeom(10.0, 43.0).coordinate() == (10.0, 43.0)
    assert PointGeom(10.0, 43.0, 55.5).coordinate() == (10.0, 43.0, 55.5)


def test_is_absolute_url():
    assert is_absolute_url("https://example.org/x")
    assert is_absolute_url("http://example.org")
    assert not is_absolute_url("example.org/x")
    assert not is_absolute_url("/relative/path")
    assert not is_absolute_url("")


def test_validate_meta_fields():
    ok = CollectionMeta(nome="X", descrizione="d",
                        umap_key="https://umap.example/m/1",
                        web_page_url="https://example.org")
    assert validate_meta_fields(ok) == []
    bad = CollectionMeta(nome="", umap_key="not a url", web_page_url="nope")
    fields = [f for f, _ in validate_meta_fields(bad)]
    assert "Nome" in fields and "umapKey" in fields and "WebPageURL" in fields


def test_kind_counts_and_lookup():
    ds = UlspDataset(features=[
        UlspFeature(id="a", kind=FeatureKind.POI, geometry=PointGeom(1.0, 2.0)),
        UlspFeature(id="b", kind=FeatureKind.POI, geometry=PointGeom(3.0, 4.0)),
        UlspFeature(id="c", kind=FeatureKind.PERCORSO,
                    geometry=MultiLineGeom([[(0.0, 0.0), (1.0, 1.0)]])),
    ])
    assert ds.kind_counts() == {FeatureKind.POI: 2, FeatureKind.PERCORSO: 1}
    assert ds.feature_by_id("b").recognized == {}
    assert ds.feature_by_id("missing") is None


def test_copy_is_deep():
    ds = UlspDataset(features=[
        UlspFeature(id="a", kind=FeatureKind.POI, geometry=PointGeom(1.0, 2.0),
                    recognized={"Nome": "X"})])
    dup = ds.copy()
    dup.features[0].recognized["Nome"] = "Y"
    dup.meta.nome = "changed"
    assert ds.features[0].recognized["Nome"] == "X"
    assert ds.meta.nome == ""
