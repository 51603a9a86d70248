"""Dataset algebra behind the editing workflow.

Every operation returns a new dataset and leaves its input untouched, so a
sequence of edits is a pure pipeline and unrelated features stay byte-identical
in canonical serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MetadataError, TransformError, UnknownIdError
from .model import (
    CONCRETE_KINDS,
    CollectionMeta,
    FeatureKind,
    UlspDataset,
    UlspFeature,
    required_geometry,
    validate_meta_fields,
)
from .registry import FieldSpec, FormatRegistry, default_registry
from .schema import canonicalize, coerce_field_text


@dataclass
class MergeResult:
    dataset: UlspDataset
    warnings: list[str] = field(default_factory=list)


def merge(parts: list[UlspDataset]) -> MergeResult:
    """Concatenate datasets into one, metadata taken from the first part.

    When two features share an id the later occurrence wins and keeps its
    position; each dropped earlier occurrence is reported as a warning. The
    result is canonicalized, so features lacking ids receive fresh ones.
    """
    if not parts:
        raise TransformError("merge needs at least one dataset")
    combined: list[UlspFeature] = []
    for part in parts:
        combined.extend(part.copy().features)

    last_index: dict[str, int] = {}
    for i, feat in enumerate(combined):
        if feat.id:
            last_index[feat.id] = i

    warnings: list[str] = []
    kept: list[UlspFeature] = []
    for i, feat in enumerate(combined):
        if feat.id and last_index[feat.id] != i:
            warnings.append(f"duplicate id {feat.id}: kept the later occurrence")
            continue
        kept.append(feat)

    merged = UlspDataset(meta=parts[0].copy().meta, features=kept)
    return MergeResult(dataset=canonicalize(merged), warnings=warnings)


@dataclass
class FilterSpec:
    """Feature selection: all present criteria must match.

    At least one of kinds/ids/tag must be given (an empty set counts as not
    given). Tag matching is an exact token match within the feature's tags
    field, treated as comma-separated trimmed tokens.
    """

    kinds: set[FeatureKind] | None = None
    ids: set[str] | None = None
    tag: str | None = None
    mode: str = "keep"  # "keep" or "drop"


def _tag_tokens(feat: UlspFeature, reg: FormatRegistry) -> list[str]:
    tags_field = reg.first_field(feat.kind, "tags")
    if tags_field is None:
        return []
    value = feat.recognized.get(tags_field.key, "")
    return [token.strip() for token in value.split(",") if token.strip()]


def _matches(feat: UlspFeature, spec: FilterSpec, reg: FormatRegistry) -> bool:
    if spec.kinds and feat.kind not in spec.kinds:
        return False
    if spec.ids and feat.id not in spec.ids:
        return False
    if spec.tag and spec.tag not in _tag_tokens(feat, reg):
        return False
    return True


def filter_features(ds: UlspDataset, spec: FilterSpec,
                    reg: FormatRegistry | None = None) -> UlspDataset:
    """Keep or drop the features matching the spec; order and meta unchanged."""
    reg = reg or default_registry()
    if spec.mode not in ("keep", "drop"):
        raise TransformError(f"filter mode must be 'keep' or 'drop', got {spec.mode!r}")
    if not (spec.kinds or spec.ids or spec.tag):
        raise TransformError("filter needs at least one criterion (kinds, ids or tag)")
    keep_matching = spec.mode == "keep"
    out = ds.copy()
    out.features = [f for f in out.features if _matches(f, spec, reg) == keep_matching]
    return out


def _find(ds: UlspDataset, feature_id: str) -> UlspFeature:
    feat = ds.feature_by_id(feature_id)
    if feat is None:
        raise UnknownIdError(f"no feature with id {feature_id!r}")
    return feat


def _check_enum(spec: FieldSpec, value: str) -> None:
    if spec.kind == "enum" and value.strip() and value not in spec.options:
        raise TransformError(
            f"{spec.key}: {value!r} is not one of: {', '.join(spec.options)}")


def retype(ds: UlspDataset, feature_id: str, target: FeatureKind,
           reg: FormatRegistry | None = None) -> UlspDataset:
    """Change a feature's kind, repartitioning its properties.

    Recognized keys the target kind also defines are carried over; the rest
    move to unrecognized, so no value is ever lost. Unrecognized properties
    stay where they are (adopt_property promotes them explicitly).
    """
    reg = reg or default_registry()
    if target not in CONCRETE_KINDS:
        raise TransformError(f"cannot retype to {target}")
    out = ds.copy()
    feat = _find(out, feature_id)
    wanted = required_geometry(target)
    if wanted is not None and not isinstance(feat.geometry, wanted):
        raise TransformError(
            f"geometry class of feature {feature_id} does not fit kind {target}")

    target_keys = reg.field_map(target)
    carried: dict[str, str] = {}
    moved = dict(feat.unrecognized)
    for key, value in feat.recognized.items():
        if key in target_keys:
            carried[key] = value
        else:
            moved[key] = value
    feat.kind = target
    feat.recognized = carried
    feat.unrecognized = moved
    feat.raw_type = None
    return out


def set_metadata(ds: UlspDataset, meta: CollectionMeta) -> UlspDataset:
    """Replace collection metadata wholesale; features untouched."""
    problems = validate_meta_fields(meta)
    if problems:
        raise MetadataError(
            "; ".join(f"{key}: {message}" for key, message in problems),
            fields=[key for key, _ in problems])
    out = ds.copy()
    out.meta = CollectionMeta(nome=meta.nome, descrizione=meta.descrizione,
                              umap_key=meta.umap_key, web_page_url=meta.web_page_url)
    return out


def edit_properties(ds: UlspDataset, feature_id: str,
                    changes: dict[str, str | None],
                    reg: FormatRegistry | None = None) -> UlspDataset:
    """Set or clear recognized values on one feature.

    A text value sets the field, None clears it. All changes are validated
    before any is applied, so a rejected call leaves the dataset untouched.
    """
    reg = reg or default_registry()
    out = ds.copy()
    feat = _find(out, feature_id)
    field_map = reg.field_map(feat.kind)

    for key, value in changes.items():
        spec = field_map.get(key)
        if spec is None:
            raise TransformError(f"kind {feat.kind} has no field {key!r}")
        if value is None:
            continue
        if not isinstance(value, str):
            raise TransformError(f"{key}: value must be text or None")
        _check_enum(spec, value)

    for key, value in changes.items():
        if value is None:
            feat.recognized.pop(key, None)
        else:
            feat.recognized[key] = value
    return out


def adopt_property(ds: UlspDataset, feature_id: str, from_key: str, to_key: str,
                   reg: FormatRegistry | None = None) -> UlspDataset:
    """Promote an unrecognized property into a recognized field."""
    reg = reg or default_registry()
    out = ds.copy()
    feat = _find(out, feature_id)
    if from_key not in feat.unrecognized:
        raise TransformError(
            f"feature {feature_id} has no unrecognized property {from_key!r}")
    spec = reg.field_map(feat.kind).get(to_key)
    if spec is None:
        raise TransformError(f"kind {feat.kind} has no field {to_key!r}")
    value = coerce_field_text(feat.unrecognized[from_key], spec)
    _check_enum(spec, value)
    feat.recognized[to_key] = value
    del feat.unrecognized[from_key]
    return out


def discard_unrecognized(ds: UlspDataset, feature_id: str,
                         keys: set[str] | None = None) -> UlspDataset:
    """Drop unrecognized properties from one feature; None means all of them."""
    out = ds.copy()
    feat = _find(out, feature_id)
    if keys is None:
        feat.unrecognized = {}
    else:
        for key in keys:
            feat.unrecognized.pop(key, None)
    return out
