"""Format registry: the machine-readable description of feature kinds.

The registry drives validation, CSV import/export, form rendering and map
popup/icon styling. It is loaded from a single JSON document::

    {
      "version": "1.0",
      "kinds": {"<KindName>": [{"key", "label", "kind", "options", "required"}, ...]},
      "icon_map": {"<tag>": "<icon-id>"},
      "styles": {"<KindName>": {"color": "#rrggbb", "icon": "<icon-id>"}},
      "icon_url_template": "https://.../{icon}.svg"
    }

``kinds`` must contain an entry for each of the six concrete kinds.
``icon_map``, ``styles`` and ``icon_url_template`` are optional; absent values
fall back to neutral defaults. A copy of the shipped default is printed by
``fieldatlas registry --dump``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import RegistryError
from .model import CONCRETE_KINDS, FeatureKind

FIELD_KINDS = ("text", "longtext", "url", "image_url", "tags", "number", "enum")

DEFAULT_ICON_URL_TEMPLATE = "https://unpkg.com/@mapbox/maki/icons/{icon}.svg"
DEFAULT_STYLE_COLOR = "#3388ff"
DEFAULT_STYLE_ICON = "pin"


@dataclass
class FieldSpec:
    key: str
    label: str
    kind: str
    options: list[str] = field(default_factory=list)
    required: bool = False


@dataclass
class KindStyle:
    color: str = DEFAULT_STYLE_COLOR
    icon: str = DEFAULT_STYLE_ICON


@dataclass
class FormatRegistry:
    version: str
    kinds: dict[FeatureKind, list[FieldSpec]]
    icon_map: dict[str, str] = field(default_factory=dict)
    styles: dict[FeatureKind, KindStyle] = field(default_factory=dict)
    icon_url_template: str = DEFAULT_ICON_URL_TEMPLATE

    def fields_for(self, kind: FeatureKind) -> list[FieldSpec]:
        return self.kinds.get(kind, [])

    def field_map(self, kind: FeatureKind) -> dict[str, FieldSpec]:
        return {spec.key: spec for spec in self.fields_for(kind)}

    def first_field(self, kind: FeatureKind, field_kind: str) -> FieldSpec | None:
        for spec in self.fields_for(kind):
            if spec.kind == field_kind:
                return spec
        return None

    def style_for(self, kind: FeatureKind) -> KindStyle:
        return self.styles.get(kind, KindStyle())

    def icon_url(self, icon_id: str) -> str:
        return self.icon_url_template.replace("{icon}", icon_id)


def _parse_field(kind_name: str, index: int, raw: object) -> FieldSpec:
    where = f"kinds.{kind_name}[{index}]"
    if not isinstance(raw, dict):
        raise RegistryError(f"{where}: field entry must be an object")
    key = raw.get("key")
    if not isinstance(key, str) or not key.strip():
        raise RegistryError(f"{where}: missing or empty field key")
    label = raw.get("label", key)
    if not isinstance(label, str):
        raise RegistryError(f"{where} ({key}): label must be text")
    fkind = raw.get("kind", "text")
    if fkind not in FIELD_KINDS:
        raise RegistryError(
            f"{where} ({key}): unknown field kind {fkind!r}; expected one of {', '.join(FIELD_KINDS)}")
    options = raw.get("options", [])
    if not isinstance(options, list) or not all(isinstance(o, str) for o in options):
        raise RegistryError(f"{where} ({key}): options must be a list of strings")
    if fkind == "enum" and not options:
        raise RegistryError(f"{where} ({key}): enum field must list at least one option")
    if fkind != "enum" and options:
        raise RegistryError(f"{where} ({key}): only enum fields may list options")
    required = raw.get("required", False)
    if not isinstance(required, bool):
        raise RegistryError(f"{where} ({key}): required must be a boolean")
    return FieldSpec(key=key, label=label, kind=fkind, options=list(options), required=required)


def load_format_registry(source: bytes) -> FormatRegistry:
    """Parse and check a registry document; raise RegistryError on any defect."""
    try:
        doc = json.loads(source.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise RegistryError(f"registry is not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RegistryError(
            f"registry is not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(doc, dict):
        raise RegistryError("registry document must be a JSON object")

    version = doc.get("version", "")
    if not isinstance(version, str):
        raise RegistryError("version must be text")

    raw_kinds = doc.get("kinds")
    if not isinstance(raw_kinds, dict):
        raise RegistryError("registry must have a 'kinds' object")

    kinds: dict[FeatureKind, list[FieldSpec]] = {}
    for kind in CONCRETE_KINDS:
        if kind.value not in raw_kinds:
            raise RegistryError(f"registry is missing an entry for kind {kind.value!r}")
        raw_fields = raw_kinds[kind.value]
        if not isinstance(raw_fields, list):
            raise RegistryError(f"kinds.{kind.value} must be a list of field entries")
        specs = [_parse_field(kind.value, i, f) for i, f in enumerate(raw_fields)]
        seen: set[str] = set()
        for spec in specs:
            if spec.key in seen:
                raise RegistryError(f"kinds.{kind.value}: duplicate field key {spec.key!r}")
            seen.add(spec.key)
        kinds[kind] = specs
    unknown = set(raw_kinds) - {k.value for k in CONCRETE_KINDS}
    if unknown:
        raise RegistryError(f"registry names unknown kinds: {', '.join(sorted(unknown))}")

    icon_map = doc.get("icon_map", {})
    if not isinstance(icon_map, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in icon_map.items()):
        raise RegistryError("icon_map must map tag text to icon identifiers")

    styles: dict[FeatureKind, KindStyle] = {}
    raw_styles = doc.get("styles", {})
    if not isinstance(raw_styles, dict):
        raise RegistryError("styles must be an object")
    for name, raw in raw_styles.items():
        if name not in {k.value for k in CONCRETE_KINDS}:
            raise RegistryError(f"styles names unknown kind {name!r}")
        if not isinstance(raw, dict):
            raise RegistryError(f"styles.{name} must be an object")
        styles[FeatureKind(name)] = KindStyle(
            color=str(raw.get("color", DEFAULT_STYLE_COLOR)),
            icon=str(raw.get("icon", DEFAULT_STYLE_ICON)),
        )

    template = doc.get("icon_url_template", DEFAULT_ICON_URL_TEMPLATE)
    if not isinstance(template, str):
        raise RegistryError("icon_url_template must be text")

    return FormatRegistry(version=version, kinds=kinds, icon_map=dict(icon_map),
                          styles=styles, icon_url_template=template)


def default_registry_bytes() -> bytes:
    return resources.files("fieldatlas").joinpath("data/default_registry.json").read_bytes()


_DEFAULT: FormatRegistry | None = None


def default_registry() -> FormatRegistry:
    """The shipped registry, loaded once per process."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_format_registry(default_registry_bytes())
    return _DEFAULT
