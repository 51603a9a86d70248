/* Format registry: the machine-readable description of feature kinds.
 *
 * The registry drives validation, CSV import/export, form rendering and
 * icon styling. It is loaded from a single JSON document:
 *
 *   {
 *     "version": "1.0",
 *     "kinds": {"<KindName>": [{"key", "label", "kind", "options", "required"}, ...]},
 *     "icon_map": {"<tag>": "<icon-id>"},
 *     "styles": {"<KindName>": {"color": "#rrggbb", "icon": "<icon-id>"}},
 *     "icon_url_template": "https://.../{icon}.svg"
 *   }
 *
 * "kinds" must contain an entry for each of the six concrete kinds.
 * "icon_map", "styles" and "icon_url_template" are optional; absent values
 * fall back to neutral defaults.
 */

import { JsonMap, JsonValue, RawNum, formatNumber } from "./canonical";
import { ParseError, RegistryError } from "./errors";
import { CONCRETE_KINDS, FeatureKind, KIND_NAMES, pyRepr } from "./model";
import { parseJsonBytes } from "./parsejson";
import { DEFAULT_REGISTRY_TEXT } from "./registry_default";

export const FIELD_KINDS = [
  "text", "longtext", "url", "image_url", "tags", "number", "enum",
] as const;

export type FieldKind = (typeof FIELD_KINDS)[number];

export const DEFAULT_ICON_URL_TEMPLATE = "https://unpkg.com/@mapbox/maki/icons/{icon}.svg";
export const DEFAULT_STYLE_COLOR = "#3388ff";
export const DEFAULT_STYLE_ICON = "pin";

export interface FieldSpec {
  key: string;
  label: string;
  kind: FieldKind;
  options: string[];
  required: boolean;
}

export interface KindStyle {
  color: string;
  icon: string;
}

export class FormatRegistry {
  constructor(
    readonly version: string,
    readonly kinds: Map<FeatureKind, FieldSpec[]>,
    readonly iconMap: Map<string, string> = new Map(),
    readonly styles: Map<FeatureKind, KindStyle> = new Map(),
    readonly iconUrlTemplate: string = DEFAULT_ICON_URL_TEMPLATE,
  ) {}

  fieldsFor(kind: FeatureKind): FieldSpec[] {
    return this.kinds.get(kind) ?? [];
  }

  fieldMap(kind: FeatureKind): Map<string, FieldSpec> {
    const out = new Map<string, FieldSpec>();
    for (const spec of this.fieldsFor(kind)) out.set(spec.key, spec);
    return out;
  }

  firstField(kind: FeatureKind, fieldKind: FieldKind): FieldSpec | null {
    for (const spec of this.fieldsFor(kind)) {
      if (spec.kind === fieldKind) return spec;
    }
    return null;
  }

  styleFor(kind: FeatureKind): KindStyle {
    return this.styles.get(kind) ?? { color: DEFAULT_STYLE_COLOR, icon: DEFAULT_STYLE_ICON };
  }

  iconUrl(iconId: string): string {
    return this.iconUrlTemplate.replace("{icon}", iconId);
  }
}

function isMap(value: JsonValue | undefined): value is JsonMap {
  return value instanceof Map;
}

/* Lenient text coercion for style values, mirroring a plain str() cast. */
function asText(value: JsonValue): string {
  if (typeof value === "string") return value;
  if (typeof value === "boolean") return value ? "True" : "False";
  if (value === null) return "None";
  if (typeof value === "number" || value instanceof RawNum) return formatNumber(value);
  return String(value);
}

function parseField(kindName: string, index: number, raw: JsonValue): FieldSpec {
  const where = `kinds.${kindName}[${index}]`;
  if (!isMap(raw)) {
    throw new RegistryError(`${where}: field entry must be an object`);
  }
  const key = raw.get("key");
  if (typeof key !== "string" || !key.trim()) {
    throw new RegistryError(`${where}: missing or empty field key`);
  }
  const label = raw.has("label") ? raw.get("label") : key;
  if (typeof label !== "string") {
    throw new RegistryError(`${where} (${key}): label must be text`);
  }
  const fkind = raw.has("kind") ? raw.get("kind") : "text";
  if (typeof fkind !== "string" || !(FIELD_KINDS as readonly string[]).includes(fkind)) {
    throw new RegistryError(
      `${where} (${key}): unknown field kind ${pyRepr(String(fkind))}; `
      + `expected one of ${FIELD_KINDS.join(", ")}`);
  }
  const options = raw.has("options") ? raw.get("options") : [];
  if (!Array.isArray(options) || !options.every((o) => typeof o === "string")) {
    throw new RegistryError(`${where} (${key}): options must be a list of strings`);
  }
  if (fkind === "enum" && options.length === 0) {
    throw new RegistryError(`${where} (${key}): enum field must list at least one option`);
  }
  if (fkind !== "enum" && options.length > 0) {
    throw new RegistryError(`${where} (${key}): only enum fields may list options`);
  }
  const required = raw.has("required") ? raw.get("required") : false;
  if (typeof required !== "boolean") {
    throw new RegistryError(`${where} (${key}): required must be a boolean`);
  }
  return {
    key,
    label,
    kind: fkind as FieldKind,
    options: (options as string[]).slice(),
    required,
  };
}

/** Parse and check a registry document; throw RegistryError on any defect. */
export function loadFormatRegistry(source: Uint8Array | string): FormatRegistry {
  let doc: JsonValue;
  try {
    doc = typeof source === "string"
      ? parseJsonBytes(new TextEncoder().encode(source))
      : parseJsonBytes(source);
  } catch (exc) {
    if (exc instanceof ParseError) {
      const reason = exc.message.startsWith("input is not valid UTF-8")
        ? `registry is not valid UTF-8: ${exc.message.slice("input is not valid UTF-8: ".length)}`
        : `registry is not valid JSON: ${exc.message}`;
      throw new RegistryError(reason);
    }
    throw exc;
  }
  if (!isMap(doc)) {
    throw new RegistryError("registry document must be a JSON object");
  }

  const version = doc.has("version") ? doc.get("version") : "";
  if (typeof version !== "string") {
    throw new RegistryError("version must be text");
  }

  const rawKinds = doc.get("kinds");
  if (!isMap(rawKinds)) {
    throw new RegistryError("registry must have a 'kinds' object");
  }

  const kinds = new Map<FeatureKind, FieldSpec[]>();
  for (const kind of CONCRETE_KINDS) {
    if (!rawKinds.has(kind)) {
      throw new RegistryError(`registry is missing an entry for kind ${pyRepr(kind)}`);
    }
    const rawFields = rawKinds.get(kind);
    if (!Array.isArray(rawFields)) {
      throw new RegistryError(`kinds.${kind} must be a list of field entries`);
    }
    const specs = rawFields.map((f, i) => parseField(kind, i, f));
    const seen = new Set<string>();
    for (const spec of specs) {
      if (seen.has(spec.key)) {
        throw new RegistryError(`kinds.${kind}: duplicate field key ${pyRepr(spec.key)}`);
      }
      seen.add(spec.key);
    }
    kinds.set(kind, specs);
  }
  const unknown = Array.from(rawKinds.keys()).filter((name) => !KIND_NAMES.has(name));
  if (unknown.length > 0) {
    throw new RegistryError(`registry names unknown kinds: ${unknown.sort().join(", ")}`);
  }

  const rawIconMap = doc.has("icon_map") ? doc.get("icon_map") : new Map();
  if (!isMap(rawIconMap)) {
    throw new RegistryError("icon_map must map tag text to icon identifiers");
  }
  const iconMap = new Map<string, string>();
  for (const [tag, icon] of rawIconMap) {
    if (typeof icon !== "string") {
      throw new RegistryError("icon_map must map tag text to icon identifiers");
    }
    iconMap.set(tag, icon);
  }

  const styles = new Map<FeatureKind, KindStyle>();
  const rawStyles = doc.has("styles") ? doc.get("styles") : new Map();
  if (!isMap(rawStyles)) {
    throw new RegistryError("styles must be an object");
  }
  for (const [name, raw] of rawStyles) {
    if (!KIND_NAMES.has(name)) {
      throw new RegistryError(`styles names unknown kind ${pyRepr(name)}`);
    }
    if (!isMap(raw)) {
      throw new RegistryError(`styles.${name} must be an object`);
    }
    styles.set(name as FeatureKind, {
      color: raw.has("color") ? asText(raw.get("color")!) : DEFAULT_STYLE_COLOR,
      icon: raw.has("icon") ? asText(raw.get("icon")!) : DEFAULT_STYLE_ICON,
    });
  }

  const template = doc.has("icon_url_template") ? doc.get("icon_url_template") : DEFAULT_ICON_URL_TEMPLATE;
  if (typeof template !== "string") {
    throw new RegistryError("icon_url_template must be text");
  }

  return new FormatRegistry(version, kinds, iconMap, styles, template);
}

let cached: FormatRegistry | null = null;

/** The shipped registry, loaded once. */
export function defaultRegistry(): FormatRegistry {
  if (cached === null) {
    cached = loadFormatRegistry(DEFAULT_REGISTRY_TEXT);
  }
  return cached;
}
