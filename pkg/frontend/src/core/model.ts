/* Core data model: feature kinds, geometries, features, datasets, reports.
 *
 * A dataset is a single FeatureCollection: collection-level metadata plus an
 * ordered list of typed features. Feature properties are split into
 * recognized (keys the format registry knows for the feature's kind, values
 * always text) and unrecognized (everything else, values kept raw so nothing
 * is lost on round trips).
 */

import { JsonValue, RawNum } from "./canonical";

export type FeatureKind =
  | "Sito"
  | "POI"
  | "QRtag"
  | "Risorsa"
  | "Percorso"
  | "Itinerario"
  | "Unknown";

// Fixed presentation order for layers, tables and manifests.
export const CONCRETE_KINDS: readonly FeatureKind[] = [
  "Sito", "POI", "QRtag", "Risorsa", "Percorso", "Itinerario",
];

export const POINT_KINDS: ReadonlySet<FeatureKind> = new Set([
  "Sito", "POI", "QRtag", "Risorsa",
]);
export const LINE_KINDS: ReadonlySet<FeatureKind> = new Set([
  "Percorso", "Itinerario",
]);

export const KIND_NAMES: ReadonlySet<string> = new Set(CONCRETE_KINDS);

// Property keys lifted out of the properties map into the feature itself.
export const TYPE_KEY = "ulsp_type";
export const ID_KEY = "ulsp_id";

// Collection-level property keys, in canonical serialization order.
export const META_KEYS = ["Nome", "Descrizione", "umapKey", "WebPageURL"] as const;

// A coordinate is [lon, lat] or [lon, lat, ele], WGS84 decimal degrees.
export type Coordinate = number[];

export interface PointGeom {
  type: "point";
  lon: number;
  lat: number;
  ele: number | null;
}

export interface MultiLineGeom {
  type: "multiline";
  lines: Coordinate[][];
}

/** Pass-through for geometry this editor does not type (or null geometry). */
export interface RawGeom {
  type: "raw";
  data: JsonValue;
}

export type Geometry = PointGeom | MultiLineGeom | RawGeom;

export function pointGeom(lon: number, lat: number, ele: number | null = null): PointGeom {
  return { type: "point", lon, lat, ele };
}

export function multiLineGeom(lines: Coordinate[][]): MultiLineGeom {
  return { type: "multiline", lines };
}

export function rawGeom(data: JsonValue = null): RawGeom {
  return { type: "raw", data };
}

export function pointCoordinate(geom: PointGeom): Coordinate {
  return geom.ele === null ? [geom.lon, geom.lat] : [geom.lon, geom.lat, geom.ele];
}

/** Collection metadata. Empty string means "not set" for every field. */
export interface CollectionMeta {
  nome: string;
  descrizione: string;
  umapKey: string;
  webPageUrl: string;
}

export function emptyMeta(): CollectionMeta {
  return { nome: "", descrizione: "", umapKey: "", webPageUrl: "" };
}

/* One geolocated record. rawType preserves a source ulsp_type value that did
 * not match any concrete kind name, so foreign files survive untouched. */
export interface UlspFeature {
  id: string;
  kind: FeatureKind;
  geometry: Geometry;
  recognized: Map<string, string>;
  unrecognized: Map<string, JsonValue>;
  rawType: string | null;
}

export function makeFeature(partial: Partial<UlspFeature> = {}): UlspFeature {
  return {
    id: partial.id ?? "",
    kind: partial.kind ?? "Unknown",
    geometry: partial.geometry ?? rawGeom(),
    recognized: partial.recognized ?? new Map(),
    unrecognized: partial.unrecognized ?? new Map(),
    rawType: partial.rawType ?? null,
  };
}

export interface UlspDataset {
  meta: CollectionMeta;
  features: UlspFeature[];
}

export function emptyDataset(): UlspDataset {
  return { meta: emptyMeta(), features: [] };
}

export function featureById(ds: UlspDataset, featureId: string): UlspFeature | null {
  for (const feat of ds.features) {
    if (feat.id === featureId) return feat;
  }
  return null;
}

export function kindCounts(ds: UlspDataset): Map<FeatureKind, number> {
  const counts = new Map<FeatureKind, number>();
  for (const feat of ds.features) {
    counts.set(feat.kind, (counts.get(feat.kind) ?? 0) + 1);
  }
  return counts;
}

/* structuredClone would flatten RawNum instances into plain objects, so the
 * deep copy walks the tree explicitly and shares the immutable RawNums. */
export function copyJsonValue(value: JsonValue): JsonValue {
  if (value instanceof Map) {
    const out = new Map<string, JsonValue>();
    for (const [key, item] of value) out.set(key, copyJsonValue(item));
    return out;
  }
  if (Array.isArray(value)) return value.map(copyJsonValue);
  return value;
}

export function copyGeometry(geom: Geometry): Geometry {
  if (geom.type === "point") return { ...geom };
  if (geom.type === "multiline") {
    return multiLineGeom(geom.lines.map((line) => line.map((coord) => [...coord])));
  }
  return rawGeom(copyJsonValue(geom.data));
}

export function copyFeature(feat: UlspFeature): UlspFeature {
  return {
    id: feat.id,
    kind: feat.kind,
    geometry: copyGeometry(feat.geometry),
    recognized: new Map(feat.recognized),
    unrecognized: copyJsonValue(feat.unrecognized) as Map<string, JsonValue>,
    rawType: feat.rawType,
  };
}

export function copyDataset(ds: UlspDataset): UlspDataset {
  return { meta: { ...ds.meta }, features: ds.features.map(copyFeature) };
}

export interface ValidationIssue {
  subject: string; // feature id (or "#<index>" when the feature has none) or "collection"
  field: string;   // field key, or "" when the issue is not about one field
  message: string;
}

export function issueText(issue: ValidationIssue): string {
  const where = issue.field ? `${issue.subject}.${issue.field}` : issue.subject;
  return `${where}: ${issue.message}`;
}

export class ValidationReport {
  errors: ValidationIssue[] = [];
  warnings: ValidationIssue[] = [];

  get isValid(): boolean {
    return this.errors.length === 0;
  }

  error(subject: string, field: string, message: string): void {
    this.errors.push({ subject, field, message });
  }

  warning(subject: string, field: string, message: string): void {
    this.warnings.push({ subject, field, message });
  }
}

/* Python-style repr quoting for diagnostics: single quotes preferred, double
 * quotes when the text contains a single quote and no double quote. */
export function pyRepr(text: string): string {
  const quote = text.includes("'") && !text.includes('"') ? '"' : "'";
  let out = quote;
  for (const ch of text) {
    const code = ch.codePointAt(0)!;
    if (ch === quote || ch === "\\") out += "\\" + ch;
    else if (ch === "\n") out += "\\n";
    else if (ch === "\r") out += "\\r";
    else if (ch === "\t") out += "\\t";
    else if (code < 0x20) out += `\\x${code.toString(16).padStart(2, "0")}`;
    else out += ch;
  }
  return out + quote;
}

/* Absolute means scheme plus network location, the same test the core
 * applies: "https://example.org/x" passes, "example.org/x" does not. */
export function isAbsoluteUrl(text: string): boolean {
  const match = /^[a-zA-Z][a-zA-Z0-9+.-]*:\/\/([^/?#]+)/.exec(text);
  if (!match) return false;
  const netloc = match[1];
  if (netloc.includes("[") !== netloc.includes("]")) return false;
  return netloc.length > 0;
}

/** (field, message) pairs for metadata invariant violations. */
export function validateMetaFields(meta: CollectionMeta): Array<[string, string]> {
  const problems: Array<[string, string]> = [];
  if (!meta.nome.trim()) {
    problems.push(["Nome", "dataset name must not be empty"]);
  }
  if (meta.umapKey && !isAbsoluteUrl(meta.umapKey)) {
    problems.push(["umapKey", `not an absolute URL: ${pyRepr(meta.umapKey)}`]);
  }
  if (meta.webPageUrl && !isAbsoluteUrl(meta.webPageUrl)) {
    problems.push(["WebPageURL", `not an absolute URL: ${pyRepr(meta.webPageUrl)}`]);
  }
  return problems;
}

/** Geometry type tag a concrete kind requires; null when unconstrained. */
export function requiredGeometry(kind: FeatureKind): "point" | "multiline" | null {
  if (POINT_KINDS.has(kind)) return "point";
  if (LINE_KINDS.has(kind)) return "multiline";
  return null;
}

export { RawNum };
export type { JsonValue };
