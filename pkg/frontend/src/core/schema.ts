/* Classification, validation and canonicalization of datasets. */

import {
  JsonMap,
  JsonValue,
  RawNum,
  compactJson,
  formatNumber,
  pyFloatRepr,
  round6,
  sortedByCodePoint,
} from "./canonical";
import {
  Coordinate,
  FeatureKind,
  KIND_NAMES,
  UlspDataset,
  ValidationReport,
  copyDataset,
  pyRepr,
  requiredGeometry,
  validateMetaFields,
} from "./model";
import { parseDecimalText } from "./pyfloat";
import { FieldSpec, FormatRegistry, defaultRegistry } from "./registry";

/* Kind named by "ulsp_type", matched exactly and case-sensitively.
 *
 * Geometry is deliberately not consulted: a kind/geometry mismatch is a
 * validation error, not a classification input. */
export function classifyFeature(rawProperties: JsonMap, geometryType: string): FeatureKind {
  void geometryType;
  const value = rawProperties.get("ulsp_type");
  if (typeof value === "string" && KIND_NAMES.has(value)) {
    return value as FeatureKind;
  }
  return "Unknown";
}

function isScalar(value: JsonValue): boolean {
  return (
    typeof value === "string"
    || typeof value === "number"
    || typeof value === "boolean"
    || value instanceof RawNum
  );
}

/** Render an arbitrary JSON value as the text stored in a recognized field. */
export function coerceFieldText(value: JsonValue, spec: FieldSpec | null = null): string {
  if (value === null) return "";
  if (typeof value === "string") return value;
  if (typeof value === "boolean") return value ? "true" : "false";
  if (typeof value === "number" || value instanceof RawNum) return formatNumber(value);
  if (spec !== null && spec.kind === "tags" && Array.isArray(value) && value.every(isScalar)) {
    return value.map((v) => coerceFieldText(v)).join(",");
  }
  return compactJson(value);
}

function subjectOf(id: string, index: number): string {
  return id !== "" ? id : `#${index}`;
}

function checkCoordinate(report: ValidationReport, subject: string, lon: number, lat: number): void {
  if (!(lon >= -180.0 && lon <= 180.0)) {
    report.error(subject, "", `longitude ${pyFloatRepr(lon)} out of range [-180, 180]`);
  }
  if (!(lat >= -90.0 && lat <= 90.0)) {
    report.error(subject, "", `latitude ${pyFloatRepr(lat)} out of range [-90, 90]`);
  }
}

/** Check every invariant; errors block publication, warnings never do. */
export function validateDataset(ds: UlspDataset, reg: FormatRegistry | null = null): ValidationReport {
  const registry = reg ?? defaultRegistry();
  const report = new ValidationReport();

  for (const [fieldKey, message] of validateMetaFields(ds.meta)) {
    report.error("collection", fieldKey, message);
  }
  if (!ds.meta.umapKey) {
    report.warning("collection", "umapKey", "no uMap cross-reference set");
  }
  if (!ds.meta.webPageUrl) {
    report.warning("collection", "WebPageURL", "no web page cross-reference set");
  }

  const seenIds = new Set<string>();
  ds.features.forEach((feat, index) => {
    const subject = subjectOf(feat.id, index);

    if (feat.id) {
      if (seenIds.has(feat.id)) {
        report.error(subject, "", `duplicate feature id ${pyRepr(feat.id)}`);
      }
      seenIds.add(feat.id);
    }

    if (feat.kind === "Unknown") {
      report.warning(subject, "", "feature kind is Unknown; it will be ignored by exports");
    } else {
      const wanted = requiredGeometry(feat.kind);
      if (wanted !== null && feat.geometry.type !== wanted) {
        const wantName = wanted === "point" ? "Point" : "MultiLineString";
        report.error(subject, "",
          `kind/geometry mismatch: ${feat.kind} requires ${wantName} geometry`);
      }
    }

    const geom = feat.geometry;
    if (geom.type === "point") {
      checkCoordinate(report, subject, geom.lon, geom.lat);
    } else if (geom.type === "multiline") {
      if (geom.lines.length === 0) {
        report.error(subject, "", "MultiLineString must have at least one line");
      }
      geom.lines.forEach((line, li) => {
        if (line.length < 2) {
          report.error(subject, "", `line ${li} has fewer than 2 coordinates`);
        }
        for (const coord of line) {
          checkCoordinate(report, subject, coord[0], coord[1]);
        }
      });
    }

    const fieldMap = registry.fieldMap(feat.kind);
    for (const spec of fieldMap.values()) {
      const value = feat.recognized.get(spec.key) ?? "";
      if (spec.required && !value.trim()) {
        report.error(subject, spec.key, "required field is not set");
      }
    }
    for (const [key, value] of feat.recognized) {
      const spec = fieldMap.get(key);
      if (spec === undefined) continue;
      if (!value.trim()) continue;
      if (spec.kind === "enum" && !spec.options.includes(value)) {
        report.error(subject, key,
          `value ${pyRepr(value)} is not one of: ${spec.options.join(", ")}`);
      } else if (spec.kind === "number") {
        if (parseDecimalText(value.trim()) === null) {
          report.error(subject, key, `value ${pyRepr(value)} is not a number`);
        }
      }
    }

    if (feat.unrecognized.size > 0) {
      const keys = sortedByCodePoint(feat.unrecognized.keys()).join(", ");
      report.warning(subject, "", `unrecognized properties: ${keys}`);
    }
  });

  return report;
}

/** Random version-4 UUID in the canonical lowercase text form. */
export function makeUuid4(): string {
  const cryptoObj = globalThis.crypto;
  if (typeof cryptoObj.randomUUID === "function") {
    return cryptoObj.randomUUID();
  }
  const bytes = new Uint8Array(16);
  cryptoObj.getRandomValues(bytes);
  bytes[6] = (bytes[6] & 0x0f) | 0x40;
  bytes[8] = (bytes[8] & 0x3f) | 0x80;
  const hex = Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
  return `${hex.slice(0, 8)}-${hex.slice(8, 12)}-${hex.slice(12, 16)}-${hex.slice(16, 20)}-${hex.slice(20)}`;
}

function cleanUnrecognized(value: JsonValue): JsonValue {
  return typeof value === "string" ? value.trim() : value;
}

/* Normal form: fresh UUIDs where ids are missing, six-decimal coordinates,
 * trimmed text, empty recognized values dropped. Idempotent. */
export function canonicalize(ds: UlspDataset): UlspDataset {
  const out = copyDataset(ds);
  const meta = out.meta;
  meta.nome = meta.nome.trim();
  meta.descrizione = meta.descrizione.trim();
  meta.umapKey = meta.umapKey.trim();
  meta.webPageUrl = meta.webPageUrl.trim();

  for (const feat of out.features) {
    if (!feat.id) {
      feat.id = makeUuid4();
    }
    const geom = feat.geometry;
    if (geom.type === "point") {
      geom.lon = round6(geom.lon);
      geom.lat = round6(geom.lat);
      if (geom.ele !== null) {
        geom.ele = round6(geom.ele);
      }
    } else if (geom.type === "multiline") {
      geom.lines = geom.lines.map(
        (line) => line.map((coord): Coordinate => coord.map(round6)));
    }
    const cleaned = new Map<string, string>();
    for (const [key, value] of feat.recognized) {
      const trimmed = value.trim();
      if (trimmed) cleaned.set(key, trimmed);
    }
    feat.recognized = cleaned;
    const rebuilt = new Map<string, JsonValue>();
    for (const [key, value] of feat.unrecognized) {
      rebuilt.set(key, cleanUnrecognized(value));
    }
    feat.unrecognized = rebuilt;
  }
  return out;
}
