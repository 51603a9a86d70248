/* Readers that turn source documents into datasets.
 *
 * Two front doors in the editor: lenient GeoJSON (the native format plus
 * anything FeatureCollection-shaped) and per-kind CSV tables.
 */

import { JsonMap, JsonValue, RawNum, compactJson, formatNumber } from "./canonical";
import { parseCsv } from "./csv";
import {
  CsvStructureError,
  ParseError,
  StructureError,
  UnsupportedKindError,
} from "./errors";
import {
  CollectionMeta,
  Coordinate,
  FeatureKind,
  ID_KEY,
  POINT_KINDS,
  PointGeom,
  TYPE_KEY,
  UlspDataset,
  UlspFeature,
  emptyMeta,
  makeFeature,
  multiLineGeom,
  pointGeom,
  pyRepr,
  rawGeom,
} from "./model";
import { parseJsonBytes } from "./parsejson";
import { parseDecimalText } from "./pyfloat";
import { FormatRegistry, defaultRegistry } from "./registry";
import { classifyFeature, coerceFieldText } from "./schema";

function loadJson(source: Uint8Array): JsonValue {
  try {
    return parseJsonBytes(source);
  } catch (exc) {
    if (exc instanceof ParseError && !exc.message.startsWith("input is not valid UTF-8")) {
      throw new ParseError(`malformed JSON: ${exc.message}`, exc.position, exc.line, exc.column);
    }
    throw exc;
  }
}

/* Diagnostic rendering of an arbitrary JSON value. */
function reprValue(value: JsonValue): string {
  if (value === null) return "None";
  if (value === true) return "True";
  if (value === false) return "False";
  if (typeof value === "string") return pyRepr(value);
  if (typeof value === "number" || value instanceof RawNum) return formatNumber(value);
  return compactJson(value);
}

function loadCollection(source: Uint8Array): JsonMap {
  const doc = loadJson(source);
  if (!(doc instanceof Map)) {
    throw new StructureError("top level must be a JSON object");
  }
  const top = doc.has("type") ? doc.get("type")! : null;
  if (top !== "FeatureCollection") {
    throw new StructureError(`top-level type must be 'FeatureCollection', got ${reprValue(top)}`);
  }
  const features = doc.has("features") ? doc.get("features") : [];
  if (!Array.isArray(features)) {
    throw new StructureError("'features' must be a list");
  }
  return doc;
}

function metaText(value: JsonValue | undefined): string {
  if (value === undefined || value === null) return "";
  if (typeof value === "string") return value;
  return coerceFieldText(value);
}

function parseMeta(raw: JsonValue | undefined): CollectionMeta {
  if (!(raw instanceof Map)) return emptyMeta();
  return {
    nome: metaText(raw.get("Nome")),
    descrizione: metaText(raw.get("Descrizione")),
    umapKey: metaText(raw.get("umapKey")),
    webPageUrl: metaText(raw.get("WebPageURL")),
  };
}

function isNum(value: JsonValue): value is number | RawNum {
  return typeof value === "number" || value instanceof RawNum;
}

function toNumber(value: number | RawNum): number {
  return value instanceof RawNum ? Number(value.text) : value;
}

function parsePointCoords(coords: JsonValue | undefined): PointGeom | null {
  if (!Array.isArray(coords) || coords.length < 2 || coords.length > 3) return null;
  if (!coords.every(isNum)) return null;
  const nums = coords.map(toNumber);
  return pointGeom(nums[0], nums[1], coords.length === 3 ? nums[2] : null);
}

/* One coordinate sequence; structural defects (too short) are kept for
 * validation to flag, only non-numeric content rejects the line. */
function parseLine(line: JsonValue): Coordinate[] | null {
  if (!Array.isArray(line)) return null;
  const out: Coordinate[] = [];
  for (const coord of line) {
    if (!Array.isArray(coord) || coord.length < 2 || coord.length > 3) return null;
    if (!coord.every(isNum)) return null;
    out.push(coord.map(toNumber));
  }
  return out;
}

/** Typed geometry when the shape allows it, raw pass-through otherwise. */
function parseGeometry(raw: JsonValue | undefined) {
  if (!(raw instanceof Map)) return rawGeom(raw ?? null);
  const gtype = raw.get("type");
  if (gtype === "Point") {
    const point = parsePointCoords(raw.get("coordinates"));
    return point !== null ? point : rawGeom(raw);
  }
  if (gtype === "MultiLineString") {
    const coords = raw.get("coordinates");
    if (Array.isArray(coords)) {
      const lines = coords.map(parseLine);
      if (lines.every((line) => line !== null)) {
        return multiLineGeom(lines as Coordinate[][]);
      }
    }
    return rawGeom(raw);
  }
  return rawGeom(raw);
}

function idText(value: JsonValue | undefined): string {
  if (typeof value === "string") return value;
  if (typeof value === "number" || typeof value === "boolean" || value instanceof RawNum) {
    return coerceFieldText(value);
  }
  return "";
}

function parseFeature(index: number, raw: JsonValue, reg: FormatRegistry): UlspFeature {
  if (!(raw instanceof Map)) {
    throw new StructureError(`features[${index}] must be a JSON object`);
  }
  let props = raw.get("properties");
  if (!(props instanceof Map)) {
    props = new Map<string, JsonValue>();
  }
  const geometryRaw = raw.get("geometry");
  const gtype = geometryRaw instanceof Map ? geometryRaw.get("type") : "";
  const kind = classifyFeature(props as JsonMap, typeof gtype === "string" ? gtype : "");

  let rawType: string | null = null;
  if (kind === "Unknown") {
    const sourceType = (props as JsonMap).get(TYPE_KEY);
    if (typeof sourceType === "string") {
      rawType = sourceType;
    }
  }

  const recognized = new Map<string, string>();
  const unrecognized = new Map<string, JsonValue>();
  const fieldMap = reg.fieldMap(kind);
  for (const [key, value] of props as JsonMap) {
    if (key === TYPE_KEY || key === ID_KEY) continue;
    const spec = fieldMap.get(key);
    if (spec !== undefined) {
      recognized.set(key, coerceFieldText(value, spec));
    } else {
      unrecognized.set(key, value);
    }
  }

  return makeFeature({
    id: idText((props as JsonMap).get(ID_KEY)),
    kind,
    geometry: parseGeometry(geometryRaw),
    recognized,
    unrecognized,
    rawType,
  });
}

/* Read a FeatureCollection leniently.
 *
 * Collection properties map onto the metadata keys (Nome, Descrizione,
 * umapKey, WebPageURL); other collection-level properties are dropped.
 * Feature properties are partitioned against the registry entry for the
 * classified kind. Geometries other than well-formed Point/MultiLineString
 * are carried through untouched and the feature stays serializable. */
export function parseGeojson(source: Uint8Array, reg: FormatRegistry | null = null): UlspDataset {
  const registry = reg ?? defaultRegistry();
  const doc = loadCollection(source);
  const rawFeatures = (doc.has("features") ? doc.get("features")! : []) as JsonValue[];
  const features = rawFeatures.map((raw, i) => parseFeature(i, raw, registry));
  return { meta: parseMeta(doc.get("properties")), features };
}

export interface CsvImport {
  features: UlspFeature[];
  skipped: Array<[number, string]>; // (row number, reason)
}

// Column names with structural meaning; never treated as property columns.
export const CSV_SPECIAL_COLUMNS = ["lat", "lon", "ele", ID_KEY, TYPE_KEY] as const;

function parseCsvFloat(cell: string, column: string): number {
  const value = parseDecimalText(cell.trim());
  if (value === null) {
    throw new Error(`column ${pyRepr(column)}: not a number: ${pyRepr(cell)}`);
  }
  if (!Number.isFinite(value)) {
    throw new Error(`column ${pyRepr(column)}: not a finite number: ${pyRepr(cell)}`);
  }
  return value;
}

/* Read one CSV table into features of a single point kind.
 *
 * First row is the header; "lat" and "lon" are required columns, "ele" and
 * "ulsp_id" are honored when present, a "ulsp_type" column is ignored (the
 * kind is fixed by the caller). Columns matching registry field keys fill
 * recognized values, everything else lands in unrecognized. Rows are
 * independent: a broken row is skipped and reported with its row number,
 * counting the header as row 1. Blank rows are ignored. */
export function importCsv(source: Uint8Array, kind: FeatureKind,
                          reg: FormatRegistry | null = null): CsvImport {
  const registry = reg ?? defaultRegistry();
  if (!POINT_KINDS.has(kind)) {
    throw new UnsupportedKindError(`CSV import handles point kinds only, not ${kind}`);
  }
  let text: string;
  try {
    text = new TextDecoder("utf-8", { fatal: true }).decode(source);
  } catch (exc) {
    throw new ParseError(`input is not valid UTF-8: ${(exc as Error).message}`);
  }
  if (text.startsWith("﻿")) {
    text = text.slice(1);
  }

  const rows = parseCsv(text);
  if (rows.length === 0) {
    throw new CsvStructureError("empty input: a header row is required");
  }
  const header = rows[0];
  const missing = ["lat", "lon"].filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new CsvStructureError(`missing required column(s): ${missing.join(", ")}`);
  }
  const columns = new Map<string, number>();
  header.forEach((name, i) => {
    if (name && !columns.has(name)) columns.set(name, i); // first occurrence wins
  });

  const fieldMap = registry.fieldMap(kind);
  const features: UlspFeature[] = [];
  const skipped: Array<[number, string]> = [];

  rows.slice(1).forEach((row, offset) => {
    const rowNumber = offset + 2;
    if (row.length === 0) return;
    if (row.length > header.length) {
      skipped.push([rowNumber, `row has ${row.length} cells, header has ${header.length}`]);
      return;
    }
    const cells = row.concat(Array(header.length - row.length).fill(""));
    const cell = (name: string): string => {
      const index = columns.get(name);
      return index !== undefined ? cells[index] : "";
    };

    let lat: number;
    let lon: number;
    let ele: number | null;
    try {
      lat = parseCsvFloat(cell("lat"), "lat");
      lon = parseCsvFloat(cell("lon"), "lon");
      const eleText = cell("ele").trim();
      ele = eleText ? parseCsvFloat(eleText, "ele") : null;
    } catch (exc) {
      skipped.push([rowNumber, (exc as Error).message]);
      return;
    }

    const recognized = new Map<string, string>();
    const unrecognized = new Map<string, JsonValue>();
    for (const [name, index] of columns) {
      if ((CSV_SPECIAL_COLUMNS as readonly string[]).includes(name)) continue;
      const value = cells[index];
      if (value === "") continue;
      if (fieldMap.has(name)) {
        recognized.set(name, value);
      } else {
        unrecognized.set(name, value);
      }
    }

    features.push(makeFeature({
      id: cell(ID_KEY),
      kind,
      geometry: pointGeom(lon, lat, ele),
      recognized,
      unrecognized,
    }));
  });

  return { features, skipped };
}
