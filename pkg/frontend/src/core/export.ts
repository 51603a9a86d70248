/* Serializers: canonical GeoJSON, GPX 1.1, CSV tables.
 *
 * All three are byte-deterministic given the same dataset and registry (no
 * timestamps anywhere), and match the command-line serializers byte for
 * byte on the same input.
 */

import {
  JsonMap,
  JsonValue,
  RawNum,
  dumps,
  formatCoord,
  sortedByCodePoint,
} from "./canonical";
import { writeCsvRow } from "./csv";
import { UnsupportedKindError } from "./errors";
import {
  CollectionMeta,
  Coordinate,
  FeatureKind,
  Geometry,
  ID_KEY,
  LINE_KINDS,
  POINT_KINDS,
  TYPE_KEY,
  UlspDataset,
  UlspFeature,
  pointCoordinate,
} from "./model";
import { FormatRegistry, defaultRegistry } from "./registry";

function coordDoc(coord: Coordinate): JsonValue[] {
  return coord.map((c) => new RawNum(formatCoord(c)));
}

function geometryDoc(geom: Geometry): JsonValue {
  if (geom.type === "point") {
    return new Map<string, JsonValue>([
      ["type", "Point"],
      ["coordinates", coordDoc(pointCoordinate(geom))],
    ]);
  }
  if (geom.type === "multiline") {
    return new Map<string, JsonValue>([
      ["type", "MultiLineString"],
      ["coordinates", geom.lines.map((line) => line.map(coordDoc))],
    ]);
  }
  return geom.data;
}

/* Fixed key order: ulsp_type, ulsp_id, registry fields, leftovers, then
 * unrecognized keys sorted by codepoint. */
function propertiesDoc(feat: UlspFeature, reg: FormatRegistry): JsonMap {
  const props = new Map<string, JsonValue>();
  if (feat.kind !== "Unknown") {
    props.set(TYPE_KEY, feat.kind);
  } else if (feat.rawType !== null) {
    props.set(TYPE_KEY, feat.rawType);
  }
  if (feat.id) {
    props.set(ID_KEY, feat.id);
  }
  const listed = new Set<string>();
  for (const spec of reg.fieldsFor(feat.kind)) {
    listed.add(spec.key);
    if (feat.recognized.has(spec.key)) {
      props.set(spec.key, feat.recognized.get(spec.key)!);
    }
  }
  const leftovers = Array.from(feat.recognized.keys()).filter((k) => !listed.has(k));
  for (const key of sortedByCodePoint(leftovers)) {
    props.set(key, feat.recognized.get(key)!);
  }
  for (const key of sortedByCodePoint(feat.unrecognized.keys())) {
    props.set(key, feat.unrecognized.get(key)!);
  }
  return props;
}

function featureDoc(feat: UlspFeature, reg: FormatRegistry): JsonMap {
  return new Map<string, JsonValue>([
    ["type", "Feature"],
    ["geometry", geometryDoc(feat.geometry)],
    ["properties", propertiesDoc(feat, reg)],
  ]);
}

function metaDoc(meta: CollectionMeta): JsonMap {
  return new Map<string, JsonValue>([
    ["Nome", meta.nome],
    ["Descrizione", meta.descrizione],
    ["umapKey", meta.umapKey],
    ["WebPageURL", meta.webPageUrl],
  ]);
}

/* Canonical FeatureCollection bytes: UTF-8, fixed key order, six-decimal
 * coordinates, trailing newline. */
export function serializeGeojson(ds: UlspDataset, reg: FormatRegistry | null = null): Uint8Array {
  const registry = reg ?? defaultRegistry();
  const doc = new Map<string, JsonValue>([
    ["type", "FeatureCollection"],
    ["properties", metaDoc(ds.meta)],
    ["features", ds.features.map((f) => featureDoc(f, registry))],
  ]);
  return dumps(doc);
}

// --- GPX ---------------------------------------------------------------

const XML_ESCAPES: Array<[string, string]> = [
  ["&", "&amp;"], ["<", "&lt;"], [">", "&gt;"], ['"', "&quot;"],
];

function xmlEscape(text: string): string {
  for (const [raw, esc] of XML_ESCAPES) {
    text = text.replaceAll(raw, esc);
  }
  return text;
}

function gpxLon(lon: number): string {
  // The GPX schema excludes +180.0; it is the same meridian as -180.0.
  return formatCoord(lon === 180.0 ? -180.0 : lon);
}

function displayName(feat: UlspFeature): string {
  return feat.recognized.get("Nome") || feat.id;
}

export interface GpxExport {
  data: Uint8Array;
  skipped: number; // Unknown-kind features left out
}

/* GPX 1.1: point kinds become waypoints, line kinds become tracks with one
 * segment per line. Waypoints precede tracks (schema-required order); within
 * each group dataset order is preserved. Unknown-kind features, and features
 * whose geometry does not fit their kind, are skipped and counted. */
export function toGpx(ds: UlspDataset): GpxExport {
  const lines: string[] = [
    '<?xml version="1.0" encoding="UTF-8"?>',
    '<gpx version="1.1" creator="fieldatlas" xmlns="http://www.topografix.com/GPX/1/1">',
  ];
  if (ds.meta.nome || ds.meta.descrizione) {
    lines.push("  <metadata>");
    if (ds.meta.nome) {
      lines.push(`    <name>${xmlEscape(ds.meta.nome)}</name>`);
    }
    if (ds.meta.descrizione) {
      lines.push(`    <desc>${xmlEscape(ds.meta.descrizione)}</desc>`);
    }
    lines.push("  </metadata>");
  }

  let skipped = 0;
  const waypoints: UlspFeature[] = [];
  const tracks: UlspFeature[] = [];
  for (const feat of ds.features) {
    if (POINT_KINDS.has(feat.kind) && feat.geometry.type === "point") {
      waypoints.push(feat);
    } else if (LINE_KINDS.has(feat.kind) && feat.geometry.type === "multiline") {
      tracks.push(feat);
    } else {
      skipped += 1;
    }
  }

  for (const feat of waypoints) {
    const geom = feat.geometry;
    if (geom.type !== "point") continue;
    lines.push(`  <wpt lat="${formatCoord(geom.lat)}" lon="${gpxLon(geom.lon)}">`);
    if (geom.ele !== null) {
      lines.push(`    <ele>${formatCoord(geom.ele)}</ele>`);
    }
    lines.push(`    <name>${xmlEscape(displayName(feat))}</name>`);
    const desc = feat.recognized.get("Descrizione") ?? "";
    if (desc) {
      lines.push(`    <desc>${xmlEscape(desc)}</desc>`);
    }
    lines.push("  </wpt>");
  }

  for (const feat of tracks) {
    const geom = feat.geometry;
    if (geom.type !== "multiline") continue;
    lines.push("  <trk>");
    lines.push(`    <name>${xmlEscape(displayName(feat))}</name>`);
    const desc = feat.recognized.get("Descrizione") ?? "";
    if (desc) {
      lines.push(`    <desc>${xmlEscape(desc)}</desc>`);
    }
    for (const line of geom.lines) {
      lines.push("    <trkseg>");
      for (const coord of line) {
        const openTag = `      <trkpt lat="${formatCoord(coord[1])}" lon="${gpxLon(coord[0])}">`;
        if (coord.length > 2) {
          lines.push(openTag);
          lines.push(`        <ele>${formatCoord(coord[2])}</ele>`);
          lines.push("      </trkpt>");
        } else {
          lines.push(openTag + "</trkpt>");
        }
      }
      lines.push("    </trkseg>");
    }
    lines.push("  </trk>");
  }

  lines.push("</gpx>");
  return { data: new TextEncoder().encode(lines.join("\n") + "\n"), skipped };
}

// --- CSV ----------------------------------------------------------------

/* One CSV table of the dataset's features of one point kind.
 *
 * Header: lat, lon, ele, ulsp_id, then the registry field keys in registry
 * order. Unrecognized properties are not exported. importCsv of the output
 * reproduces the features (given canonical input). */
export function toCsv(ds: UlspDataset, kind: FeatureKind,
                      reg: FormatRegistry | null = null): Uint8Array {
  const registry = reg ?? defaultRegistry();
  if (!POINT_KINDS.has(kind)) {
    throw new UnsupportedKindError(`CSV export handles point kinds only, not ${kind}`);
  }
  const fieldKeys = registry.fieldsFor(kind).map((spec) => spec.key);
  const pieces: string[] = [];
  pieces.push(writeCsvRow(["lat", "lon", "ele", ID_KEY, ...fieldKeys]));
  for (const feat of ds.features) {
    if (feat.kind !== kind || feat.geometry.type !== "point") continue;
    const geom = feat.geometry;
    const row = [
      formatCoord(geom.lat),
      formatCoord(geom.lon),
      geom.ele !== null ? formatCoord(geom.ele) : "",
      feat.id,
      ...fieldKeys.map((key) => feat.recognized.get(key) ?? ""),
    ];
    pieces.push(writeCsvRow(row));
  }
  return new TextEncoder().encode(pieces.join(""));
}
