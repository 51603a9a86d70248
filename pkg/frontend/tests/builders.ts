/* Small dataset builders shared by the unit tests. */

import { JsonValue } from "../src/core/canonical";
import {
  CollectionMeta,
  FeatureKind,
  UlspDataset,
  UlspFeature,
  emptyMeta,
  makeFeature,
  multiLineGeom,
  pointGeom,
} from "../src/core/model";

interface FeatureOptions {
  id?: string;
  kind?: FeatureKind;
  lon?: number;
  lat?: number;
  ele?: number | null;
  recognized?: Array<[string, string]>;
  unrecognized?: Array<[string, JsonValue]>;
}

let counter = 0;

export function makePoint(options: FeatureOptions = {}): UlspFeature {
  counter += 1;
  return makeFeature({
    id: options.id ?? `00000000-0000-4000-8000-${String(counter).padStart(12, "0")}`,
    kind: options.kind ?? "POI",
    geometry: pointGeom(options.lon ?? 11.25, options.lat ?? 43.77, options.ele ?? null),
    recognized: new Map(options.recognized ?? [["Nome", "Punto di prova"]]),
    unrecognized: new Map(options.unrecognized ?? []),
  });
}

export function makeTrack(options: FeatureOptions = {}): UlspFeature {
  counter += 1;
  return makeFeature({
    id: options.id ?? `00000000-0000-4000-8000-${String(counter).padStart(12, "0")}`,
    kind: options.kind ?? "Percorso",
    geometry: multiLineGeom([
      [
        [11.25, 43.77],
        [11.26, 43.78],
      ],
    ]),
    recognized: new Map(options.recognized ?? [["Nome", "Traccia di prova"]]),
    unrecognized: new Map(options.unrecognized ?? []),
  });
}

export function makeDataset(
  features: UlspFeature[],
  meta: Partial<CollectionMeta> = {},
): UlspDataset {
  return {
    meta: { ...emptyMeta(), nome: "Prova", ...meta },
    features,
  };
}
