/* Dataset algebra behind the editing workflow.
 *
 * Every operation returns a new dataset and leaves its input untouched, so a
 * sequence of edits is a pure pipeline and unrelated features stay
 * byte-identical in canonical serialization.
 */

import { JsonValue } from "./canonical";
import { MetadataError, TransformError, UnknownIdError } from "./errors";
import {
  CONCRETE_KINDS,
  CollectionMeta,
  FeatureKind,
  UlspDataset,
  UlspFeature,
  copyDataset,
  featureById,
  pyRepr,
  requiredGeometry,
  validateMetaFields,
} from "./model";
import { FieldSpec, FormatRegistry, defaultRegistry } from "./registry";
import { canonicalize, coerceFieldText } from "./schema";

export interface MergeResult {
  dataset: UlspDataset;
  warnings: string[];
}

/* Concatenate datasets into one, metadata taken from the first part.
 *
 * When two features share an id the later occurrence wins and keeps its
 * position; each dropped earlier occurrence is reported as a warning. The
 * result is canonicalized, so features lacking ids receive fresh ones. */
export function merge(parts: UlspDataset[]): MergeResult {
  if (parts.length === 0) {
    throw new TransformError("merge needs at least one dataset");
  }
  const combined: UlspFeature[] = [];
  for (const part of parts) {
    combined.push(...copyDataset(part).features);
  }

  const lastIndex = new Map<string, number>();
  combined.forEach((feat, i) => {
    if (feat.id) lastIndex.set(feat.id, i);
  });

  const warnings: string[] = [];
  const kept: UlspFeature[] = [];
  combined.forEach((feat, i) => {
    if (feat.id && lastIndex.get(feat.id) !== i) {
      warnings.push(`duplicate id ${feat.id}: kept the later occurrence`);
      return;
    }
    kept.push(feat);
  });

  const merged: UlspDataset = { meta: { ...parts[0].meta }, features: kept };
  return { dataset: canonicalize(merged), warnings };
}

/* Feature selection: all present criteria must match.
 *
 * At least one of kinds/ids/tag must be given (an empty set counts as not
 * given). Tag matching is an exact token match within the feature's tags
 * field, treated as comma-separated trimmed tokens. */
export interface FilterSpec {
  kinds?: Set<FeatureKind> | null;
  ids?: Set<string> | null;
  tag?: string | null;
  mode?: "keep" | "drop";
}

function tagTokens(feat: UlspFeature, reg: FormatRegistry): string[] {
  const tagsField = reg.firstField(feat.kind, "tags");
  if (tagsField === null) return [];
  const value = feat.recognized.get(tagsField.key) ?? "";
  return value.split(",").map((token) => token.trim()).filter((token) => token !== "");
}

function matches(feat: UlspFeature, spec: FilterSpec, reg: FormatRegistry): boolean {
  if (spec.kinds && spec.kinds.size > 0 && !spec.kinds.has(feat.kind)) return false;
  if (spec.ids && spec.ids.size > 0 && !spec.ids.has(feat.id)) return false;
  if (spec.tag && !tagTokens(feat, reg).includes(spec.tag)) return false;
  return true;
}

/** Keep or drop the features matching the spec; order and meta unchanged. */
export function filterFeatures(ds: UlspDataset, spec: FilterSpec,
                               reg: FormatRegistry | null = null): UlspDataset {
  const registry = reg ?? defaultRegistry();
  const mode = spec.mode ?? "keep";
  if (mode !== "keep" && mode !== "drop") {
    throw new TransformError(`filter mode must be 'keep' or 'drop', got ${pyRepr(String(mode))}`);
  }
  const hasKinds = !!spec.kinds && spec.kinds.size > 0;
  const hasIds = !!spec.ids && spec.ids.size > 0;
  if (!hasKinds && !hasIds && !spec.tag) {
    throw new TransformError("filter needs at least one criterion (kinds, ids or tag)");
  }
  const keepMatching = mode === "keep";
  const out = copyDataset(ds);
  out.features = out.features.filter((f) => matches(f, spec, registry) === keepMatching);
  return out;
}

function find(ds: UlspDataset, featureId: string): UlspFeature {
  const feat = featureById(ds, featureId);
  if (feat === null) {
    throw new UnknownIdError(`no feature with id ${pyRepr(featureId)}`);
  }
  return feat;
}

function checkEnum(spec: FieldSpec, value: string): void {
  if (spec.kind === "enum" && value.trim() && !spec.options.includes(value)) {
    throw new TransformError(
      `${spec.key}: ${pyRepr(value)} is not one of: ${spec.options.join(", ")}`);
  }
}

/* Change a feature's kind, repartitioning its properties.
 *
 * Recognized keys the target kind also defines are carried over; the rest
 * move to unrecognized, so no value is ever lost. Unrecognized properties
 * stay where they are (adoptProperty promotes them explicitly). */
export function retype(ds: UlspDataset, featureId: string, target: FeatureKind,
                       reg: FormatRegistry | null = null): UlspDataset {
  const registry = reg ?? defaultRegistry();
  if (!CONCRETE_KINDS.includes(target)) {
    throw new TransformError(`cannot retype to ${target}`);
  }
  const out = copyDataset(ds);
  const feat = find(out, featureId);
  const wanted = requiredGeometry(target);
  if (wanted !== null && feat.geometry.type !== wanted) {
    throw new TransformError(
      `geometry class of feature ${featureId} does not fit kind ${target}`);
  }

  const targetKeys = registry.fieldMap(target);
  const carried = new Map<string, string>();
  const moved = new Map<string, JsonValue>(feat.unrecognized);
  for (const [key, value] of feat.recognized) {
    if (targetKeys.has(key)) {
      carried.set(key, value);
    } else {
      moved.set(key, value);
    }
  }
  feat.kind = target;
  feat.recognized = carried;
  feat.unrecognized = moved;
  feat.rawType = null;
  return out;
}

/** Replace collection metadata wholesale; features untouched. */
export function setMetadata(ds: UlspDataset, meta: CollectionMeta): UlspDataset {
  const problems = validateMetaFields(meta);
  if (problems.length > 0) {
    throw new MetadataError(
      problems.map(([key, message]) => `${key}: ${message}`).join("; "),
      problems.map(([key]) => key));
  }
  const out = copyDataset(ds);
  out.meta = { ...meta };
  return out;
}

/* Set or clear recognized values on one feature.
 *
 * A text value sets the field, null clears it. All changes are validated
 * before any is applied, so a rejected call leaves the dataset untouched. */
export function editProperties(ds: UlspDataset, featureId: string,
                               changes: Map<string, string | null>,
                               reg: FormatRegistry | null = null): UlspDataset {
  const registry = reg ?? defaultRegistry();
  const out = copyDataset(ds);
  const feat = find(out, featureId);
  const fieldMap = registry.fieldMap(feat.kind);

  for (const [key, value] of changes) {
    const spec = fieldMap.get(key);
    if (spec === undefined) {
      throw new TransformError(`kind ${feat.kind} has no field ${pyRepr(key)}`);
    }
    if (value === null) continue;
    if (typeof value !== "string") {
      throw new TransformError(`${key}: value must be text or None`);
    }
    checkEnum(spec, value);
  }

  for (const [key, value] of changes) {
    if (value === null) {
      feat.recognized.delete(key);
    } else {
      feat.recognized.set(key, value);
    }
  }
  return out;
}

/** Promote an unrecognized property into a recognized field. */
export function adoptProperty(ds: UlspDataset, featureId: string,
                              fromKey: string, toKey: string,
                              reg: FormatRegistry | null = null): UlspDataset {
  const registry = reg ?? defaultRegistry();
  const out = copyDataset(ds);
  const feat = find(out, featureId);
  if (!feat.unrecognized.has(fromKey)) {
    throw new TransformError(
      `feature ${featureId} has no unrecognized property ${pyRepr(fromKey)}`);
  }
  const spec = registry.fieldMap(feat.kind).get(toKey);
  if (spec === undefined) {
    throw new TransformError(`kind ${feat.kind} has no field ${pyRepr(toKey)}`);
  }
  const value = coerceFieldText(feat.unrecognized.get(fromKey)!, spec);
  checkEnum(spec, value);
  feat.recognized.set(toKey, value);
  feat.unrecognized.delete(fromKey);
  return out;
}

/** Drop unrecognized properties from one feature; null means all of them. */
export function discardUnrecognized(ds: UlspDataset, featureId: string,
                                    keys: Set<string> | null = null): UlspDataset {
  const out = copyDataset(ds);
  const feat = find(out, featureId);
  if (keys === null) {
    feat.unrecognized = new Map();
  } else {
    for (const key of keys) {
      feat.unrecognized.delete(key);
    }
  }
  return out;
}
