/* One editing session: a working dataset plus the operations the page
 * exposes. Loads merge into the working set; every edit goes through the
 * same transform/canonicalize pipeline the command line applies on each
 * write, so exporting at any point yields the exact bytes the command line
 * would produce after the same operations.
 */

import { TransformError } from "./errors";
import { GpxExport, serializeGeojson, toCsv, toGpx } from "./export";
import { importCsv, parseGeojson } from "./ingest";
import {
  CollectionMeta,
  FeatureKind,
  UlspDataset,
  UlspFeature,
  ValidationReport,
  emptyMeta,
  featureById,
} from "./model";
import { AssemblyState, decodeFrame, encodeFrames } from "./qr";
import { FormatRegistry, defaultRegistry } from "./registry";
import { canonicalize, validateDataset } from "./schema";
import {
  FilterSpec,
  adoptProperty,
  discardUnrecognized,
  editProperties,
  filterFeatures,
  merge,
  retype,
  setMetadata,
} from "./transform";

// Dataset name given to CSV imports until the user sets their own.
export const CSV_IMPORT_NOME = "csv-import";

export interface LoadReport {
  label: string;
  added: number;    // features the source contributed
  features: number; // features in the working set afterwards
  warnings: string[];
}

export interface QrProgress {
  transferId: string;
  total: number;
  received: number;
  missing: number[];
  loaded: LoadReport | null; // set once the transfer completed and merged
}

export class EditorSession {
  readonly registry: FormatRegistry;
  readonly history: string[] = [];
  private workingSet: UlspDataset | null = null;
  private assembly: AssemblyState | null = null;

  constructor(registry: FormatRegistry | null = null) {
    this.registry = registry ?? defaultRegistry();
  }

  get working(): UlspDataset | null {
    return this.workingSet;
  }

  get hasData(): boolean {
    return this.workingSet !== null;
  }

  features(): UlspFeature[] {
    return this.workingSet === null ? [] : this.workingSet.features;
  }

  feature(featureId: string): UlspFeature | null {
    return this.workingSet === null ? null : featureById(this.workingSet, featureId);
  }

  meta(): CollectionMeta {
    return this.workingSet === null ? emptyMeta() : { ...this.workingSet.meta };
  }

  private require(): UlspDataset {
    if (this.workingSet === null) {
      throw new TransformError("no dataset loaded");
    }
    return this.workingSet;
  }

  /* The first load becomes the working set (its metadata included);
   * later loads merge into it and the existing metadata wins. Duplicate
   * ids resolve to the later occurrence either way. */
  private absorb(parsed: UlspDataset, label: string, warnings: string[]): LoadReport {
    const parts = this.workingSet === null ? [parsed] : [this.workingSet, parsed];
    const result = merge(parts);
    const all = [...warnings, ...result.warnings];
    this.workingSet = result.dataset;
    this.history.push(`load ${label}: ${parsed.features.length} features`);
    return {
      label,
      added: parsed.features.length,
      features: result.dataset.features.length,
      warnings: all,
    };
  }

  loadGeojson(source: Uint8Array, label: string): LoadReport {
    const parsed = parseGeojson(source, this.registry);
    return this.absorb(parsed, label, []);
  }

  loadCsv(source: Uint8Array, kind: FeatureKind, label: string): LoadReport {
    const imported = importCsv(source, kind, this.registry);
    const warnings = imported.skipped.map(([row, message]) => `row ${row}: ${message}`);
    const meta = emptyMeta();
    meta.nome = CSV_IMPORT_NOME;
    return this.absorb({ meta, features: imported.features }, label, warnings);
  }

  /* Feed pasted frame texts, one frame per line; blank lines are ignored.
   * Frames may arrive across several calls and in any order. Once every
   * index of the transfer is present the dataset is decoded and merged. */
  addQrFrames(text: string): QrProgress {
    const lines = text.split(/\r\n|\r|\n/).map((line) => line.trim()).filter((line) => line !== "");
    this.assembly = this.assembly ?? new AssemblyState();
    for (const line of lines) {
      this.assembly.add(decodeFrame(line));
    }
    const state = this.assembly;
    const transferId = state.transferId ?? "";
    const total = state.total ?? 0;
    if (!state.complete) {
      return {
        transferId,
        total,
        received: state.received.size,
        missing: state.missing(),
        loaded: null,
      };
    }
    const dataset = state.result(this.registry);
    this.assembly = null;
    const loaded = this.absorb(dataset, `transfer ${transferId}`, []);
    return { transferId, total, received: total, missing: [], loaded };
  }

  qrProgress(): QrProgress | null {
    if (this.assembly === null || this.assembly.transferId === null) return null;
    return {
      transferId: this.assembly.transferId,
      total: this.assembly.total ?? 0,
      received: this.assembly.received.size,
      missing: this.assembly.missing(),
      loaded: null,
    };
  }

  dropQrTransfer(): void {
    this.assembly = null;
  }

  /* Every edit mirrors one command-line step: transform, then canonicalize
   * (the command line canonicalizes on every file write). */
  private apply(next: UlspDataset, note: string): void {
    this.workingSet = canonicalize(next);
    this.history.push(note);
  }

  removeFeature(featureId: string): void {
    const spec: FilterSpec = { ids: new Set([featureId]), mode: "drop" };
    this.apply(filterFeatures(this.require(), spec, this.registry), `remove ${featureId}`);
  }

  filter(spec: FilterSpec, note: string): void {
    this.apply(filterFeatures(this.require(), spec, this.registry), note);
  }

  retypeFeature(featureId: string, target: FeatureKind): void {
    this.apply(retype(this.require(), featureId, target, this.registry),
      `retype ${featureId} to ${target}`);
  }

  adopt(featureId: string, fromKey: string, toKey: string): void {
    this.apply(adoptProperty(this.require(), featureId, fromKey, toKey, this.registry),
      `adopt ${fromKey} into ${toKey} on ${featureId}`);
  }

  discard(featureId: string, keys: Set<string> | null = null): void {
    const what = keys === null ? "all unrecognized" : Array.from(keys).join(", ");
    this.apply(discardUnrecognized(this.require(), featureId, keys),
      `discard ${what} on ${featureId}`);
  }

  editFeature(featureId: string, changes: Map<string, string | null>): void {
    this.apply(editProperties(this.require(), featureId, changes, this.registry),
      `edit ${featureId}`);
  }

  setMeta(meta: CollectionMeta): void {
    this.apply(setMetadata(this.require(), meta), "set metadata");
  }

  validate(): ValidationReport {
    return validateDataset(this.require(), this.registry);
  }

  exportGeojson(): Uint8Array {
    return serializeGeojson(this.require(), this.registry);
  }

  exportGpx(): GpxExport {
    return toGpx(this.require());
  }

  exportCsv(kind: FeatureKind): Uint8Array {
    return toCsv(this.require(), kind, this.registry);
  }

  exportQrFrames(maxChunkChars?: number, transferId: string | null = null): string[] {
    return encodeFrames(this.require(), maxChunkChars, this.registry, transferId);
  }
}
