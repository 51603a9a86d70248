import { describe, expect, it } from "vitest";

import { RawNum } from "../src/core/canonical";
import { issueText, multiLineGeom, pointGeom, rawGeom } from "../src/core/model";
import { defaultRegistry } from "../src/core/registry";
import {
  canonicalize,
  classifyFeature,
  coerceFieldText,
  makeUuid4,
  validateDataset,
} from "../src/core/schema";
import { makeDataset, makePoint, makeTrack } from "./builders";

const reg = defaultRegistry();

const errorTexts = (report: ReturnType<typeof validateDataset>): string[] =>
  report.errors.map(issueText);
const warningTexts = (report: ReturnType<typeof validateDataset>): string[] =>
  report.warnings.map(issueText);

describe("kind classification", () => {
  it("matches declared kinds exactly and case-sensitively", () => {
    expect(classifyFeature(new Map([["ulsp_type", "Sito"]]), "Point")).toBe("Sito");
    expect(classifyFeature(new Map([["ulsp_type", "sito"]]), "Point")).toBe("Unknown");
    expect(classifyFeature(new Map([["ulsp_type", "Trincea"]]), "Point")).toBe("Unknown");
    expect(classifyFeature(new Map(), "Point")).toBe("Unknown");
    expect(classifyFeature(new Map([["ulsp_type", 7]]), "Point")).toBe("Unknown");
  });
});

describe("field text coercion", () => {
  it("renders scalars the way the reference toolkit does", () => {
    expect(coerceFieldText(null)).toBe("");
    expect(coerceFieldText("testo")).toBe("testo");
    expect(coerceFieldText(true)).toBe("true");
    expect(coerceFieldText(false)).toBe("false");
    expect(coerceFieldText(3)).toBe("3");
    expect(coerceFieldText(2.5)).toBe("2.5");
    expect(coerceFieldText(new RawNum("90071992547409931"))).toBe("90071992547409931");
  });

  it("joins scalar lists for tags fields", () => {
    const tagsSpec = reg.fieldMap("POI").get("Tags")!;
    expect(coerceFieldText(["grotta", "acqua"], tagsSpec)).toBe("grotta,acqua");
    expect(coerceFieldText([1, true], tagsSpec)).toBe("1,true");
  });

  it("falls back to compact JSON for structured values", () => {
    expect(coerceFieldText(new Map([["a", 1]]))).toBe('{"a":1}');
    expect(coerceFieldText(["x", ["y"]])).toBe('["x",["y"]]');
  });
});

describe("dataset validation", () => {
  it("accepts a healthy dataset", () => {
    const ds = makeDataset([makePoint()], {
      umapKey: "https://umap.example/it/map/prova_1",
      webPageUrl: "https://example.org/prova",
    });
    const report = validateDataset(ds, reg);
    expect(report.isValid).toBe(true);
    expect(report.errors).toEqual([]);
    expect(report.warnings).toEqual([]);
  });

  it("flags meta defects", () => {
    const ds = makeDataset([makePoint()], { nome: "", webPageUrl: "non-un-url" });
    const report = validateDataset(ds, reg);
    expect(errorTexts(report)).toContain("collection.Nome: dataset name must not be empty");
    expect(errorTexts(report)).toContain(
      "collection.WebPageURL: not an absolute URL: 'non-un-url'",
    );
    expect(warningTexts(report)).toContain("collection.umapKey: no uMap cross-reference set");
  });

  it("flags duplicate ids", () => {
    const ds = makeDataset([makePoint({ id: "dup" }), makePoint({ id: "dup" })]);
    expect(errorTexts(validateDataset(ds, reg))).toContain("dup: duplicate feature id 'dup'");
  });

  it("warns on Unknown kinds and numbers anonymous features", () => {
    const feature = makePoint({ kind: "Unknown" });
    feature.id = "";
    const report = validateDataset(makeDataset([feature]), reg);
    expect(warningTexts(report)).toContain(
      "#0: feature kind is Unknown; it will be ignored by exports",
    );
  });

  it("flags kind/geometry mismatches", () => {
    const wrongPoint = makeTrack({ kind: "Sito" });
    const wrongTrack = makePoint({ kind: "Itinerario" });
    const report = validateDataset(makeDataset([wrongPoint, wrongTrack]), reg);
    expect(errorTexts(report)).toContain(
      `${wrongPoint.id}: kind/geometry mismatch: Sito requires Point geometry`,
    );
    expect(errorTexts(report)).toContain(
      `${wrongTrack.id}: kind/geometry mismatch: Itinerario requires MultiLineString geometry`,
    );
  });

  it("flags out-of-range coordinates with float rendering", () => {
    const ds = makeDataset([makePoint({ lon: 200.5, lat: -91 })]);
    const texts = errorTexts(validateDataset(ds, reg));
    expect(texts.some((t) => t.endsWith("longitude 200.5 out of range [-180, 180]"))).toBe(true);
    expect(texts.some((t) => t.endsWith("latitude -91.0 out of range [-90, 90]"))).toBe(true);
  });

  it("flags degenerate line geometries", () => {
    const empty = makeTrack();
    empty.geometry = multiLineGeom([]);
    const short = makeTrack();
    short.geometry = multiLineGeom([[[11.25, 43.77]]]);
    const report = validateDataset(makeDataset([empty, short]), reg);
    expect(errorTexts(report)).toContain(
      `${empty.id}: MultiLineString must have at least one line`,
    );
    expect(errorTexts(report)).toContain(`${short.id}: line 0 has fewer than 2 coordinates`);
  });

  it("flags missing required fields", () => {
    const feature = makePoint({ recognized: [] });
    const report = validateDataset(makeDataset([feature]), reg);
    expect(errorTexts(report)).toContain(`${feature.id}.Nome: required field is not set`);
  });

  it("flags enum values outside the options", () => {
    const feature = makePoint({
      kind: "Sito",
      recognized: [
        ["Nome", "Grotta"],
        ["Accesso", "Volando"],
      ],
    });
    const report = validateDataset(makeDataset([feature]), reg);
    expect(errorTexts(report)).toContain(
      `${feature.id}.Accesso: value 'Volando' is not one of: Libero, Con permesso, Difficile, Interdetto`,
    );
  });

  it("checks number fields with the reference number grammar", () => {
    const bad = makePoint({
      kind: "Sito",
      recognized: [
        ["Nome", "Grotta"],
        ["Quota", "12m"],
      ],
    });
    const good = makePoint({
      kind: "Sito",
      recognized: [
        ["Nome", "Grotta"],
        ["Quota", "  1_200.5e1  "],
      ],
    });
    const report = validateDataset(makeDataset([bad, good]), reg);
    expect(errorTexts(report)).toEqual([`${bad.id}.Quota: value '12m' is not a number`]);
  });

  it("warns about unrecognized properties in code point order", () => {
    const feature = makePoint({
      unrecognized: [
        ["zona", "A"],
        ["Zona", "B"],
      ],
    });
    const report = validateDataset(makeDataset([feature]), reg);
    expect(warningTexts(report)).toContain(
      `${feature.id}: unrecognized properties: Zona, zona`,
    );
  });
});

describe("canonical form", () => {
  it("trims metadata and recognized values", () => {
    const feature = makePoint({
      recognized: [
        ["Nome", "  Pozzo  "],
        ["Descrizione", "   "],
      ],
      unrecognized: [["zona", "  B  "]],
    });
    const ds = canonicalize(makeDataset([feature], { nome: "  Prova  " }));
    expect(ds.meta.nome).toBe("Prova");
    expect(ds.features[0].recognized.get("Nome")).toBe("Pozzo");
    expect(ds.features[0].recognized.has("Descrizione")).toBe(false);
    expect(ds.features[0].unrecognized.get("zona")).toBe("B");
  });

  it("rounds coordinates to six decimals", () => {
    const feature = makePoint({ lon: 11.2541267, lat: 43.7751855, ele: 412.3456789 });
    const ds = canonicalize(makeDataset([feature]));
    const geom = ds.features[0].geometry;
    expect(geom).toEqual(pointGeom(11.254127, 43.775185, 412.345679));
  });

  it("assigns fresh ids where missing and keeps existing ones", () => {
    const keep = makePoint({ id: "11111111-1111-4111-8111-111111111111" });
    const fresh = makePoint();
    fresh.id = "";
    const ds = canonicalize(makeDataset([keep, fresh]));
    expect(ds.features[0].id).toBe("11111111-1111-4111-8111-111111111111");
    expect(ds.features[1].id).toMatch(
      /^[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}$/,
    );
  });

  it("does not touch raw geometries", () => {
    const feature = makePoint({ kind: "Unknown" });
    feature.geometry = rawGeom(new Map([["type", "Polygon"]]));
    const ds = canonicalize(makeDataset([feature]));
    expect(ds.features[0].geometry).toEqual(rawGeom(new Map([["type", "Polygon"]])));
  });

  it("leaves the input dataset unchanged", () => {
    const original = makeDataset([makePoint({ lon: 11.2541267 })], { nome: " Prova " });
    canonicalize(original);
    expect(original.meta.nome).toBe(" Prova ");
    const geom = original.features[0].geometry;
    expect(geom.type === "point" && geom.lon).toBe(11.2541267);
  });
});

describe("id generation", () => {
  it("produces well-formed random UUIDs", () => {
    const seen = new Set<string>();
    for (let i = 0; i < 64; i += 1) {
      const id = makeUuid4();
      expect(id).toMatch(
        /^[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}$/,
      );
      seen.add(id);
    }
    expect(seen.size).toBe(64);
  });
});
