/* The session object behind the page: load/merge rules, the QR inbox,
 * history, and the guard on operating before anything is loaded.
 */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { TransformError } from "../src/core/errors";
import { serializeGeojson } from "../src/core/export";
import { parseGeojson } from "../src/core/ingest";
import { encodeFrames } from "../src/core/qr";
import { CSV_IMPORT_NOME, EditorSession } from "../src/core/session";
import { makeDataset, makePoint } from "./builders";
import { testPath } from "./paths";

function scenarioBytes(name: string): Buffer {
  return readFileSync(testPath(`fixtures/scenarios/${name}`));
}

function sessionWith(...files: string[]): EditorSession {
  const session = new EditorSession();
  for (const file of files) {
    session.loadGeojson(scenarioBytes(file), file);
  }
  return session;
}

describe("loading", () => {
  it("reports contributed and cumulative feature counts", () => {
    const session = new EditorSession();
    const first = session.loadGeojson(scenarioBytes("valle_a.geojson"), "valle_a");
    expect(first.added).toBe(3);
    expect(first.features).toBe(3);
    const second = session.loadGeojson(scenarioBytes("valle_b.geojson"), "valle_b");
    expect(second.added).toBe(3);
    expect(second.features).toBe(6);
    expect(session.features()).toHaveLength(6);
  });

  it("keeps the metadata of the first load", () => {
    const session = sessionWith("valle_a.geojson", "valle_b.geojson");
    expect(session.meta().nome).toBe("Valle del Rio");
  });

  it("resolves duplicate ids to the later load and says so", () => {
    const session = sessionWith("scavi_a.geojson");
    const report = session.loadGeojson(scenarioBytes("scavi_b.geojson"), "scavi_b");
    expect(report.warnings).toEqual([
      "duplicate id 33cc44dd-55ee-4ff0-8011-223344556601: kept the later occurrence",
    ]);
    expect(report.features).toBe(4);
    const kept = session.feature("33cc44dd-55ee-4ff0-8011-223344556601");
    expect(kept?.recognized.get("Quota")).toBe("381");
  });

  it("names CSV imports until the user sets a name", () => {
    const session = new EditorSession();
    const report = session.loadCsv(scenarioBytes("fonti.csv"), "POI", "fonti.csv");
    expect(report.added).toBe(3);
    expect(session.meta().nome).toBe(CSV_IMPORT_NOME);
  });

  it("keeps an existing name over the CSV placeholder", () => {
    const session = sessionWith("valle_a.geojson");
    session.loadCsv(scenarioBytes("fonti.csv"), "POI", "fonti.csv");
    expect(session.meta().nome).toBe("Valle del Rio");
  });

  it("surfaces skipped CSV rows as warnings", () => {
    const source = [
      "lat,lon,Nome",
      "43.77,11.25,Buono",
      "alta,11.25,Cattivo",
    ].join("\n");
    const session = new EditorSession();
    const report = session.loadCsv(new TextEncoder().encode(source), "POI", "rows.csv");
    expect(report.added).toBe(1);
    expect(report.warnings).toEqual(["row 3: column 'lat': not a number: 'alta'"]);
  });
});

describe("the QR inbox", () => {
  const frames = (): string[] => scenarioBytes("cantina_frames.txt").toString("utf8")
    .split("\n").filter((line) => line !== "");

  it("tracks progress across pastes and merges on completion", () => {
    const session = sessionWith("borgo.geojson");
    const all = frames();

    const partial = session.addQrFrames(all.slice(0, 2).join("\n"));
    expect(partial.loaded).toBeNull();
    expect(partial.received).toBe(2);
    expect(partial.total).toBe(6);
    expect(partial.missing).toEqual([2, 3, 4, 5]);
    expect(session.qrProgress()?.missing).toEqual([2, 3, 4, 5]);
    expect(session.features()).toHaveLength(2);

    const done = session.addQrFrames(all.slice(2).join("\n"));
    expect(done.missing).toEqual([]);
    expect(done.loaded?.added).toBe(2);
    expect(session.features()).toHaveLength(4);
    expect(session.qrProgress()).toBeNull();
    expect(session.meta().nome).toBe("Borgo antico");
  });

  it("ignores blank lines and tolerates re-pasted frames", () => {
    const session = new EditorSession();
    const all = frames();
    session.addQrFrames(`\n${all[0]}\r\n\r\n${all[0]}\n`);
    expect(session.qrProgress()?.received).toBe(1);
  });

  it("drops a stuck transfer so another can start", () => {
    const session = new EditorSession();
    session.addQrFrames(frames()[0]);
    expect(session.qrProgress()).not.toBeNull();
    session.dropQrTransfer();
    expect(session.qrProgress()).toBeNull();
  });

  it("becomes the working set when nothing was loaded before", () => {
    const session = new EditorSession();
    const done = session.addQrFrames(frames().join("\n"));
    expect(done.loaded?.features).toBe(2);
    expect(session.meta().nome).toBe("Cantine del borgo");
  });
});

describe("history", () => {
  it("records one line per operation", () => {
    const session = sessionWith("valle_a.geojson");
    session.removeFeature("aa11bb22-3344-4556-8778-99aabbccdd02");
    session.adopt("aa11bb22-3344-4556-8778-99aabbccdd01", "zona", "Note");
    session.retypeFeature("aa11bb22-3344-4556-8778-99aabbccdd03", "Itinerario");
    session.setMeta({ nome: "Valle", descrizione: "", umapKey: "", webPageUrl: "" });
    expect(session.history).toEqual([
      "load valle_a.geojson: 3 features",
      "remove aa11bb22-3344-4556-8778-99aabbccdd02",
      "adopt zona into Note on aa11bb22-3344-4556-8778-99aabbccdd01",
      "retype aa11bb22-3344-4556-8778-99aabbccdd03 to Itinerario",
      "set metadata",
    ]);
  });
});

describe("operating before a load", () => {
  it("rejects every dataset operation with the same message", () => {
    const session = new EditorSession();
    const calls: Array<() => unknown> = [
      () => session.removeFeature("x"),
      () => session.retypeFeature("x", "POI"),
      () => session.adopt("x", "a", "b"),
      () => session.setMeta({ nome: "n", descrizione: "", umapKey: "", webPageUrl: "" }),
      () => session.validate(),
      () => session.exportGeojson(),
      () => session.exportGpx(),
      () => session.exportCsv("POI"),
      () => session.exportQrFrames(),
    ];
    for (const call of calls) {
      expect(call).toThrowError(TransformError);
      expect(call).toThrowError("no dataset loaded");
    }
  });

  it("removes nothing for an unknown id, like a drop filter", () => {
    const session = sessionWith("valle_a.geojson");
    session.removeFeature("manca");
    expect(session.features()).toHaveLength(3);
  });

  it("leaves the working set intact when an operation fails", () => {
    const session = sessionWith("valle_a.geojson");
    const before = Buffer.from(session.exportGeojson());
    expect(() => session.retypeFeature("manca", "POI"))
      .toThrowError("no feature with id 'manca'");
    expect(Buffer.from(session.exportGeojson())).toEqual(before);
    expect(session.history).toHaveLength(1);
  });
});

describe("validation and export", () => {
  it("reports problems of the current working set", () => {
    const session = sessionWith("valle_b.geojson");
    const report = session.validate();
    expect(report.isValid).toBe(true);
    const subjects = report.warnings.map((issue) => issue.subject);
    expect(subjects).toContain("bb22cc33-4455-4667-8889-aabbccddee03");
  });

  it("exports QR frames that feed back into a fresh session", () => {
    const ds = makeDataset([makePoint({})]);
    const source = new EditorSession();
    source.loadGeojson(serializeGeojson(ds), "builder");
    const frames = source.exportQrFrames(64, "00abcdef");
    expect(frames.every((frame) => frame.startsWith("ULSP1|00abcdef|"))).toBe(true);
    expect(frames).toEqual(encodeFrames(parseGeojson(serializeGeojson(ds)), 64, null, "00abcdef"));

    const sink = new EditorSession();
    const done = sink.addQrFrames(frames.join("\n"));
    expect(done.loaded?.added).toBe(1);
    expect(Buffer.from(sink.exportGeojson())).toEqual(Buffer.from(source.exportGeojson()));
  });
});
