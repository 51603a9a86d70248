/* Page behavior: every panel wired to the session, driven through real
 * DOM events. Exports are captured by injecting the save hook.
 */

import { readFileSync } from "node:fs";
import { beforeEach, describe, expect, it } from "vitest";

import { AppHandle, initApp } from "../src/ui/app";
import { click, fileOf, setFiles, setValue, textOf } from "./dom";
import { testPath } from "./paths";

interface Saved {
  filename: string;
  data: Uint8Array | string;
  mime: string;
}

let root: HTMLElement;
let app: AppHandle;
let saved: Saved[];

function scenarioBytes(name: string): Uint8Array {
  return new Uint8Array(readFileSync(testPath(`fixtures/scenarios/${name}`)));
}

function geojsonInput(): HTMLInputElement {
  return root.querySelector("#geojson-file") as HTMLInputElement;
}

async function loadValleA(): Promise<void> {
  setFiles(geojsonInput(), [fileOf(scenarioBytes("valle_a.geojson"), "valle_a.geojson")]);
  await app.whenIdle();
}

function featureRows(): HTMLTableRowElement[] {
  return Array.from(root.querySelectorAll("#feature-table tr[data-id]"));
}

function row(id: string): HTMLTableRowElement {
  const match = root.querySelector(`#feature-table tr[data-id="${id}"]`);
  if (match === null) throw new Error(`no row for ${id}`);
  return match as HTMLTableRowElement;
}

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app") as HTMLElement;
  saved = [];
  app = initApp(root, {
    save: (filename, data, mime) => saved.push({ filename, data, mime }),
  });
});

describe("before anything is loaded", () => {
  it("renders the empty page", () => {
    expect(textOf(root, "h1")).toBe("Field atlas editor");
    expect(textOf(root, "#status")).toBe("No dataset loaded.");
    expect(featureRows()).toHaveLength(0);
    expect((root.querySelector("#detail") as HTMLElement).hidden).toBe(true);
    expect((root.querySelector("#qr-frames") as HTMLElement).hidden).toBe(true);
  });

  it("reports the guard message when exporting", async () => {
    click(root, "#export-geojson");
    await app.whenIdle();
    expect(textOf(root, "#status")).toBe("no dataset loaded");
    expect(root.querySelector("#status")?.classList.contains("error")).toBe(true);
    expect(saved).toHaveLength(0);
  });
});

describe("loading files", () => {
  it("fills the table, the metadata form and the history", async () => {
    await loadValleA();
    expect(textOf(root, "#status")).toBe("GeoJSON loaded.");
    expect(featureRows()).toHaveLength(3);
    expect((root.querySelector("#meta-nome") as HTMLInputElement).value)
      .toBe("Valle del Rio");
    expect(textOf(root, "#history")).toContain("load valle_a.geojson: 3 features");
  });

  it("loads several GeoJSON files in one pick", async () => {
    setFiles(geojsonInput(), [
      fileOf(scenarioBytes("valle_a.geojson"), "valle_a.geojson"),
      fileOf(scenarioBytes("valle_b.geojson"), "valle_b.geojson"),
    ]);
    await app.whenIdle();
    expect(featureRows()).toHaveLength(6);
  });

  it("keeps the table and shows the parse error for a bad file", async () => {
    await loadValleA();
    setFiles(geojsonInput(), [fileOf("{non-json", "rotto.geojson")]);
    await app.whenIdle();
    expect(root.querySelector("#status")?.classList.contains("error")).toBe(true);
    expect(featureRows()).toHaveLength(3);
  });

  it("imports CSV with the chosen kind and lists skipped rows", async () => {
    const source = [
      "lat,lon,Nome",
      "43.77,11.25,Buona",
      "alta,11.25,Cattiva",
    ].join("\n");
    setValue(root, "#csv-kind", "POI");
    setFiles(root.querySelector("#csv-file") as HTMLInputElement,
      [fileOf(source, "fonti.csv")]);
    await app.whenIdle();
    expect(featureRows()).toHaveLength(1);
    expect(textOf(root, "#load-warnings"))
      .toContain("row 3: column 'lat': not a number: 'alta'");
    expect((root.querySelector("#meta-nome") as HTMLInputElement).value).toBe("csv-import");
  });
});

describe("the QR inbox", () => {
  const frames = (): string[] =>
    readFileSync(testPath("fixtures/scenarios/cantina_frames.txt"), "utf8")
      .split("\n").filter((line) => line !== "");

  it("shows progress, then merges the completed transfer", async () => {
    const all = frames();
    setValue(root, "#qr-text", all.slice(0, 2).join("\n"));
    click(root, "#qr-add");
    await app.whenIdle();
    expect(textOf(root, "#qr-progress"))
      .toBe(`Transfer c0ffee42: 2 of ${all.length} frames; missing 3, 4, 5, 6`);
    expect((root.querySelector("#qr-drop") as HTMLElement).hidden).toBe(false);

    setValue(root, "#qr-text", all.slice(2).join("\n"));
    click(root, "#qr-add");
    await app.whenIdle();
    expect(textOf(root, "#qr-progress")).toBe("");
    expect(featureRows()).toHaveLength(2);
    expect((root.querySelector("#meta-nome") as HTMLInputElement).value)
      .toBe("Cantine del borgo");
  });

  it("discards a stuck transfer", async () => {
    setValue(root, "#qr-text", frames()[0]);
    click(root, "#qr-add");
    await app.whenIdle();
    click(root, "#qr-drop");
    await app.whenIdle();
    expect(textOf(root, "#qr-progress")).toBe("");
    expect((root.querySelector("#qr-drop") as HTMLElement).hidden).toBe(true);
  });

  it("rejects a malformed frame without losing state", async () => {
    await loadValleA();
    setValue(root, "#qr-text", "ULSP1|salve");
    click(root, "#qr-add");
    await app.whenIdle();
    expect(root.querySelector("#status")?.classList.contains("error")).toBe(true);
    expect(featureRows()).toHaveLength(3);
  });
});

describe("feature rows", () => {
  const sito = "aa11bb22-3344-4556-8778-99aabbccdd01";
  const poi = "aa11bb22-3344-4556-8778-99aabbccdd02";
  const percorso = "aa11bb22-3344-4556-8778-99aabbccdd03";

  it("shows kind, name, geometry and extras count", async () => {
    await loadValleA();
    const cells = Array.from(row(sito).querySelectorAll("td"), (td) => td.textContent);
    expect(cells[0]).toContain("Sito");
    expect(cells[1]).toBe("Grotta del Vento");
    expect(cells[2]).toMatch(/^point 11\.254127, 43\.775185/);
    expect(cells[3]).toBe("3");
    const lineCells = Array.from(row(percorso).querySelectorAll("td"), (td) => td.textContent);
    expect(lineCells[2]).toBe("1 line, 3 points");
  });

  it("removes a feature", async () => {
    await loadValleA();
    click(row(poi), ".remove");
    await app.whenIdle();
    expect(featureRows()).toHaveLength(2);
    expect(root.querySelector(`tr[data-id="${poi}"]`)).toBeNull();
    expect(textOf(root, "#history")).toContain(`remove ${poi}`);
  });

  it("retypes a feature and repartitions its properties", async () => {
    await loadValleA();
    setValue(row(sito), ".retype-kind", "POI");
    click(row(sito), ".retype");
    await app.whenIdle();
    const cells = Array.from(row(sito).querySelectorAll("td"), (td) => td.textContent);
    expect(cells[0]).toContain("POI");
    // Tipologia and Quota stop being recognized for a POI.
    expect(cells[3]).toBe("5");
  });

  it("keeps the row and explains a geometry mismatch", async () => {
    await loadValleA();
    setValue(row(sito), ".retype-kind", "Percorso");
    click(row(sito), ".retype");
    await app.whenIdle();
    expect(textOf(root, "#status"))
      .toBe(`geometry class of feature ${sito} does not fit kind Percorso`);
    expect(Array.from(row(sito).querySelectorAll("td"))[0].textContent).toContain("Sito");
  });
});

describe("the detail panel", () => {
  const sito = "aa11bb22-3344-4556-8778-99aabbccdd01";

  async function openDetail(): Promise<HTMLElement> {
    await loadValleA();
    click(row(sito), ".select");
    await app.whenIdle();
    return root.querySelector("#detail") as HTMLElement;
  }

  it("renders registry-driven inputs with current values", async () => {
    const detail = await openDetail();
    expect(detail.hidden).toBe(false);
    expect(textOf(detail, "h3")).toBe("Sito: Grotta del Vento");
    const nome = detail.querySelector('[data-key="Nome"]') as HTMLInputElement;
    expect(nome.value).toBe("Grotta del Vento");
    const tipologia = detail.querySelector('[data-key="Tipologia"]') as HTMLSelectElement;
    expect(tipologia.tagName).toBe("SELECT");
    expect(tipologia.value).toBe("Grotta");
    const note = detail.querySelector('[data-key="Note"]') as HTMLTextAreaElement;
    expect(note.tagName).toBe("TEXTAREA");
    expect(detail.querySelectorAll("#extras li")).toHaveLength(3);
  });

  it("applies edits and clears emptied fields", async () => {
    const detail = await openDetail();
    setValue(detail, '[data-key="Descrizione"]', "Ingresso basso, torcia necessaria");
    setValue(detail, '[data-key="Quota"]', "");
    click(detail, "#detail-apply");
    await app.whenIdle();
    const after = root.querySelector("#detail") as HTMLElement;
    expect((after.querySelector('[data-key="Descrizione"]') as HTMLInputElement).value)
      .toBe("Ingresso basso, torcia necessaria");
    expect((after.querySelector('[data-key="Quota"]') as HTMLInputElement).value).toBe("");
  });

  it("accepts a dubious number on apply and flags it on validate", async () => {
    // Edits enforce only structure (known field, enum membership); value
    // grammar is the validator's job, same as on the command line.
    const detail = await openDetail();
    setValue(detail, '[data-key="Quota"]', "molto alta");
    click(detail, "#detail-apply");
    await app.whenIdle();
    expect(root.querySelector("#status")?.classList.contains("error")).toBe(false);
    click(root, "#validate");
    await app.whenIdle();
    const errors = Array.from(root.querySelectorAll("#issues li.error"),
      (li) => li.textContent ?? "");
    expect(errors.some((text) => text.includes(`${sito}.Quota`)
      && text.includes("not a number"))).toBe(true);
  });

  it("adopts an extra into a recognized field", async () => {
    const detail = await openDetail();
    const item = detail.querySelector('#extras li[data-key="zona"]') as HTMLElement;
    setValue(item, ".adopt-target", "Note");
    click(item, ".adopt");
    await app.whenIdle();
    const after = root.querySelector("#detail") as HTMLElement;
    expect(after.querySelector('#extras li[data-key="zona"]')).toBeNull();
    expect((after.querySelector('[data-key="Note"]') as HTMLTextAreaElement).value).toBe("B");
    expect(textOf(root, "#history")).toContain(`adopt zona into Note on ${sito}`);
  });

  it("discards one extra, then all of them", async () => {
    const detail = await openDetail();
    click(detail.querySelector('#extras li[data-key="zona"]') as HTMLElement, ".discard");
    await app.whenIdle();
    expect(root.querySelectorAll("#extras li")).toHaveLength(2);
    click(root, "#discard-all");
    await app.whenIdle();
    expect(root.querySelectorAll("#extras li")).toHaveLength(0);
    expect((root.querySelector("#discard-all") as HTMLElement).hidden).toBe(true);
  });

  it("closes when the selected feature is removed", async () => {
    await openDetail();
    click(row(sito), ".remove");
    await app.whenIdle();
    expect((root.querySelector("#detail") as HTMLElement).hidden).toBe(true);
  });
});

describe("metadata", () => {
  it("applies the form", async () => {
    await loadValleA();
    setValue(root, "#meta-nome", "Valle, riveduta");
    setValue(root, "#meta-descrizione", "");
    setValue(root, "#meta-umap-key", "");
    setValue(root, "#meta-web-page-url", "https://example.org/valle");
    click(root, "#meta-apply");
    await app.whenIdle();
    expect(textOf(root, "#status")).toBe("Metadata set.");
    expect((root.querySelector("#meta-nome") as HTMLInputElement).value)
      .toBe("Valle, riveduta");
  });

  it("rejects bad values and names every offending field", async () => {
    await loadValleA();
    setValue(root, "#meta-nome", "  ");
    setValue(root, "#meta-web-page-url", "non-un-url");
    click(root, "#meta-apply");
    await app.whenIdle();
    expect(textOf(root, "#status")).toBe(
      "Nome: dataset name must not be empty; "
      + "WebPageURL: not an absolute URL: 'non-un-url'");
    expect((root.querySelector("#meta-nome") as HTMLInputElement).value)
      .toBe("Valle del Rio");
  });
});

describe("validation", () => {
  it("lists warnings and errors, or the all-clear line", async () => {
    setFiles(geojsonInput(), [fileOf(scenarioBytes("valle_b.geojson"), "valle_b.geojson")]);
    await app.whenIdle();
    click(root, "#validate");
    await app.whenIdle();
    const items = Array.from(root.querySelectorAll("#issues li"));
    expect(items.length).toBeGreaterThan(0);
    expect(items.some((li) => li.classList.contains("warning"))).toBe(true);

    await loadValleA();
    click(root, "#validate");
    await app.whenIdle();
    expect(root.querySelectorAll("#issues li.error")).toHaveLength(0);
  });
});

describe("exports", () => {
  it("saves GeoJSON, GPX and CSV with their content types", async () => {
    await loadValleA();
    click(root, "#export-geojson");
    setValue(root, "#export-csv-kind", "POI");
    click(root, "#export-csv");
    click(root, "#export-gpx");
    await app.whenIdle();
    expect(saved.map((s) => [s.filename, s.mime])).toEqual([
      ["dataset.geojson", "application/geo+json"],
      ["poi.csv", "text/csv"],
      ["dataset.gpx", "application/gpx+xml"],
    ]);
    const geojson = new TextDecoder().decode(saved[0].data as Uint8Array);
    expect(geojson.startsWith("{\n  \"type\": \"FeatureCollection\"")).toBe(true);
    const csv = new TextDecoder().decode(saved[1].data as Uint8Array);
    expect(csv.startsWith("lat,lon,ele,ulsp_id,Nome,")).toBe(true);
  });

  it("mentions skipped features on GPX export", async () => {
    setFiles(geojsonInput(), [fileOf(scenarioBytes("valle_b.geojson"), "valle_b.geojson")]);
    await app.whenIdle();
    click(root, "#export-gpx");
    await app.whenIdle();
    expect(textOf(root, "#status")).toBe("GPX exported; 1 feature(s) skipped.");
  });
});

describe("the QR frame viewer", () => {
  it("pages through frames rendered as SVG", async () => {
    await loadValleA();
    click(root, "#export-qr");
    await app.whenIdle();
    const panel = root.querySelector("#qr-frames") as HTMLElement;
    expect(panel.hidden).toBe(false);
    expect(textOf(panel, "#qr-frame-label")).toMatch(/^Frame 1 of \d+$/);
    expect(panel.querySelector("#qr-frame-image svg")).not.toBeNull();
    const firstText = (panel.querySelector("#qr-frame-text") as HTMLTextAreaElement).value;
    expect(firstText.startsWith("ULSP1|")).toBe(true);
    expect((panel.querySelector("#qr-prev") as HTMLButtonElement).disabled).toBe(true);

    const total = Number(textOf(panel, "#qr-frame-label").split(" of ")[1]);
    if (total > 1) {
      click(panel, "#qr-next");
      await app.whenIdle();
      expect(textOf(panel, "#qr-frame-label")).toBe(`Frame 2 of ${total}`);
      expect((panel.querySelector("#qr-frame-text") as HTMLTextAreaElement).value)
        .not.toBe(firstText);
    }
  });

  it("saves the frame texts as one file", async () => {
    await loadValleA();
    click(root, "#qr-save-texts");
    await app.whenIdle();
    expect(saved).toHaveLength(1);
    expect(saved[0].filename).toBe("frames.txt");
    const text = saved[0].data as string;
    expect(text.endsWith("\n")).toBe(true);
    expect(text.split("\n").filter((line) => line !== "")
      .every((line) => line.startsWith("ULSP1|"))).toBe(true);
  });
});
