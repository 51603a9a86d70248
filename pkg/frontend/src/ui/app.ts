/* The editor page: one session, one screen, no server.
 *
 * Everything here is DOM wiring around EditorSession; no dataset logic
 * lives in this file. The page never touches the network: files come in
 * through file inputs and pasted text, results leave through the save
 * hook (a browser download by default, injectable for tests).
 */

import { compactJson } from "../core/canonical";
import { FieldatlasError } from "../core/errors";
import {
  CONCRETE_KINDS,
  FeatureKind,
  Geometry,
  POINT_KINDS,
  UlspFeature,
  issueText,
} from "../core/model";
import { EcLevel, encodeMatrix, matrixToSvg } from "../core/qrmatrix";
import { FieldSpec, FormatRegistry } from "../core/registry";
import { EditorSession } from "../core/session";

// The symbol level the publishing side prints with; kept equal so a frame
// shown on this screen is the same image the printed sheet carries.
const FRAME_SYMBOL_LEVEL: EcLevel = "M";

export interface AppHooks {
  /* Receives every export. The default turns the bytes into a download. */
  save?: (filename: string, data: Uint8Array | string, mime: string) => void;
}

export interface AppHandle {
  /* Resolves once every queued action (file reads included) has settled. */
  whenIdle(): Promise<void>;
}

function downloadSave(filename: string, data: Uint8Array | string, mime: string): void {
  const blob = new Blob([data as BlobPart], { type: mime });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}

/* Small element builder: tag, optional attributes, optional children.
 * Text children become text nodes, so feature values never reach
 * innerHTML. */
function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function option(value: string, label: string = value): HTMLOptionElement {
  return el("option", { value }, [label]);
}

function geometrySummary(geom: Geometry): string {
  if (geom.type === "point") {
    return `point ${geom.lon}, ${geom.lat}`;
  }
  if (geom.type === "multiline") {
    const lines = geom.lines.length;
    const points = geom.lines.reduce((sum, line) => sum + line.length, 0);
    return `${lines} ${lines === 1 ? "line" : "lines"}, ${points} points`;
  }
  return "unsupported geometry";
}

function extrasValueText(value: unknown): string {
  return typeof value === "string" ? value : compactJson(value as never);
}

export function initApp(root: HTMLElement, hooks: AppHooks = {}): AppHandle {
  const session = new EditorSession();
  const registry: FormatRegistry = session.registry;
  const save = hooks.save ?? downloadSave;

  let selectedId: string | null = null;
  let frames: string[] = [];
  let frameIndex = 0;

  /* Actions run through one queue so file reads cannot interleave and a
   * test (or a fast user) always sees the result of the previous action. */
  let queue: Promise<void> = Promise.resolve();
  const status = el("p", { id: "status", role: "status" }, ["No dataset loaded."]);

  /* The action may return a string to replace the default note. */
  function enqueue(note: string, action: () => void | string | Promise<void | string>): void {
    queue = queue.then(async () => {
      try {
        const message = await action();
        status.textContent = typeof message === "string" ? message : note;
        status.classList.remove("error");
      } catch (exc) {
        status.textContent = exc instanceof FieldatlasError || exc instanceof Error
          ? exc.message : String(exc);
        status.classList.add("error");
      }
      render();
    });
  }

  // ---- load panel ----------------------------------------------------

  const geojsonInput = el("input", {
    id: "geojson-file", type: "file", accept: ".geojson,.json", multiple: "",
  });
  const csvKind = el("select", { id: "csv-kind" });
  for (const kind of CONCRETE_KINDS.filter((k) => POINT_KINDS.has(k))) {
    csvKind.append(option(kind));
  }
  const csvInput = el("input", { id: "csv-file", type: "file", accept: ".csv", multiple: "" });

  async function loadFiles(input: HTMLInputElement, how: (bytes: Uint8Array, name: string) => void): Promise<void> {
    const files = Array.from(input.files ?? []);
    input.value = "";
    if (files.length === 0) {
      throw new FieldatlasError("choose a file first");
    }
    for (const file of files) {
      const bytes = new Uint8Array(await file.arrayBuffer());
      how(bytes, file.name);
    }
  }

  geojsonInput.addEventListener("change", () => {
    enqueue("GeoJSON loaded.", () =>
      loadFiles(geojsonInput, (bytes, name) => {
        const report = session.loadGeojson(bytes, name);
        reportLoad(report.warnings);
      }));
  });

  csvInput.addEventListener("change", () => {
    enqueue("CSV loaded.", () =>
      loadFiles(csvInput, (bytes, name) => {
        const report = session.loadCsv(bytes, csvKind.value as FeatureKind, name);
        reportLoad(report.warnings);
      }));
  });

  const loadWarnings = el("ul", { id: "load-warnings" });

  function reportLoad(warnings: string[]): void {
    loadWarnings.replaceChildren(...warnings.map((text) => el("li", {}, [text])));
  }

  // ---- QR inbox -------------------------------------------------------

  const qrText = el("textarea", {
    id: "qr-text", rows: "4",
    placeholder: "Paste scanned frame texts, one per line",
  });
  const qrProgress = el("p", { id: "qr-progress" });
  const qrAdd = el("button", { id: "qr-add", type: "button" }, ["Add frames"]);
  const qrDrop = el("button", { id: "qr-drop", type: "button" }, ["Discard transfer"]);

  qrAdd.addEventListener("click", () => {
    enqueue("Frames added.", () => {
      const progress = session.addQrFrames(qrText.value);
      qrText.value = "";
      if (progress.loaded !== null) {
        reportLoad(progress.loaded.warnings);
      }
    });
  });

  qrDrop.addEventListener("click", () => {
    enqueue("Transfer discarded.", () => session.dropQrTransfer());
  });

  function renderQrProgress(): void {
    const progress = session.qrProgress();
    if (progress === null) {
      qrProgress.textContent = "";
      qrDrop.hidden = true;
      return;
    }
    qrDrop.hidden = false;
    const missing = progress.missing.map((i) => i + 1).join(", ");
    qrProgress.textContent =
      `Transfer ${progress.transferId}: ${progress.received} of ${progress.total} frames; `
      + `missing ${missing}`;
  }

  // ---- metadata form --------------------------------------------------

  const metaNome = el("input", { id: "meta-nome", type: "text" });
  const metaDescrizione = el("input", { id: "meta-descrizione", type: "text" });
  const metaUmapKey = el("input", { id: "meta-umap-key", type: "text" });
  const metaWebPageUrl = el("input", { id: "meta-web-page-url", type: "text" });
  const metaApply = el("button", { id: "meta-apply", type: "button" }, ["Apply metadata"]);

  metaApply.addEventListener("click", () => {
    enqueue("Metadata set.", () => {
      session.setMeta({
        nome: metaNome.value,
        descrizione: metaDescrizione.value,
        umapKey: metaUmapKey.value,
        webPageUrl: metaWebPageUrl.value,
      });
    });
  });

  function renderMeta(): void {
    try {
      const meta = session.meta();
      metaNome.value = meta.nome;
      metaDescrizione.value = meta.descrizione;
      metaUmapKey.value = meta.umapKey;
      metaWebPageUrl.value = meta.webPageUrl;
    } catch {
      // Nothing loaded yet; leave the form as typed.
    }
  }

  // ---- feature table --------------------------------------------------

  const featureTable = el("table", { id: "feature-table" });

  function kindCell(feat: UlspFeature): HTMLTableCellElement {
    const style = registry.styleFor(feat.kind);
    const dot = el("span", { class: "kind-dot" });
    dot.style.backgroundColor = style.color;
    const label = feat.kind === "Unknown" && feat.rawType !== null
      ? `Unknown (${feat.rawType})` : feat.kind;
    return el("td", {}, [dot, ` ${label}`]);
  }

  function featureRow(feat: UlspFeature): HTMLTableRowElement {
    const row = el("tr", { "data-id": feat.id });
    if (feat.id === selectedId) row.classList.add("selected");

    const select = el("button", { class: "select", type: "button" }, ["Edit"]);
    select.addEventListener("click", () => {
      enqueue(`Editing ${feat.id}.`, () => { selectedId = feat.id; });
    });

    const remove = el("button", { class: "remove", type: "button" }, ["Remove"]);
    remove.addEventListener("click", () => {
      enqueue("Feature removed.", () => {
        session.removeFeature(feat.id);
        if (selectedId === feat.id) selectedId = null;
      });
    });

    const retypeKind = el("select", { class: "retype-kind" });
    for (const kind of CONCRETE_KINDS) retypeKind.append(option(kind));
    retypeKind.value = feat.kind === "Unknown" ? "POI" : feat.kind;
    const retype = el("button", { class: "retype", type: "button" }, ["Retype"]);
    retype.addEventListener("click", () => {
      enqueue("Feature retyped.", () =>
        session.retypeFeature(feat.id, retypeKind.value as FeatureKind));
    });

    row.append(
      kindCell(feat),
      el("td", {}, [feat.recognized.get("Nome") ?? ""]),
      el("td", {}, [geometrySummary(feat.geometry)]),
      el("td", {}, [String(feat.unrecognized.size)]),
      el("td", {}, [select, " ", remove, " ", retypeKind, " ", retype]),
    );
    return row;
  }

  function renderFeatures(): void {
    const header = el("tr", {}, ["Kind", "Nome", "Geometry", "Extras", "Actions"]
      .map((text) => el("th", {}, [text])));
    let rows: HTMLTableRowElement[] = [];
    try {
      rows = session.features().map(featureRow);
    } catch {
      // Nothing loaded yet.
    }
    featureTable.replaceChildren(header, ...rows);
  }

  // ---- selected feature: recognized form and extras -------------------

  const detail = el("section", { id: "detail" });

  function fieldInput(spec: FieldSpec, value: string): HTMLElement {
    if (spec.kind === "enum") {
      const select = el("select", { class: "field-input", "data-key": spec.key });
      select.append(option("", "(not set)"));
      for (const choice of spec.options) select.append(option(choice));
      select.value = value;
      return select;
    }
    if (spec.kind === "longtext") {
      const area = el("textarea", { class: "field-input", "data-key": spec.key, rows: "3" });
      area.value = value;
      return area;
    }
    const input = el("input", { class: "field-input", "data-key": spec.key, type: "text" });
    input.value = value;
    return input;
  }

  function adoptControls(feat: UlspFeature, key: string): Array<Node | string> {
    const target = el("select", { class: "adopt-target" });
    for (const spec of registry.fieldsFor(feat.kind)) {
      target.append(option(spec.key));
    }
    const adopt = el("button", { class: "adopt", type: "button" }, ["Adopt"]);
    adopt.addEventListener("click", () => {
      enqueue(`Adopted ${key}.`, () => session.adopt(feat.id, key, target.value));
    });
    const discard = el("button", { class: "discard", type: "button" }, ["Discard"]);
    discard.addEventListener("click", () => {
      enqueue(`Discarded ${key}.`, () => session.discard(feat.id, new Set([key])));
    });
    return [target, " ", adopt, " ", discard];
  }

  function renderDetail(): void {
    const feat = selectedId === null ? null : session.feature(selectedId);
    if (feat === null) {
      detail.replaceChildren();
      detail.hidden = true;
      return;
    }
    detail.hidden = false;

    const fields = el("div", { class: "fields" });
    for (const spec of registry.fieldsFor(feat.kind)) {
      const value = feat.recognized.get(spec.key) ?? "";
      const label = el("label", {}, [
        `${spec.label}${spec.required ? " *" : ""} `,
        fieldInput(spec, value),
      ]);
      fields.append(label);
    }

    const apply = el("button", { id: "detail-apply", type: "button" }, ["Apply changes"]);
    apply.addEventListener("click", () => {
      enqueue("Feature updated.", () => {
        const changes = new Map<string, string | null>();
        for (const input of fields.querySelectorAll<HTMLElement>(".field-input")) {
          const key = input.getAttribute("data-key") ?? "";
          const value = (input as HTMLInputElement | HTMLTextAreaElement | HTMLSelectElement).value;
          changes.set(key, value === "" ? null : value);
        }
        session.editFeature(feat.id, changes);
      });
    });

    const extras = el("ul", { id: "extras" });
    for (const [key, value] of feat.unrecognized) {
      extras.append(el("li", { "data-key": key }, [
        el("code", {}, [key]), `: ${extrasValueText(value)} `,
        ...adoptControls(feat, key),
      ]));
    }

    const discardAll = el("button", { id: "discard-all", type: "button" }, ["Discard all"]);
    discardAll.addEventListener("click", () => {
      enqueue("Extras discarded.", () => session.discard(feat.id, null));
    });
    discardAll.hidden = feat.unrecognized.size === 0;

    detail.replaceChildren(
      el("h3", {}, [`${feat.kind}: ${feat.recognized.get("Nome") ?? feat.id}`]),
      el("p", { class: "feature-id" }, [feat.id]),
      fields,
      apply,
      el("h4", {}, ["Unrecognized properties"]),
      extras,
      discardAll,
    );
  }

  // ---- validation ------------------------------------------------------

  const issues = el("ul", { id: "issues" });
  const validate = el("button", { id: "validate", type: "button" }, ["Validate"]);

  validate.addEventListener("click", () => {
    enqueue("Validated.", () => {
      const report = session.validate();
      const items = [
        ...report.errors.map((issue) => el("li", { class: "error" }, [issueText(issue)])),
        ...report.warnings.map((issue) => el("li", { class: "warning" }, [issueText(issue)])),
      ];
      if (items.length === 0) {
        items.push(el("li", { class: "ok" }, ["No problems found."]));
      }
      issues.replaceChildren(...items);
    });
  });

  // ---- exports ----------------------------------------------------------

  const exportGeojson = el("button", { id: "export-geojson", type: "button" }, ["Export GeoJSON"]);
  exportGeojson.addEventListener("click", () => {
    enqueue("GeoJSON exported.", () => {
      save("dataset.geojson", session.exportGeojson(), "application/geo+json");
    });
  });

  const exportGpx = el("button", { id: "export-gpx", type: "button" }, ["Export GPX"]);
  exportGpx.addEventListener("click", () => {
    enqueue("GPX exported.", () => {
      const result = session.exportGpx();
      save("dataset.gpx", result.data, "application/gpx+xml");
      if (result.skipped > 0) {
        return `GPX exported; ${result.skipped} feature(s) skipped.`;
      }
    });
  });

  const exportCsvKind = el("select", { id: "export-csv-kind" });
  for (const kind of CONCRETE_KINDS.filter((k) => POINT_KINDS.has(k))) {
    exportCsvKind.append(option(kind));
  }
  const exportCsv = el("button", { id: "export-csv", type: "button" }, ["Export CSV"]);
  exportCsv.addEventListener("click", () => {
    enqueue("CSV exported.", () => {
      const kind = exportCsvKind.value as FeatureKind;
      save(`${kind.toLowerCase()}.csv`, session.exportCsv(kind), "text/csv");
    });
  });

  // ---- QR frame viewer ---------------------------------------------------

  const qrPanel = el("section", { id: "qr-frames" });
  const qrShow = el("button", { id: "export-qr", type: "button" }, ["Show QR frames"]);
  const qrSaveTexts = el("button", { id: "qr-save-texts", type: "button" }, ["Save frame texts"]);
  const qrFrameLabel = el("p", { id: "qr-frame-label" });
  const qrFrameImage = el("div", { id: "qr-frame-image" });
  const qrFrameText = el("textarea", { id: "qr-frame-text", rows: "3", readonly: "" });
  const qrPrev = el("button", { id: "qr-prev", type: "button" }, ["Previous"]);
  const qrNext = el("button", { id: "qr-next", type: "button" }, ["Next"]);

  qrShow.addEventListener("click", () => {
    enqueue("Frames ready.", () => {
      frames = session.exportQrFrames();
      frameIndex = 0;
    });
  });
  qrSaveTexts.addEventListener("click", () => {
    enqueue("Frame texts saved.", () => {
      if (frames.length === 0) frames = session.exportQrFrames();
      save("frames.txt", frames.join("\n") + "\n", "text/plain");
    });
  });
  qrPrev.addEventListener("click", () => {
    enqueue("", () => { frameIndex = Math.max(0, frameIndex - 1); });
  });
  qrNext.addEventListener("click", () => {
    enqueue("", () => { frameIndex = Math.min(frames.length - 1, frameIndex + 1); });
  });

  function renderQrPanel(): void {
    if (frames.length === 0) {
      qrPanel.hidden = true;
      return;
    }
    qrPanel.hidden = false;
    qrFrameLabel.textContent = `Frame ${frameIndex + 1} of ${frames.length}`;
    qrFrameImage.innerHTML = matrixToSvg(encodeMatrix(frames[frameIndex], FRAME_SYMBOL_LEVEL));
    qrFrameText.value = frames[frameIndex];
    qrPrev.disabled = frameIndex === 0;
    qrNext.disabled = frameIndex === frames.length - 1;
  }

  // ---- history -----------------------------------------------------------

  const history = el("ol", { id: "history" });

  function renderHistory(): void {
    history.replaceChildren(...session.history.map((line) => el("li", {}, [line])));
  }

  // ---- page assembly -------------------------------------------------------

  function render(): void {
    renderMeta();
    renderFeatures();
    renderDetail();
    renderQrProgress();
    renderQrPanel();
    renderHistory();
  }

  root.replaceChildren(
    el("h1", {}, ["Field atlas editor"]),
    status,
    el("section", { id: "load" }, [
      el("h2", {}, ["Load"]),
      el("label", {}, ["GeoJSON ", geojsonInput]),
      el("label", {}, ["CSV ", csvInput, " as ", csvKind]),
      loadWarnings,
      el("h3", {}, ["QR transfer"]),
      qrText, el("div", {}, [qrAdd, " ", qrDrop]), qrProgress,
    ]),
    el("section", { id: "metadata" }, [
      el("h2", {}, ["Collection"]),
      el("label", {}, ["Nome ", metaNome]),
      el("label", {}, ["Descrizione ", metaDescrizione]),
      el("label", {}, ["umapKey ", metaUmapKey]),
      el("label", {}, ["WebPageURL ", metaWebPageUrl]),
      metaApply,
    ]),
    el("section", { id: "features" }, [
      el("h2", {}, ["Features"]),
      featureTable,
    ]),
    detail,
    el("section", { id: "validation" }, [
      el("h2", {}, ["Validation"]),
      validate, issues,
    ]),
    el("section", { id: "export" }, [
      el("h2", {}, ["Export"]),
      el("div", {}, [exportGeojson, " ", exportGpx, " ", exportCsv, " as ", exportCsvKind]),
      el("div", {}, [qrShow, " ", qrSaveTexts]),
    ]),
    qrPanel,
    el("section", { id: "log" }, [
      el("h2", {}, ["History"]),
      history,
    ]),
  );
  qrPanel.append(qrFrameLabel, qrFrameImage, qrFrameText, el("div", {}, [qrPrev, " ", qrNext]));
  render();

  return { whenIdle: () => queue };
}
