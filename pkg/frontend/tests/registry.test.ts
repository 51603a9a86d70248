import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { RegistryError } from "../src/core/errors";
import {
  DEFAULT_ICON_URL_TEMPLATE,
  DEFAULT_STYLE_COLOR,
  DEFAULT_STYLE_ICON,
  FormatRegistry,
  defaultRegistry,
  loadFormatRegistry,
} from "../src/core/registry";
import { DEFAULT_REGISTRY_TEXT } from "../src/core/registry_default";
import { testPath } from "./paths";

const ALL_KINDS = ["Sito", "POI", "QRtag", "Risorsa", "Percorso", "Itinerario"] as const;

const minimalRegistry = (
  kindsOverride: Record<string, unknown> = {},
  extra: Record<string, unknown> = {},
): string => {
  const kinds: Record<string, unknown> = {};
  for (const kind of ALL_KINDS) kinds[kind] = [];
  return JSON.stringify({
    version: "1.0",
    kinds: { ...kinds, ...kindsOverride },
    ...extra,
  });
};

describe("embedded registry", () => {
  it("is byte-identical to the canonical data file", () => {
    const source = readFileSync(
      testPath("../../src/fieldatlas/data/default_registry.json"),
      "utf8",
    );
    expect(DEFAULT_REGISTRY_TEXT).toBe(source);
  });

  it("loads and knows all six kinds", () => {
    const reg = defaultRegistry();
    expect(reg).toBeInstanceOf(FormatRegistry);
    for (const kind of ["Sito", "POI", "QRtag", "Risorsa", "Percorso", "Itinerario"] as const) {
      expect(reg.fieldsFor(kind).length).toBeGreaterThan(0);
      expect(reg.fieldMap(kind).has("Nome")).toBe(true);
    }
  });

  it("is cached across calls", () => {
    expect(defaultRegistry()).toBe(defaultRegistry());
  });
});

describe("registry lookups", () => {
  it("finds the first field of a given kind", () => {
    const reg = defaultRegistry();
    const tags = reg.firstField("POI", "tags");
    expect(tags?.key).toBe("Tags");
    expect(reg.firstField("POI", "enum")).toBeNull();
  });

  it("falls back to neutral style and template", () => {
    const reg = loadFormatRegistry(minimalRegistry({}));
    expect(reg.styleFor("Sito")).toEqual({
      color: DEFAULT_STYLE_COLOR,
      icon: DEFAULT_STYLE_ICON,
    });
    expect(reg.iconUrlTemplate).toBe(DEFAULT_ICON_URL_TEMPLATE);
    expect(reg.iconUrl("cave")).toBe("https://unpkg.com/@mapbox/maki/icons/cave.svg");
  });

  it("reads explicit styles", () => {
    const reg = loadFormatRegistry(
      minimalRegistry({}, { styles: { Sito: { color: "#101010", icon: "cave" } } }),
    );
    expect(reg.styleFor("Sito")).toEqual({ color: "#101010", icon: "cave" });
  });
});

describe("registry rejection", () => {
  const cases: Array<[string, string, string]> = [
    ["not JSON", "{nope", "registry is not valid JSON"],
    ["non-object top level", "[]", "registry document must be a JSON object"],
    ["missing kinds", '{"version": "1.0"}', "registry must have a 'kinds' object"],
    [
      "missing kind entry",
      '{"version": "1.0", "kinds": {"Sito": []}}',
      "registry is missing an entry for kind 'POI'",
    ],
    [
      "unknown kind name",
      minimalRegistry({ Sito2: [] }),
      "registry names unknown kinds: Sito2",
    ],
    [
      "non-list fields",
      minimalRegistry({ Sito: {} }),
      "kinds.Sito must be a list of field entries",
    ],
    [
      "field without key",
      minimalRegistry({ Sito: [{ label: "x" }] }),
      "kinds.Sito[0]: missing or empty field key",
    ],
    [
      "unknown field kind",
      minimalRegistry({ Sito: [{ key: "a", kind: "blob" }] }),
      "kinds.Sito[0] (a): unknown field kind 'blob'; expected one of text, longtext, url, image_url, tags, number, enum",
    ],
    [
      "enum without options",
      minimalRegistry({ Sito: [{ key: "a", kind: "enum" }] }),
      "kinds.Sito[0] (a): enum field must list at least one option",
    ],
    [
      "options on non-enum",
      minimalRegistry({ Sito: [{ key: "a", options: ["x"] }] }),
      "kinds.Sito[0] (a): only enum fields may list options",
    ],
    [
      "duplicate field key",
      minimalRegistry({ Sito: [{ key: "a" }, { key: "a" }] }),
      "kinds.Sito: duplicate field key 'a'",
    ],
    [
      "non-text template",
      minimalRegistry({}, { icon_url_template: 7 }),
      "icon_url_template must be text",
    ],
    [
      "styles with unknown kind",
      minimalRegistry({}, { styles: { Altro: {} } }),
      "styles names unknown kind 'Altro'",
    ],
  ];

  it.each(cases)("%s", (_name, source, message) => {
    expect(() => loadFormatRegistry(source)).toThrowError(RegistryError);
    expect(() => loadFormatRegistry(source)).toThrow(message);
  });

  it("rejects invalid UTF-8", () => {
    expect(() => loadFormatRegistry(new Uint8Array([0x7b, 0xff]))).toThrow(
      "registry is not valid UTF-8",
    );
  });
});

describe("field defaults", () => {
  it("fills label, kind, options and required", () => {
    const reg = loadFormatRegistry(minimalRegistry({ Sito: [{ key: "Nome" }] }));
    expect(reg.fieldsFor("Sito")).toEqual([
      { key: "Nome", label: "Nome", kind: "text", options: [], required: false },
    ]);
  });
});
