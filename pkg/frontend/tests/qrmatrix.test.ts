/* Symbol generation: module-for-module parity with the publisher's encoder.
 *
 * The goldens cover both 21x21 versions (format information only), a pinned
 * minimum version in the range that adds version information areas, multibyte
 * text, and a payload long enough to need interleaved error-correction
 * blocks, at all four correction levels.
 */

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { QrError } from "../src/core/errors";
import { EcLevel, encodeMatrix, matrixToSvg } from "../src/core/qrmatrix";
import { testPath } from "./paths";

interface MatrixCase {
  name: string;
  data: string;
  level: string;
  minVersion: number;
  size: number;
  rows: string[];
}

const cases = JSON.parse(
  readFileSync(testPath("fixtures/qr_matrix_goldens.json"), "utf8"),
) as MatrixCase[];

function renderRows(matrix: boolean[][]): string[] {
  return matrix.map((row) => row.map((cell) => (cell ? "1" : "0")).join(""));
}

describe("encodeMatrix", () => {
  it("covers all four correction levels", () => {
    expect(new Set(cases.map((c) => c.level))).toEqual(new Set(["L", "M", "Q", "H"]));
  });

  for (const goldenCase of cases) {
    it(`matches the golden for ${goldenCase.name}`, () => {
      const matrix = encodeMatrix(goldenCase.data, goldenCase.level as EcLevel,
        goldenCase.minVersion);
      expect(matrix.length).toBe(goldenCase.size);
      expect(renderRows(matrix)).toEqual(goldenCase.rows);
    });
  }

  it("accepts raw bytes as well as text", () => {
    const fromText = encodeMatrix("pozzo");
    const fromBytes = encodeMatrix(new TextEncoder().encode("pozzo"));
    expect(renderRows(fromBytes)).toEqual(renderRows(fromText));
  });

  it("rejects an unknown correction level", () => {
    const bad = "Z" as EcLevel;
    expect(() => encodeMatrix("x", bad)).toThrowError(QrError);
    expect(() => encodeMatrix("x", bad))
      .toThrowError("unknown error-correction level 'Z'");
  });

  it("rejects data too long for any version", () => {
    const data = new Uint8Array(3000);
    expect(() => encodeMatrix(data, "H"))
      .toThrowError("data too long for any QR version at level H: 3000 bytes");
  });
});

describe("matrixToSvg", () => {
  it("emits a self-contained SVG with the quiet zone", () => {
    const matrix = encodeMatrix("pozzo");
    const svg = matrixToSvg(matrix);
    const full = matrix.length + 8;
    expect(svg).toContain(`viewBox="0 0 ${full} ${full}"`);
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    expect(svg).not.toContain("http://localhost");
    expect(svg).toContain('fill="#000000"');
  });

  it("renders the finder pattern as dark runs at the quiet-zone offset", () => {
    const matrix = encodeMatrix("pozzo");
    const svg = matrixToSvg(matrix, 4);
    // Top row of the top-left finder: a run of 7 dark modules at (4, 4).
    expect(svg).toContain('<rect x="4" y="4" width="7" height="1"/>');
  });
});
