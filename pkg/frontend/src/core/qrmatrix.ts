/* QR symbol generation: byte mode, versions 1-40, four EC levels, SVG output.
 *
 * Self-contained implementation of the symbol construction pipeline:
 * Reed-Solomon over GF(256) with the 0x11D polynomial, block interleaving,
 * mask selection by penalty score, BCH-protected format and version fields.
 * Capacity/EC parameters are stored as (ec codewords per block, block
 * count); the per-block data sizes follow from the symbol's total codeword
 * count, which is computed from the module layout rather than transcribed.
 */

import { QrError } from "./errors";
import { pyRepr } from "./model";

export const EC_LEVELS = ["L", "M", "Q", "H"] as const;
export type EcLevel = (typeof EC_LEVELS)[number];

const EC_BITS: Record<EcLevel, number> = { L: 0b01, M: 0b00, Q: 0b11, H: 0b10 };
const EC_INDEX: Record<EcLevel, number> = { L: 0, M: 1, Q: 2, H: 3 };

// (ec codewords per block, number of blocks) for L, M, Q, H per version.
const EC_PARAMS: ReadonlyArray<ReadonlyArray<readonly [number, number]>> = [
  [[7, 1], [10, 1], [13, 1], [17, 1]],        // 1
  [[10, 1], [16, 1], [22, 1], [28, 1]],       // 2
  [[15, 1], [26, 1], [18, 2], [22, 2]],       // 3
  [[20, 1], [18, 2], [26, 2], [16, 4]],       // 4
  [[26, 1], [24, 2], [18, 4], [22, 4]],       // 5
  [[18, 2], [16, 4], [24, 4], [28, 4]],       // 6
  [[20, 2], [18, 4], [18, 6], [26, 5]],       // 7
  [[24, 2], [22, 4], [22, 6], [26, 6]],       // 8
  [[30, 2], [22, 5], [20, 8], [24, 8]],       // 9
  [[18, 4], [26, 5], [24, 8], [28, 8]],       // 10
  [[20, 4], [30, 5], [28, 8], [24, 11]],      // 11
  [[24, 4], [22, 8], [26, 10], [28, 11]],     // 12
  [[26, 4], [22, 9], [24, 12], [22, 16]],     // 13
  [[30, 4], [24, 9], [20, 16], [24, 16]],     // 14
  [[22, 6], [24, 10], [30, 12], [24, 18]],    // 15
  [[24, 6], [28, 10], [24, 17], [30, 16]],    // 16
  [[28, 6], [28, 11], [28, 16], [28, 19]],    // 17
  [[30, 6], [26, 13], [28, 18], [28, 21]],    // 18
  [[28, 7], [26, 14], [26, 21], [26, 25]],    // 19
  [[28, 8], [26, 16], [30, 20], [28, 25]],    // 20
  [[28, 8], [26, 17], [28, 23], [30, 25]],    // 21
  [[28, 9], [28, 17], [30, 23], [24, 34]],    // 22
  [[30, 9], [28, 18], [30, 25], [30, 30]],    // 23
  [[30, 10], [28, 20], [30, 27], [30, 32]],   // 24
  [[26, 12], [28, 21], [30, 29], [30, 35]],   // 25
  [[28, 12], [28, 23], [28, 34], [30, 37]],   // 26
  [[30, 12], [28, 25], [30, 34], [30, 40]],   // 27
  [[30, 13], [28, 26], [30, 35], [30, 42]],   // 28
  [[30, 14], [28, 28], [30, 38], [30, 45]],   // 29
  [[30, 15], [28, 29], [30, 40], [30, 48]],   // 30
  [[30, 16], [28, 31], [30, 43], [30, 51]],   // 31
  [[30, 17], [28, 33], [30, 45], [30, 54]],   // 32
  [[30, 18], [28, 35], [30, 48], [30, 57]],   // 33
  [[30, 19], [28, 37], [30, 51], [30, 60]],   // 34
  [[30, 19], [28, 38], [30, 53], [30, 63]],   // 35
  [[30, 20], [28, 40], [30, 56], [30, 66]],   // 36
  [[30, 21], [28, 43], [30, 59], [30, 70]],   // 37
  [[30, 22], [28, 45], [30, 62], [30, 74]],   // 38
  [[30, 24], [28, 47], [30, 65], [30, 77]],   // 39
  [[30, 25], [28, 49], [30, 68], [30, 81]],   // 40
];

// Alignment pattern center coordinates per version (version 1 has none).
const ALIGNMENT: ReadonlyArray<readonly number[]> = [
  [], [6, 18], [6, 22], [6, 26], [6, 30], [6, 34],
  [6, 22, 38], [6, 24, 42], [6, 26, 46], [6, 28, 50], [6, 30, 54],
  [6, 32, 58], [6, 34, 62], [6, 26, 46, 66], [6, 26, 48, 70],
  [6, 26, 50, 74], [6, 30, 54, 78], [6, 30, 56, 82], [6, 30, 58, 86],
  [6, 34, 62, 90], [6, 28, 50, 72, 94], [6, 26, 50, 74, 98],
  [6, 30, 54, 78, 102], [6, 28, 54, 80, 106], [6, 32, 58, 84, 110],
  [6, 30, 58, 86, 114], [6, 34, 62, 90, 118], [6, 26, 50, 74, 98, 122],
  [6, 30, 54, 78, 102, 126], [6, 26, 52, 78, 104, 130],
  [6, 30, 56, 82, 108, 134], [6, 34, 60, 86, 112, 138],
  [6, 30, 58, 86, 114, 142], [6, 34, 62, 90, 118, 146],
  [6, 30, 54, 78, 102, 126, 150], [6, 24, 50, 76, 102, 128, 154],
  [6, 28, 54, 80, 106, 132, 158], [6, 32, 58, 84, 110, 136, 162],
  [6, 26, 54, 82, 110, 138, 166], [6, 30, 58, 86, 114, 142, 170],
];

const FORMAT_GEN = 0b10100110111;   // BCH(15,5)
const FORMAT_MASK = 0b101010000010010;
const VERSION_GEN = 0x1f25;         // BCH(18,6)

// GF(256) log/antilog tables for the 0x11D field.
const EXP = new Uint8Array(512);
const LOG = new Uint8Array(256);
{
  let value = 1;
  for (let i = 0; i < 255; i += 1) {
    EXP[i] = value;
    LOG[value] = i;
    value <<= 1;
    if (value & 0x100) {
      value ^= 0x11d;
    }
  }
  for (let i = 255; i < 512; i += 1) {
    EXP[i] = EXP[i - 255];
  }
}

function gfMul(a: number, b: number): number {
  if (a === 0 || b === 0) return 0;
  return EXP[LOG[a] + LOG[b]];
}

const generatorPolyCache = new Map<number, number[]>();

function generatorPoly(n: number): number[] {
  const cached = generatorPolyCache.get(n);
  if (cached !== undefined) return cached;
  let poly = [1];
  for (let i = 0; i < n; i += 1) {
    const factor = [1, EXP[i]]; // x + a^i, highest degree first
    const out = new Array<number>(poly.length + 1).fill(0);
    poly.forEach((c, j) => {
      out[j] ^= gfMul(c, factor[0]);
      out[j + 1] ^= gfMul(c, factor[1]);
    });
    poly = out;
  }
  generatorPolyCache.set(n, poly);
  return poly;
}

function rsEc(data: Uint8Array, n: number): Uint8Array {
  const gen = generatorPoly(n);
  const rem = new Uint8Array(data.length + n);
  rem.set(data);
  for (let i = 0; i < data.length; i += 1) {
    const factor = rem[i];
    if (factor) {
      for (let j = 1; j < gen.length; j += 1) {
        rem[i + j] ^= gfMul(gen[j], factor);
      }
    }
  }
  return rem.slice(data.length);
}

interface Layout {
  size: number;
  modules: boolean[][];     // function module values, row-major
  isFunction: boolean[][];  // includes reserved format/version cells
  positions: Array<[number, number]>; // data cell coordinates in placement order
  totalCodewords: number;
  remainderBits: number;
}

function placeFinder(modules: boolean[][], isFunction: boolean[][],
                     row0: number, col0: number, size: number): void {
  for (let dr = -1; dr < 8; dr += 1) {
    for (let dc = -1; dc < 8; dc += 1) {
      const r = row0 + dr;
      const c = col0 + dc;
      if (r < 0 || r >= size || c < 0 || c >= size) continue;
      const inside = dr >= 0 && dr <= 6 && dc >= 0 && dc <= 6;
      const dark = inside && (dr === 0 || dr === 6 || dc === 0 || dc === 6
        || (dr >= 2 && dr <= 4 && dc >= 2 && dc <= 4));
      modules[r][c] = dark;
      isFunction[r][c] = true;
    }
  }
}

const layoutCache = new Map<number, Layout>();

function layout(version: number): Layout {
  const cached = layoutCache.get(version);
  if (cached !== undefined) return cached;

  const size = 17 + 4 * version;
  const modules: boolean[][] = Array.from({ length: size }, () => new Array(size).fill(false));
  const isFunction: boolean[][] = Array.from({ length: size }, () => new Array(size).fill(false));

  placeFinder(modules, isFunction, 0, 0, size);
  placeFinder(modules, isFunction, 0, size - 7, size);
  placeFinder(modules, isFunction, size - 7, 0, size);

  const centers = ALIGNMENT[version - 1];
  const finderCorners = new Set([`6,6`, `6,${size - 7}`, `${size - 7},6`]);
  for (const r of centers) {
    for (const c of centers) {
      if (finderCorners.has(`${r},${c}`)) continue;
      for (let dr = -2; dr <= 2; dr += 1) {
        for (let dc = -2; dc <= 2; dc += 1) {
          modules[r + dr][c + dc] = Math.max(Math.abs(dr), Math.abs(dc)) !== 1;
          isFunction[r + dr][c + dc] = true;
        }
      }
    }
  }

  for (let i = 8; i < size - 8; i += 1) {
    if (!isFunction[6][i]) {
      modules[6][i] = i % 2 === 0;
      isFunction[6][i] = true;
    }
    if (!isFunction[i][6]) {
      modules[i][6] = i % 2 === 0;
      isFunction[i][6] = true;
    }
  }

  modules[size - 8][8] = true; // dark module
  isFunction[size - 8][8] = true;

  for (const c of [0, 1, 2, 3, 4, 5, 7, 8]) { // format areas, filled per mask
    isFunction[8][c] = true;
  }
  for (const r of [0, 1, 2, 3, 4, 5, 7, 8]) {
    isFunction[r][8] = true;
  }
  for (let r = size - 7; r < size; r += 1) {
    isFunction[r][8] = true;
  }
  for (let c = size - 8; c < size; c += 1) {
    isFunction[8][c] = true;
  }

  if (version >= 7) {
    for (let i = 0; i < 18; i += 1) {
      isFunction[size - 11 + (i % 3)][Math.floor(i / 3)] = true;
      isFunction[Math.floor(i / 3)][size - 11 + (i % 3)] = true;
    }
  }

  const positions: Array<[number, number]> = [];
  let col = size - 1;
  let upward = true;
  while (col > 0) {
    if (col === 6) {
      col -= 1;
    }
    for (let step = 0; step < size; step += 1) {
      const row = upward ? size - 1 - step : step;
      for (const c of [col, col - 1]) {
        if (!isFunction[row][c]) {
          positions.push([row, c]);
        }
      }
    }
    upward = !upward;
    col -= 2;
  }

  const dataBits = positions.length;
  const built: Layout = {
    size,
    modules,
    isFunction,
    positions,
    totalCodewords: Math.floor(dataBits / 8),
    remainderBits: dataBits % 8,
  };
  layoutCache.set(version, built);
  return built;
}

/** (ec codewords per block, data codewords of each block). */
export function blockStructure(version: number, level: EcLevel): [number, number[]] {
  const [ecPerBlock, blocks] = EC_PARAMS[version - 1][EC_INDEX[level]];
  const total = layout(version).totalCodewords;
  const dataTotal = total - ecPerBlock * blocks;
  const base = Math.floor(dataTotal / blocks);
  const longer = dataTotal % blocks;
  const sizes = [
    ...new Array<number>(blocks - longer).fill(base),
    ...new Array<number>(longer).fill(base + 1),
  ];
  return [ecPerBlock, sizes];
}

/** Byte-mode capacity in bytes. */
export function dataCapacity(version: number, level: EcLevel): number {
  const [, sizes] = blockStructure(version, level);
  const countBits = version <= 9 ? 8 : 16;
  const totalBits = sizes.reduce((a, b) => a + b, 0) * 8;
  return Math.floor((totalBits - 4 - countBits) / 8);
}

function chooseVersion(nbytes: number, level: EcLevel, minVersion: number): number {
  for (let version = minVersion; version <= 40; version += 1) {
    if (dataCapacity(version, level) >= nbytes) {
      return version;
    }
  }
  throw new QrError(`data too long for any QR version at level ${level}: ${nbytes} bytes`);
}

function buildCodewords(data: Uint8Array, version: number, level: EcLevel): Uint8Array {
  const [ecPerBlock, sizes] = blockStructure(version, level);
  const capacity = sizes.reduce((a, b) => a + b, 0);

  const bits: number[] = [];
  const push = (value: number, width: number): void => {
    for (let shift = width - 1; shift >= 0; shift -= 1) {
      bits.push((value >> shift) & 1);
    }
  };

  push(0b0100, 4); // byte mode
  push(data.length, version <= 9 ? 8 : 16);
  for (const byte of data) {
    push(byte, 8);
  }
  if (bits.length > capacity * 8) {
    throw new QrError("internal: data does not fit the chosen version");
  }
  push(0, Math.min(4, capacity * 8 - bits.length)); // terminator
  if (bits.length % 8) {
    push(0, 8 - (bits.length % 8));
  }
  const codewords: number[] = [];
  for (let i = 0; i < bits.length; i += 8) {
    let byte = 0;
    for (let j = 0; j < 8; j += 1) {
      byte |= bits[i + j] << (7 - j);
    }
    codewords.push(byte);
  }
  const pad = [0xec, 0x11];
  const head = codewords.length;
  for (let i = 0; i < capacity - head; i += 1) {
    codewords.push(pad[i % 2]);
  }

  const dataBlocks: Uint8Array[] = [];
  let offset = 0;
  for (const size of sizes) {
    dataBlocks.push(Uint8Array.from(codewords.slice(offset, offset + size)));
    offset += size;
  }
  const ecBlocks = dataBlocks.map((block) => rsEc(block, ecPerBlock));

  const out: number[] = [];
  const maxSize = Math.max(...sizes);
  for (let i = 0; i < maxSize; i += 1) {
    for (const block of dataBlocks) {
      if (i < block.length) {
        out.push(block[i]);
      }
    }
  }
  for (let i = 0; i < ecPerBlock; i += 1) {
    for (const block of ecBlocks) {
      out.push(block[i]);
    }
  }
  return Uint8Array.from(out);
}

const MASKS: ReadonlyArray<(r: number, c: number) => boolean> = [
  (r, c) => (r + c) % 2 === 0,
  (r) => r % 2 === 0,
  (_, c) => c % 3 === 0,
  (r, c) => (r + c) % 3 === 0,
  (r, c) => (Math.floor(r / 2) + Math.floor(c / 3)) % 2 === 0,
  (r, c) => ((r * c) % 2) + ((r * c) % 3) === 0,
  (r, c) => (((r * c) % 2) + ((r * c) % 3)) % 2 === 0,
  (r, c) => (((r + c) % 2) + ((r * c) % 3)) % 2 === 0,
];

function formatValue(level: EcLevel, mask: number): number {
  const data = (EC_BITS[level] << 3) | mask;
  let rem = data << 10;
  for (let bit = 14; bit > 9; bit -= 1) {
    if (rem & (1 << bit)) {
      rem ^= FORMAT_GEN << (bit - 10);
    }
  }
  return ((data << 10) | rem) ^ FORMAT_MASK;
}

function versionValue(version: number): number {
  let rem = version << 12;
  for (let bit = 17; bit > 11; bit -= 1) {
    if (rem & (1 << bit)) {
      rem ^= VERSION_GEN << (bit - 12);
    }
  }
  return (version << 12) | rem;
}

function writeFormat(matrix: boolean[][], size: number, level: EcLevel, mask: number): void {
  const value = formatValue(level, mask);
  const bit = (i: number): boolean => ((value >> i) & 1) === 1; // i counts down from the MSB (b14)

  const coordsA: Array<[number, number]> = [
    [8, 0], [8, 1], [8, 2], [8, 3], [8, 4], [8, 5], [8, 7], [8, 8],
    [7, 8], [5, 8], [4, 8], [3, 8], [2, 8], [1, 8], [0, 8],
  ];
  coordsA.forEach(([r, c], i) => {
    matrix[r][c] = bit(14 - i);
  });
  for (let i = 0; i < 7; i += 1) { // b14..b8 down the left column copy
    matrix[size - 1 - i][8] = bit(14 - i);
  }
  for (let i = 0; i < 8; i += 1) { // b7..b0 along the bottom row copy
    matrix[8][size - 8 + i] = bit(7 - i);
  }
}

function writeVersion(matrix: boolean[][], size: number, version: number): void {
  if (version < 7) return;
  const value = versionValue(version);
  for (let i = 0; i < 18; i += 1) {
    const bit = ((value >> i) & 1) === 1;
    matrix[size - 11 + (i % 3)][Math.floor(i / 3)] = bit;
    matrix[Math.floor(i / 3)][size - 11 + (i % 3)] = bit;
  }
}

function penalty(matrix: boolean[][], size: number): number {
  let score = 0;

  const runs = (line: boolean[]): number => {
    let total = 0;
    let run = 1;
    for (let i = 1; i < size; i += 1) {
      if (line[i] === line[i - 1]) {
        run += 1;
      } else {
        if (run >= 5) {
          total += 3 + run - 5;
        }
        run = 1;
      }
    }
    if (run >= 5) {
      total += 3 + run - 5;
    }
    return total;
  };

  const columns: boolean[][] = [];
  for (let c = 0; c < size; c += 1) {
    const col = new Array<boolean>(size);
    for (let r = 0; r < size; r += 1) {
      col[r] = matrix[r][c];
    }
    columns.push(col);
  }
  for (let r = 0; r < size; r += 1) {
    score += runs(matrix[r]);
  }
  for (const col of columns) {
    score += runs(col);
  }

  for (let r = 0; r < size - 1; r += 1) {
    const row = matrix[r];
    const below = matrix[r + 1];
    for (let c = 0; c < size - 1; c += 1) {
      if (row[c] === row[c + 1] && row[c] === below[c] && row[c] === below[c + 1]) {
        score += 3;
      }
    }
  }

  const patternA = [true, false, true, true, true, false, true,
    false, false, false, false];
  const patternB = [...patternA].reverse();
  const matchesAt = (line: boolean[], start: number, pattern: boolean[]): boolean => {
    for (let j = 0; j < 11; j += 1) {
      if (line[start + j] !== pattern[j]) return false;
    }
    return true;
  };
  for (const line of [...matrix, ...columns]) {
    for (let i = 0; i + 11 <= size; i += 1) {
      if (matchesAt(line, i, patternA) || matchesAt(line, i, patternB)) {
        score += 40;
      }
    }
  }

  let dark = 0;
  for (const row of matrix) {
    for (const v of row) {
      if (v) dark += 1;
    }
  }
  const percent = Math.floor((dark * 100) / (size * size));
  score += 10 * Math.floor(Math.abs(percent - 50) / 5);
  return score;
}

/** Encode bytes (text is UTF-8) into a module matrix, true = dark. */
export function encodeMatrix(data: Uint8Array | string, level: EcLevel = "M",
                             minVersion: number = 1): boolean[][] {
  if (!(level in EC_INDEX)) {
    throw new QrError(`unknown error-correction level ${pyRepr(String(level))}`);
  }
  const bytes = typeof data === "string" ? new TextEncoder().encode(data) : data;
  const version = chooseVersion(bytes.length, level, minVersion);
  const lay = layout(version);
  const size = lay.size;
  const codewords = buildCodewords(bytes, version, level);

  const bits: boolean[] = [];
  for (const byte of codewords) {
    for (let shift = 7; shift >= 0; shift -= 1) {
      bits.push(((byte >> shift) & 1) === 1);
    }
  }
  for (let i = 0; i < lay.remainderBits; i += 1) {
    bits.push(false);
  }
  if (bits.length !== lay.positions.length) {
    throw new QrError("internal: bit count does not match data cells");
  }

  let bestMatrix: boolean[][] | null = null;
  let bestScore: number | null = null;
  for (let mask = 0; mask < 8; mask += 1) {
    const maskFn = MASKS[mask];
    const matrix = lay.modules.map((row) => [...row]);
    lay.positions.forEach(([r, c], i) => {
      matrix[r][c] = bits[i] !== maskFn(r, c);
    });
    writeFormat(matrix, size, level, mask);
    writeVersion(matrix, size, version);
    const score = penalty(matrix, size);
    if (bestScore === null || score < bestScore) {
      bestScore = score;
      bestMatrix = matrix;
    }
  }
  return bestMatrix!;
}

/* Deterministic SVG of the symbol with a quiet zone; one unit per module.
 * Dark modules are drawn as horizontal run rectangles. */
export function matrixToSvg(matrix: boolean[][], border: number = 4): string {
  const size = matrix.length;
  const full = size + 2 * border;
  const rects: string[] = [];
  for (let r = 0; r < size; r += 1) {
    let c = 0;
    while (c < size) {
      if (!matrix[r][c]) {
        c += 1;
        continue;
      }
      let end = c;
      while (end < size && matrix[r][end]) {
        end += 1;
      }
      rects.push(`<rect x="${border + c}" y="${border + r}" width="${end - c}" height="1"/>`);
      c = end;
    }
  }
  return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${full} ${full}" `
    + `shape-rendering="crispEdges" role="img">`
    + `<rect width="${full}" height="${full}" fill="#ffffff"/>`
    + `<g fill="#000000">${rects.join("")}</g></svg>`;
}
