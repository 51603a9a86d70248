/* Offline dataset transfer as self-describing text frames.
 *
 * Frame grammar (the interoperability contract, bit-exact):
 *
 *     ULSP1|{transfer_id}|{index}|{total}|{checksum}|{chunk}
 *
 * transfer_id and checksum are 8 lowercase hex chars; index and total are
 * decimal, 0 <= index < total; chunk is a slice of the base64 text of the
 * zlib-compressed canonical GeoJSON serialization. The checksum is the CRC32
 * of the complete base64 text (ASCII), shared by all frames of one transfer
 * and checked before any decoding, so any corrupted character in any chunk
 * is caught as a checksum mismatch. Chunks are slices, not standalone
 * base64: only the concatenation in index order decodes.
 *
 * Rendering frames as QR images is the page's concern; this module is a
 * pure text codec.
 */

import { deflate, inflate } from "pako";

import {
  ChecksumMismatchError,
  ChunkConflictError,
  DecompressError,
  FrameFormatError,
  QrError,
  TransferMismatchError,
} from "./errors";
import { UlspDataset, pyRepr } from "./model";
import { FormatRegistry } from "./registry";
import { parseGeojson } from "./ingest";
import { serializeGeojson } from "./export";
import { canonicalize } from "./schema";

export const MAGIC = "ULSP1";
export const MIN_CHUNK_CHARS = 64;
export const DEFAULT_CHUNK_CHARS = 800;
// frame overhead: magic 5 + transfer id 8 + checksum 8 + 5 pipes = 26, plus
// index/total digits; 40 covers transfers of up to a million frames.
export const HEADER_ALLOWANCE = 40;

const HEX8 = /^[0-9a-f]{8}$/;
const DECIMAL = /^[0-9]+$/;
const CHUNK = /^[A-Za-z0-9+/=]+$/;

export interface QrFrame {
  transferId: string;
  index: number;
  total: number;
  checksum: string;
  chunk: string;
}

export function frameText(frame: QrFrame): string {
  return `${MAGIC}|${frame.transferId}|${frame.index}|${frame.total}`
    + `|${frame.checksum}|${frame.chunk}`;
}

// --- CRC32 and base64 (strict, environment-independent) -----------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n += 1) {
    let c = n;
    for (let k = 0; k < 8; k += 1) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c;
  }
  return table;
})();

function crc32HexOfAscii(text: string): string {
  let crc = 0xffffffff;
  for (let i = 0; i < text.length; i += 1) {
    const byte = text.charCodeAt(i);
    if (byte > 0x7f) {
      throw new QrError("payload text must be ASCII");
    }
    crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  }
  return ((crc ^ 0xffffffff) >>> 0).toString(16).padStart(8, "0");
}

const B64_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

const B64_VALUES = (() => {
  const values = new Int8Array(128).fill(-1);
  for (let i = 0; i < B64_ALPHABET.length; i += 1) {
    values[B64_ALPHABET.charCodeAt(i)] = i;
  }
  return values;
})();

function base64Encode(data: Uint8Array): string {
  const parts: string[] = [];
  for (let i = 0; i < data.length; i += 3) {
    const b0 = data[i];
    const b1 = i + 1 < data.length ? data[i + 1] : 0;
    const b2 = i + 2 < data.length ? data[i + 2] : 0;
    const quad =
      B64_ALPHABET[b0 >> 2]
      + B64_ALPHABET[((b0 & 0x03) << 4) | (b1 >> 4)]
      + (i + 1 < data.length ? B64_ALPHABET[((b1 & 0x0f) << 2) | (b2 >> 6)] : "=")
      + (i + 2 < data.length ? B64_ALPHABET[b2 & 0x3f] : "=");
    parts.push(quad);
  }
  return parts.join("");
}

/* Strict decoder: alphabet characters only, correct '=' padding, length a
 * multiple of four. Matches the validating decoder on the other side. */
function base64Decode(text: string): Uint8Array {
  if (text.length % 4 !== 0) {
    throw new Error(`length ${text.length} is not a multiple of 4`);
  }
  let padding = 0;
  if (text.endsWith("==")) padding = 2;
  else if (text.endsWith("=")) padding = 1;
  const body = text.slice(0, text.length - padding);
  if (body.includes("=")) {
    throw new Error("padding character inside data");
  }
  const out = new Uint8Array((text.length / 4) * 3 - padding);
  let outPos = 0;
  let buffer = 0;
  let bits = 0;
  for (let i = 0; i < body.length; i += 1) {
    const code = body.charCodeAt(i);
    const value = code < 128 ? B64_VALUES[code] : -1;
    if (value < 0) {
      throw new Error(`invalid character at position ${i}`);
    }
    buffer = (buffer << 6) | value;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      if (outPos < out.length) {
        out[outPos] = (buffer >> bits) & 0xff;
        outPos += 1;
      }
    }
  }
  return out;
}

function randomTransferId(): string {
  const bytes = new Uint8Array(4);
  globalThis.crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}

/* Split a dataset into frame texts, in index order.
 *
 * The payload is the canonical serialization (after canonicalization),
 * zlib-compressed at maximum level. The transfer id is random per call
 * unless one is supplied; everything else is deterministic, so two calls
 * differ only in that id. */
export function encodeFrames(ds: UlspDataset, maxChunkChars: number = DEFAULT_CHUNK_CHARS,
                             reg: FormatRegistry | null = null,
                             transferId: string | null = null): string[] {
  if (maxChunkChars < MIN_CHUNK_CHARS) {
    throw new Error(`max_chunk_chars must be at least ${MIN_CHUNK_CHARS}`);
  }
  const payload = serializeGeojson(canonicalize(ds), reg);
  const b64 = base64Encode(deflate(payload, { level: 9 }));
  const checksum = crc32HexOfAscii(b64);
  const tid = transferId ?? randomTransferId();
  const chunks: string[] = [];
  for (let i = 0; i < b64.length; i += maxChunkChars) {
    chunks.push(b64.slice(i, i + maxChunkChars));
  }
  const total = chunks.length;
  return chunks.map((chunk, index) => `${MAGIC}|${tid}|${index}|${total}|${checksum}|${chunk}`);
}

/* Parse one frame text, rejecting anything outside the grammar.
 *
 * Errors name the offending part and its character position. The checksum
 * is carried, not verified here; verification happens on assembly, once the
 * full payload text is known. */
export function decodeFrame(text: string): QrFrame {
  const parts = text.split("|");
  if (parts.length !== 6) {
    throw new FrameFormatError(
      `frame must have 6 pipe-delimited parts, got ${parts.length}`, "frame", 0);
  }
  const positions: number[] = [];
  let offset = 0;
  for (const part of parts) {
    positions.push(offset);
    offset += part.length + 1;
  }

  const [magic, transferId, indexText, totalText, checksum, chunk] = parts;
  if (magic !== MAGIC) {
    throw new FrameFormatError(`bad magic ${pyRepr(magic)}, expected ${pyRepr(MAGIC)}`,
      "magic", positions[0]);
  }
  if (!HEX8.test(transferId)) {
    throw new FrameFormatError("transfer id must be 8 lowercase hex chars",
      "transfer_id", positions[1]);
  }
  if (!DECIMAL.test(indexText)) {
    throw new FrameFormatError(`index must be a decimal integer, got ${pyRepr(indexText)}`,
      "index", positions[2]);
  }
  if (!DECIMAL.test(totalText)) {
    throw new FrameFormatError(`total must be a decimal integer, got ${pyRepr(totalText)}`,
      "total", positions[3]);
  }
  const index = parseInt(indexText, 10);
  const total = parseInt(totalText, 10);
  if (total < 1) {
    throw new FrameFormatError("total must be at least 1", "total", positions[3]);
  }
  if (index >= total) {
    throw new FrameFormatError(`index ${index} out of range for total ${total}`,
      "index", positions[2]);
  }
  if (!HEX8.test(checksum)) {
    throw new FrameFormatError("checksum must be 8 lowercase hex chars",
      "checksum", positions[4]);
  }
  if (!chunk) {
    throw new FrameFormatError("chunk must not be empty", "chunk", positions[5]);
  }
  if (!CHUNK.test(chunk)) {
    throw new FrameFormatError("chunk contains characters outside the base64 alphabet",
      "chunk", positions[5]);
  }
  return { transferId, index, total, checksum, chunk };
}

/** Assembly outcome when frames are still missing. */
export class MissingReport {
  constructor(
    readonly transferId: string,
    readonly total: number,
    readonly missing: number[],
  ) {}
}

/** Collects frames of one transfer; single-owner session object. */
export class AssemblyState {
  transferId: string | null = null;
  total: number | null = null;
  checksum: string | null = null;
  received = new Map<number, string>();

  add(frame: QrFrame): void {
    if (this.transferId === null) {
      this.transferId = frame.transferId;
      this.total = frame.total;
      this.checksum = frame.checksum;
    } else if (frame.transferId !== this.transferId) {
      throw new TransferMismatchError(
        `frame belongs to transfer ${frame.transferId}, assembling ${this.transferId}`);
    } else if (frame.total !== this.total || frame.checksum !== this.checksum) {
      throw new TransferMismatchError(
        `frame disagrees on total/checksum for transfer ${this.transferId}`);
    }
    if (this.received.has(frame.index)) {
      if (this.received.get(frame.index) !== frame.chunk) {
        throw new ChunkConflictError(`two different chunks claim index ${frame.index}`);
      }
      return;
    }
    this.received.set(frame.index, frame.chunk);
  }

  missing(): number[] {
    if (this.total === null) return [];
    const absent: number[] = [];
    for (let i = 0; i < this.total; i += 1) {
      if (!this.received.has(i)) absent.push(i);
    }
    return absent;
  }

  get complete(): boolean {
    return this.total !== null && this.missing().length === 0;
  }

  payloadText(): string {
    const parts: string[] = [];
    for (let i = 0; i < (this.total ?? 0); i += 1) {
      parts.push(this.received.get(i) ?? "");
    }
    return parts.join("");
  }

  result(reg: FormatRegistry | null = null): UlspDataset {
    if (!this.complete) {
      throw new QrError("transfer is incomplete; check missing() first");
    }
    const text = this.payloadText();
    const actual = crc32HexOfAscii(text);
    if (actual !== this.checksum) {
      throw new ChecksumMismatchError(this.checksum ?? "", actual);
    }
    let compressed: Uint8Array;
    try {
      compressed = base64Decode(text);
    } catch (exc) {
      throw new DecompressError(`payload is not valid base64: ${(exc as Error).message}`);
    }
    let payload: Uint8Array;
    try {
      payload = inflate(compressed);
    } catch (exc) {
      const reason = typeof exc === "string" ? exc : (exc as Error).message;
      throw new DecompressError(`payload does not decompress: ${reason}`);
    }
    return parseGeojson(payload, reg);
  }
}

/* Rebuild a dataset from frames in any order.
 *
 * Returns a MissingReport naming absent indices when the transfer is
 * incomplete; otherwise verifies the checksum, inflates and parses. */
export function assemble(frames: QrFrame[],
                         reg: FormatRegistry | null = null): UlspDataset | MissingReport {
  if (frames.length === 0) {
    throw new QrError("no frames to assemble");
  }
  const state = new AssemblyState();
  for (const frame of frames) {
    state.add(frame);
  }
  if (!state.complete) {
    return new MissingReport(state.transferId ?? "", state.total ?? 0, state.missing());
  }
  return state.result(reg);
}
