/* JSON reader producing Map-based objects.
 *
 * JSON.parse cannot be used here: plain JS objects hoist integer-like keys
 * ahead of the others, which would reorder pass-through content (raw
 * geometries, unrecognized property values) and break byte-stable round
 * trips. This reader keeps source order exactly and reports 1-based
 * line/column positions on failure.
 *
 * Integer literals that cannot be represented exactly in a double are kept
 * as RawNum so their digits survive a round trip unchanged.
 */

import { JsonMap, JsonValue, RawNum } from "./canonical";
import { ParseError } from "./errors";

const WHITESPACE = new Set([" ", "\t", "\n", "\r"]);

class Reader {
  pos = 0;

  constructor(readonly text: string) {}

  fail(message: string, at = this.pos): never {
    let line = 1;
    let lineStart = 0;
    for (let i = 0; i < at && i < this.text.length; i++) {
      if (this.text[i] === "\n") {
        line += 1;
        lineStart = i + 1;
      }
    }
    throw new ParseError(
      `${message} at line ${line} column ${at - lineStart + 1}`,
      at,
      line,
      at - lineStart + 1,
    );
  }

  skipWhitespace(): void {
    while (this.pos < this.text.length && WHITESPACE.has(this.text[this.pos])) {
      this.pos += 1;
    }
  }

  peek(): string {
    return this.text[this.pos] ?? "";
  }

  expect(ch: string): void {
    if (this.text[this.pos] !== ch) {
      this.fail(`expected '${ch}'`);
    }
    this.pos += 1;
  }

  value(): JsonValue {
    this.skipWhitespace();
    const ch = this.peek();
    if (ch === "") this.fail("unexpected end of input");
    if (ch === "{") return this.object();
    if (ch === "[") return this.array();
    if (ch === '"') return this.string();
    if (ch === "-" || (ch >= "0" && ch <= "9")) return this.number();
    if (this.text.startsWith("true", this.pos)) {
      this.pos += 4;
      return true;
    }
    if (this.text.startsWith("false", this.pos)) {
      this.pos += 5;
      return false;
    }
    if (this.text.startsWith("null", this.pos)) {
      this.pos += 4;
      return null;
    }
    this.fail("expecting a JSON value");
  }

  object(): JsonMap {
    this.expect("{");
    const out: JsonMap = new Map();
    this.skipWhitespace();
    if (this.peek() === "}") {
      this.pos += 1;
      return out;
    }
    for (;;) {
      this.skipWhitespace();
      if (this.peek() !== '"') this.fail("expecting a property name in double quotes");
      const key = this.string();
      this.skipWhitespace();
      this.expect(":");
      out.set(key, this.value());
      this.skipWhitespace();
      const ch = this.peek();
      if (ch === ",") {
        this.pos += 1;
        continue;
      }
      if (ch === "}") {
        this.pos += 1;
        return out;
      }
      this.fail("expecting ',' or '}' in object");
    }
  }

  array(): JsonValue[] {
    this.expect("[");
    const out: JsonValue[] = [];
    this.skipWhitespace();
    if (this.peek() === "]") {
      this.pos += 1;
      return out;
    }
    for (;;) {
      out.push(this.value());
      this.skipWhitespace();
      const ch = this.peek();
      if (ch === ",") {
        this.pos += 1;
        continue;
      }
      if (ch === "]") {
        this.pos += 1;
        return out;
      }
      this.fail("expecting ',' or ']' in array");
    }
  }

  string(): string {
    const start = this.pos;
    this.expect('"');
    let out = "";
    for (;;) {
      if (this.pos >= this.text.length) this.fail("unterminated string", start);
      const ch = this.text[this.pos];
      if (ch === '"') {
        this.pos += 1;
        return out;
      }
      if (ch === "\\") {
        this.pos += 1;
        const esc = this.text[this.pos] ?? "";
        if (esc === "u") {
          out += this.unicodeEscape();
          continue;
        }
        const simple: Record<string, string> = {
          '"': '"', "\\": "\\", "/": "/", b: "\b", f: "\f", n: "\n", r: "\r", t: "\t",
        };
        const mapped = simple[esc];
        if (mapped === undefined) this.fail(`invalid escape '\\${esc}'`, this.pos - 1);
        out += mapped;
        this.pos += 1;
        continue;
      }
      if (ch.charCodeAt(0) < 0x20) this.fail("control character in string");
      out += ch;
      this.pos += 1;
    }
  }

  unicodeEscape(): string {
    const hex = this.text.slice(this.pos + 1, this.pos + 5);
    if (!/^[0-9a-fA-F]{4}$/.test(hex)) this.fail("invalid \\u escape", this.pos - 1);
    this.pos += 5;
    const code = parseInt(hex, 16);
    // surrogate pairs arrive as two consecutive escapes
    if (code >= 0xd800 && code <= 0xdbff && this.text.startsWith("\\u", this.pos)) {
      const lowHex = this.text.slice(this.pos + 2, this.pos + 6);
      if (/^[0-9a-fA-F]{4}$/.test(lowHex)) {
        const low = parseInt(lowHex, 16);
        if (low >= 0xdc00 && low <= 0xdfff) {
          this.pos += 6;
          return String.fromCharCode(code, low);
        }
      }
    }
    return String.fromCharCode(code);
  }

  number(): number | RawNum {
    const match = /^-?(?:0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?/.exec(
      this.text.slice(this.pos),
    );
    if (!match || match[0] === "") this.fail("invalid number");
    this.pos += match[0].length;
    const text = match[0];
    const isIntegerLiteral = match[1] === undefined && match[2] === undefined;
    const parsed = Number(text);
    if (isIntegerLiteral && !Number.isSafeInteger(parsed)) {
      return new RawNum(text);
    }
    return parsed;
  }
}

/** Parse JSON text into a Map-based tree; throws ParseError with position. */
export function parseJsonText(text: string): JsonValue {
  const reader = new Reader(text);
  const value = reader.value();
  reader.skipWhitespace();
  if (reader.pos < text.length) {
    reader.fail("trailing content after JSON document");
  }
  return value;
}

/** Decode UTF-8 bytes strictly, then parse. */
export function parseJsonBytes(data: Uint8Array): JsonValue {
  let text: string;
  try {
    text = new TextDecoder("utf-8", { fatal: true }).decode(data);
  } catch (err) {
    throw new ParseError(`input is not valid UTF-8: ${(err as Error).message}`);
  }
  return parseJsonText(text);
}
