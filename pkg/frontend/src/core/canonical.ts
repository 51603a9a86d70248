/* Deterministic JSON rendering, the byte-level twin of the core toolkit's
 * canonical serializer. Both sides must emit identical bytes for the same
 * document tree, so every formatting rule here is fixed:
 *
 *   - two-space indentation, ": " after keys, one item per line;
 *   - empty objects/arrays render inline as {} / [];
 *   - arrays whose elements are all numbers render inline (coordinates);
 *   - coordinates use at most six decimals, trailing zeros stripped;
 *   - other floats use the shortest round-trip form in Python's repr shape
 *     (exponent for magnitudes below 1e-4 or at 1e16 and above, two-digit
 *     exponents); integral values within 2^53 render as plain integers;
 *   - strings escape only what JSON requires, non-ASCII stays raw UTF-8.
 *
 * Objects are Map instances: plain JS objects reorder integer-like keys,
 * which would silently break the fixed key order.
 */

/** A pre-formatted number emitted verbatim (coordinates, oversized integers). */
export class RawNum {
  constructor(readonly text: string) {}
}

export type JsonValue =
  | null
  | boolean
  | number
  | string
  | RawNum
  | JsonValue[]
  | JsonMap;

export type JsonMap = Map<string, JsonValue>;

const F64 = new DataView(new ArrayBuffer(8));
const MILLION = 1000000n;

/* Exact ".6f" rendering of a double: the binary value is expanded with
 * BigInt arithmetic and rounded half-to-even at the sixth decimal, matching
 * printf-style formatting rather than toFixed (whose ties round up). */
export function formatFixed6(value: number): string {
  if (!Number.isFinite(value)) {
    throw new Error(`cannot format non-finite number ${value}`);
  }
  F64.setFloat64(0, value);
  const bits = F64.getBigUint64(0);
  const negative = bits >> 63n === 1n;
  const expBits = Number((bits >> 52n) & 0x7ffn);
  let mantissa = bits & 0xfffffffffffffn;
  let exp2: number;
  if (expBits === 0) {
    exp2 = -1074;
  } else {
    mantissa |= 0x10000000000000n;
    exp2 = expBits - 1075;
  }
  let scaled: bigint;
  let unit: bigint;
  if (exp2 >= 0) {
    scaled = mantissa * (1n << BigInt(exp2)) * MILLION;
    unit = 1n;
  } else {
    scaled = mantissa * MILLION;
    unit = 1n << BigInt(-exp2);
  }
  let units = scaled / unit;
  const twiceRemainder = (scaled % unit) * 2n;
  if (twiceRemainder > unit || (twiceRemainder === unit && (units & 1n) === 1n)) {
    units += 1n;
  }
  const digits = units.toString().padStart(7, "0");
  const body = `${digits.slice(0, -6)}.${digits.slice(-6)}`;
  return negative ? `-${body}` : body;
}

/** Round to six decimal places, exactly as the emitter will print it. */
export function round6(value: number): number {
  return Number(formatFixed6(value));
}

/** Fixed six-decimal rendering with trailing zeros stripped; never exponent. */
export function formatCoord(value: number): string {
  let text = formatFixed6(value).replace(/0+$/, "").replace(/\.$/, "");
  if (text === "-0" || text === "") text = "0";
  return text;
}

/* Shortest round-trip decimal in Python repr shape. JS falls back to plain
 * digit strings up to 1e21 where Python switches to exponent notation at
 * 1e16 (and pads exponents to two digits), so the shape is rebuilt from
 * toExponential's shortest digits. */
export function pyFloatRepr(value: number): string {
  if (value === 0) return Object.is(value, -0) ? "-0.0" : "0.0";
  const negative = value < 0;
  const [mantissaText, expText] = Math.abs(value).toExponential().split("e");
  const digits = mantissaText.replace(".", "");
  const exp10 = parseInt(expText, 10);
  let body: string;
  if (exp10 < -4 || exp10 >= 16) {
    const rest = digits.slice(1);
    const mantissa = rest ? `${digits[0]}.${rest}` : digits[0];
    const sign = exp10 < 0 ? "-" : "+";
    body = `${mantissa}e${sign}${Math.abs(exp10).toString().padStart(2, "0")}`;
  } else if (exp10 >= digits.length - 1) {
    body = `${digits}${"0".repeat(exp10 - digits.length + 1)}.0`;
  } else if (exp10 >= 0) {
    body = `${digits.slice(0, exp10 + 1)}.${digits.slice(exp10 + 1)}`;
  } else {
    body = `0.${"0".repeat(-exp10 - 1)}${digits}`;
  }
  return negative ? `-${body}` : body;
}

export function formatNumber(value: number | RawNum): string {
  if (value instanceof RawNum) return value.text;
  if (!Number.isFinite(value)) {
    throw new Error(`cannot serialize non-finite number ${value}`);
  }
  if (Number.isInteger(value) && Math.abs(value) <= 2 ** 53) {
    return value === 0 ? "0" : value.toString();
  }
  return pyFloatRepr(value);
}

const ESCAPES: Record<string, string> = {
  '"': '\\"',
  "\\": "\\\\",
  "\n": "\\n",
  "\r": "\\r",
  "\t": "\\t",
  "\b": "\\b",
  "\f": "\\f",
};

export function formatString(value: string): string {
  let out = '"';
  for (const ch of value) {
    const esc = ESCAPES[ch];
    if (esc !== undefined) {
      out += esc;
    } else {
      const code = ch.codePointAt(0)!;
      out += code < 0x20 ? `\\u${code.toString(16).padStart(4, "0")}` : ch;
    }
  }
  return out + '"';
}

function isNumber(value: JsonValue): value is number | RawNum {
  return typeof value === "number" || value instanceof RawNum;
}

function emit(value: JsonValue, indent: number, pieces: string[]): void {
  const pad = "  ".repeat(indent);
  const childPad = "  ".repeat(indent + 1);
  if (value === null) {
    pieces.push("null");
  } else if (value === true) {
    pieces.push("true");
  } else if (value === false) {
    pieces.push("false");
  } else if (typeof value === "string") {
    pieces.push(formatString(value));
  } else if (isNumber(value)) {
    pieces.push(formatNumber(value));
  } else if (value instanceof Map) {
    if (value.size === 0) {
      pieces.push("{}");
      return;
    }
    pieces.push("{\n");
    let i = 0;
    for (const [key, item] of value) {
      pieces.push(childPad, formatString(key), ": ");
      emit(item, indent + 1, pieces);
      pieces.push(i < value.size - 1 ? ",\n" : "\n");
      i += 1;
    }
    pieces.push(pad + "}");
  } else if (Array.isArray(value)) {
    if (value.length === 0) {
      pieces.push("[]");
      return;
    }
    if (value.every(isNumber)) {
      pieces.push("[" + value.map(formatNumber).join(", ") + "]");
      return;
    }
    pieces.push("[\n");
    value.forEach((item, i) => {
      pieces.push(childPad);
      emit(item, indent + 1, pieces);
      pieces.push(i < value.length - 1 ? ",\n" : "\n");
    });
    pieces.push(pad + "]");
  } else {
    throw new TypeError(`cannot serialize ${typeof value}`);
  }
}

/** Render a document tree to canonical UTF-8 bytes with a final newline. */
export function dumps(document: JsonValue): Uint8Array {
  const pieces: string[] = [];
  emit(document, 0, pieces);
  pieces.push("\n");
  return new TextEncoder().encode(pieces.join(""));
}

/* Compact single-line JSON used when an arbitrary value is coerced into a
 * text field: {"k":1} with no spaces, matching json.dumps(value,
 * separators=(",", ":"), ensure_ascii=False) on the core side. */
export function compactJson(value: JsonValue): string {
  if (value === null) return "null";
  if (value === true) return "true";
  if (value === false) return "false";
  if (typeof value === "string") return formatString(value);
  if (value instanceof RawNum) return value.text;
  if (typeof value === "number") {
    if (!Number.isFinite(value)) {
      throw new Error(`cannot serialize non-finite number ${value}`);
    }
    return Number.isSafeInteger(value) ? (value === 0 ? "0" : value.toString()) : pyFloatRepr(value);
  }
  if (value instanceof Map) {
    const parts: string[] = [];
    for (const [key, item] of value) parts.push(`${formatString(key)}:${compactJson(item)}`);
    return `{${parts.join(",")}}`;
  }
  if (Array.isArray(value)) {
    return `[${value.map(compactJson).join(",")}]`;
  }
  throw new TypeError(`cannot serialize ${typeof value}`);
}

/* Ordering by Unicode code point. The default string sort compares UTF-16
 * code units, which ranks astral-plane characters below some BMP ones. */
export function codePointCompare(a: string, b: string): number {
  const aPoints = Array.from(a);
  const bPoints = Array.from(b);
  const n = Math.min(aPoints.length, bPoints.length);
  for (let i = 0; i < n; i += 1) {
    const diff = aPoints[i].codePointAt(0)! - bPoints[i].codePointAt(0)!;
    if (diff !== 0) return diff;
  }
  return aPoints.length - bPoints.length;
}

export function sortedByCodePoint(keys: Iterable<string>): string[] {
  return Array.from(keys).sort(codePointCompare);
}
