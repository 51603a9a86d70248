/* Decimal number grammar shared by CSV import and number-field validation.
 *
 * Accepts optional sign, digits with single underscores between digits,
 * optional fraction and exponent, and the spellings inf/infinity/nan in any
 * case. Hex, binary and blank strings are rejected. Conversion is
 * correctly-rounded IEEE 754, so the same text yields the same bits as the
 * command-line side.
 */

const NUMBER_TEXT = new RegExp(
  "^[+-]?(?:"
  + "(?:[0-9](?:_?[0-9])*(?:\\.(?:[0-9](?:_?[0-9])*)?)?"
  + "|\\.[0-9](?:_?[0-9])*)"
  + "(?:[eE][+-]?[0-9](?:_?[0-9])*)?"
  + "|inf(?:inity)?|nan)$",
  "i",
);

/** Parse text as a decimal number; null when the grammar rejects it. */
export function parseDecimalText(text: string): number | null {
  if (!NUMBER_TEXT.test(text)) return null;
  const cleaned = text.replace(/_/g, "");
  const lower = cleaned.toLowerCase();
  const negative = lower.startsWith("-");
  if (lower.endsWith("inf") || lower.endsWith("infinity")) {
    return negative ? -Infinity : Infinity;
  }
  if (lower.endsWith("nan")) return NaN;
  return Number(cleaned);
}
