/* CSV reading and writing with the exact dialect the command-line side uses:
 * comma delimiter, double-quote quoting with doubling, rows separated by
 * \r\n, \r or \n on input and terminated by \n on output. Fields are quoted
 * on output only when they contain a comma, a quote or a newline. Lenient
 * reading: a quote inside an unquoted field is literal, text after a closing
 * quote is appended, an unterminated quote runs to end of input.
 */

const START_RECORD = 0;
const START_FIELD = 1;
const IN_FIELD = 2;
const IN_QUOTED = 3;
const QUOTE_IN_QUOTED = 4;
const EAT_CRNL = 5;

/** Split text into rows of fields. A blank line becomes an empty row. */
export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let state = START_RECORD;

  const endField = () => {
    row.push(field);
    field = "";
  };
  const endRecord = () => {
    rows.push(row);
    row = [];
  };

  for (let i = 0; i < text.length; i += 1) {
    const ch = text[i];

    if (state === EAT_CRNL) {
      state = START_RECORD;
      if (ch === "\n") continue;
    }
    if (state === START_RECORD) {
      if (ch === "\n") {
        rows.push([]);
        continue;
      }
      if (ch === "\r") {
        rows.push([]);
        state = EAT_CRNL;
        continue;
      }
      state = START_FIELD;
    }
    if (state === START_FIELD) {
      if (ch === '"') {
        state = IN_QUOTED;
      } else if (ch === ",") {
        row.push("");
      } else if (ch === "\n" || ch === "\r") {
        row.push("");
        endRecord();
        state = ch === "\n" ? START_RECORD : EAT_CRNL;
      } else {
        field = ch;
        state = IN_FIELD;
      }
      continue;
    }
    if (state === IN_FIELD) {
      if (ch === ",") {
        endField();
        state = START_FIELD;
      } else if (ch === "\n" || ch === "\r") {
        endField();
        endRecord();
        state = ch === "\n" ? START_RECORD : EAT_CRNL;
      } else {
        field += ch;
      }
      continue;
    }
    if (state === IN_QUOTED) {
      if (ch === '"') {
        state = QUOTE_IN_QUOTED;
      } else {
        field += ch;
      }
      continue;
    }
    // QUOTE_IN_QUOTED: just saw a quote inside a quoted field.
    if (ch === '"') {
      field += '"';
      state = IN_QUOTED;
    } else if (ch === ",") {
      endField();
      state = START_FIELD;
    } else if (ch === "\n" || ch === "\r") {
      endField();
      endRecord();
      state = ch === "\n" ? START_RECORD : EAT_CRNL;
    } else {
      field += ch;
      state = IN_FIELD;
    }
  }

  if (state === IN_FIELD || state === IN_QUOTED || state === QUOTE_IN_QUOTED) {
    endField();
    endRecord();
  } else if (state === START_FIELD) {
    row.push("");
    endRecord();
  }
  return rows;
}

function quoteField(value: string): string {
  if (value.includes(",") || value.includes('"') || value.includes("\n")) {
    return `"${value.replaceAll('"', '""')}"`;
  }
  return value;
}

/** Render one row, quoting only where needed, with a trailing newline. */
export function writeCsvRow(fields: string[]): string {
  return fields.map(quoteField).join(",") + "\n";
}
