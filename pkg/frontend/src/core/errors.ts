/* Error hierarchy shared by all editor modules. */

export class FieldatlasError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

export class ParseError extends FieldatlasError {
  constructor(
    message: string,
    readonly position: number | null = null,
    readonly line: number | null = null,
    readonly column: number | null = null,
  ) {
    super(message);
  }
}

export class StructureError extends FieldatlasError {}

export class RegistryError extends FieldatlasError {}

export class MetadataError extends FieldatlasError {
  constructor(message: string, readonly fields: string[]) {
    super(message);
  }
}

export class TransformError extends FieldatlasError {}

export class UnknownIdError extends TransformError {}

export class UnsupportedKindError extends FieldatlasError {}

export class CsvStructureError extends FieldatlasError {}

export class QrError extends FieldatlasError {}

export class FrameFormatError extends QrError {
  constructor(message: string, readonly part: string, readonly position: number) {
    super(message);
  }
}

export class TransferMismatchError extends QrError {}

export class ChunkConflictError extends QrError {}

export class ChecksumMismatchError extends QrError {
  constructor(readonly expected: string, readonly actual: string) {
    super(`checksum mismatch: expected ${expected}, got ${actual}`);
  }
}

export class DecompressError extends QrError {}
