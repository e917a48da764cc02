// The one sharp edge between client and server: the API reports diff and
// match spans as UTF-8 byte offsets, while JS strings index UTF-16 code
// units. All conversions go through this single utility.

import type { ByteSpan } from "./types.js";

function utf8Length(codePoint: number): number {
  if (codePoint < 0x80) return 1;
  if (codePoint < 0x800) return 2;
  if (codePoint < 0x10000) return 3;
  return 4;
}

/**
 * Convert a UTF-8 byte span into a [start, end) range of UTF-16 code units
 * suitable for String.prototype.slice. Throws RangeError if either offset
 * does not land on a code-point boundary of `text`.
 */
export function byteSpanToCharRange(text: string, span: ByteSpan): [number, number] {
  const [startByte, endByte] = span;
  if (startByte < 0 || endByte < startByte) {
    throw new RangeError(`invalid byte span [${startByte}, ${endByte}]`);
  }
  let byte = 0;
  let unit = 0;
  let start = -1;
  let end = -1;
  for (const ch of text) {
    if (byte === startByte) start = unit;
    if (byte === endByte) end = unit;
    byte += utf8Length(ch.codePointAt(0)!);
    unit += ch.length;
  }
  if (byte === startByte) start = unit;
  if (byte === endByte) end = unit;
  if (start < 0 || end < 0) {
    throw new RangeError(
      `byte span [${startByte}, ${endByte}] is not on code-point boundaries ` +
      `of a ${byte}-byte string`,
    );
  }
  return [start, end];
}
