import fc from "fast-check";
import { describe, expect, it } from "vitest";
import { byteSpanToCharRange } from "../src/bytes.js";

const enc = new TextEncoder();
const dec = new TextDecoder();

// Byte offsets of every code-point boundary in text, in order.
function boundaries(text: string): number[] {
  const out = [0];
  let byte = 0;
  for (const ch of text) {
    byte += enc.encode(ch).length;
    out.push(byte);
  }
  return out;
}

describe("byteSpanToCharRange", () => {
  it("is identity-like on ASCII", () => {
    expect(byteSpanToCharRange("hello world", [6, 11])).toEqual([6, 11]);
    expect(byteSpanToCharRange("hello", [0, 0])).toEqual([0, 0]);
  });

  it("handles two-byte characters", () => {
    // "café" is 5 bytes, 4 chars
    expect(byteSpanToCharRange("café sat", [0, 5])).toEqual([0, 4]);
    expect(byteSpanToCharRange("café sat", [6, 9])).toEqual([5, 8]);
  });

  it("handles combining characters", () => {
    // "e" + U+0301 combining acute: 1 + 2 bytes, 2 UTF-16 units
    const text = "léon sat";
    expect(byteSpanToCharRange(text, [0, 6])).toEqual([0, 5]);
    const [s, e] = byteSpanToCharRange(text, [7, 10]);
    expect(text.slice(s, e)).toBe("sat");
  });

  it("handles non-Latin scripts", () => {
    const text = "翻訳 кошка test";
    const bytes = enc.encode(text);
    // the Cyrillic word spans bytes 7..17
    const [s, e] = byteSpanToCharRange(text, [7, 17]);
    expect(text.slice(s, e)).toBe("кошка");
    expect(dec.decode(bytes.subarray(7, 17))).toBe("кошка");
  });

  it("handles astral-plane characters (surrogate pairs)", () => {
    const text = "a😀b";
    expect(byteSpanToCharRange(text, [1, 5])).toEqual([1, 3]);
    expect(byteSpanToCharRange(text, [5, 6])).toEqual([3, 4]);
  });

  it("rejects offsets inside a code point", () => {
    expect(() => byteSpanToCharRange("é", [1, 2])).toThrow(RangeError);
    expect(() => byteSpanToCharRange("abc", [2, 1])).toThrow(RangeError);
    expect(() => byteSpanToCharRange("abc", [0, 99])).toThrow(RangeError);
  });

  it("slicing by the converted range equals decoding the byte slice", () => {
    fc.assert(
      fc.property(
        fc.string({ unit: "binary", maxLength: 60 }),
        fc.nat(), fc.nat(),
        (text, a, b) => {
          const marks = boundaries(text);
          let i = a % marks.length;
          let j = b % marks.length;
          if (i > j) [i, j] = [j, i];
          const span: [number, number] = [marks[i], marks[j]];
          const [s, e] = byteSpanToCharRange(text, span);
          const viaBytes = dec.decode(enc.encode(text).subarray(span[0], span[1]));
          expect(text.slice(s, e)).toBe(viaBytes);
        },
      ),
      { numRuns: 500 },
    );
  });

  it("round-trips every boundary pair on a mixed-script fixture", () => {
    const text = "áðé—翻訳🙂 кошка";
    const marks = boundaries(text);
    const bytes = enc.encode(text);
    for (let i = 0; i < marks.length; i++) {
      for (let j = i; j < marks.length; j++) {
        const [s, e] = byteSpanToCharRange(text, [marks[i], marks[j]]);
        expect(text.slice(s, e)).toBe(dec.decode(bytes.subarray(marks[i], marks[j])));
      }
    }
  });
});
