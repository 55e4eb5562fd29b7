/**
 * Classic 5x7 bitmap font, printable ASCII 0x20-0x7E. Each glyph is
 * five column bytes, least significant bit at the top. Ten hex digits
 * per glyph, concatenated in code-point order.
 */

const COLUMNS =
  "0000000000" + // space
  "00005F0000" + // !
  "0007000700" + // "
  "147F147F14" + // #
  "242A7F2A12" + // $
  "2313086462" + // %
  "3649552250" + // &
  "0005030000" + // '
  "001C224100" + // (
  "0041221C00" + // )
  "082A1C2A08" + // *
  "08083E0808" + // +
  "0050300000" + // ,
  "0808080808" + // -
  "0060600000" + // .
  "2010080402" + // /
  "3E5149453E" + // 0
  "00427F4000" + // 1
  "4261514946" + // 2
  "2141454B31" + // 3
  "1814127F10" + // 4
  "2745454539" + // 5
  "3C4A494930" + // 6
  "0171090503" + // 7
  "3649494936" + // 8
  "064949291E" + // 9
  "0036360000" + // :
  "0056360000" + // ;
  "0008142241" + // <
  "1414141414" + // =
  "4122140800" + // >
  "0201510906" + // ?
  "324979413E" + // @
  "7E1111117E" + // A
  "7F49494936" + // B
  "3E41414122" + // C
  "7F4141221C" + // D
  "7F49494941" + // E
  "7F09090101" + // F
  "3E41415132" + // G
  "7F0808087F" + // H
  "00417F4100" + // I
  "2040413F01" + // J
  "7F08142241" + // K
  "7F40404040" + // L
  "7F0204027F" + // M
  "7F0408107F" + // N
  "3E4141413E" + // O
  "7F09090906" + // P
  "3E4151215E" + // Q
  "7F09192946" + // R
  "4649494931" + // S
  "01017F0101" + // T
  "3F4040403F" + // U
  "1F2040201F" + // V
  "7F2018207F" + // W
  "6314081463" + // X
  "0304780403" + // Y
  "6151494543" + // Z
  "00007F4141" + // [
  "0204081020" + // backslash
  "41417F0000" + // ]
  "0402010204" + // ^
  "4040404040" + // _
  "0001020400" + // `
  "2054545478" + // a
  "7F48444438" + // b
  "3844444420" + // c
  "384444487F" + // d
  "3854545418" + // e
  "087E090102" + // f
  "081454543C" + // g
  "7F08040478" + // h
  "00447D4000" + // i
  "2040443D00" + // j
  "007F102844" + // k
  "00417F4000" + // l
  "7C04180478" + // m
  "7C08040478" + // n
  "3844444438" + // o
  "7C14141408" + // p
  "081414187C" + // q
  "7C08040408" + // r
  "4854545420" + // s
  "043F444020" + // t
  "3C4040207C" + // u
  "1C2040201C" + // v
  "3C4030403C" + // w
  "4428102844" + // x
  "0C5050503C" + // y
  "4464544C44" + // z
  "0008364100" + // {
  "00007F0000" + // |
  "0041360800" + // }
  "0804081008"; // ~

export const GLYPH_WIDTH = 5;
export const GLYPH_HEIGHT = 7;

/** Column bytes for a printable ASCII character; space for anything else. */
export function glyph(ch: string): number[] {
  let index = ch.charCodeAt(0) - 0x20;
  if (index < 0 || index * 10 >= COLUMNS.length) {
    index = 0;
  }
  const cols: number[] = [];
  for (let i = 0; i < 5; i++) {
    cols.push(parseInt(COLUMNS.slice(index * 10 + i * 2, index * 10 + i * 2 + 2), 16));
  }
  return cols;
}
