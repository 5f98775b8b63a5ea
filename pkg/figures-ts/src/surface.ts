import { PNG } from "pngjs";

export type Color = [number, number, number];

export const WHITE: Color = [255, 255, 255];
export const BLACK: Color = [0, 0, 0];

/** Fixed categorical palette (tab10 order) so reruns hash identically. */
export const PALETTE: Color[] = [
  [31, 119, 180],
  [255, 127, 14],
  [44, 160, 44],
  [214, 39, 40],
  [148, 103, 189],
  [140, 86, 75],
  [227, 119, 194],
  [127, 127, 127],
  [188, 189, 34],
  [23, 190, 207],
];

export type Anchor = "start" | "middle" | "end";

/** Minimal drawing target shared by the raster and vector backends. */
export interface Surface {
  readonly width: number;
  readonly height: number;
  fillRect(x: number, y: number, w: number, h: number, c: Color): void;
  line(x0: number, y0: number, x1: number, y1: number, c: Color, w?: number): void;
  disc(cx: number, cy: number, r: number, c: Color): void;
  /** Draw text with its top edge at y; x interpreted per anchor. */
  text(x: number, y: number, s: string, c: Color, scale?: number, anchor?: Anchor): void;
}

// 5x7 pixel glyphs; enough for numbers, tuple syntax and axis labels.
const GLYPHS: Record<string, string[]> = {
  " ": [".....", ".....", ".....", ".....", ".....", ".....", "....."],
  "0": [".XXX.", "X...X", "X..XX", "X.X.X", "XX..X", "X...X", ".XXX."],
  "1": ["..X..", ".XX..", "..X..", "..X..", "..X..", "..X..", ".XXX."],
  "2": [".XXX.", "X...X", "....X", "...X.", "..X..", ".X...", "XXXXX"],
  "3": ["XXXXX", "....X", "...X.", "..XX.", "....X", "X...X", ".XXX."],
  "4": ["...X.", "..XX.", ".X.X.", "X..X.", "XXXXX", "...X.", "...X."],
  "5": ["XXXXX", "X....", "XXXX.", "....X", "....X", "X...X", ".XXX."],
  "6": ["..XX.", ".X...", "X....", "XXXX.", "X...X", "X...X", ".XXX."],
  "7": ["XXXXX", "....X", "...X.", "..X..", ".X...", ".X...", ".X..."],
  "8": [".XXX.", "X...X", "X...X", ".XXX.", "X...X", "X...X", ".XXX."],
  "9": [".XXX.", "X...X", "X...X", ".XXXX", "....X", "...X.", ".XX.."],
  ".": [".....", ".....", ".....", ".....", ".....", ".XX..", ".XX.."],
  ",": [".....", ".....", ".....", ".....", "..XX.", "..X..", ".X..."],
  "-": [".....", ".....", ".....", ".XXX.", ".....", ".....", "....."],
  "+": [".....", "..X..", "..X..", "XXXXX", "..X..", "..X..", "....."],
  "(": ["...X.", "..X..", ".X...", ".X...", ".X...", "..X..", "...X."],
  ")": [".X...", "..X..", "...X.", "...X.", "...X.", "..X..", ".X..."],
  "=": [".....", ".....", "XXXXX", ".....", "XXXXX", ".....", "....."],
  a: [".....", ".....", ".XXX.", "....X", ".XXXX", "X...X", ".XXXX"],
  b: ["X....", "X....", "XXXX.", "X...X", "X...X", "X...X", "XXXX."],
  c: [".....", ".....", ".XXXX", "X....", "X....", "X....", ".XXXX"],
  d: ["....X", "....X", ".XXXX", "X...X", "X...X", "X...X", ".XXXX"],
  e: [".....", ".....", ".XXX.", "X...X", "XXXXX", "X....", ".XXX."],
  f: ["..XX.", ".X..X", ".X...", "XXX..", ".X...", ".X...", ".X..."],
  g: [".....", ".XXXX", "X...X", "X...X", ".XXXX", "....X", ".XXX."],
  h: ["X....", "X....", "XXXX.", "X...X", "X...X", "X...X", "X...X"],
  i: ["..X..", ".....", ".XX..", "..X..", "..X..", "..X..", ".XXX."],
  j: ["...X.", ".....", "..XX.", "...X.", "...X.", "X..X.", ".XX.."],
  k: ["X....", "X....", "X..X.", "X.X..", "XX...", "X.X..", "X..X."],
  l: [".XX..", "..X..", "..X..", "..X..", "..X..", "..X..", ".XXX."],
  m: [".....", ".....", "XX.X.", "X.X.X", "X.X.X", "X.X.X", "X.X.X"],
  n: [".....", ".....", "XXXX.", "X...X", "X...X", "X...X", "X...X"],
  o: [".....", ".....", ".XXX.", "X...X", "X...X", "X...X", ".XXX."],
  p: [".....", "XXXX.", "X...X", "X...X", "XXXX.", "X....", "X...."],
  q: [".....", ".XXXX", "X...X", "X...X", ".XXXX", "....X", "....X"],
  r: [".....", ".....", "X.XX.", "XX..X", "X....", "X....", "X...."],
  s: [".....", ".....", ".XXXX", "X....", ".XXX.", "....X", "XXXX."],
  t: [".X...", ".X...", "XXXX.", ".X...", ".X...", ".X..X", "..XX."],
  u: [".....", ".....", "X...X", "X...X", "X...X", "X..XX", ".XX.X"],
  v: [".....", ".....", "X...X", "X...X", "X...X", ".X.X.", "..X.."],
  w: [".....", ".....", "X...X", "X...X", "X.X.X", "X.X.X", ".X.X."],
  x: [".....", ".....", "X...X", ".X.X.", "..X..", ".X.X.", "X...X"],
  y: [".....", "X...X", "X...X", ".XXXX", "....X", "X...X", ".XXX."],
  z: [".....", ".....", "XXXXX", "...X.", "..X..", ".X...", "XXXXX"],
};
const UNKNOWN = ["XXXXX", "X...X", "X...X", "X...X", "X...X", "X...X", "XXXXX"];

export const GLYPH_W = 6; // 5 pixel columns + 1 spacing
export const GLYPH_H = 7;

export function textWidth(s: string, scale = 1): number {
  return s.length * GLYPH_W * scale;
}

export class RasterSurface implements Surface {
  readonly width: number;
  readonly height: number;
  private readonly png: PNG;

  constructor(width: number, height: number, background: Color = WHITE) {
    this.width = width;
    this.height = height;
    this.png = new PNG({ width, height });
    this.fillRect(0, 0, width, height, background);
  }

  private set(x: number, y: number, c: Color): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.png.data[i] = c[0];
    this.png.data[i + 1] = c[1];
    this.png.data[i + 2] = c[2];
    this.png.data[i + 3] = 255;
  }

  pixel(x: number, y: number): Color {
    const i = (y * this.width + x) * 4;
    return [this.png.data[i], this.png.data[i + 1], this.png.data[i + 2]];
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    const x0 = Math.round(x);
    const y0 = Math.round(y);
    for (let yy = y0; yy < Math.round(y + h); yy++) {
      for (let xx = x0; xx < Math.round(x + w); xx++) {
        this.set(xx, yy, c);
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, c: Color, w = 1): void {
    // Bresenham; widths above 1 stamp a disc at every step
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      if (w > 1) this.disc(xa, ya, w / 2, c);
      else this.set(xa, ya, c);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
    }
  }

  disc(cx: number, cy: number, r: number, c: Color): void {
    const x0 = Math.round(cx);
    const y0 = Math.round(cy);
    const ri = Math.max(1, r);
    for (let yy = Math.floor(-ri); yy <= Math.ceil(ri); yy++) {
      for (let xx = Math.floor(-ri); xx <= Math.ceil(ri); xx++) {
        if (xx * xx + yy * yy <= ri * ri) this.set(x0 + xx, y0 + yy, c);
      }
    }
  }

  text(x: number, y: number, s: string, c: Color, scale = 1, anchor: Anchor = "start"): void {
    let px = Math.round(x);
    if (anchor === "middle") px -= Math.round(textWidth(s, scale) / 2);
    if (anchor === "end") px -= textWidth(s, scale);
    const py = Math.round(y);
    for (const ch of s) {
      const glyph = GLYPHS[ch] ?? GLYPHS[ch.toLowerCase()] ?? UNKNOWN;
      for (let gy = 0; gy < GLYPH_H; gy++) {
        for (let gx = 0; gx < 5; gx++) {
          if (glyph[gy][gx] !== "X") continue;
          this.fillRect(px + gx * scale, py + gy * scale, scale, scale, c);
        }
      }
      px += GLYPH_W * scale;
    }
  }

  toPng(): Buffer {
    return PNG.sync.write(this.png);
  }
}

function rgb(c: Color): string {
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const F = (v: number) => Number(v.toFixed(2)).toString();

export class SvgSurface implements Surface {
  readonly width: number;
  readonly height: number;
  private readonly parts: string[] = [];

  constructor(width: number, height: number, background: Color = WHITE) {
    this.width = width;
    this.height = height;
    this.parts.push(
      `<rect x="0" y="0" width="${width}" height="${height}" fill="${rgb(background)}"/>`,
    );
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    this.parts.push(
      `<rect x="${F(x)}" y="${F(y)}" width="${F(w)}" height="${F(h)}" fill="${rgb(c)}"/>`,
    );
  }

  line(x0: number, y0: number, x1: number, y1: number, c: Color, w = 1): void {
    this.parts.push(
      `<line x1="${F(x0)}" y1="${F(y0)}" x2="${F(x1)}" y2="${F(y1)}" ` +
        `stroke="${rgb(c)}" stroke-width="${F(w)}"/>`,
    );
  }

  disc(cx: number, cy: number, r: number, c: Color): void {
    this.parts.push(
      `<circle cx="${F(cx)}" cy="${F(cy)}" r="${F(r)}" fill="${rgb(c)}"/>`,
    );
  }

  text(x: number, y: number, s: string, c: Color, scale = 1, anchor: Anchor = "start"): void {
    const size = GLYPH_H * scale + 2;
    const anchors = { start: "start", middle: "middle", end: "end" } as const;
    this.parts.push(
      `<text x="${F(x)}" y="${F(y + GLYPH_H * scale)}" font-size="${size}" ` +
        `font-family="monospace" text-anchor="${anchors[anchor]}" ` +
        `fill="${rgb(c)}">${esc(s)}</text>`,
    );
  }

  toSvg(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

/** Draw the same scene on the raster and the vector backend. */
export function renderScene(
  width: number,
  height: number,
  draw: (s: Surface) => void,
): { png: Buffer; svg: string } {
  const raster = new RasterSurface(width, height);
  draw(raster);
  const vector = new SvgSurface(width, height);
  draw(vector);
  return { png: raster.toPng(), svg: vector.toSvg() };
}
