import { BLACK, Color, GLYPH_H, Surface } from "./surface.js";

/** Pixel rectangle of the data area; y0 is the top edge. */
export interface Frame {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function frameFor(s: Surface): Frame {
  return { x0: 64, y0: 18, x1: s.width - 14, y1: s.height - 46 };
}

export function linScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (v: number) => number {
  const k = d1 === d0 ? 0 : (r1 - r0) / (d1 - d0);
  return (v) => r0 + (v - d0) * k;
}

/** Round tick positions with a 1/2/5 step covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / count;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

/** Powers of ten spanning [lo, hi] for a log axis. */
export function decadeTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); 10 ** e <= hi * (1 + 1e-9); e++) {
    out.push(10 ** e);
  }
  return out;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const e = Math.floor(Math.log10(a) + 1e-12);
    const m = Number((v / 10 ** e).toPrecision(3));
    return m === 1 ? `1e${e}` : m === -1 ? `-1e${e}` : `${m}e${e}`;
  }
  return Number(v.toPrecision(6)).toString();
}

export function drawFrame(s: Surface, f: Frame): void {
  s.line(f.x0, f.y0, f.x1, f.y0, BLACK);
  s.line(f.x0, f.y1, f.x1, f.y1, BLACK);
  s.line(f.x0, f.y0, f.x0, f.y1, BLACK);
  s.line(f.x1, f.y0, f.x1, f.y1, BLACK);
}

export function drawXAxis(
  s: Surface,
  f: Frame,
  ticks: number[],
  scale: (v: number) => number,
  label: string,
  fmt: (v: number) => string = fmtTick,
): void {
  for (const t of ticks) {
    const px = scale(t);
    if (px < f.x0 - 0.5 || px > f.x1 + 0.5) continue;
    s.line(px, f.y1, px, f.y1 + 4, BLACK);
    s.text(px, f.y1 + 7, fmt(t), BLACK, 1, "middle");
  }
  s.text((f.x0 + f.x1) / 2, f.y1 + 9 + GLYPH_H + 4, label, BLACK, 2, "middle");
}

export function drawYAxis(
  s: Surface,
  f: Frame,
  ticks: number[],
  scale: (v: number) => number,
  label: string,
  fmt: (v: number) => string = fmtTick,
): void {
  for (const t of ticks) {
    const py = scale(t);
    if (py < f.y0 - 0.5 || py > f.y1 + 0.5) continue;
    s.line(f.x0 - 4, py, f.x0, py, BLACK);
    s.text(f.x0 - 7, py - GLYPH_H / 2, fmt(t), BLACK, 1, "end");
  }
  s.text(f.x0 - 60, 2, label, BLACK, 2, "start");
}

// Fixed 9-anchor viridis ramp; figures hash-compare across reruns.
const RAMP: Color[] = [
  [68, 1, 84],
  [72, 40, 120],
  [62, 73, 137],
  [49, 104, 142],
  [38, 130, 142],
  [31, 158, 137],
  [53, 183, 121],
  [110, 206, 88],
  [253, 231, 37],
];

export function densityColor(t: number): Color {
  const u = Math.min(1, Math.max(0, t)) * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(u));
  const w = u - i;
  return [0, 1, 2].map((k) =>
    Math.round(RAMP[i][k] * (1 - w) + RAMP[i + 1][k] * w),
  ) as Color;
}
