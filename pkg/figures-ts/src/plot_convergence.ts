import { writeFileSync } from "fs";
import { pathToFileURL } from "url";
import {
  decadeTicks,
  drawFrame,
  drawXAxis,
  drawYAxis,
  frameFor,
  fmtTick,
  linScale,
} from "./chart.js";
import { readCsv, Row, runMain, SchemaError } from "./csv.js";
import { BLACK, GLYPH_H, PALETTE, renderScene, Surface, textWidth } from "./surface.js";

export const CONVERGE_COLUMNS = [
  "scale", "x1", "mu1_or_nu1", "x2", "mu2_or_nu2",
  "approx_re", "approx_im", "limit_re", "limit_im", "abs_err",
];

export interface Series {
  label: string;
  scales: number[];
  errs: number[];
}

const short = (v: number) => Number(v.toPrecision(4)).toString();

/**
 * Split rows into per-tuple series.  The CLI emits rows grouped per
 * argument tuple with each scale appearing once, so a repeated scale
 * starts the next tuple.
 */
export function groupSeries(rows: Row[]): Series[] {
  const out: Series[] = [];
  let seen = new Set<number>();
  for (const r of rows) {
    const scale = r.scale as number;
    if (out.length === 0 || seen.has(scale)) {
      out.push({
        label: `(${short(r.x1 as number)},${short(r.mu1_or_nu1 as number)},` +
          `${short(r.x2 as number)},${short(r.mu2_or_nu2 as number)})`,
        scales: [],
        errs: [],
      });
      seen = new Set();
    }
    seen.add(scale);
    const g = out[out.length - 1];
    g.scales.push(scale);
    g.errs.push(r.abs_err as number);
  }
  return out;
}

/** Log-log deviation-versus-scale curves, one per argument tuple. */
export function renderConvergence(rows: Row[], s: Surface): void {
  const series = groupSeries(rows).map((g) => ({
    ...g,
    // zero deviation has no log-log representation
    scales: g.scales.filter((_, i) => g.errs[i] > 0),
    errs: g.errs.filter((e) => e > 0),
  })).filter((g) => g.scales.length > 0);
  if (series.length === 0) {
    throw new SchemaError("no positive deviations to plot");
  }
  const allScales = series.flatMap((g) => g.scales);
  const allErrs = series.flatMap((g) => g.errs);
  const f = frameFor(s);
  const sx = linScale(
    Math.log10(Math.min(...allScales)), Math.log10(Math.max(...allScales)),
    f.x0 + 20, f.x1 - 20,
  );
  const sy = linScale(
    Math.log10(Math.min(...allErrs)), Math.log10(Math.max(...allErrs)),
    f.y1 - 14, f.y0 + 14,
  );

  series.forEach((g, gi) => {
    const color = PALETTE[gi % PALETTE.length];
    for (let i = 0; i < g.scales.length; i++) {
      const x = sx(Math.log10(g.scales[i]));
      const y = sy(Math.log10(g.errs[i]));
      if (i > 0) {
        s.line(sx(Math.log10(g.scales[i - 1])), sy(Math.log10(g.errs[i - 1])), x, y, color, 2);
      }
      s.disc(x, y, 3, color);
    }
  });

  drawFrame(s, f);
  const xTicks = [...new Set(allScales)].sort((a, b) => a - b);
  drawXAxis(s, f, xTicks, (v) => sx(Math.log10(v)), "scale");
  const yTicks = decadeTicks(Math.min(...allErrs), Math.max(...allErrs));
  drawYAxis(s, f, yTicks.length > 1 ? yTicks : [Math.min(...allErrs), Math.max(...allErrs)],
    (v) => sy(Math.log10(v)), "abs err");

  // legend, top right inside the frame
  const wMax = Math.max(...series.map((g) => textWidth(g.label)));
  let ly = f.y0 + 6;
  for (const [gi, g] of series.entries()) {
    const color = PALETTE[gi % PALETTE.length];
    const lx = f.x1 - wMax - 30;
    s.line(lx, ly + GLYPH_H / 2, lx + 18, ly + GLYPH_H / 2, color, 2);
    s.text(lx + 24, ly, g.label, BLACK);
    ly += GLYPH_H + 5;
  }
}

export function plotConvergence(convergeCsv: string, outPng: string, outSvg?: string): void {
  const rows = readCsv(convergeCsv, CONVERGE_COLUMNS, CONVERGE_COLUMNS);
  const { png, svg } = renderScene(640, 480, (s) => renderConvergence(rows, s));
  writeFileSync(outPng, png);
  if (outSvg) writeFileSync(outSvg, svg);
}

const isMain =
  process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  runMain(
    process.argv,
    "plot_convergence.js converge.csv out.png [out.svg]",
    2,
    (a) => plotConvergence(a[0], a[1], a[2]),
  );
}
