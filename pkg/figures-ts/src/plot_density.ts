import { writeFileSync } from "fs";
import { pathToFileURL } from "url";
import {
  densityColor,
  drawFrame,
  drawXAxis,
  drawYAxis,
  frameFor,
  linScale,
  niceTicks,
} from "./chart.js";
import { readCsv, Row, runMain, SchemaError } from "./csv.js";
import { Color, renderScene, Surface, WHITE } from "./surface.js";

export const DENSITY_COLUMNS = ["xi", "mu", "region", "density"];
export const BOUNDARY_COLUMNS = ["z", "xi", "mu"];
const REGIONS = new Set(["D1", "D2", "out"]);
const CUSP: Color = [214, 39, 40];

function uniqueSorted(rows: Row[], col: string): number[] {
  return [...new Set(rows.map((r) => r[col] as number))].sort((a, b) => a - b);
}

/** Heatmap of the limiting density with the region boundary and cusps. */
export function renderDensity(density: Row[], boundary: Row[], s: Surface): void {
  for (const r of density) {
    if (!REGIONS.has(r.region as string)) {
      throw new SchemaError(`unknown region label ${r.region}`);
    }
  }
  const xis = uniqueSorted(density, "xi");
  const mus = uniqueSorted(density, "mu");
  const dx = xis.length > 1 ? (xis[xis.length - 1] - xis[0]) / (xis.length - 1) : 1;
  const dm = mus.length > 1 ? (mus[mus.length - 1] - mus[0]) / (mus.length - 1) : 1;
  const f = frameFor(s);
  const sx = linScale(xis[0] - dx / 2, xis[xis.length - 1] + dx / 2, f.x0, f.x1);
  const sy = linScale(mus[0] - dm / 2, mus[mus.length - 1] + dm / 2, f.y1, f.y0);

  for (const r of density) {
    const xi = r.xi as number;
    const mu = r.mu as number;
    const x = sx(xi - dx / 2);
    const y = sy(mu + dm / 2);
    s.fillRect(x, y, sx(xi + dx / 2) - x, sy(mu - dm / 2) - y, densityColor(r.density as number));
  }

  // boundary polyline, clipped to the heatmap rectangle (rows are z-ordered)
  const inside = (r: Row) =>
    (r.xi as number) >= xis[0] - dx / 2 &&
    (r.xi as number) <= xis[xis.length - 1] + dx / 2 &&
    (r.mu as number) >= mus[0] - dm / 2 &&
    (r.mu as number) <= mus[mus.length - 1] + dm / 2;
  for (let i = 1; i < boundary.length; i++) {
    const a = boundary[i - 1];
    const b = boundary[i];
    if (!inside(a) || !inside(b)) continue;
    s.line(sx(a.xi as number), sy(a.mu as number), sx(b.xi as number), sy(b.mu as number), WHITE, 2);
  }

  // the two cusps sit at the z = +1 and z = -1 samples
  for (const r of boundary) {
    if (Math.abs((r.z as number) - 1) > 1e-12 && Math.abs((r.z as number) + 1) > 1e-12) continue;
    if (!inside(r)) continue;
    s.disc(sx(r.xi as number), sy(r.mu as number), 5, CUSP);
  }

  drawFrame(s, f);
  drawXAxis(s, f, niceTicks(xis[0], xis[xis.length - 1]), sx, "xi");
  drawYAxis(s, f, niceTicks(mus[0], mus[mus.length - 1]), sy, "mu");
}

export function plotDensity(
  densityCsv: string,
  boundaryCsv: string,
  outPng: string,
  outSvg?: string,
): void {
  const density = readCsv(densityCsv, DENSITY_COLUMNS, ["xi", "mu", "density"]);
  const boundary = readCsv(boundaryCsv, BOUNDARY_COLUMNS, ["z", "xi", "mu"]);
  const { png, svg } = renderScene(640, 480, (s) => renderDensity(density, boundary, s));
  writeFileSync(outPng, png);
  if (outSvg) writeFileSync(outSvg, svg);
}

const isMain =
  process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  runMain(
    process.argv,
    "plot_density.js density.csv boundary.csv out.png [out.svg]",
    3,
    (a) => plotDensity(a[0], a[1], a[2], a[3]),
  );
}
