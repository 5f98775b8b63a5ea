import { writeFileSync } from "fs";
import { pathToFileURL } from "url";
import {
  drawFrame,
  drawXAxis,
  drawYAxis,
  frameFor,
  linScale,
  niceTicks,
} from "./chart.js";
import { readCsv, Row, runMain } from "./csv.js";
import { PALETTE, renderScene, Surface } from "./surface.js";

export const SNAPSHOT_COLUMNS = ["trial", "m", "x2", "x"];

/** Scatter of terminal configurations: position x against level m, m upward. */
export function renderSnapshot(rows: Row[], s: Surface): void {
  const xs = rows.map((r) => r.x as number);
  const ms = rows.map((r) => r.m as number);
  const xLo = Math.min(...xs) - 1;
  const xHi = Math.max(...xs) + 1;
  const mTop = Math.max(...ms);
  const f = frameFor(s);
  const sx = linScale(xLo, xHi, f.x0, f.x1);
  const sy = linScale(0.5, mTop + 0.5, f.y1, f.y0);

  for (const r of rows) {
    const color = PALETTE[(r.trial as number) % PALETTE.length];
    s.disc(sx(r.x as number), sy(r.m as number), 3, color);
  }

  drawFrame(s, f);
  drawXAxis(s, f, niceTicks(xLo, xHi), sx, "x");
  const mTicks = Array.from({ length: mTop }, (_, i) => i + 1);
  drawYAxis(s, f, mTicks, sy, "m");
}

export function plotSnapshot(snapshotsCsv: string, outPng: string, outSvg?: string): void {
  const rows = readCsv(snapshotsCsv, SNAPSHOT_COLUMNS, SNAPSHOT_COLUMNS);
  const { png, svg } = renderScene(640, 480, (s) => renderSnapshot(rows, s));
  writeFileSync(outPng, png);
  if (outSvg) writeFileSync(outSvg, svg);
}

const isMain =
  process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) {
  runMain(
    process.argv,
    "plot_snapshot.js snapshots.csv out.png [out.svg]",
    2,
    (a) => plotSnapshot(a[0], a[1], a[2]),
  );
}
