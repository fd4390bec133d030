// Render jobs: heatmaps, band pairs, series plots, Bloch quivers, animations.
// Every renderer is deterministic for fixed inputs, so re-rendering a job
// overwrites its outputs byte-identically.

import { writeFileSync } from "node:fs";

import { colormap, drawArrow, drawLine, drawText, fillRect, formatTime, putPixel, Rgb } from "./draw";
import { encodeApng, encodePng, makeRaster, Raster } from "./png";
import { plane, readSeries, readWgn4, Wgn4 } from "./wgn4";

export const PLOT_KINDS = [
  "density_xy",
  "momentum_pp",
  "band_pair",
  "series",
  "bloch_quiver",
  "animation",
] as const;
export type PlotKind = (typeof PLOT_KINDS)[number];

export interface RenderJob {
  kind: PlotKind;
  inputs: string[];
  output: string;
  colormap?: string;
  scale?: number;      // pixels per field cell
  fps?: number;        // animation frames per second
}

const MARGIN = 14;

function checkSameDims(fields: Wgn4[]): void {
  const key = fields[0].dims.join("x");
  for (const f of fields) {
    if (f.dims.join("x") !== key) {
      throw new Error(`inputs do not share a grid: ${key} vs ${f.dims.join("x")}`);
    }
  }
}

function heatRaster(field: Wgn4, mapName: string, scale: number,
                    range?: [number, number]): Raster {
  const p = plane(field);
  const map = colormap(mapName);
  let lo: number;
  let hi: number;
  if (range) {
    [lo, hi] = range;
  } else {
    lo = Infinity;
    hi = -Infinity;
    for (const v of p.values) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    if (mapName === "diverging") {
      const amp = Math.max(Math.abs(lo), Math.abs(hi), 1e-300);
      lo = -amp;
      hi = amp;
    }
  }
  const span = hi - lo || 1;
  const r = makeRaster(p.nx * scale, p.ny * scale + MARGIN);
  for (let i = 0; i < p.nx; i++) {
    for (let j = 0; j < p.ny; j++) {
      // orient with the second axis upward, first axis rightward
      const rgb = map((p.values[i * p.ny + j] - lo) / span);
      fillRect(r, i * scale, (p.ny - 1 - j) * scale + MARGIN, scale, scale, rgb);
    }
  }
  drawText(r, 2, 3, formatTime(field.time), [0, 0, 0]);
  return r;
}

function renderDensity(job: RenderJob): void {
  const fields = job.inputs.map(readWgn4);
  checkSameDims(fields);
  const mapName = job.colormap ?? "viridis";
  const scale = job.scale ?? 4;
  const tiles = fields.map((f) => heatRaster(f, mapName, scale));
  if (tiles.length === 1) {
    writeFileSync(job.output, encodePng(tiles[0]));
    return;
  }
  // montage, two columns like the source figures
  const cols = 2;
  const rows = Math.ceil(tiles.length / cols);
  const w = tiles[0].width;
  const h = tiles[0].height;
  const gap = 2;
  const sheet = makeRaster(cols * w + (cols - 1) * gap, rows * h + (rows - 1) * gap);
  tiles.forEach((tile, index) => {
    const cx = (index % cols) * (w + gap);
    const cy = Math.floor(index / cols) * (h + gap);
    for (let y = 0; y < h; y++) {
      sheet.pixels.set(tile.pixels.subarray(4 * y * w, 4 * (y + 1) * w),
                       4 * ((cy + y) * sheet.width + cx));
    }
  });
  writeFileSync(job.output, encodePng(sheet));
}

function renderBandPair(job: RenderJob): void {
  if (job.inputs.length !== 2) {
    throw new Error("band_pair needs exactly two inputs (upper, lower)");
  }
  const fields = job.inputs.map(readWgn4);
  checkSameDims(fields);
  const mapName = job.colormap ?? "viridis";
  const scale = job.scale ?? 4;
  // shared color range across the two band panels
  let lo = Infinity;
  let hi = -Infinity;
  for (const f of fields) {
    for (const v of f.data) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  const tiles = fields.map((f) => heatRaster(f, mapName, scale, [lo, hi]));
  const gap = 3;
  const sheet = makeRaster(tiles[0].width * 2 + gap, tiles[0].height);
  tiles.forEach((tile, index) => {
    const cx = index * (tile.width + gap);
    for (let y = 0; y < tile.height; y++) {
      sheet.pixels.set(tile.pixels.subarray(4 * y * tile.width, 4 * (y + 1) * tile.width),
                       4 * (y * sheet.width + cx));
    }
  });
  fillRect(sheet, tiles[0].width, 0, gap, sheet.height, [40, 40, 40]);
  writeFileSync(job.output, encodePng(sheet));
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw) ?? raw;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * step; v += step) ticks.push(v);
  return ticks;
}

function renderSeries(job: RenderJob): void {
  const series = readSeries(job.inputs[0]);
  const width = 480;
  const height = 300;
  const left = 56;
  const bottom = 36;
  const r = makeRaster(width, height);
  const t0 = Math.min(...series.times);
  const t1 = Math.max(...series.times);
  let lo = Infinity;
  let hi = -Infinity;
  for (const col of series.columns) {
    for (const v of col) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  const sx = (t: number) => left + ((t - t0) / Math.max(t1 - t0, 1e-300)) * (width - left - 10);
  const sy = (v: number) => height - bottom - ((v - lo) / (hi - lo)) * (height - bottom - 12);
  drawLine(r, left, 10, left, height - bottom, [0, 0, 0]);
  drawLine(r, left, height - bottom, width - 8, height - bottom, [0, 0, 0]);
  for (const tick of niceTicks(t0, t1, 5)) {
    drawLine(r, sx(tick), height - bottom, sx(tick), height - bottom + 4, [0, 0, 0]);
    drawText(r, sx(tick) - 12, height - bottom + 7, `${Number(tick.toPrecision(4))}`, [0, 0, 0]);
  }
  for (const tick of niceTicks(lo, hi, 5)) {
    drawLine(r, left - 4, sy(tick), left, sy(tick), [0, 0, 0]);
    drawText(r, 2, sy(tick) - 3, `${Number(tick.toPrecision(3))}`, [0, 0, 0]);
  }
  drawText(r, width - 60, height - 14, "t  fs", [0, 0, 0]);
  const palette: Rgb[] = [[178, 24, 43], [33, 102, 172], [27, 120, 55],
                          [230, 150, 0], [100, 60, 160]];
  series.columns.forEach((col, index) => {
    const rgb = palette[index % palette.length];
    for (let i = 1; i < col.length; i++) {
      drawLine(r, sx(series.times[i - 1]), sy(col[i - 1]), sx(series.times[i]), sy(col[i]), rgb);
    }
    fillRect(r, left + 8, 14 + 10 * index, 8, 3, rgb);
  });
  writeFileSync(job.output, encodePng(r));
}

function renderBlochQuiver(job: RenderJob): void {
  if (job.inputs.length !== 3) {
    throw new Error("bloch_quiver needs three inputs (n_x, n_y, n_z fields)");
  }
  const comps = job.inputs.map(readWgn4);
  checkSameDims(comps);
  const planes = comps.map(plane);
  const { nx, ny } = planes[0];
  const scale = job.scale ?? 10;
  const map = colormap(job.colormap ?? "diverging");
  const r = makeRaster(nx * scale, ny * scale + MARGIN);
  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      const nz = planes[2].values[i * ny + j];
      fillRect(r, i * scale, (ny - 1 - j) * scale + MARGIN, scale, scale,
               map(0.5 * (nz + 1)));
    }
  }
  const stride = Math.max(1, Math.floor(nx / 24));
  for (let i = 0; i < nx; i += stride) {
    for (let j = 0; j < ny; j += stride) {
      const vx = planes[0].values[i * ny + j];
      const vy = planes[1].values[i * ny + j];
      const cx = i * scale + scale / 2;
      const cy = (ny - 1 - j) * scale + MARGIN + scale / 2;
      const len = 0.45 * scale * stride;
      drawArrow(r, cx, cy, vx * len, -vy * len, [0, 0, 0]);
    }
  }
  drawText(r, 2, 3, formatTime(comps[0].time), [0, 0, 0]);
  writeFileSync(job.output, encodePng(r));
}

function renderAnimation(job: RenderJob): void {
  const fields = job.inputs.map(readWgn4);
  checkSameDims(fields);
  const mapName = job.colormap ?? "viridis";
  const scale = job.scale ?? 4;
  // shared color range so frames are comparable
  let lo = Infinity;
  let hi = -Infinity;
  for (const f of fields) {
    for (const v of f.data) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  const frames = fields.map((f) => heatRaster(f, mapName, scale, [lo, hi]));
  const fps = job.fps ?? 4;
  writeFileSync(job.output, encodeApng(frames, Math.max(1, Math.round(100 / fps))));
}

export function render(job: RenderJob): void {
  if (job.inputs.length === 0) {
    throw new Error("render job needs at least one input");
  }
  switch (job.kind) {
    case "density_xy":
    case "momentum_pp":
      return renderDensity(job);
    case "band_pair":
      return renderBandPair(job);
    case "series":
      return renderSeries(job);
    case "bloch_quiver":
      return renderBlochQuiver(job);
    case "animation":
      return renderAnimation(job);
    default:
      throw new Error(`unknown plot kind '${job.kind}'`);
  }
}
