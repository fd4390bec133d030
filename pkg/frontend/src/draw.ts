// Raster drawing helpers: colormaps, a 5x7 bitmap font, lines, and arrows.

import { Raster } from "./png";

export type Rgb = [number, number, number];

// compact viridis-style stops (t in [0,1])
const VIRIDIS: Rgb[] = [
  [68, 1, 84], [71, 44, 122], [59, 81, 139], [44, 113, 142], [33, 144, 141],
  [39, 173, 129], [92, 200, 99], [170, 220, 50], [253, 231, 37],
];

// blue-white-red diverging map for signed fields
const DIVERGING: Rgb[] = [
  [5, 48, 97], [33, 102, 172], [146, 197, 222], [247, 247, 247],
  [244, 165, 130], [178, 24, 43], [103, 0, 31],
];

function sample(stops: Rgb[], t: number): Rgb {
  const clamped = Math.min(1, Math.max(0, t));
  const scaled = clamped * (stops.length - 1);
  const lo = Math.floor(scaled);
  const hi = Math.min(stops.length - 1, lo + 1);
  const frac = scaled - lo;
  return [0, 1, 2].map((i) => Math.round(stops[lo][i] * (1 - frac) + stops[hi][i] * frac)) as Rgb;
}

export function colormap(name: string): (t: number) => Rgb {
  if (name === "diverging") return (t) => sample(DIVERGING, t);
  if (name === "viridis") return (t) => sample(VIRIDIS, t);
  throw new Error(`unknown colormap '${name}'`);
}

export function putPixel(r: Raster, x: number, y: number, rgb: Rgb): void {
  if (x < 0 || y < 0 || x >= r.width || y >= r.height) return;
  const base = 4 * (y * r.width + x);
  r.pixels[base] = rgb[0];
  r.pixels[base + 1] = rgb[1];
  r.pixels[base + 2] = rgb[2];
  r.pixels[base + 3] = 255;
}

export function fillRect(r: Raster, x0: number, y0: number, w: number, h: number, rgb: Rgb): void {
  for (let y = y0; y < y0 + h; y++) {
    for (let x = x0; x < x0 + w; x++) {
      putPixel(r, x, y, rgb);
    }
  }
}

export function drawLine(r: Raster, x0: number, y0: number, x1: number, y1: number, rgb: Rgb): void {
  // Bresenham
  let [x, y] = [Math.round(x0), Math.round(y0)];
  const [ex, ey] = [Math.round(x1), Math.round(y1)];
  const dx = Math.abs(ex - x);
  const dy = -Math.abs(ey - y);
  const sx = x < ex ? 1 : -1;
  const sy = y < ey ? 1 : -1;
  let err = dx + dy;
  for (;;) {
    putPixel(r, x, y, rgb);
    if (x === ex && y === ey) break;
    const e2 = 2 * err;
    if (e2 >= dy) { err += dy; x += sx; }
    if (e2 <= dx) { err += dx; y += sy; }
  }
}

export function drawArrow(r: Raster, x0: number, y0: number, dx: number, dy: number, rgb: Rgb): void {
  const x1 = x0 + dx;
  const y1 = y0 + dy;
  drawLine(r, x0, y0, x1, y1, rgb);
  const len = Math.hypot(dx, dy);
  if (len < 1) return;
  const ux = dx / len;
  const uy = dy / len;
  const head = Math.min(3, len / 2);
  drawLine(r, x1, y1, x1 - head * (ux + 0.6 * uy), y1 - head * (uy - 0.6 * ux), rgb);
  drawLine(r, x1, y1, x1 - head * (ux - 0.6 * uy), y1 - head * (uy + 0.6 * ux), rgb);
}

// 5x7 glyphs for axis labels and time stamps
const GLYPHS: Record<string, string[]> = {
  "0": ["01110", "10001", "10011", "10101", "11001", "10001", "01110"],
  "1": ["00100", "01100", "00100", "00100", "00100", "00100", "01110"],
  "2": ["01110", "10001", "00001", "00110", "01000", "10000", "11111"],
  "3": ["11110", "00001", "00001", "01110", "00001", "00001", "11110"],
  "4": ["00010", "00110", "01010", "10010", "11111", "00010", "00010"],
  "5": ["11111", "10000", "11110", "00001", "00001", "10001", "01110"],
  "6": ["00110", "01000", "10000", "11110", "10001", "10001", "01110"],
  "7": ["11111", "00001", "00010", "00100", "01000", "01000", "01000"],
  "8": ["01110", "10001", "10001", "01110", "10001", "10001", "01110"],
  "9": ["01110", "10001", "10001", "01111", "00001", "00010", "01100"],
  ".": ["00000", "00000", "00000", "00000", "00000", "01100", "01100"],
  "-": ["00000", "00000", "00000", "11111", "00000", "00000", "00000"],
  "+": ["00000", "00100", "00100", "11111", "00100", "00100", "00000"],
  "=": ["00000", "00000", "11111", "00000", "11111", "00000", "00000"],
  "e": ["00000", "00000", "01110", "10001", "11111", "10000", "01110"],
  "f": ["00110", "01000", "01000", "11110", "01000", "01000", "01000"],
  "s": ["00000", "00000", "01111", "10000", "01110", "00001", "11110"],
  "t": ["01000", "01000", "11110", "01000", "01000", "01001", "00110"],
  " ": ["00000", "00000", "00000", "00000", "00000", "00000", "00000"],
};

export function drawText(r: Raster, x: number, y: number, text: string, rgb: Rgb): void {
  let cx = x;
  for (const ch of text) {
    const glyph = GLYPHS[ch] ?? GLYPHS[" "];
    for (let row = 0; row < 7; row++) {
      for (let col = 0; col < 5; col++) {
        if (glyph[row][col] === "1") {
          putPixel(r, cx + col, y + row, rgb);
        }
      }
    }
    cx += 6;
  }
}

export function formatTime(t: number): string {
  const rounded = Math.abs(t) >= 1000 ? t.toFixed(0) : t.toPrecision(4);
  return `t = ${Number(rounded)} fs`;
}
