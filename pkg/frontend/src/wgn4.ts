// Readers for the solver's on-disk outputs: WGN4 binary fields/states and
// observable-series CSV.

import { readFileSync } from "node:fs";

export const HEADER_SIZE = 4 + 4 + 16 + 10 * 8 + 4 + 8;

export interface Wgn4 {
  dims: [number, number, number, number];
  axes: number[]; // x0, dx, y0, dy, px0, dpx, py0, dpy
  hbar: number;
  time: number;
  kind: number;
  /** payload as float64 values; matrix kinds keep interleaved re/im pairs */
  data: Float64Array;
}

const KIND_SCALAR_F64 = 1;
const KIND_SCALAR_F32 = 3;

export function readWgn4(path: string): Wgn4 {
  const buf = readFileSync(path);
  if (buf.length < HEADER_SIZE) {
    throw new Error(`${path}: truncated header`);
  }
  if (buf.toString("ascii", 0, 4) !== "WGN4") {
    throw new Error(`${path}: bad magic`);
  }
  const version = buf.readUInt32LE(4);
  if (version !== 1) {
    throw new Error(`${path}: unsupported version ${version}`);
  }
  const dims: [number, number, number, number] = [
    buf.readUInt32LE(8),
    buf.readUInt32LE(12),
    buf.readUInt32LE(16),
    buf.readUInt32LE(20),
  ];
  const axes: number[] = [];
  for (let i = 0; i < 8; i++) {
    axes.push(buf.readDoubleLE(24 + 8 * i));
  }
  const hbar = buf.readDoubleLE(88);
  const time = buf.readDoubleLE(96);
  const kind = buf.readUInt32LE(104);
  const length = Number(buf.readBigUInt64LE(108));
  if (buf.length < HEADER_SIZE + length) {
    throw new Error(`${path}: truncated payload`);
  }
  const payload = buf.subarray(HEADER_SIZE, HEADER_SIZE + length);
  let data: Float64Array;
  if (kind === KIND_SCALAR_F64 || kind === 0) {
    data = new Float64Array(payload.buffer.slice(payload.byteOffset, payload.byteOffset + length));
  } else if (kind === KIND_SCALAR_F32 || kind === 2) {
    const f32 = new Float32Array(payload.buffer.slice(payload.byteOffset, payload.byteOffset + length));
    data = Float64Array.from(f32);
  } else {
    throw new Error(`${path}: unknown payload kind ${kind}`);
  }
  return { dims, axes, hbar, time, kind, data };
}

/** Collapse a 4D scalar field to its non-trivial 2D plane (row-major). */
export function plane(field: Wgn4): { nx: number; ny: number; values: Float64Array; axes: "xy" | "pp" } {
  const [nx, ny, npx, npy] = field.dims;
  if (npx === 1 && npy === 1) {
    return { nx, ny, values: field.data, axes: "xy" };
  }
  if (nx === 1 && ny === 1) {
    return { nx: npx, ny: npy, values: field.data, axes: "pp" };
  }
  // full 4D scalar field: integrate out momentum for a position density map
  const out = new Float64Array(nx * ny);
  const per = npx * npy;
  for (let i = 0; i < nx * ny; i++) {
    let acc = 0;
    for (let j = 0; j < per; j++) {
      acc += field.data[i * per + j];
    }
    out[i] = acc;
  }
  return { nx, ny, values: out, axes: "xy" };
}

export interface Series {
  names: string[];
  times: number[];
  columns: number[][];
}

export function readSeries(path: string): Series {
  const text = readFileSync(path, "utf8").trim();
  const lines = text.length ? text.split(/\r?\n/) : [];
  if (lines.length === 0 || !lines[0].startsWith("t_fs")) {
    throw new Error(`${path}: not an observable series`);
  }
  const names = lines[0].split(",").slice(1);
  const times: number[] = [];
  const columns: number[][] = names.map(() => []);
  for (const line of lines.slice(1)) {
    if (!line) continue;
    const cells = line.split(",").map(Number);
    times.push(cells[0]);
    cells.slice(1).forEach((v, i) => columns[i].push(v));
  }
  return { names, times, columns };
}
