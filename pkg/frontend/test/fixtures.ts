// Synthesizes valid solver outputs (WGN4 fields, series CSV) for the tests.

import { writeFileSync } from "node:fs";

export function writeField(
  path: string,
  dims: [number, number, number, number],
  fill: (i: number, j: number, k: number, l: number) => number,
  time = 0,
): void {
  const [nx, ny, npx, npy] = dims;
  const count = nx * ny * npx * npy;
  const header = Buffer.alloc(4 + 4 + 16 + 10 * 8 + 4 + 8);
  header.write("WGN4", 0, "ascii");
  header.writeUInt32LE(1, 4);
  dims.forEach((d, i) => header.writeUInt32LE(d, 8 + 4 * i));
  const axes = [-10, 1, -10, 1, -1, 0.1, -1, 0.1];
  axes.forEach((a, i) => header.writeDoubleLE(a, 24 + 8 * i));
  header.writeDoubleLE(0.658, 88); // hbar
  header.writeDoubleLE(time, 96);
  header.writeUInt32LE(1, 104); // scalar_f64
  header.writeBigUInt64LE(BigInt(count * 8), 108);
  const payload = Buffer.alloc(count * 8);
  let offset = 0;
  for (let i = 0; i < nx; i++)
    for (let j = 0; j < ny; j++)
      for (let k = 0; k < npx; k++)
        for (let l = 0; l < npy; l++) {
          payload.writeDoubleLE(fill(i, j, k, l), offset);
          offset += 8;
        }
  writeFileSync(path, Buffer.concat([header, payload]));
}

export function writeGaussianXY(path: string, n = 24, time = 0, x0 = 0): void {
  writeField(path, [n, n, 1, 1], (i, j) => {
    const x = i - n / 2 - x0;
    const y = j - n / 2;
    return Math.exp(-(x * x + y * y) / (n / 3));
  }, time);
}

export function writeSeriesCsv(path: string): void {
  const lines = ["t_fs,mass,n_upper"];
  for (let i = 0; i <= 20; i++) {
    const t = i * 2.5;
    lines.push(`${t},${(1 - 1e-6 * i).toPrecision(17)},${(0.3 + 0.01 * i * i).toPrecision(17)}`);
  }
  writeFileSync(path, lines.join("\n") + "\n");
}
