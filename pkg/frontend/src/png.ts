// Minimal deterministic PNG/APNG writer (RGBA8, no interlace, filter 0).
// Uses node's zlib with a fixed level so re-renders are byte-identical.

import { deflateSync } from "node:zlib";

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) {
    c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(data.length, 0);
  head.write(type, 4, "ascii");
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(Buffer.concat([head.subarray(4), data])), 0);
  return Buffer.concat([head, data, crc]);
}

export interface Raster {
  width: number;
  height: number;
  pixels: Uint8ClampedArray; // RGBA rows, length = 4*width*height
}

export function makeRaster(width: number, height: number): Raster {
  const pixels = new Uint8ClampedArray(4 * width * height);
  pixels.fill(255); // opaque white
  return { width, height, pixels };
}

function filteredScanlines(r: Raster): Buffer {
  const row = 4 * r.width;
  const out = Buffer.alloc((row + 1) * r.height);
  for (let y = 0; y < r.height; y++) {
    out[y * (row + 1)] = 0; // filter type 0
    out.set(r.pixels.subarray(y * row, (y + 1) * row), y * (row + 1) + 1);
  }
  return out;
}

function ihdr(width: number, height: number): Buffer {
  const data = Buffer.alloc(13);
  data.writeUInt32BE(width, 0);
  data.writeUInt32BE(height, 4);
  data[8] = 8; // bit depth
  data[9] = 6; // RGBA
  return chunk("IHDR", data);
}

const SIGNATURE = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

export function encodePng(r: Raster): Buffer {
  const idat = chunk("IDAT", deflateSync(filteredScanlines(r), { level: 9 }));
  return Buffer.concat([SIGNATURE, ihdr(r.width, r.height), idat, chunk("IEND", Buffer.alloc(0))]);
}

/** Animated PNG: every frame full-size, fixed delay in 1/100 s. */
export function encodeApng(frames: Raster[], delayCs: number): Buffer {
  if (frames.length === 0) {
    throw new Error("animation needs at least one frame");
  }
  const { width, height } = frames[0];
  for (const f of frames) {
    if (f.width !== width || f.height !== height) {
      throw new Error("animation frames must share one raster size");
    }
  }
  const parts: Buffer[] = [SIGNATURE, ihdr(width, height)];
  const actl = Buffer.alloc(8);
  actl.writeUInt32BE(frames.length, 0);
  actl.writeUInt32BE(0, 4); // loop forever
  parts.push(chunk("acTL", actl));
  let seq = 0;
  frames.forEach((frame, index) => {
    const fctl = Buffer.alloc(26);
    fctl.writeUInt32BE(seq++, 0);
    fctl.writeUInt32BE(width, 4);
    fctl.writeUInt32BE(height, 8);
    fctl.writeUInt32BE(0, 12);
    fctl.writeUInt32BE(0, 16);
    fctl.writeUInt16BE(delayCs, 20);
    fctl.writeUInt16BE(100, 22);
    fctl[24] = 0; // dispose: none
    fctl[25] = 0; // blend: source
    parts.push(chunk("fcTL", fctl));
    const raw = deflateSync(filteredScanlines(frame), { level: 9 });
    if (index === 0) {
      parts.push(chunk("IDAT", raw));
    } else {
      const seqHead = Buffer.alloc(4);
      seqHead.writeUInt32BE(seq++, 0);
      parts.push(chunk("fdAT", Buffer.concat([seqHead, raw])));
    }
  });
  parts.push(chunk("IEND", Buffer.alloc(0)));
  return Buffer.concat(parts);
}
