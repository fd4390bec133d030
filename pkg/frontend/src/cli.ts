#!/usr/bin/env node
// wigner4d-viz render --kind density_xy --out img.png input0.wgn4 [input1 ...]

import { parseArgs } from "node:util";

import { PLOT_KINDS, PlotKind, render } from "./render";

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "render") {
    process.stderr.write("usage: wigner4d-viz render --kind KIND --out FILE inputs...\n");
    return 1;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: rest,
      allowPositionals: true,
      options: {
        kind: { type: "string" },
        out: { type: "string" },
        colormap: { type: "string" },
        scale: { type: "string" },
        fps: { type: "string" },
      },
    });
  } catch (err) {
    process.stderr.write(`argument error: ${(err as Error).message}\n`);
    return 1;
  }
  const kind = parsed.values.kind as PlotKind | undefined;
  const out = parsed.values.out;
  if (!kind || !out || parsed.positionals.length === 0) {
    process.stderr.write("render needs --kind, --out and at least one input\n");
    return 1;
  }
  if (!PLOT_KINDS.includes(kind)) {
    process.stderr.write(`unknown kind '${kind}'; valid: ${PLOT_KINDS.join(", ")}\n`);
    return 1;
  }
  try {
    render({
      kind,
      inputs: parsed.positionals,
      output: out,
      colormap: parsed.values.colormap,
      scale: parsed.values.scale ? Number(parsed.values.scale) : undefined,
      fps: parsed.values.fps ? Number(parsed.values.fps) : undefined,
    });
  } catch (err) {
    process.stderr.write(`render failed: ${(err as Error).message}\n`);
    return 2;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
