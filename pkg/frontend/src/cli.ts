#!/usr/bin/env node
/** CLI: `busnoc-plots render <sweep.csv> --out <dir>` */

import { render } from "./render.js";

function usage(): never {
  console.error("usage: busnoc-plots render <sweep.csv> --out <dir>");
  process.exit(2);
}

function main(argv: string[]): number {
  if (argv[0] !== "render" || argv.length < 2) usage();
  const csv = argv[1];
  let out = "figures";
  for (let i = 2; i < argv.length; i++) {
    if (argv[i] === "--out" && i + 1 < argv.length) {
      out = argv[++i];
    } else {
      usage();
    }
  }
  try {
    const written = render(csv, out);
    for (const p of written) console.log(p);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
