#!/usr/bin/env node
/**
 * hamgen --geometry <file> --basis sto-3g --out <path> --ordering <conv>
 *
 * The geometry file holds JSON: [["H", 0, 0, 1.0], ["H", 0, 0, 2.0], ...]
 * with coordinates in angstrom.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { GenRequest, Ordering, generate, serialize } from "./generate.js";

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length)
      throw new Error(`malformed arguments near ${key}`);
    out.set(key.slice(2), argv[i + 1]);
  }
  return out;
}

export function main(argv: string[]): number {
  let args: Map<string, string>;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(String(e));
    return 2;
  }
  const geometryPath = args.get("geometry");
  const outPath = args.get("out");
  if (!geometryPath || !outPath) {
    console.error("usage: hamgen --geometry <file> --basis sto-3g "
      + "--out <path> --ordering interleaved|blocked-alpha-beta");
    return 2;
  }
  const req: GenRequest = {
    geometry: JSON.parse(readFileSync(geometryPath, "utf8")),
    basis: args.get("basis") ?? "sto-3g",
    ordering: (args.get("ordering") ?? "interleaved") as Ordering,
  };
  if (req.ordering !== "interleaved" && req.ordering !== "blocked-alpha-beta") {
    console.error(`unknown ordering ${req.ordering}`);
    return 2;
  }
  try {
    const doc = generate(req);
    writeFileSync(outPath, serialize(doc));
    console.log(`wrote ${outPath}: ${doc.terms.length} terms, `
      + `HF ${doc.reference.hf_energy.toFixed(10)} Ha, `
      + `FCI ${doc.reference.fci_energy.toFixed(10)} Ha`);
    return 0;
  } catch (e) {
    console.error(String(e));
    return 1;
  }
}

main(process.argv.slice(2));
