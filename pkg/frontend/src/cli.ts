/** Render one or more sweep CSV files into a single SVG scatter figure.
 *
 * Usage: node dist/cli.js OUTPUT.svg INPUT.csv [INPUT2.csv ...] [--title T]
 * Exits nonzero on missing input, schema mismatch, or empty data.
 */

import { readFileSync, writeFileSync } from "fs";
import { parseSweepCsv, SchemaError, SweepRow } from "./schema.js";
import { renderScatter } from "./render.js";

export function main(argv: string[]): number {
  const args = [...argv];
  let title: string | undefined;
  const tIdx = args.indexOf("--title");
  if (tIdx >= 0) {
    title = args[tIdx + 1];
    args.splice(tIdx, 2);
  }
  if (args.length < 2) {
    console.error("usage: render OUTPUT.svg INPUT.csv [INPUT2.csv ...] [--title T]");
    return 2;
  }
  const [output, ...inputs] = args;
  const rows: SweepRow[] = [];
  for (const path of inputs) {
    let text: string;
    try {
      text = readFileSync(path, "utf8");
    } catch (err) {
      console.error(`cannot read ${path}: ${(err as Error).message}`);
      return 2;
    }
    try {
      rows.push(...parseSweepCsv(text, path));
    } catch (err) {
      if (err instanceof SchemaError) {
        console.error(err.message);
        return 2;
      }
      throw err;
    }
  }
  const svg = renderScatter({ rows, title });
  writeFileSync(output, svg);
  console.log(`wrote ${output}: ${rows.length} markers`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
