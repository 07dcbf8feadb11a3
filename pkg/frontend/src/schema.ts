/** Parsing and validation of the sweep CSV wire format. */

export const EXPECTED_HEADER =
  "family,param,seed,I,N,lambda1,threshold_gap,h_final,n_dof_final,converged";

export interface SweepRow {
  family: string;
  param: string;
  seed: string;
  isoRatio: number;
  count: number;
  lambda1: number;
  thresholdGap: number;
  hFinal: number;
  nDofFinal: number;
  converged: boolean;
}

export class SchemaError extends Error {}

/** Parse one CSV document in the counting schema; rejects anything else. */
export function parseSweepCsv(text: string, source = "<string>"): SweepRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty CSV`);
  }
  if (lines[0] !== EXPECTED_HEADER) {
    throw new SchemaError(
      `${source}: header mismatch\n  got:  ${lines[0]}\n  want: ${EXPECTED_HEADER}`,
    );
  }
  if (lines.length === 1) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return lines.slice(1).map((line, i) => parseRow(line, `${source}:${i + 2}`));
}

function parseRow(line: string, where: string): SweepRow {
  const parts = line.split(",");
  if (parts.length !== 10) {
    throw new SchemaError(`${where}: expected 10 fields, got ${parts.length}`);
  }
  const num = (field: string, name: string): number => {
    if (field === "") return NaN;
    const value = Number(field);
    if (field !== "nan" && Number.isNaN(value)) {
      throw new SchemaError(`${where}: field ${name} is not a number: ${field}`);
    }
    return value;
  };
  const converged = parts[9].toLowerCase();
  if (converged !== "true" && converged !== "false") {
    throw new SchemaError(`${where}: converged must be true/false, got ${parts[9]}`);
  }
  return {
    family: parts[0],
    param: parts[1],
    seed: parts[2],
    isoRatio: num(parts[3], "I"),
    count: num(parts[4], "N"),
    lambda1: num(parts[5], "lambda1"),
    thresholdGap: num(parts[6], "threshold_gap"),
    hFinal: num(parts[7], "h_final"),
    nDofFinal: num(parts[8], "n_dof_final"),
    converged: converged === "true",
  };
}
