/**
 * Loaders for the versioned run-directory file formats.
 *
 * Every CSV starts with a schema header line (`#swarmconn:<name>:v1`)
 * followed by a column-name row; summary.json carries schema_version.
 * Anything else is rejected with an explicit version error.
 */
import { readFile } from "fs/promises";
import path from "path";
import Papa from "papaparse";

export const METRICS_HEADER = "#swarmconn:metrics:v1";
export const TRAJ_HEADER = "#swarmconn:trajectories:v1";
export const MESSAGES_HEADER = "#swarmconn:messages:v1";
export const SUMMARY_SCHEMA = 1;

export interface CsvTable {
  columns: string[];
  rows: string[][];
}

export interface TrajRow {
  tick: number;
  robot: number;
  alive: boolean;
  p: number[];
}

export interface MessageRow {
  tick: number; // reception tick
  receiver: number;
  sender: number;
  kind: string;
  origin: number;
  originIteration: number;
  hopCount: number;
}

export interface GapStats {
  ticks_considered: number;
  per_sender_miss: Record<string, number>;
  exactly_one_missing: number;
  all_missing: number;
  pairwise_corr: Record<string, number>;
}

export interface Summary {
  schema_version: number;
  n: number;
  ticks: number;
  seed: number;
  connectivity_held_fraction: number;
  lambda2_true_final: number;
  mean_rel_lambda2_error: number | null;
  gap_ratios?: Record<string, GapStats>;
  [key: string]: unknown;
}

export interface RunArtifacts {
  runDir: string;
  n: number;
  dim: number;
  commRange: number;
  maxHops: number;
  metrics: CsvTable;
  trajectories: TrajRow[];
  messages: MessageRow[];
  summary: Summary;
}

async function readVersionedCsv(
  file: string,
  expectedHeader: string,
): Promise<CsvTable> {
  const text = await readFile(file, "utf8");
  const nl = text.indexOf("\n");
  const header = nl < 0 ? text.trim() : text.slice(0, nl).trim();
  if (header !== expectedHeader) {
    throw new Error(
      `unsupported schema in ${path.basename(file)}: got "${header}", ` +
        `expected "${expectedHeader}"`,
    );
  }
  const parsed = Papa.parse<string[]>(text.slice(nl + 1).trim(), {
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`CSV parse error in ${file}: ${parsed.errors[0].message}`);
  }
  const [columns, ...rows] = parsed.data;
  return { columns: columns ?? [], rows };
}

/** Pull a scalar from the resolved config.toml without a full TOML parser. */
function configScalar(text: string, section: string, key: string): string {
  const sec = text.split(`[${section}]`)[1];
  const scope = sec === undefined ? text : sec.split(/\n\[/)[0];
  const m = scope.match(new RegExp(`^${key} *= *(.+)$`, "m"));
  if (!m) throw new Error(`config.toml: missing ${section}.${key}`);
  return m[1].trim();
}

export async function loadRun(runDir: string): Promise<RunArtifacts> {
  const configText = await readFile(path.join(runDir, "config.toml"), "utf8");
  const topMatch = (key: string): string => {
    const m = configText.match(new RegExp(`^${key} *= *(.+)$`, "m"));
    if (!m) throw new Error(`config.toml: missing ${key}`);
    return m[1].trim();
  };
  const n = parseInt(topMatch("n"), 10);
  const dim = parseInt(topMatch("dim"), 10);
  const commRange = parseFloat(configScalar(configText, "radio", "comm_range"));
  const maxHops = parseInt(configScalar(configText, "radio", "max_hops"), 10);

  const metrics = await readVersionedCsv(
    path.join(runDir, "metrics.csv"),
    METRICS_HEADER,
  );
  const trajTable = await readVersionedCsv(
    path.join(runDir, "trajectories.csv"),
    TRAJ_HEADER,
  );
  const trajectories: TrajRow[] = trajTable.rows.map((r) => ({
    tick: parseInt(r[0], 10),
    robot: parseInt(r[1], 10),
    alive: r[2] === "1",
    p: r.slice(3).map(Number),
  }));

  const msgTable = await readVersionedCsv(
    path.join(runDir, "messages.csv"),
    MESSAGES_HEADER,
  );
  const messages: MessageRow[] = msgTable.rows.map((r) => ({
    tick: parseInt(r[0], 10),
    receiver: parseInt(r[1], 10),
    sender: parseInt(r[2], 10),
    kind: r[3],
    origin: parseInt(r[4], 10),
    originIteration: parseInt(r[5], 10),
    hopCount: parseInt(r[6], 10),
  }));

  const summary = JSON.parse(
    await readFile(path.join(runDir, "summary.json"), "utf8"),
  ) as Summary;
  if (summary.schema_version !== SUMMARY_SCHEMA) {
    throw new Error(
      `unsupported summary schema_version ${summary.schema_version}, ` +
        `expected ${SUMMARY_SCHEMA}`,
    );
  }

  return {
    runDir,
    n,
    dim,
    commRange,
    maxHops,
    metrics,
    trajectories,
    messages,
    summary,
  };
}

/** Numeric column accessor for the metrics table. */
export function metricCol(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new Error(`metrics.csv: no column "${name}"`);
  return table.rows.map((r) => Number(r[idx]));
}

/** Raw string column accessor (for the semicolon-packed columns). */
export function stringCol(table: CsvTable, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new Error(`metrics.csv: no column "${name}"`);
  return table.rows.map((r) => r[idx]);
}

/** Parse a `sender:value;sender:value` cell into a map. */
export function parsePacked(cell: string): Map<number, number> {
  const out = new Map<number, number>();
  if (!cell) return out;
  for (const part of cell.split(";")) {
    const [id, v] = part.split(":");
    out.set(parseInt(id, 10), Number(v));
  }
  return out;
}
