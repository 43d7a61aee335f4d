/**
 * Render every figure style and the gap table from a run directory.
 *
 * Usage: node dist/plot_run.js --run-dir <dir> --out <dir>
 */
import { mkdir, writeFile } from "fs/promises";
import path from "path";
import {
  figDistances,
  figNeighbors,
  figRecency,
  figTrajectories,
  gapTable,
} from "./figures.js";
import { loadRun } from "./schema.js";

export interface PlotResult {
  written: string[];
}

export async function plotRun(
  runDir: string,
  outDir: string,
): Promise<PlotResult> {
  const art = await loadRun(runDir);
  if (art.metrics.rows.length === 0) {
    console.log("no data: metrics.csv has no rows, nothing to plot");
    return { written: [] };
  }
  await mkdir(outDir, { recursive: true });
  const outputs: [string, string][] = [
    ["trajectories.svg", figTrajectories(art)],
    ["recency.svg", figRecency(art)],
    ["neighbors.svg", figNeighbors(art)],
    ["distances.svg", figDistances(art)],
    ["gap_table.txt", gapTable(art)],
  ];
  const written: string[] = [];
  for (const [name, content] of outputs) {
    const file = path.join(outDir, name);
    await writeFile(file, content, "utf8");
    written.push(file);
  }
  return { written };
}

function parseArgs(argv: string[]): { runDir: string; out: string } {
  let runDir: string | undefined;
  let out: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--run-dir") runDir = argv[++i];
    else if (argv[i] === "--out") out = argv[++i];
    else throw new Error(`unknown argument ${argv[i]}`);
  }
  if (!runDir || !out) {
    throw new Error("usage: plot_run --run-dir <dir> --out <dir>");
  }
  return { runDir, out };
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("plot_run.js") || entry.endsWith("plot_run.ts")) {
  const { runDir, out } = parseArgs(process.argv.slice(2));
  plotRun(runDir, out)
    .then((res) => {
      for (const f of res.written) console.log(`wrote ${f}`);
    })
    .catch((err) => {
      console.error(String(err));
      process.exitCode = 1;
    });
}
