/**
 * The five output styles built from a run directory:
 *   1. trajectories with the inter-robot distance envelope
 *   2. message recency per (receiver, origin)
 *   3. neighbor counts against inter-robot distance
 *   4. estimated vs true neighbor distances
 *   5. digest-gap summary table (text)
 *
 * Everything displayed comes straight from CSV cells; the only derived
 * quantity is the pairwise distance between logged positions.
 */
import {
  MessageRow,
  RunArtifacts,
  metricCol,
  parsePacked,
  stringCol,
} from "./schema.js";
import { Series, color, plot } from "./svg.js";

function distance(a: number[], b: number[]): number {
  let s = 0;
  for (let i = 0; i < a.length; i++) s += (a[i] - b[i]) ** 2;
  return Math.sqrt(s);
}

/** positions[tick][robot] -> p (alive robots only) */
function positionsByTick(art: RunArtifacts): Map<number, Map<number, number[]>> {
  const out = new Map<number, Map<number, number[]>>();
  for (const r of art.trajectories) {
    if (!r.alive) continue;
    let m = out.get(r.tick);
    if (!m) {
      m = new Map();
      out.set(r.tick, m);
    }
    m.set(r.robot, r.p);
  }
  return out;
}

export function figTrajectories(art: RunArtifacts): string {
  const series: Series[] = [];
  for (let i = 0; i < art.n; i++) {
    const rows = art.trajectories.filter((r) => r.robot === i && r.alive);
    series.push({
      xs: rows.map((r) => r.p[0]),
      ys: rows.map((r) => r.p[1] ?? 0),
      color: color(i),
      label: `robot ${i}`,
      width: 1.0,
    });
    if (rows.length > 0) {
      const last = rows[rows.length - 1];
      series.push({
        xs: [last.p[0]],
        ys: [last.p[1] ?? 0],
        color: color(i),
        label: "",
        mode: "points",
        radius: 3.5,
      });
    }
  }
  const ticks = metricCol(art.metrics, "tick");
  const dmin = metricCol(art.metrics, "min_dist");
  const dmax = metricCol(art.metrics, "max_dist");
  const traj = plot({
    title: "Trajectories (dot marks final position)",
    xlabel: "x [m]",
    ylabel: "y [m]",
    series,
    square: true,
    width: 480,
    height: 480,
  });
  const env = plot({
    title: "Inter-robot distance envelope",
    xlabel: "tick",
    ylabel: "distance [m]",
    width: 480,
    height: 300,
    series: [
      { xs: ticks, ys: dmin, color: "#1f77b4", label: "min" },
      { xs: ticks, ys: dmax, color: "#d62728", label: "max" },
      {
        xs: [ticks[0], ticks[ticks.length - 1]],
        ys: [art.commRange, art.commRange],
        color: "#999",
        label: "comm range",
      },
    ],
  });
  return stack([traj, env], 480);
}

export interface RecencyPoint {
  tick: number;
  originIteration: number;
}

/** Per (receiver, origin) delivery sequence, ordered by reception tick. */
export function recencySequences(
  messages: MessageRow[],
): Map<string, RecencyPoint[]> {
  const out = new Map<string, RecencyPoint[]>();
  for (const m of messages) {
    if (m.receiver === m.origin) continue; // flood relays echo to the origin
    const key = `${m.receiver}-${m.origin}`;
    let seq = out.get(key);
    if (!seq) {
      seq = [];
      out.set(key, seq);
    }
    seq.push({ tick: m.tick, originIteration: m.originIteration });
  }
  for (const seq of out.values()) {
    seq.sort((a, b) => a.tick - b.tick || a.originIteration - b.originIteration);
  }
  return out;
}

export function figRecency(art: RunArtifacts): string {
  const seqs = recencySequences(art.messages);
  // show the receiver with the most origins; one staircase per origin of
  // the freshest iteration known so far
  const byReceiver = new Map<number, string[]>();
  for (const key of seqs.keys()) {
    const recv = parseInt(key.split("-")[0], 10);
    byReceiver.set(recv, [...(byReceiver.get(recv) ?? []), key]);
  }
  let receiver = -1;
  let best = -1;
  for (const [recv, keys] of byReceiver) {
    if (keys.length > best || (keys.length === best && recv < receiver)) {
      best = keys.length;
      receiver = recv;
    }
  }
  const series: Series[] = [];
  for (const key of byReceiver.get(receiver) ?? []) {
    const origin = parseInt(key.split("-")[1], 10);
    const seq = seqs.get(key) ?? [];
    const xs: number[] = [];
    const ys: number[] = [];
    let freshest = -Infinity;
    for (const p of seq) {
      freshest = Math.max(freshest, p.originIteration);
      xs.push(p.tick);
      ys.push(freshest);
    }
    series.push({
      xs,
      ys,
      color: color(origin),
      label: `origin ${origin}`,
      mode: "steps",
    });
  }
  return plot({
    title: `Freshest known iteration per origin (receiver ${receiver})`,
    xlabel: "reception tick",
    ylabel: "origin iteration",
    series,
  });
}

export function figNeighbors(art: RunArtifacts): string {
  const pos = positionsByTick(art);
  const ticks = metricCol(art.metrics, "tick");
  const one: Series = {
    xs: [],
    ys: [],
    color: "#1f77b4",
    label: "1-hop",
    mode: "points",
    opacity: 0.25,
  };
  const two: Series = {
    xs: [],
    ys: [],
    color: "#ff7f0e",
    label: "2-hop",
    mode: "points",
    opacity: 0.25,
  };
  for (let i = 0; i < art.n; i++) {
    const oneCounts = metricCol(art.metrics, `onehop_${i}`);
    const twoCounts = metricCol(art.metrics, `twohop_${i}`);
    for (let t = 0; t < ticks.length; t++) {
      const atTick = pos.get(ticks[t]);
      const self = atTick?.get(i);
      if (!atTick || !self) continue;
      let sum = 0;
      let cnt = 0;
      for (const [j, pj] of atTick) {
        if (j === i) continue;
        sum += distance(self, pj);
        cnt++;
      }
      if (cnt === 0) continue;
      const mean = sum / cnt;
      one.xs.push(mean);
      one.ys.push(oneCounts[t]);
      two.xs.push(mean);
      two.ys.push(twoCounts[t]);
    }
  }
  return plot({
    title: "Neighbor counts vs mean inter-robot distance",
    xlabel: "mean distance to other robots [m]",
    ylabel: "neighbors in table",
    series: [one, two],
  });
}

export function figDistances(art: RunArtifacts): string {
  const pos = positionsByTick(art);
  const ticks = metricCol(art.metrics, "tick");
  const est: Series = {
    xs: [],
    ys: [],
    color: "#2ca02c",
    label: "pairs",
    mode: "points",
    opacity: 0.2,
  };
  for (let i = 0; i < art.n; i++) {
    const cells = stringCol(art.metrics, `estdist_${i}`);
    for (let t = 0; t < ticks.length; t++) {
      const atTick = pos.get(ticks[t]);
      const self = atTick?.get(i);
      if (!atTick || !self) continue;
      for (const [sender, d] of parsePacked(cells[t])) {
        const pj = atTick.get(sender);
        if (!pj) continue;
        est.xs.push(distance(self, pj));
        est.ys.push(d);
      }
    }
  }
  return plot({
    title: "Estimated vs true neighbor distance",
    xlabel: "true distance [m]",
    ylabel: "onboard estimate [m]",
    series: [est],
    diagonal: true,
  });
}

export function gapTable(art: RunArtifacts): string {
  const gaps = art.summary.gap_ratios;
  if (!gaps) return "no gap statistics in summary (message logging was off)\n";
  const lines: string[] = [
    "digest-gap summary (fraction of ticks with neighbors present)",
    "",
    "robot  ticks  exactly-1-missing  all-missing  per-sender miss",
  ];
  for (const robot of Object.keys(gaps).sort((a, b) => +a - +b)) {
    const g = gaps[robot];
    const per = Object.entries(g.per_sender_miss)
      .sort(([a], [b]) => +a - +b)
      .map(([s, v]) => `${s}:${v.toFixed(3)}`)
      .join(" ");
    lines.push(
      `${robot.padStart(5)}  ${String(g.ticks_considered).padStart(5)}  ` +
        `${g.exactly_one_missing.toFixed(3).padStart(17)}  ` +
        `${g.all_missing.toFixed(3).padStart(11)}  ${per}`,
    );
    const corr = Object.entries(g.pairwise_corr)
      .map(([pair, c]) => `${pair}:${c.toFixed(3)}`)
      .join(" ");
    if (corr) lines.push(`       miss correlations: ${corr}`);
  }
  return lines.join("\n") + "\n";
}

/** Stack SVG documents vertically into one. */
function stack(svgs: string[], width: number): string {
  const heights = svgs.map((s) => {
    const m = s.match(/height="(\d+)"/);
    return m ? parseInt(m[1], 10) : 400;
  });
  const total = heights.reduce((a, b) => a + b, 0);
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${total}">`,
  ];
  let y = 0;
  for (let i = 0; i < svgs.length; i++) {
    const inner = svgs[i]
      .replace(/<svg[^>]*>/, "")
      .replace("</svg>", "");
    parts.push(`<g transform="translate(0 ${y})">${inner}</g>`);
    y += heights[i];
  }
  parts.push("</svg>");
  return parts.join("\n");
}
