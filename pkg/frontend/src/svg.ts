/** Minimal hand-rolled SVG plotting: line series and scatter points. */

export interface Series {
  xs: number[];
  ys: number[];
  color: string;
  label: string;
  mode?: "line" | "points" | "steps";
  width?: number;
  radius?: number;
  opacity?: number;
}

export interface PlotOptions {
  title: string;
  xlabel: string;
  ylabel: string;
  width?: number;
  height?: number;
  series: Series[];
  /** optional y = x guide line */
  diagonal?: boolean;
  /** force equal x/y data aspect (for spatial plots) */
  square?: boolean;
}

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

export function color(i: number): string {
  return PALETTE[i % PALETTE.length];
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  return [lo, hi];
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function plot(opts: PlotOptions): string {
  const W = opts.width ?? 640;
  const H = opts.height ?? 420;
  const M = { l: 56, r: 12, t: 30, b: 42 };
  const iw = W - M.l - M.r;
  const ih = H - M.t - M.b;

  const allX = opts.series.flatMap((s) => s.xs);
  const allY = opts.series.flatMap((s) => s.ys);
  let [x0, x1] = extent(allX);
  let [y0, y1] = extent(allY);
  if (opts.diagonal) {
    const lo = Math.min(x0, y0);
    const hi = Math.max(x1, y1);
    [x0, x1, y0, y1] = [lo, hi, lo, hi];
  }
  if (opts.square) {
    const span = Math.max(x1 - x0, y1 - y0);
    x1 = x0 + span;
    y1 = y0 + span;
  }
  const pad = 0.04;
  const xs = (v: number): number =>
    M.l + ((v - x0) / (x1 - x0 || 1)) * iw * (1 - 2 * pad) + iw * pad;
  const ys = (v: number): number =>
    M.t + ih - (((v - y0) / (y1 - y0 || 1)) * ih * (1 - 2 * pad) + ih * pad);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" ` +
      `viewBox="0 0 ${W} ${H}" font-family="sans-serif" font-size="11">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
    `<text x="${W / 2}" y="18" text-anchor="middle" font-size="14">` +
      `${esc(opts.title)}</text>`,
  );

  // axes + 5 ticks per axis
  parts.push(
    `<rect x="${M.l}" y="${M.t}" width="${iw}" height="${ih}" ` +
      `fill="none" stroke="#333"/>`,
  );
  for (let i = 0; i <= 4; i++) {
    const vx = x0 + ((x1 - x0) * i) / 4;
    const vy = y0 + ((y1 - y0) * i) / 4;
    const px = xs(x0) + ((xs(x1) - xs(x0)) * i) / 4;
    const py = ys(y0) + ((ys(y1) - ys(y0)) * i) / 4;
    parts.push(
      `<line x1="${px}" y1="${M.t + ih}" x2="${px}" y2="${M.t + ih + 4}" stroke="#333"/>`,
      `<text x="${px}" y="${M.t + ih + 16}" text-anchor="middle">${fmt(vx)}</text>`,
      `<line x1="${M.l - 4}" y1="${py}" x2="${M.l}" y2="${py}" stroke="#333"/>`,
      `<text x="${M.l - 6}" y="${py + 3}" text-anchor="end">${fmt(vy)}</text>`,
    );
  }
  parts.push(
    `<text x="${M.l + iw / 2}" y="${H - 8}" text-anchor="middle">` +
      `${esc(opts.xlabel)}</text>`,
    `<text x="14" y="${M.t + ih / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 14 ${M.t + ih / 2})">${esc(opts.ylabel)}</text>`,
  );

  if (opts.diagonal) {
    parts.push(
      `<line x1="${xs(x0)}" y1="${ys(x0)}" x2="${xs(x1)}" y2="${ys(x1)}" ` +
        `stroke="#999" stroke-dasharray="4 3"/>`,
    );
  }

  for (const s of opts.series) {
    const op = s.opacity ?? 1;
    if (s.mode === "points") {
      const r = s.radius ?? 2;
      for (let i = 0; i < s.xs.length; i++) {
        parts.push(
          `<circle cx="${xs(s.xs[i])}" cy="${ys(s.ys[i])}" r="${r}" ` +
            `fill="${s.color}" fill-opacity="${op}"/>`,
        );
      }
    } else {
      const pts: string[] = [];
      for (let i = 0; i < s.xs.length; i++) {
        const px = xs(s.xs[i]);
        const py = ys(s.ys[i]);
        if (s.mode === "steps" && i > 0) {
          pts.push(`${px},${ys(s.ys[i - 1])}`);
        }
        pts.push(`${px},${py}`);
      }
      parts.push(
        `<polyline points="${pts.join(" ")}" fill="none" ` +
          `stroke="${s.color}" stroke-width="${s.width ?? 1.3}" ` +
          `stroke-opacity="${op}"/>`,
      );
    }
  }

  // legend (skip when every label is empty)
  const labeled = opts.series.filter((s) => s.label);
  const seen = new Set<string>();
  let ly = M.t + 12;
  for (const s of labeled) {
    if (seen.has(s.label)) continue;
    seen.add(s.label);
    parts.push(
      `<rect x="${W - M.r - 110}" y="${ly - 8}" width="10" height="10" ` +
        `fill="${s.color}"/>`,
      `<text x="${W - M.r - 96}" y="${ly + 1}">${esc(s.label)}</text>`,
    );
    ly += 14;
  }

  parts.push("</svg>");
  return parts.join("\n");
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return String(Math.round(v * 100) / 100);
}
