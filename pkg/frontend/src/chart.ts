import type { Curve, ObjectiveKey } from "./types.js";
import { OBJECTIVE_LABELS } from "./types.js";

// One SVG panel per objective: solid median line, shaded band for the
// interquartile spread, dashed overlay for the smoothed median. All numbers
// come straight from the service; this module only scales them to pixels.

const W = 380;
const H = 180;
const PAD = { left: 52, right: 12, top: 26, bottom: 34 };

export interface Series {
  xs: number[];
  median: number[];
  iqr: number[];
  smoothed: number[] | null;
}

/** Extract the plotted values for one objective, in curve order. */
export function series(curve: Curve, key: ObjectiveKey): Series {
  const xs = curve.points.map((p) => p.x);
  const median = curve.points.map((p) => p.median[key]);
  const iqr = curve.points.map((p) => p.iqr[key]);
  const smoothed = curve.points.every((p) => p.median_smoothed !== undefined)
    ? curve.points.map((p) => (p.median_smoothed as Record<string, number>)[key])
    : null;
  return { xs, median, iqr, smoothed };
}

function scaler(lo: number, hi: number, a: number, b: number): (v: number) => number {
  const span = hi - lo;
  if (span === 0) return () => (a + b) / 2;
  return (v) => a + ((v - lo) / span) * (b - a);
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

function poly(xs: number[], ys: number[]): string {
  return xs.map((x, i) => `${x.toFixed(1)},${ys[i].toFixed(1)}`).join(" ");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Render one objective panel as an SVG document string. */
export function panelSvg(curve: Curve, key: ObjectiveKey): string {
  const s = series(curve, key);
  const lows = s.median.map((m, i) => m - s.iqr[i] / 2);
  const highs = s.median.map((m, i) => m + s.iqr[i] / 2);
  const all = lows.concat(highs, s.smoothed ?? []);
  const yLo = Math.min(...all);
  const yHi = Math.max(...all);
  const sx = scaler(s.xs[0], s.xs[s.xs.length - 1], PAD.left, W - PAD.right);
  const sy = scaler(yLo, yHi, H - PAD.bottom, PAD.top);

  const px = s.xs.map(sx);
  const band =
    poly(px, highs.map(sy)) +
    " " +
    poly([...px].reverse(), [...lows].reverse().map(sy));
  const markers = s.xs
    .map(
      (x, i) =>
        `<circle class="pt" cx="${px[i].toFixed(1)}" cy="${sy(s.median[i]).toFixed(1)}" ` +
        `r="1.6" data-x="${x}" data-median="${s.median[i]}" data-iqr="${s.iqr[i]}"/>`,
    )
    .join("");
  const overlay = s.smoothed
    ? `<polyline class="smooth" fill="none" stroke="#c2410c" stroke-width="1.3" ` +
      `stroke-dasharray="5 3" points="${poly(px, s.smoothed.map(sy))}"/>`
    : "";

  return (
    `<svg class="panel" data-objective="${key}" viewBox="0 0 ${W} ${H}" ` +
    `xmlns="http://www.w3.org/2000/svg" role="img">` +
    `<text x="${PAD.left}" y="15" class="title">${key}: ${esc(OBJECTIVE_LABELS[key])}</text>` +
    `<line x1="${PAD.left}" y1="${H - PAD.bottom}" x2="${W - PAD.right}" y2="${H - PAD.bottom}" stroke="#888"/>` +
    `<line x1="${PAD.left}" y1="${PAD.top}" x2="${PAD.left}" y2="${H - PAD.bottom}" stroke="#888"/>` +
    `<text x="${PAD.left}" y="${H - 12}" class="tick">${s.xs[0]}</text>` +
    `<text x="${W - PAD.right}" y="${H - 12}" class="tick" text-anchor="end">${s.xs[s.xs.length - 1]}</text>` +
    `<text x="${(PAD.left + W - PAD.right) / 2}" y="${H - 12}" class="axis" text-anchor="middle">decisions pinned</text>` +
    `<text x="14" y="${sy(yHi).toFixed(1)}" class="tick">${fmt(yHi)}</text>` +
    `<text x="14" y="${sy(yLo).toFixed(1)}" class="tick">${fmt(yLo)}</text>` +
    `<polygon class="band" fill="#93c5fd" opacity="0.45" points="${band}"/>` +
    `<polyline class="median" fill="none" stroke="#1d4ed8" stroke-width="1.6" points="${poly(px, s.median.map(sy))}"/>` +
    overlay +
    markers +
    `</svg>`
  );
}

/** All panels for the curve's enabled objectives. */
export function chartHtml(curve: Curve): string {
  if (!curve.points.length) return `<p class="empty">no curve yet</p>`;
  return curve.objectives.map((key) => panelSvg(curve, key)).join("");
}
