// SVG renderer for the backend's neutral chart spec. Pure string-in,
// string-out so previews are deterministic and unit-testable. Consumes the
// ChartSpec document only; no table data ever reaches the client renderer.

import type { ChartSpecDoc, Point, SeriesDoc } from "./types.js";

const W = 520;
const H = 300;
const M = { top: 30, right: 16, bottom: 42, left: 48 };
const PLOT_W = W - M.left - M.right;
const PLOT_H = H - M.top - M.bottom;

const PALETTE = ["#3563e9", "#e8712c", "#2c9c69", "#b14fc4", "#c8473f", "#7a7f26", "#3b9bb5"];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function color(i: number): string {
  return PALETTE[i % PALETTE.length] as string;
}

interface Scale {
  lo: number;
  hi: number;
  y(value: number): number;
}

function numericPoints(series: SeriesDoc[]): number[] {
  const out: number[] = [];
  for (const s of series) {
    for (const p of s.points) {
      if (typeof p === "number") out.push(p);
      else if (Array.isArray(p)) for (const v of p) if (typeof v === "number") out.push(v);
    }
  }
  return out;
}

function scaleFor(values: number[], includeZero: boolean): Scale {
  let lo = values.length ? Math.min(...values) : 0;
  let hi = values.length ? Math.max(...values) : 1;
  if (includeZero) {
    lo = Math.min(lo, 0);
    hi = Math.max(hi, 0);
  }
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const span = hi - lo;
  return {
    lo,
    hi,
    y: (v: number) => M.top + PLOT_H - ((v - lo) / span) * PLOT_H,
  };
}

function frame(spec: ChartSpecDoc, body: string, legend: string[]): string {
  const legendItems = legend
    .map((name, i) =>
      `<g transform="translate(${M.left + i * 130},${H - 12})">` +
      `<rect width="9" height="9" y="-8" fill="${color(i)}"/>` +
      `<text x="13" font-size="10">${esc(name.slice(0, 18))}</text></g>`)
    .join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" class="chart" role="img">` +
    `<title>${esc(spec.title || spec.idiom)}</title>` +
    `<text x="${W / 2}" y="16" text-anchor="middle" font-size="13" font-weight="600">${esc(spec.title)}</text>` +
    body +
    (legend.length > 1 ? legendItems : "") +
    `</svg>`
  );
}

function categoryTicks(categories: string[], xOf: (i: number) => number): string {
  const step = Math.max(1, Math.ceil(categories.length / 8));
  return categories
    .map((c, i) =>
      i % step === 0
        ? `<text x="${xOf(i)}" y="${M.top + PLOT_H + 14}" text-anchor="middle" font-size="10">${esc(c.slice(0, 12))}</text>`
        : "")
    .join("");
}

function yAxisLines(scale: Scale): string {
  const ticks = 4;
  let out = "";
  for (let i = 0; i <= ticks; i++) {
    const value = scale.lo + ((scale.hi - scale.lo) * i) / ticks;
    const y = scale.y(value);
    out += `<line x1="${M.left}" y1="${y}" x2="${M.left + PLOT_W}" y2="${y}" stroke="#e3e6ee"/>`;
    out += `<text x="${M.left - 6}" y="${y + 3}" text-anchor="end" font-size="9">${+value.toFixed(2)}</text>`;
  }
  return out;
}

// -- idiom families ----------------------------------------------------------

function renderBars(spec: ChartSpecDoc, stacked: boolean): string {
  const cats = spec.categories;
  const scale = stacked
    ? scaleFor(stackTotals(spec.series), true)
    : scaleFor(numericPoints(spec.series), true);
  const zero = scale.y(Math.max(scale.lo, 0));
  const slot = PLOT_W / Math.max(cats.length, 1);
  let body = yAxisLines(scale);

  if (stacked) {
    for (let c = 0; c < cats.length; c++) {
      let acc = 0;
      for (let s = 0; s < spec.series.length; s++) {
        const v = spec.series[s]?.points[c];
        if (typeof v !== "number") continue;
        const y0 = scale.y(acc);
        const y1 = scale.y(acc + v);
        body += `<rect class="bar" x="${M.left + c * slot + slot * 0.2}" y="${Math.min(y0, y1)}" width="${slot * 0.6}" height="${Math.abs(y0 - y1)}" fill="${color(s)}"/>`;
        acc += v;
      }
    }
  } else {
    const n = Math.max(spec.series.length, 1);
    const barW = (slot * 0.7) / n;
    for (let s = 0; s < spec.series.length; s++) {
      for (let c = 0; c < cats.length; c++) {
        const v = spec.series[s]?.points[c];
        if (typeof v !== "number") continue;
        const x = M.left + c * slot + slot * 0.15 + s * barW;
        const y = scale.y(v);
        body += `<rect class="bar" x="${x}" y="${Math.min(y, zero)}" width="${barW * 0.92}" height="${Math.abs(zero - y)}" fill="${color(s)}"/>`;
      }
    }
  }
  body += categoryTicks(cats, (i) => M.left + i * slot + slot / 2);
  return frame(spec, body, spec.series.map((s) => s.name));
}

function stackTotals(series: SeriesDoc[]): number[] {
  const totals: number[] = [0];
  const length = series[0]?.points.length ?? 0;
  for (let c = 0; c < length; c++) {
    let acc = 0;
    for (const s of series) {
      const v = s.points[c];
      if (typeof v === "number") acc += v;
    }
    totals.push(acc);
  }
  return totals;
}

function renderLines(spec: ChartSpecDoc, area: boolean): string {
  const cats = spec.categories;
  const scale = scaleFor(numericPoints(spec.series), area);
  const slot = PLOT_W / Math.max(cats.length, 1);
  const xOf = (i: number) => M.left + i * slot + slot / 2;
  let body = yAxisLines(scale);

  spec.series.forEach((series, s) => {
    // Null points are gap markers: break the polyline instead of bridging.
    const runs: string[][] = [[]];
    series.points.forEach((p, i) => {
      if (typeof p === "number") {
        (runs[runs.length - 1] as string[]).push(`${xOf(i)},${scale.y(p)}`);
      } else if ((runs[runs.length - 1] as string[]).length) {
        runs.push([]);
      }
    });
    for (const run of runs) {
      if (run.length === 0) continue;
      if (area) {
        const first = run[0]?.split(",")[0];
        const last = run[run.length - 1]?.split(",")[0];
        const base = scale.y(Math.max(scale.lo, 0));
        body += `<path class="gap-run" d="M${first},${base} L${run.join(" L")} L${last},${base} Z" fill="${color(s)}" opacity="0.25"/>`;
      }
      body += `<polyline class="gap-run" points="${run.join(" ")}" fill="none" stroke="${color(s)}" stroke-width="2"/>`;
      for (const pt of run) {
        const [x, y] = pt.split(",");
        body += `<circle cx="${x}" cy="${y}" r="2.4" fill="${color(s)}"/>`;
      }
    }
  });
  body += categoryTicks(cats, xOf);
  return frame(spec, body, spec.series.map((s) => s.name));
}

function renderPoints(spec: ChartSpecDoc): string {
  const pts: (number | string)[][] = [];
  for (const s of spec.series) {
    for (const p of s.points) {
      if (Array.isArray(p)) pts.push(p);
    }
  }
  const xs = pts.map((p) => p[0]).filter((v): v is number => typeof v === "number");
  const ys = pts.map((p) => p[1]).filter((v): v is number => typeof v === "number");
  const sizes = pts.map((p) => p[2]).filter((v): v is number => typeof v === "number");
  const xScale = scaleFor(xs, false);
  const yScale = scaleFor(ys, false);
  const sizeLo = sizes.length ? Math.min(...sizes) : 0;
  const sizeHi = sizes.length ? Math.max(...sizes) : 1;

  const xTo = (v: number) => M.left + ((v - xScale.lo) / (xScale.hi - xScale.lo)) * PLOT_W;
  let body = yAxisLines(yScale);
  for (const p of pts) {
    const [x, y] = [p[0], p[1]];
    if (typeof x !== "number" || typeof y !== "number") continue;
    let r = 4;
    const maybeSize = p[2];
    if (typeof maybeSize === "number" && sizeHi > sizeLo) {
      r = 3 + ((maybeSize - sizeLo) / (sizeHi - sizeLo)) * 9;
    }
    const label = typeof p[p.length - 1] === "string" ? String(p[p.length - 1]) : "";
    body += `<circle class="pt" cx="${xTo(x)}" cy="${yScale.y(y)}" r="${r}" fill="${color(0)}" opacity="0.75">` +
      (label ? `<title>${esc(label)}</title>` : "") + `</circle>`;
  }
  body += `<text x="${M.left + PLOT_W / 2}" y="${M.top + PLOT_H + 26}" text-anchor="middle" font-size="10">${esc(spec.xAxis.label)}</text>`;
  return frame(spec, body, []);
}

function renderPie(spec: ChartSpecDoc, donut: boolean): string {
  const total = spec.slices.reduce((acc, s) => acc + s.value, 0);
  const cx = W / 2;
  const cy = M.top + PLOT_H / 2;
  const r = Math.min(PLOT_W, PLOT_H) / 2.4;
  let angle = -Math.PI / 2;
  let body = "";
  spec.slices.forEach((slice, i) => {
    const frac = total > 0 ? slice.value / total : 0;
    const end = angle + frac * Math.PI * 2;
    const large = end - angle > Math.PI ? 1 : 0;
    const x0 = cx + r * Math.cos(angle);
    const y0 = cy + r * Math.sin(angle);
    const x1 = cx + r * Math.cos(end);
    const y1 = cy + r * Math.sin(end);
    if (frac >= 0.999) {
      body += `<circle class="slice" cx="${cx}" cy="${cy}" r="${r}" fill="${color(i)}"><title>${esc(slice.label)}</title></circle>`;
    } else if (frac > 0) {
      body += `<path class="slice" d="M${cx} ${cy} L${x0} ${y0} A${r} ${r} 0 ${large} 1 ${x1} ${y1} Z" fill="${color(i)}">` +
        `<title>${esc(slice.label)}: ${slice.value}</title></path>`;
    }
    angle = end;
  });
  if (donut) {
    body += `<circle cx="${cx}" cy="${cy}" r="${r * 0.55}" fill="#fff"/>`;
  }
  return frame(spec, body, spec.slices.map((s) => s.label));
}

function renderBoxes(spec: ChartSpecDoc): string {
  // Each series carries [min, q1, median, q3, max].
  const values = numericPoints(spec.series);
  const scale = scaleFor(values, false);
  const slot = PLOT_W / Math.max(spec.series.length, 1);
  let body = yAxisLines(scale);
  spec.series.forEach((series, i) => {
    const five = series.points.filter((p): p is number => typeof p === "number");
    if (five.length !== 5) return;
    const [lo, q1, med, q3, hi] = five as [number, number, number, number, number];
    const cx = M.left + i * slot + slot / 2;
    const half = Math.min(34, slot * 0.3);
    body +=
      `<g class="box">` +
      `<line x1="${cx}" y1="${scale.y(lo)}" x2="${cx}" y2="${scale.y(q1)}" stroke="${color(i)}" stroke-width="2"/>` +
      `<line x1="${cx}" y1="${scale.y(q3)}" x2="${cx}" y2="${scale.y(hi)}" stroke="${color(i)}" stroke-width="2"/>` +
      `<rect x="${cx - half}" y="${scale.y(q3)}" width="${half * 2}" height="${Math.max(1, scale.y(q1) - scale.y(q3))}" fill="${color(i)}" opacity="0.35" stroke="${color(i)}"/>` +
      `<line x1="${cx - half}" y1="${scale.y(med)}" x2="${cx + half}" y2="${scale.y(med)}" stroke="${color(i)}" stroke-width="2.5"/>` +
      `</g>` +
      `<text x="${cx}" y="${M.top + PLOT_H + 14}" text-anchor="middle" font-size="10">${esc(series.name.slice(0, 12))}</text>`;
  });
  return frame(spec, body, []);
}

function renderHeatmap(spec: ChartSpecDoc): string {
  const values = numericPoints(spec.series);
  const lo = values.length ? Math.min(...values) : 0;
  const hi = values.length ? Math.max(...values) : 1;
  const cols = Math.max(spec.categories.length, 1);
  const rows = Math.max(spec.series.length, 1);
  const cw = PLOT_W / cols;
  const ch = PLOT_H / rows;
  let body = "";
  spec.series.forEach((series, r) => {
    series.points.forEach((p, c) => {
      const x = M.left + c * cw;
      const y = M.top + r * ch;
      if (typeof p === "number") {
        const t = hi > lo ? (p - lo) / (hi - lo) : 0.5;
        body += `<rect class="cell" x="${x}" y="${y}" width="${cw - 1}" height="${ch - 1}" fill="${color(0)}" opacity="${0.15 + t * 0.85}">` +
          `<title>${esc(series.name)} / ${esc(spec.categories[c] ?? "")}: ${p}</title></rect>`;
      } else {
        body += `<rect class="cell empty" x="${x}" y="${y}" width="${cw - 1}" height="${ch - 1}" fill="#f1f2f6"/>`;
      }
    });
    body += `<text x="${M.left - 5}" y="${M.top + r * ch + ch / 2 + 3}" text-anchor="end" font-size="9">${esc(series.name.slice(0, 8))}</text>`;
  });
  body += categoryTicks(spec.categories, (i) => M.left + i * cw + cw / 2);
  return frame(spec, body, []);
}

function renderRadar(spec: ChartSpecDoc): string {
  const cats = spec.categories;
  const n = Math.max(cats.length, 3);
  const cx = W / 2;
  const cy = M.top + PLOT_H / 2 + 6;
  const radius = Math.min(PLOT_W, PLOT_H) / 2.35;
  const values = numericPoints(spec.series);
  const hi = values.length ? Math.max(...values, 0) : 1;
  const angle = (i: number) => -Math.PI / 2 + (i * 2 * Math.PI) / n;

  let body = "";
  for (const ring of [0.33, 0.66, 1]) {
    const ringPts = cats.map((_, i) =>
      `${cx + radius * ring * Math.cos(angle(i))},${cy + radius * ring * Math.sin(angle(i))}`);
    body += `<polygon points="${ringPts.join(" ")}" fill="none" stroke="#e3e6ee"/>`;
  }
  cats.forEach((c, i) => {
    const x = cx + (radius + 12) * Math.cos(angle(i));
    const y = cy + (radius + 12) * Math.sin(angle(i));
    body += `<text x="${x}" y="${y}" text-anchor="middle" font-size="9">${esc(c.slice(0, 10))}</text>`;
  });
  spec.series.forEach((series, s) => {
    const pts: string[] = [];
    series.points.forEach((p, i) => {
      const v = typeof p === "number" ? p : 0;
      const rr = hi > 0 ? (v / hi) * radius : 0;
      pts.push(`${cx + rr * Math.cos(angle(i))},${cy + rr * Math.sin(angle(i))}`);
    });
    if (pts.length) {
      body += `<polygon class="radar-series" points="${pts.join(" ")}" fill="${color(s)}" opacity="0.25" stroke="${color(s)}" stroke-width="2"/>`;
    }
  });
  return frame(spec, body, spec.series.map((s) => s.name));
}

export function renderChart(spec: ChartSpecDoc): string {
  switch (spec.idiom) {
    case "bar":
    case "groupedBar":
    case "histogram":
      return renderBars(spec, false);
    case "stackedBar":
      return renderBars(spec, true);
    case "line":
    case "multiLine":
      return renderLines(spec, false);
    case "area":
      return renderLines(spec, true);
    case "scatter":
    case "bubble":
      return renderPoints(spec);
    case "pie":
      return renderPie(spec, false);
    case "donut":
      return renderPie(spec, true);
    case "boxPlot":
      return renderBoxes(spec);
    case "heatmap":
      return renderHeatmap(spec);
    case "radar":
      return renderRadar(spec);
    default:
      return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}"><text x="20" y="40">Unsupported idiom: ${esc(spec.idiom)}</text></svg>`;
  }
}

export { esc as escapeHtml };
