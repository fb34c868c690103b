/**
 * Minimal SVG rendering: log-x panels with polyline curves and a legend.
 * No DOM or plotting library needed; output is a standalone SVG document.
 */

import { Series } from "./figure.js";

export interface PanelOptions {
    title: string;
    yLabel: string;
    yLog: boolean;
    width?: number;
    height?: number;
}

const COLORS = ["#0072BD", "#D95319", "#77AC30", "#7E2F8E", "#EDB120",
    "#4DBEEE", "#A2142F", "#333333"];
const MARGIN = { top: 34, right: 24, bottom: 44, left: 64 };

export function logScale(min: number, max: number, rangePx: number) {
    const lo = Math.log10(min);
    const hi = Math.log10(max);
    const span = hi - lo || 1;
    return (v: number) => ((Math.log10(v) - lo) / span) * rangePx;
}

export function linearScale(min: number, max: number, rangePx: number) {
    const span = max - min || 1;
    return (v: number) => ((v - min) / span) * rangePx;
}

export function decadeTicks(min: number, max: number): number[] {
    const ticks: number[] = [];
    for (let e = Math.ceil(Math.log10(min) - 1e-9);
        e <= Math.floor(Math.log10(max) + 1e-9); e++) {
        ticks.push(10 ** e);
    }
    return ticks;
}

function fmtTick(v: number): string {
    if (v >= 1000 || v < 0.01) {
        const e = Math.round(Math.log10(v));
        if (Math.abs(v - 10 ** e) / v < 1e-9) return `1e${e}`;
        return v.toExponential(1);
    }
    return `${v}`;
}

function esc(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderPanel(series: Series[], opts: PanelOptions): string {
    const width = opts.width ?? 640;
    const height = opts.height ?? 360;
    const plotW = width - MARGIN.left - MARGIN.right;
    const plotH = height - MARGIN.top - MARGIN.bottom;

    const xs = series.flatMap((s) => s.points.map((p) => p.x)).filter((v) => v > 0);
    const ys = series.flatMap((s) => s.points.map((p) => p.y))
        .filter((v) => Number.isFinite(v) && (!opts.yLog || v > 0));
    if (xs.length === 0 || ys.length === 0) {
        throw new Error("nothing to plot");
    }
    const xMin = Math.min(...xs);
    const xMax = Math.max(...xs);
    let yMin = opts.yLog ? Math.min(...ys) : Math.min(0, ...ys);
    let yMax = Math.max(...ys);
    if (!opts.yLog) {
        yMax = yMax <= 1.0 && yMin >= 0.0 ? 1.0 : yMax * 1.05;
    }
    const sx = logScale(xMin, xMax, plotW);
    const sy = opts.yLog ? logScale(yMin, yMax, plotH) : linearScale(yMin, yMax, plotH);
    const px = (v: number) => MARGIN.left + sx(v);
    const py = (v: number) => MARGIN.top + plotH - sy(v);

    const parts: string[] = [];
    parts.push(`<g class="panel">`);
    parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" `
        + `height="${plotH}" fill="none" stroke="#444"/>`);
    parts.push(`<text x="${width / 2}" y="18" text-anchor="middle" `
        + `font-size="13" font-weight="bold">${esc(opts.title)}</text>`);

    for (const t of decadeTicks(xMin, xMax)) {
        const x = px(t);
        parts.push(`<line x1="${x.toFixed(1)}" y1="${MARGIN.top}" x2="${x.toFixed(1)}" `
            + `y2="${MARGIN.top + plotH}" stroke="#ddd"/>`);
        parts.push(`<text x="${x.toFixed(1)}" y="${MARGIN.top + plotH + 16}" `
            + `text-anchor="middle" font-size="10">${fmtTick(t)}</text>`);
    }
    const yTicks = opts.yLog
        ? decadeTicks(yMin, yMax)
        : [0, 0.2, 0.4, 0.6, 0.8, 1.0].map((f) => yMin + f * (yMax - yMin));
    for (const t of yTicks) {
        if (t < yMin || t > yMax) continue;
        const y = py(t);
        parts.push(`<line x1="${MARGIN.left}" y1="${y.toFixed(1)}" `
            + `x2="${MARGIN.left + plotW}" y2="${y.toFixed(1)}" stroke="#eee"/>`);
        parts.push(`<text x="${MARGIN.left - 6}" y="${(y + 3).toFixed(1)}" `
            + `text-anchor="end" font-size="10">${fmtTick(Number(t.toPrecision(3)))}</text>`);
    }
    parts.push(`<text x="${width / 2}" y="${height - 8}" text-anchor="middle" `
        + `font-size="11">BS density [BSs/km^2]</text>`);
    parts.push(`<text x="14" y="${MARGIN.top + plotH / 2}" text-anchor="middle" `
        + `font-size="11" transform="rotate(-90 14 ${MARGIN.top + plotH / 2})">`
        + `${esc(opts.yLabel)}</text>`);

    series.forEach((s, i) => {
        const color = COLORS[i % COLORS.length];
        const pts = s.points
            .filter((p) => Number.isFinite(p.y) && (!opts.yLog || p.y > 0))
            .map((p) => `${px(p.x).toFixed(2)},${py(p.y).toFixed(2)}`)
            .join(" ");
        const dash = s.dashed ? ` stroke-dasharray="6 4"` : "";
        parts.push(`<polyline points="${pts}" fill="none" stroke="${color}" `
            + `stroke-width="1.6"${dash}/>`);
        const ly = MARGIN.top + 12 + i * 14;
        parts.push(`<line x1="${MARGIN.left + plotW - 150}" y1="${ly - 4}" `
            + `x2="${MARGIN.left + plotW - 126}" y2="${ly - 4}" stroke="${color}" `
            + `stroke-width="1.6"${dash}/>`);
        parts.push(`<text x="${MARGIN.left + plotW - 120}" y="${ly}" `
            + `font-size="9">${esc(s.label)}</text>`);
    });
    parts.push(`</g>`);
    return parts.join("\n");
}

export function renderFigure(panels: string[], width = 640, panelHeight = 360): string {
    const height = panels.length * panelHeight;
    const positioned = panels.map((panel, i) =>
        `<g transform="translate(0 ${i * panelHeight})">\n${panel}\n</g>`);
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" `
        + `height="${height}" font-family="Helvetica, Arial, sans-serif">\n`
        + `<rect width="100%" height="100%" fill="white"/>\n`
        + positioned.join("\n") + `\n</svg>\n`;
}
