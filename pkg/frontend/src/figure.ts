/**
 * Series assembly: filter CSV rows and group them into per-curve point lists.
 *
 * All three figure families share the BS density on a log x axis; one curve
 * is drawn per (deployment, height, threshold) combination that survives the
 * spec's filters.  Nothing is recomputed from the simulation except that the
 * closed-form active-density column may be drawn as a dashed overlay.
 */

import { ResultRow } from "./csv.js";

export type Metric = "active_density" | "coverage" | "reliable_density";

export const METRICS: Metric[] = ["active_density", "coverage", "reliable_density"];

export interface FigureSpec {
    metric: Metric;
    gammaDb?: number[];
    deployments?: string[];
    variants?: string[];
    heightsM?: number[];
    overlayEq5?: boolean;
}

export interface SeriesPoint {
    x: number;
    y: number;
}

export interface Series {
    label: string;
    points: SeriesPoint[];
    dashed: boolean;
}

export class NoRowsMatchedError extends Error {}

export const METRIC_LABELS: Record<Metric, string> = {
    active_density: "active BS density [BSs/km^2]",
    coverage: "coverage probability",
    reliable_density: "reliably working UE density [UEs/km^2]",
};

function rowValue(row: ResultRow, metric: Metric): number {
    switch (metric) {
        case "active_density":
            return row.activeDensity;
        case "coverage":
            return row.pCov;
        case "reliable_density":
            return row.reliableUeDensity;
    }
}

function filterRows(rows: ResultRow[], spec: FigureSpec): ResultRow[] {
    return rows.filter((row) => {
        if (spec.gammaDb && !spec.gammaDb.includes(row.gammaDb)) return false;
        if (spec.deployments && !spec.deployments.includes(row.deployment)) return false;
        if (spec.variants && !spec.variants.includes(row.variant)) return false;
        if (spec.heightsM && !spec.heightsM.includes(row.heightM)) return false;
        return true;
    });
}

/** Group key per curve; the active-density metric does not split by threshold. */
function seriesKey(row: ResultRow, metric: Metric): string {
    const base = `${row.deployment}|${row.variant}|L=${row.heightM}`;
    return metric === "active_density" ? base : `${base}|g=${row.gammaDb}`;
}

function seriesLabel(row: ResultRow, metric: Metric): string {
    const parts = [row.deployment, row.variant, `L=${row.heightM}m`];
    if (metric !== "active_density") {
        parts.push(`gamma=${row.gammaDb}dB`);
    }
    return parts.join(" ");
}

export function buildSeries(rows: ResultRow[], spec: FigureSpec): Series[] {
    const filtered = filterRows(rows, spec);
    if (filtered.length === 0) {
        throw new NoRowsMatchedError(
            `no rows matched the ${spec.metric} figure filters`);
    }
    const groups = new Map<string, { label: string; points: Map<number, number> }>();
    for (const row of filtered) {
        const key = seriesKey(row, spec.metric);
        if (!groups.has(key)) {
            groups.set(key, { label: seriesLabel(row, spec.metric), points: new Map() });
        }
        // rows repeat per threshold for the active-density metric; last wins
        groups.get(key)!.points.set(row.lambda, rowValue(row, spec.metric));
    }
    const series: Series[] = [];
    for (const group of groups.values()) {
        const points = [...group.points.entries()]
            .map(([x, y]) => ({ x, y }))
            .sort((a, b) => a.x - b.x);
        series.push({ label: group.label, points, dashed: false });
    }
    if (spec.metric === "active_density" && spec.overlayEq5) {
        const points = new Map<number, number>();
        for (const row of filtered) {
            points.set(row.lambda, row.activeDensityEq5);
        }
        series.push({
            label: "closed-form approximation",
            points: [...points.entries()].map(([x, y]) => ({ x, y }))
                .sort((a, b) => a.x - b.x),
            dashed: true,
        });
    }
    return series;
}
