/**
 * make-figures: render the sweep-result figure families from a results CSV.
 *
 *   make-figures --csv results.csv [--metric all|active_density|coverage|
 *     reliable_density] [--gamma 0 --gamma 10] [--deployment hppp]
 *     [--variant 3gpp] [--height 0] [--overlay-eq5] [--out figures.svg]
 */

import { parseArgs } from "node:util";
import { readFileSync, writeFileSync } from "node:fs";

import { parseResultsCsv, CsvSchemaError } from "./csv.js";
import {
    FigureSpec, Metric, METRICS, METRIC_LABELS, NoRowsMatchedError, buildSeries,
} from "./figure.js";
import { renderFigure, renderPanel } from "./svg.js";

function numbers(values: string[] | undefined): number[] | undefined {
    if (!values || values.length === 0) return undefined;
    return values.map((v) => {
        const n = Number(v);
        if (Number.isNaN(n)) throw new Error(`not a number: ${v}`);
        return n;
    });
}

export function makeFigures(argv: string[]): number {
    const { values } = parseArgs({
        args: argv,
        options: {
            csv: { type: "string" },
            metric: { type: "string", default: "all" },
            gamma: { type: "string", multiple: true },
            deployment: { type: "string", multiple: true },
            variant: { type: "string", multiple: true },
            height: { type: "string", multiple: true },
            out: { type: "string", default: "figures.svg" },
            "overlay-eq5": { type: "boolean", default: false },
        },
    });
    if (!values.csv) {
        throw new Error("--csv is required");
    }
    const metricArg = values.metric as string;
    if (metricArg !== "all" && !METRICS.includes(metricArg as Metric)) {
        throw new Error(`unknown metric: ${metricArg}`);
    }
    const metrics: Metric[] = metricArg === "all" ? METRICS : [metricArg as Metric];

    const rows = parseResultsCsv(readFileSync(values.csv, "utf-8"));
    const panels = metrics.map((metric) => {
        const spec: FigureSpec = {
            metric,
            gammaDb: numbers(values.gamma as string[] | undefined),
            deployments: values.deployment as string[] | undefined,
            variants: values.variant as string[] | undefined,
            heightsM: numbers(values.height as string[] | undefined),
            overlayEq5: values["overlay-eq5"] as boolean,
        };
        const series = buildSeries(rows, spec);
        return renderPanel(series, {
            title: METRIC_LABELS[metric],
            yLabel: METRIC_LABELS[metric],
            yLog: metric !== "coverage",
        });
    });
    writeFileSync(values.out as string, renderFigure(panels));
    console.log(`wrote ${values.out} (${panels.length} panel(s))`);
    return 0;
}

const invokedDirectly = process.argv[1] !== undefined
    && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
    try {
        process.exit(makeFigures(process.argv.slice(2)));
    } catch (err) {
        if (err instanceof CsvSchemaError || err instanceof NoRowsMatchedError) {
            console.error(`error: ${(err as Error).message}`);
            process.exit(2);
        }
        console.error(`error: ${(err as Error).message}`);
        process.exit(1);
    }
}
