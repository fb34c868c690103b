/**
 * Parsing and validation of the simulator's sweep CSV output.
 *
 * The schema is fixed: one row per (sweep point, SINR threshold), values
 * are plain decimals with no quoting, so a straight split is sufficient.
 */

export interface ResultRow {
    lambda: number;
    deployment: string;
    variant: string;
    heightM: number;
    gammaDb: number;
    activeDensity: number;
    activeDensityEq5: number;
    pCov: number;
    pCovCi: number;
    reliableUeDensity: number;
    nSinrSamples: number;
    nDrops: number;
}

export const REQUIRED_COLUMNS = [
    "lambda_bs_per_km2",
    "deployment",
    "variant",
    "L_m",
    "gamma_db",
    "active_density",
    "active_density_eq5",
    "p_cov",
    "p_cov_ci",
    "reliable_ue_density",
    "n_sinr_samples",
    "n_drops",
] as const;

export class CsvSchemaError extends Error {}

export function parseResultsCsv(text: string): ResultRow[] {
    const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
    if (lines.length === 0) {
        throw new CsvSchemaError("empty CSV: no header row");
    }
    const header = lines[0].split(",");
    const index = new Map<string, number>();
    header.forEach((name, i) => index.set(name.trim(), i));
    for (const column of REQUIRED_COLUMNS) {
        if (!index.has(column)) {
            throw new CsvSchemaError(`missing column: ${column}`);
        }
    }
    const at = (fields: string[], column: string): string =>
        fields[index.get(column)!];
    const num = (fields: string[], column: string, line: number): number => {
        const raw = at(fields, column);
        const value = Number(raw);
        if (raw === undefined || raw === "" || (Number.isNaN(value) && raw !== "nan")) {
            throw new CsvSchemaError(`line ${line}: bad value for ${column}: ${raw}`);
        }
        return value;
    };

    const rows: ResultRow[] = [];
    for (let i = 1; i < lines.length; i++) {
        const fields = lines[i].split(",");
        if (fields.length < header.length) {
            throw new CsvSchemaError(`line ${i + 1}: expected ${header.length} fields`);
        }
        rows.push({
            lambda: num(fields, "lambda_bs_per_km2", i + 1),
            deployment: at(fields, "deployment"),
            variant: at(fields, "variant"),
            heightM: num(fields, "L_m", i + 1),
            gammaDb: num(fields, "gamma_db", i + 1),
            activeDensity: num(fields, "active_density", i + 1),
            activeDensityEq5: num(fields, "active_density_eq5", i + 1),
            pCov: num(fields, "p_cov", i + 1),
            pCovCi: num(fields, "p_cov_ci", i + 1),
            reliableUeDensity: num(fields, "reliable_ue_density", i + 1),
            nSinrSamples: num(fields, "n_sinr_samples", i + 1),
            nDrops: num(fields, "n_drops", i + 1),
        });
    }
    return rows;
}
