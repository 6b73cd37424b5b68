import Papa from "papaparse";
import { z } from "zod";

export class SchemaError extends Error {}

/**
 * Parse a CSV string and validate every row against a zod schema.
 * Numeric fields are coerced with Number(); empty input is an error.
 */
export function parseCsv<S extends z.ZodObject<z.ZodRawShape>>(
  text: string,
  schema: S,
): z.infer<S>[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse error: ${parsed.errors[0].message}`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError("CSV has no data rows");
  }
  const fields = new Set(parsed.meta.fields ?? []);
  for (const key of Object.keys(schema.shape)) {
    if (!fields.has(key)) {
      throw new SchemaError(`CSV missing required column "${key}"`);
    }
  }
  return parsed.data.map((raw, i) => {
    const coerced: Record<string, unknown> = {};
    for (const [key, field] of Object.entries(schema.shape)) {
      const isString =
        field instanceof z.ZodEnum || field instanceof z.ZodString;
      coerced[key] = isString ? raw[key] : Number(raw[key]);
    }
    const res = schema.safeParse(coerced);
    if (!res.success) {
      throw new SchemaError(
        `row ${i + 2}: ${res.error.issues[0].path.join(".")} ${res.error.issues[0].message}`,
      );
    }
    return res.data;
  });
}
