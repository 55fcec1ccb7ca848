import { REQUIRED_COLUMNS, SCHEMA_VERSION, SummaryRow } from './schema.js'

export class SchemaMismatchError extends Error {
  constructor(public expected: string, public found: string) {
    super(`schema mismatch: expected ${expected}, found ${found}`)
  }
}

export class EmptyDataError extends Error {}

// The sweep CSV never quotes fields (plain numeric and identifier tokens),
// so a strict line splitter is all the parsing this format needs.
function splitLine(line: string): string[] {
  if (line.includes('"')) {
    throw new Error('quoted CSV fields are not part of the sweep schema')
  }
  return line.split(',')
}

function num(fields: Record<string, string>, key: string): number {
  const raw = fields[key]
  const v = Number(raw)
  if (raw === undefined || raw === '' || Number.isNaN(v)) {
    throw new Error(`bad numeric field ${key}=${raw}`)
  }
  return v
}

/** Summary rows of a sweep CSV; record-level rows are ignored. */
export function parseSummaryRows(text: string): SummaryRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0)
  if (lines.length === 0) throw new EmptyDataError('empty CSV')
  const header = splitLine(lines[0])
  for (const col of REQUIRED_COLUMNS) {
    if (!header.includes(col)) {
      throw new Error(`missing required column ${col}`)
    }
  }
  const rows: SummaryRow[] = []
  for (const line of lines.slice(1)) {
    const parts = splitLine(line)
    const fields: Record<string, string> = {}
    header.forEach((h, i) => (fields[h] = parts[i] ?? ''))
    if (fields['schema_version'] !== SCHEMA_VERSION) {
      throw new SchemaMismatchError(SCHEMA_VERSION, fields['schema_version'])
    }
    if (fields['row_kind'] !== 'summary') continue
    rows.push({
      n: num(fields, 'n'),
      beta: num(fields, 'beta'),
      lambdaMode: fields['lambda_mode'],
      lambdaValue: num(fields, 'lambda_value'),
      modalHeight: num(fields, 'modal_height'),
      hStar: num(fields, 'h_star'),
      fracInBand: num(fields, 'frac_in_band'),
      q2PerN: num(fields, 'q2_per_n'),
      totalGradientPerN2: num(fields, 'total_gradient_per_n2'),
      maxUpContourLen: num(fields, 'max_up_contour_len'),
      areaAboveFrac: num(fields, 'area_above_hstar_plus1_frac'),
    })
  }
  if (rows.length === 0) {
    throw new EmptyDataError('no summary rows in the CSV')
  }
  return rows
}
