import { existsSync, readFileSync, writeFileSync } from 'fs'

import { EmptyDataError, SchemaMismatchError, parseSummaryRows } from './csv.js'
import { FIGURE_KINDS, FigureKind } from './schema.js'
import { renderFigure } from './svg.js'

const EXIT_DATA = 1
const EXIT_USAGE = 2
const EXIT_IO = 3

interface Options {
  input: string
  kind: FigureKind
  output: string
  overwrite: boolean
}

export function parseArgs(argv: string[]): Options {
  let input = ''
  let kind = ''
  let output = ''
  let overwrite = false
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i]
    if (a === '--input') input = argv[++i] ?? ''
    else if (a === '--kind') kind = argv[++i] ?? ''
    else if (a === '--output') output = argv[++i] ?? ''
    else if (a === '--overwrite') overwrite = true
    else throw new UsageError(`unknown argument: ${a}`)
  }
  if (!input || !kind || !output) {
    throw new UsageError('required: --input <csv> --kind <kind> --output <svg>')
  }
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    throw new UsageError(`unknown kind ${kind}; one of ${FIGURE_KINDS.join(', ')}`)
  }
  return { input, kind: kind as FigureKind, output, overwrite }
}

export class UsageError extends Error {}

export function run(argv: string[]): number {
  let opts: Options
  try {
    opts = parseArgs(argv)
  } catch (err) {
    console.error(String(err))
    return EXIT_USAGE
  }
  if (!existsSync(opts.input)) {
    console.error(`input not found: ${opts.input}`)
    return EXIT_IO
  }
  if (existsSync(opts.output) && !opts.overwrite) {
    console.error(`output exists: ${opts.output} (pass --overwrite to replace)`)
    return EXIT_IO
  }
  let svg: string
  try {
    const rows = parseSummaryRows(readFileSync(opts.input, 'utf8'))
    svg = renderFigure(opts.kind, rows)
  } catch (err) {
    if (err instanceof SchemaMismatchError) {
      console.error(err.message)
    } else if (err instanceof EmptyDataError) {
      console.error(`no data to plot: ${err.message}`)
    } else {
      console.error(String(err))
    }
    return EXIT_DATA
  }
  try {
    writeFileSync(opts.output, svg)
  } catch (err) {
    console.error(`cannot write ${opts.output}: ${String(err)}`)
    return EXIT_IO
  }
  console.error(`wrote ${opts.output}`)
  return 0
}

if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
  process.exit(run(process.argv.slice(2)))
}
