export { parseSummaryRows, SchemaMismatchError, EmptyDataError } from './csv.js'
export { criticalHeight, noPinningHeight, overlayCurve } from './curves.js'
export { renderFigure } from './svg.js'
export { run, parseArgs, UsageError } from './cli.js'
export * from './schema.js'
