import { criticalHeight, noPinningHeight, overlayCurve } from './curves.js'
import { FigureKind, SummaryRow } from './schema.js'

const WIDTH = 720
const HEIGHT = 480
const MARGIN = { left: 64, right: 24, top: 40, bottom: 56 }

const SERIES_COLORS: Record<string, string> = {
  zero: '#1f77b4',
  critical: '#d62728',
  explicit: '#2ca02c',
}

interface Scale {
  (v: number): number
}

function linScale(lo: number, hi: number, out0: number, out1: number): Scale {
  const span = hi - lo || 1
  return (v) => out0 + ((v - lo) / span) * (out1 - out0)
}

function fmt(v: number): string {
  return Number(v.toFixed(3)).toString()
}

function polyline(points: Array<[number, number]>, sx: Scale, sy: Scale,
                  color: string, dash = ''): string {
  const pts = points.map(([x, y]) => `${fmt(sx(x))},${fmt(sy(y))}`).join(' ')
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : ''
  return `<polyline fill="none" stroke="${color}" stroke-width="1.5"${dashAttr} points="${pts}"/>`
}

function circles(points: Array<[number, number]>, sx: Scale, sy: Scale,
                 color: string): string {
  return points
    .map(([x, y]) => `<circle cx="${fmt(sx(x))}" cy="${fmt(sy(y))}" r="4" fill="${color}"/>`)
    .join('\n')
}

function frame(title: string, xLabel: string, yLabel: string,
               xTicks: Array<[number, string]>, yTicks: Array<[number, string]>,
               sx: Scale, sy: Scale, body: string, legend: string[]): string {
  const axis: string[] = []
  const x0 = MARGIN.left
  const x1 = WIDTH - MARGIN.right
  const y0 = HEIGHT - MARGIN.bottom
  const y1 = MARGIN.top
  axis.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333"/>`)
  axis.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333"/>`)
  for (const [v, label] of xTicks) {
    const x = fmt(sx(v))
    axis.push(`<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + 5}" stroke="#333"/>`)
    axis.push(`<text x="${x}" y="${y0 + 20}" text-anchor="middle" font-size="11">${label}</text>`)
  }
  for (const [v, label] of yTicks) {
    const y = fmt(sy(v))
    axis.push(`<line x1="${x0 - 5}" y1="${y}" x2="${x0}" y2="${y}" stroke="#333"/>`)
    axis.push(`<text x="${x0 - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11">${label}</text>`)
  }
  const legendBody = legend
    .map((item, i) => `<text x="${x1 - 4}" y="${y1 + 14 + 16 * i}" text-anchor="end" font-size="12">${item}</text>`)
    .join('\n')
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="15">${title}</text>`,
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 16}" text-anchor="middle" font-size="12">${xLabel}</text>`,
    `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 18 ${(y0 + y1) / 2})">${yLabel}</text>`,
    axis.join('\n'),
    body,
    legendBody,
    '</svg>',
  ].join('\n')
}

function groupByMode(rows: SummaryRow[]): Map<string, SummaryRow[]> {
  const out = new Map<string, SummaryRow[]>()
  for (const r of rows) {
    const bucket = out.get(r.lambdaMode) ?? []
    bucket.push(r)
    out.set(r.lambdaMode, bucket)
  }
  for (const bucket of out.values()) bucket.sort((a, b) => a.n - b.n)
  return out
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b)
}

export function renderFigure(kind: FigureKind, rows: SummaryRow[]): string {
  const ns = uniqueSorted(rows.map((r) => r.n))
  const nMin = ns[0]
  const nMax = ns[ns.length - 1]
  const xTicks: Array<[number, string]> = ns.map((n) => [Math.log(n), String(n)])
  const sx = linScale(Math.log(nMin) - 0.15, Math.log(nMax) + 0.15,
                      MARGIN.left, WIDTH - MARGIN.right)
  const groups = groupByMode(rows)

  if (kind === 'height_vs_logn') {
    const betas = uniqueSorted(rows.map((r) => r.beta))
    const heights = rows.map((r) => r.modalHeight)
    let yMax = Math.max(...heights)
    for (const beta of betas) {
      yMax = Math.max(yMax, noPinningHeight(nMax, beta), criticalHeight(nMax, beta))
    }
    const sy = linScale(-0.5, yMax + 0.5, HEIGHT - MARGIN.bottom, MARGIN.top)
    const yTicks: Array<[number, string]> = []
    for (let h = 0; h <= yMax; h++) yTicks.push([h, String(h)])
    const body: string[] = []
    const legend: string[] = []
    for (const beta of betas) {
      body.push(polyline(overlayCurve(criticalHeight, beta, nMin, nMax), sx, sy,
                         '#888', '6 3'))
      body.push(polyline(overlayCurve(noPinningHeight, beta, nMin, nMax), sx, sy,
                         '#444', '2 3'))
      legend.push(`critical-height prediction (dashed), beta=${beta}`)
      legend.push(`no-pinning prediction (dotted), beta=${beta}`)
    }
    for (const [mode, bucket] of groups) {
      const color = SERIES_COLORS[mode] ?? '#9467bd'
      const pts: Array<[number, number]> = bucket.map((r) => [Math.log(r.n), r.modalHeight])
      body.push(polyline(pts, sx, sy, color))
      body.push(circles(pts, sx, sy, color))
      legend.push(`measured modal height, lambda=${mode}`)
    }
    return frame('Modal surface height vs box size', 'n (log axis)',
                 'modal height', xTicks, yTicks, sx, sy, body.join('\n'), legend)
  }

  if (kind === 'q2_scaling') {
    const vals = rows.map((r) => r.q2PerN)
    const yMax = Math.max(...vals) * 1.15 || 1
    const sy = linScale(0, yMax, HEIGHT - MARGIN.bottom, MARGIN.top)
    const yTicks: Array<[number, string]> = [0, yMax / 2, yMax].map((v) => [v, fmt(v)])
    const body: string[] = []
    const legend: string[] = []
    for (const [mode, bucket] of groups) {
      const color = SERIES_COLORS[mode] ?? '#9467bd'
      const pts: Array<[number, number]> = bucket.map((r) => [Math.log(r.n), r.q2PerN])
      body.push(polyline(pts, sx, sy, color))
      body.push(circles(pts, sx, sy, color))
      legend.push(`paired zeros per n, lambda=${mode}`)
    }
    return frame('Paired-zero count scaling', 'n (log axis)',
                 'paired zeros / n', xTicks, yTicks, sx, sy, body.join('\n'), legend)
  }

  // band_fraction
  const sy = linScale(0, 1, HEIGHT - MARGIN.bottom, MARGIN.top)
  const yTicks: Array<[number, string]> = [0, 0.25, 0.5, 0.75, 1].map((v) => [v, fmt(v)])
  const body: string[] = []
  const legend: string[] = []
  body.push(polyline([[Math.log(nMin) - 0.15, 0.5], [Math.log(nMax) + 0.15, 0.5]],
                     sx, sy, '#aaa', '4 4'))
  legend.push('0.5 reference')
  for (const [mode, bucket] of groups) {
    const color = SERIES_COLORS[mode] ?? '#9467bd'
    const pts: Array<[number, number]> = bucket.map((r) => [Math.log(r.n), r.fracInBand])
    body.push(polyline(pts, sx, sy, color))
    body.push(circles(pts, sx, sy, color))
    legend.push(`fraction in predicted band, lambda=${mode}`)
  }
  return frame('Fraction of sites in the predicted height band', 'n (log axis)',
               'band fraction', xTicks, yTicks, sx, sy, body.join('\n'), legend)
}
