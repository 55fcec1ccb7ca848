/** Predicted rigid height at critical pinning: floor(ln(n)/(6b) + 1/3). */
export function criticalHeight(n: number, beta: number): number {
  return Math.floor(Math.log(n) / (6 * beta) + 1 / 3)
}

/** Rigid height without pinning: floor(ln(n)/(4b)). */
export function noPinningHeight(n: number, beta: number): number {
  return Math.floor(Math.log(n) / (4 * beta))
}

/** Sampled overlay curve over [nMin, nMax], log-spaced, as (x=ln n, y). */
export function overlayCurve(
  f: (n: number, beta: number) => number,
  beta: number,
  nMin: number,
  nMax: number,
  points = 200,
): Array<[number, number]> {
  const out: Array<[number, number]> = []
  const a = Math.log(nMin)
  const b = Math.log(nMax)
  for (let i = 0; i <= points; i++) {
    const x = a + ((b - a) * i) / points
    out.push([x, f(Math.exp(x), beta)])
  }
  return out
}
