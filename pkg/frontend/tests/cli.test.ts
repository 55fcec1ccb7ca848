import { execFileSync } from 'child_process'
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { describe, expect, it } from 'vitest'

import { UsageError, parseArgs, run } from '../src/cli.js'

const FIXTURE = join(__dirname, 'fixtures', 'sweep_small.csv')

function tmp(): string {
  return mkdtempSync(join(tmpdir(), 'plotkit-'))
}

describe('argument parsing', () => {
  it('parses the three required flags', () => {
    const opts = parseArgs(['--input', 'a.csv', '--kind', 'q2_scaling',
                            '--output', 'b.svg'])
    expect(opts).toEqual({ input: 'a.csv', kind: 'q2_scaling',
                           output: 'b.svg', overwrite: false })
  })
  it('rejects unknown kinds and missing flags', () => {
    expect(() => parseArgs(['--input', 'a', '--kind', 'pie', '--output', 'b']))
      .toThrow(UsageError)
    expect(() => parseArgs(['--input', 'a'])).toThrow(UsageError)
    expect(() => parseArgs(['--frobnicate'])).toThrow(UsageError)
  })
})

describe('run', () => {
  it('renders all three kinds and honors --overwrite', () => {
    const dir = tmp()
    for (const kind of ['height_vs_logn', 'q2_scaling', 'band_fraction']) {
      const out = join(dir, `${kind}.svg`)
      expect(run(['--input', FIXTURE, '--kind', kind, '--output', out])).toBe(0)
      expect(existsSync(out)).toBe(true)
      // collision without --overwrite is an I/O error; with it, success
      expect(run(['--input', FIXTURE, '--kind', kind, '--output', out])).toBe(3)
      expect(run(['--input', FIXTURE, '--kind', kind, '--output', out,
                  '--overwrite'])).toBe(0)
    }
  })

  it('reruns extract byte-identical data', () => {
    const dir = tmp()
    const a = join(dir, 'a.svg')
    const b = join(dir, 'b.svg')
    expect(run(['--input', FIXTURE, '--kind', 'q2_scaling', '--output', a])).toBe(0)
    expect(run(['--input', FIXTURE, '--kind', 'q2_scaling', '--output', b])).toBe(0)
    expect(readFileSync(a, 'utf8')).toBe(readFileSync(b, 'utf8'))
  })

  it('exits nonzero on schema mismatch and writes nothing', () => {
    const dir = tmp()
    const bad = join(dir, 'bad.csv')
    writeFileSync(bad, readFileSync(FIXTURE, 'utf8')
      .replaceAll('sos-sweep/1', 'sos-sweep/999'))
    const out = join(dir, 'fig.svg')
    expect(run(['--input', bad, '--kind', 'q2_scaling', '--output', out])).toBe(1)
    expect(existsSync(out)).toBe(false)
  })

  it('exits nonzero on empty CSV and writes nothing', () => {
    const dir = tmp()
    const empty = join(dir, 'empty.csv')
    writeFileSync(empty, '')
    const out = join(dir, 'fig.svg')
    expect(run(['--input', empty, '--kind', 'q2_scaling', '--output', out])).toBe(1)
    expect(existsSync(out)).toBe(false)
  })

  it('exits with the I/O code for a missing input', () => {
    expect(run(['--input', '/nonexistent.csv', '--kind', 'q2_scaling',
                '--output', join(tmp(), 'x.svg')])).toBe(3)
  })

  it('usage errors exit with code 2', () => {
    expect(run(['--kind', 'q2_scaling'])).toBe(2)
  })
})

describe('built binary', () => {
  it('runs end to end when dist/ is built', () => {
    const cli = join(__dirname, '..', 'dist', 'cli.js')
    if (!existsSync(cli)) return // covered after `npm run build`
    const dir = tmp()
    const out = join(dir, 'fig.svg')
    execFileSync('node', [cli, '--input', FIXTURE, '--kind', 'band_fraction',
                          '--output', out])
    expect(readFileSync(out, 'utf8')).toContain('</svg>')
  })
})
