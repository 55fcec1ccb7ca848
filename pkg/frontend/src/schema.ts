export const SCHEMA_VERSION = 'sos-sweep/1'

export const REQUIRED_COLUMNS = [
  'schema_version',
  'row_kind',
  'n',
  'beta',
  'lambda_mode',
  'lambda_value',
  'modal_height',
  'h_star',
  'frac_in_band',
  'q2_per_n',
  'total_gradient_per_n2',
  'max_up_contour_len',
  'area_above_hstar_plus1_frac',
] as const

export interface SummaryRow {
  n: number
  beta: number
  lambdaMode: string
  lambdaValue: number
  modalHeight: number
  hStar: number
  fracInBand: number
  q2PerN: number
  totalGradientPerN2: number
  maxUpContourLen: number
  areaAboveFrac: number
}

export type FigureKind = 'height_vs_logn' | 'q2_scaling' | 'band_fraction'

export const FIGURE_KINDS: FigureKind[] = [
  'height_vs_logn',
  'q2_scaling',
  'band_fraction',
]
