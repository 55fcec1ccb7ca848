"""Parameter-sweep plans, parallel execution, and the versioned CSV dataset.

A plan is a grid over box sizes, inverse temperatures, and pinning modes;
each cell runs `replicates` independent chains.  The output CSV carries one
record row per measurement and one summary row per cell, under a fixed
versioned column set; runs are byte-identical for fixed seeds regardless of
the worker count, because jobs are assembled in cell order.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .lattice import Mode, ModelParams
from .measure import lambda_critical, target_height
from .sampler import ChainConfig, StartSpec, run_chain

SCHEMA_VERSION = "sos-sweep/1"

CSV_COLUMNS = [
    "schema_version", "row_kind", "n", "beta", "lambda_mode", "lambda_value",
    "seed", "sweeps", "burn_in", "modal_height", "h_star", "frac_in_band",
    "q2_per_n", "total_gradient_per_n2", "max_up_contour_len",
    "area_above_hstar_plus1_frac", "replicate", "sweep", "q2_count",
    "total_gradient",
]


@dataclass(frozen=True)
class LambdaMode:
    kind: str  # "zero" | "critical" | "explicit"
    value: float = 0.0

    def resolve(self, beta: float) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "critical":
            return lambda_critical(beta)
        return self.value

    @classmethod
    def parse(cls, raw) -> "LambdaMode":
        if isinstance(raw, str):
            if raw in ("zero", "critical"):
                return cls(raw)
            return cls("explicit", float(raw))
        if isinstance(raw, dict):
            if raw.get("mode") == "explicit":
                return cls("explicit", float(raw["value"]))
            return cls(raw["mode"])
        return cls("explicit", float(raw))


@dataclass(frozen=True)
class ChainTemplate:
    mode: Mode = Mode.NONNEGATIVE
    sweeps: int = 2000
    burn_in: int = 500
    thinning: int = 100
    seed: int = 0
    start_flat: int = 0
    window_hi_pad: int = 8  # window top = h_star + pad
    contour_stats: bool = True


@dataclass(frozen=True)
class SweepPlan:
    ns: tuple
    betas: tuple
    lambda_modes: tuple
    replicates: int
    chain: ChainTemplate
    output: str

    def __post_init__(self):
        if not (self.ns and self.betas and self.lambda_modes):
            raise ValueError("sweep grid must be nonempty")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if len(set(self.cell_keys())) != len(self.cell_keys()):
            raise ValueError("duplicate cells in the grid")

    def cell_keys(self) -> list:
        return [(n, beta, lm.kind, lm.resolve(beta))
                for n in self.ns for beta in self.betas
                for lm in self.lambda_modes]

    @classmethod
    def from_json(cls, payload: dict, output_override: str | None = None) -> "SweepPlan":
        chain_raw = payload.get("chain", {})
        mode = Mode(chain_raw.get("mode", "nonnegative"))
        chain = ChainTemplate(
            mode=mode,
            sweeps=int(chain_raw.get("sweeps", 2000)),
            burn_in=int(chain_raw.get("burn_in", 500)),
            thinning=int(chain_raw.get("thinning", 100)),
            seed=int(chain_raw.get("seed", 0)),
            start_flat=int(chain_raw.get("start_flat", 0)),
            window_hi_pad=int(chain_raw.get("window_hi_pad", 8)),
            contour_stats=bool(chain_raw.get("contour_stats", True)),
        )
        return cls(
            ns=tuple(int(n) for n in payload["n"]),
            betas=tuple(float(b) for b in payload["beta"]),
            lambda_modes=tuple(LambdaMode.parse(x) for x in payload["lambda_modes"]),
            replicates=int(payload.get("replicates", 1)),
            chain=chain,
            output=output_override or payload.get("output", "sweep.csv"),
        )


def _cell_config(plan: SweepPlan, cell_index: int, n: int, beta: float,
                 lam: float, replicate: int) -> ChainConfig:
    t = plan.chain
    h_star = target_height(n, beta).h_star
    lo = 0 if t.mode is Mode.NONNEGATIVE else -6
    return ChainConfig(
        n=n, params=ModelParams(beta=beta, lam=lam), mode=t.mode,
        window=(lo, h_star + t.window_hi_pad), sweeps=t.sweeps,
        burn_in=t.burn_in, thinning=t.thinning, seed=t.seed,
        chain_id=rng.derive_chain_id(cell_index, replicate),
        start=StartSpec.flat(t.start_flat), contour_stats=t.contour_stats)


def _summary(n: int, beta: float, records: list) -> dict:
    side2 = None
    hist_total = None
    lo = None
    fr, q2n, gn2, area = [], [], [], []
    max_len = 0
    for rec in records:
        if hist_total is None:
            hist_total = rec.histogram.astype(np.int64).copy()
            lo = rec.window_lo
            side2 = int(rec.histogram.sum())
        else:
            hist_total += rec.histogram
        fr.append(rec.frac_in_band)
        q2n.append(rec.q2_count / n)
        gn2.append(rec.total_gradient / (n * n))
        area.append(rec.up_area / side2)
        max_len = max(max_len, rec.max_up_len)
    return {
        "modal_height": lo + int(np.argmax(hist_total)),
        "frac_in_band": float(np.mean(fr)),
        "q2_per_n": float(np.mean(q2n)),
        "total_gradient_per_n2": float(np.mean(gn2)),
        "max_up_contour_len": max_len,
        "area_above_hstar_plus1_frac": float(np.mean(area)),
    }


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def worker_count() -> int:
    env = os.environ.get("SOS_THREADS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def run_sweep(plan: SweepPlan, max_workers: int | None = None) -> str:
    """Run every cell of the plan and write the CSV; returns the output path.

    Jobs execute in a thread pool (the sweep kernel releases the GIL); rows
    are assembled strictly in (cell, replicate, sweep) order.
    """
    if max_workers is None:
        max_workers = worker_count()
    jobs = []
    cell_meta = []
    for ci, (n, beta, kind, lam) in enumerate(plan.cell_keys()):
        cell_meta.append((n, beta, kind, lam))
        for rep in range(plan.replicates):
            jobs.append((ci, rep, _cell_config(plan, ci, n, beta, lam, rep)))

    def run_job(job):
        _, _, cfg = job
        return list(run_chain(cfg))

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(run_job, jobs))

    by_cell: dict = {}
    for (ci, rep, cfg), recs in zip(jobs, results):
        by_cell.setdefault(ci, []).append((rep, cfg, recs))

    tmp = plan.output + ".partial"
    os.makedirs(os.path.dirname(os.path.abspath(plan.output)), exist_ok=True)
    with open(tmp, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for ci, (n, beta, kind, lam) in enumerate(cell_meta):
            h_star = target_height(n, beta).h_star
            base = {
                "schema_version": SCHEMA_VERSION, "n": n, "beta": beta,
                "lambda_mode": kind, "lambda_value": lam,
                "seed": plan.chain.seed, "sweeps": plan.chain.sweeps,
                "burn_in": plan.chain.burn_in, "h_star": h_star,
            }
            all_records = []
            for rep, cfg, recs in sorted(by_cell[ci], key=lambda t: t[0]):
                all_records.extend(recs)
                for rec in recs:
                    row = dict(base)
                    row.update({
                        "row_kind": "record", "replicate": rep,
                        "sweep": rec.sweep, "modal_height": rec.modal_height,
                        "frac_in_band": rec.frac_in_band,
                        "q2_per_n": rec.q2_count / n,
                        "total_gradient_per_n2": rec.total_gradient / (n * n),
                        "max_up_contour_len": rec.max_up_len,
                        "area_above_hstar_plus1_frac":
                            float(rec.up_area) / float(rec.histogram.sum()),
                        "q2_count": rec.q2_count,
                        "total_gradient": rec.total_gradient,
                    })
                    writer.writerow([_fmt(row.get(c, "")) for c in CSV_COLUMNS])
            srow = dict(base)
            srow["row_kind"] = "summary"
            srow.update(_summary(n, beta, all_records))
            writer.writerow([_fmt(srow.get(c, "")) for c in CSV_COLUMNS])
    os.replace(tmp, plan.output)
    return plan.output


def load_summary_rows(path: str) -> list[dict]:
    """Summary rows of a sweep CSV as dicts, schema-checked."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [r for r in reader if r.get("row_kind") == "summary"]
    for r in rows:
        if r["schema_version"] != SCHEMA_VERSION:
            raise ValueError(
                f"schema mismatch: expected {SCHEMA_VERSION}, "
                f"found {r['schema_version']}")
    return rows
