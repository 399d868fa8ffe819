"""Seeded Monte Carlo sweeps over G(n, n^-alpha).

Every trial is a pure function of ``(config, alpha index, trial index)``: the
graph seed is mixed from the master seed with :class:`numpy.random.SeedSequence`,
so trials can run in any order or in parallel and still reproduce exactly.
Aggregates are kept as exact integer/rational sums, which makes the merge
associative and commutative.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from eulermag.asao_izumihara import MIN_ELL, build_pair, emh_via_ai_all
from eulermag.complexes import TupleComplex, all_reduced_homology
from eulermag.graph import INFINITY, ErParams, Graph, from_edge_list, path_metric, sample_er
from eulermag.shelling import (
    DEFAULT_BUDGET,
    FacetDims,
    ShellStatus,
    et_shelling_threshold,
    etsub_shelling_threshold,
    find_shelling,
    vanishing_threshold,
)
from eulermag.trails import emh

SCHEMA_VERSION = 1
ALL_PAIRS_MAX_N = 12
DEFAULT_SAMPLED_PAIRS = 32
SUMMARY_COLUMNS = [
    "alpha",
    "mean_betti",
    "se_betti",
    "torsion_rate",
    "shellable_rate",
    "unknown_rate",
    "mean_ft_ratio",
]


class ConfigError(ValueError):
    pass


class TorsionImplicationError(AssertionError):
    """A shellable complex (or fully shellable pair) came with torsion."""


@dataclass(frozen=True)
class SweepConfig:
    n: int
    alpha_grid: tuple[float, ...]
    trials: int = 1
    seed: int = 0
    ell: int = 3
    # AUTO means ALL_PAIRS for n <= 12 and SAMPLED(sampled_pairs) above
    pairs: str = "AUTO"
    sampled_pairs: int = DEFAULT_SAMPLED_PAIRS
    step_budget: int = DEFAULT_BUDGET
    time_budget: float = 600.0
    workers: int = 1
    graph_edges: Optional[tuple[tuple[int, int], ...]] = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.ell < 1:
            raise ConfigError("ell must be >= 1")
        if not self.alpha_grid:
            raise ConfigError("alpha_grid must not be empty")
        if list(self.alpha_grid) != sorted(self.alpha_grid):
            raise ConfigError("alpha_grid must be sorted ascending")
        if any(a < 0 for a in self.alpha_grid):
            raise ConfigError("alpha values must be non-negative")
        if self.step_budget <= 0 or self.time_budget <= 0:
            raise ConfigError("budgets must be positive")
        if self.pairs not in ("AUTO", "ALL_PAIRS", "SAMPLED"):
            raise ConfigError(f"unknown pair policy {self.pairs!r}")
        if self.sampled_pairs < 1:
            raise ConfigError("sampled pair count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @property
    def pair_policy(self) -> str:
        count = self.effective_sampled_pairs
        return "ALL_PAIRS" if count is None else f"SAMPLED({count})"

    @property
    def effective_sampled_pairs(self) -> Optional[int]:
        """Pair sample size, or None for all pairs."""
        if self.pairs == "ALL_PAIRS" or (self.pairs == "AUTO" and self.n <= ALL_PAIRS_MAX_N):
            return None
        return self.sampled_pairs

    def to_json(self) -> dict:
        out = asdict(self)
        out["alpha_grid"] = list(self.alpha_grid)
        out["pair_policy"] = self.pair_policy
        out.pop("pairs")
        out.pop("workers")
        if self.graph_edges is not None:
            out["graph_edges"] = [list(e) for e in self.graph_edges]
        return out


def derive_seed(master: int, alpha_index: int, trial_index: int) -> int:
    ss = np.random.SeedSequence([master, alpha_index, trial_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class PairRecord:
    a: int
    b: int
    et_dims: list[int]
    etsub_dims: list[int]
    et_status: str
    etsub_status: str
    et_threshold: Optional[str]
    etsub_threshold: Optional[str]
    emh: list[dict]

    @property
    def both_shellable(self) -> bool:
        return self.et_status == ShellStatus.SHELLABLE.value and self.etsub_status == ShellStatus.SHELLABLE.value

    @property
    def has_torsion(self) -> bool:
        return any(h["torsion"] for h in self.emh)

    @property
    def any_unknown(self) -> bool:
        return ShellStatus.UNKNOWN.value in (self.et_status, self.etsub_status)


@dataclass
class TrialResult:
    alpha: float
    alpha_index: int
    trial_index: int
    graph_seed: int
    n: int
    num_edges: int
    betti_ll: int
    torsion_found: bool
    emh: list[dict]
    pairs: list[PairRecord]
    shellable_complexes_checked: int = 0
    seconds: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("seconds")
        return out


def _shell(x: TupleComplex, cfg: SweepConfig, deadline: float):
    remaining = max(deadline - time.monotonic(), 1e-3)
    return find_shelling(x, cfg.step_budget, time_limit=remaining)


def _check_torsion_free(x: TupleComplex, label: str) -> None:
    for h in all_reduced_homology(x):
        if h.torsion:
            raise TorsionImplicationError(f"{label} is shellable but has torsion {h.torsion} in degree {h.degree}")


def _select_pairs(g: Graph, dm, cfg: SweepConfig, seed: int) -> list[tuple[int, int]]:
    # pairs with d(a, b) > ell have empty complexes and zero chains; leave them out
    eligible = [
        (a, b)
        for a in range(g.n)
        for b in range(g.n)
        if a != b and dm[a][b] is not INFINITY and dm[a][b] <= cfg.ell
    ]
    count = cfg.effective_sampled_pairs
    if count is None or len(eligible) <= count:
        return eligible
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 1]).generate_state(1, np.uint64)[0]))
    idx = sorted(rng.choice(len(eligible), size=count, replace=False).tolist())
    return [eligible[i] for i in idx]


def run_trial(cfg: SweepConfig, alpha_index: int, trial_index: int) -> TrialResult:
    start = time.monotonic()
    deadline = start + cfg.time_budget
    alpha = cfg.alpha_grid[alpha_index]
    seed = derive_seed(cfg.seed, alpha_index, trial_index)
    if cfg.graph_edges is not None:
        g = from_edge_list(cfg.n, cfg.graph_edges)
    else:
        g = sample_er(ErParams(cfg.n, alpha, seed))
    dm = path_metric(g)
    ell = cfg.ell

    totals = emh(g, ell, None, dm)
    records = []
    checked = 0
    # the AI pair only exists for ell >= 3; below that only EMH is recorded
    chosen = _select_pairs(g, dm, cfg, seed) if ell >= MIN_ELL else []
    for a, b in chosen:
        pair = build_pair(g, a, b, ell, dm)
        big_res = _shell(pair.big, cfg, deadline)
        sub_res = _shell(pair.sub, cfg, deadline)
        for res, x, name in ((big_res, pair.big, "ET"), (sub_res, pair.sub, "ETsub")):
            if res.status is ShellStatus.SHELLABLE:
                _check_torsion_free(x, f"{name}({a},{b}) at alpha={alpha}, trial={trial_index}")
                checked += 1
        groups = emh_via_ai_all(pair)
        big_dims = pair.big.facet_dims()
        sub_dims = pair.sub.facet_dims()
        rec = PairRecord(
            a=a,
            b=b,
            et_dims=big_dims,
            etsub_dims=sub_dims,
            et_status=big_res.status.value,
            etsub_status=sub_res.status.value,
            et_threshold=_fraction_str(et_shelling_threshold(FacetDims(tuple(big_dims), ell))) if big_dims else None,
            etsub_threshold=_fraction_str(etsub_shelling_threshold(FacetDims(tuple(sub_dims), ell))) if sub_dims else None,
            emh=[h.to_dict() for h in groups],
        )
        if rec.both_shellable and rec.has_torsion:
            raise TorsionImplicationError(
                f"EMH_(*,{ell})({a},{b}) has torsion although both AI complexes are shellable"
            )
        records.append(rec)

    torsion = any(h.torsion for h in totals) or any(r.has_torsion for r in records)
    return TrialResult(
        alpha=alpha,
        alpha_index=alpha_index,
        trial_index=trial_index,
        graph_seed=seed,
        n=g.n,
        num_edges=g.num_edges,
        betti_ll=totals[ell].free_rank,
        torsion_found=torsion,
        emh=[h.to_dict() for h in totals],
        pairs=records,
        shellable_complexes_checked=checked,
        seconds=time.monotonic() - start,
    )


@dataclass
class Aggregate:
    """Exact running sums for one alpha value."""

    trials: int = 0
    betti_sum: int = 0
    betti_sq_sum: int = 0
    torsion_trials: int = 0
    pairs: int = 0
    shellable_pairs: int = 0
    unknown_pairs: int = 0
    shellable_torsion: int = 0
    ft_sum: Fraction = Fraction(0)
    ft_count: int = 0

    @classmethod
    def of(cls, r: TrialResult, ell: int) -> "Aggregate":
        agg = cls(
            trials=1,
            betti_sum=r.betti_ll,
            betti_sq_sum=r.betti_ll**2,
            torsion_trials=int(r.torsion_found),
        )
        for p in r.pairs:
            agg.pairs += 1
            agg.shellable_pairs += p.both_shellable
            agg.unknown_pairs += p.any_unknown
            agg.shellable_torsion += p.both_shellable and p.has_torsion
            if p.et_dims:
                agg.ft_sum += Fraction(p.et_dims[-1], ell)
                agg.ft_count += 1
        return agg

    def merge(self, other: "Aggregate") -> "Aggregate":
        return Aggregate(
            self.trials + other.trials,
            self.betti_sum + other.betti_sum,
            self.betti_sq_sum + other.betti_sq_sum,
            self.torsion_trials + other.torsion_trials,
            self.pairs + other.pairs,
            self.shellable_pairs + other.shellable_pairs,
            self.unknown_pairs + other.unknown_pairs,
            self.shellable_torsion + other.shellable_torsion,
            self.ft_sum + other.ft_sum,
            self.ft_count + other.ft_count,
        )

    def row(self, alpha: float) -> dict:
        t = self.trials
        mean = Fraction(self.betti_sum, t)
        if t > 1:
            var = (Fraction(self.betti_sq_sum) - t * mean * mean) / (t - 1)
            se = math.sqrt(float(var) / t)
        else:
            se = 0.0
        return {
            "alpha": alpha,
            "mean_betti": float(mean),
            "se_betti": se,
            "torsion_rate": self.torsion_trials / t,
            "shellable_rate": self.shellable_pairs / self.pairs if self.pairs else 1.0,
            "unknown_rate": self.unknown_pairs / self.pairs if self.pairs else 0.0,
            "mean_ft_ratio": float(self.ft_sum / self.ft_count) if self.ft_count else float("nan"),
            "trials": t,
            "pairs": self.pairs,
            "shellable_pairs_with_torsion": self.shellable_torsion,
        }


@dataclass
class SweepSummary:
    config: SweepConfig
    rows: list[dict]
    thresholds: dict
    trials: list[TrialResult]

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for row in self.rows:
            w.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])
        return buf.getvalue()

    def raw_jsonl(self) -> str:
        return "".join(json.dumps(t.to_json(), sort_keys=True) + "\n" for t in self.trials)

    def summary_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_json(),
            "rows": [{k: _jsonable(v) for k, v in row.items()} for row in self.rows],
            "thresholds": self.thresholds,
        }

    def timings_jsonl(self) -> str:
        return "".join(
            json.dumps({"alpha_index": t.alpha_index, "trial_index": t.trial_index, "seconds": round(t.seconds, 4)})
            + "\n"
            for t in self.trials
        )

    def write(self, outdir: str | Path) -> dict[str, Path]:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        paths = {
            "summary.csv": outdir / "summary.csv",
            "raw.jsonl": outdir / "raw.jsonl",
            "summary.json": outdir / "summary.json",
            "timings.jsonl": outdir / "timings.jsonl",
        }
        paths["summary.csv"].write_text(self.summary_csv())
        paths["raw.jsonl"].write_text(self.raw_jsonl())
        paths["summary.json"].write_text(json.dumps(self.summary_json(), indent=2, sort_keys=True) + "\n")
        paths["timings.jsonl"].write_text(self.timings_jsonl())
        return paths


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(round(v, 12))
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    return v


def summarize(cfg: SweepConfig, results: Iterable[TrialResult]) -> SweepSummary:
    results = sorted(results, key=lambda r: (r.alpha_index, r.trial_index))
    aggs: dict[int, Aggregate] = {}
    dims_seen: dict[tuple, dict] = {}
    for r in results:
        agg = Aggregate.of(r, cfg.ell)
        aggs[r.alpha_index] = aggs[r.alpha_index].merge(agg) if r.alpha_index in aggs else agg
        for p in r.pairs:
            key = ("ET", tuple(p.et_dims))
            if p.et_dims and key not in dims_seen:
                dims_seen[key] = {"complex": "ET", "dims": p.et_dims, "threshold": p.et_threshold, "count": 0}
            if p.et_dims:
                dims_seen[key]["count"] += 1
            key = ("ETsub", tuple(p.etsub_dims))
            if p.etsub_dims and key not in dims_seen:
                dims_seen[key] = {"complex": "ETsub", "dims": p.etsub_dims, "threshold": p.etsub_threshold, "count": 0}
            if p.etsub_dims:
                dims_seen[key]["count"] += 1
    rows = [aggs[i].row(cfg.alpha_grid[i]) for i in sorted(aggs)]
    thresholds = {
        "vanishing": _fraction_str(vanishing_threshold(cfg.ell)),
        "vanishing_float": float(vanishing_threshold(cfg.ell)),
        "observed": [dims_seen[k] for k in sorted(dims_seen)],
    }
    return SweepSummary(cfg, rows, thresholds, results)


def _run_one(args):
    cfg, ai, ti = args
    return run_trial(cfg, ai, ti)


def run_sweep(cfg: SweepConfig) -> SweepSummary:
    tasks = [(cfg, ai, ti) for ai in range(len(cfg.alpha_grid)) for ti in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=1))
    else:
        results = [_run_one(t) for t in tasks]
    return summarize(cfg, results)


# ---------------------------------------------------------------------------
# Config parsing


def alpha_range(start: float, stop: float, step: float) -> tuple[float, ...]:
    """Inclusive grid, rounded to avoid 0.30000000000000004-style drift."""
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 10) for i in range(count))


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in ("n", "trials", "ell", "step_budget", "workers", "sampled_pairs"):
            return int(raw)
        if key == "seed":
            return int(raw, 0)
        if key == "time_budget":
            return float(raw)
        if key == "alpha_grid":
            return tuple(float(x) for x in raw.replace(",", " ").split())
        if key in ("alpha_min", "alpha_max", "alpha_step"):
            return float(raw)
        if key == "pair_policy":
            return raw
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    raise ConfigError(f"unknown config key {key!r}")


def config_from_mapping(values: dict) -> SweepConfig:
    values = dict(values)
    if "alpha_grid" not in values:
        if {"alpha_min", "alpha_max", "alpha_step"} <= values.keys():
            values["alpha_grid"] = alpha_range(values.pop("alpha_min"), values.pop("alpha_max"), values.pop("alpha_step"))
        else:
            raise ConfigError("need alpha_grid or alpha_min/alpha_max/alpha_step")
    else:
        for k in ("alpha_min", "alpha_max", "alpha_step"):
            values.pop(k, None)
    policy = values.pop("pair_policy", None)
    if policy is not None:
        values.update(parse_pair_policy(policy))
    if "n" not in values:
        raise ConfigError("n is required")
    try:
        return SweepConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def parse_pair_policy(text: str) -> dict:
    """``ALL_PAIRS``, ``SAMPLED(32)``, ``SAMPLED`` or ``AUTO``."""
    p = str(text).strip().upper()
    if p in ("ALL_PAIRS", "ALL"):
        return {"pairs": "ALL_PAIRS"}
    if p == "AUTO":
        return {"pairs": "AUTO"}
    if p.startswith("SAMPLED"):
        inner = p[len("SAMPLED") :].strip("():= ")
        try:
            return {"pairs": "SAMPLED", "sampled_pairs": int(inner) if inner else DEFAULT_SAMPLED_PAIRS}
        except ValueError:
            raise ConfigError(f"bad pair policy {text!r}") from None
    raise ConfigError(f"unknown pair policy {text!r}")


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        values[key] = _parse_value(key, val)
    return values
