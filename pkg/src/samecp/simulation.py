"""Synthetic scenarios, detection metrics and the replicate grid runner.

A scenario places ``m/2`` altered blocks of length ``l`` and height ``s`` on a
zero baseline, one block drawn uniformly inside each of ``m/2`` equal-width
strata of the sequence.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Literal, Mapping, Sequence

import numpy as np

from ._validation import InvalidInputError, as_series

DEFAULT_MASTER_SEED = 20190601
GRID_M = (2, 4, 6)
GRID_L = (25, 50, 100)
GRID_S = (1.0, 1.5, 2.0)

Segmenter = Callable[[np.ndarray], Sequence[int]]


@dataclass(frozen=True)
class SimSpec:
    n: int = 10_000
    m: int = 2
    l: int = 25
    s: float = 1.0
    noise: Literal["gaussian", "pool"] = "gaussian"
    seed: int = DEFAULT_MASTER_SEED

    def __post_init__(self):
        if self.m < 2 or self.m % 2:
            raise InvalidInputError(f"m must be a positive even number, got {self.m}")
        if self.l < 1:
            raise InvalidInputError(f"l must be positive, got {self.l}")
        if self.noise not in ("gaussian", "pool"):
            raise InvalidInputError(f"unknown noise model {self.noise!r}")
        if (self.m // 2) * 2 * self.l >= self.n:
            raise InvalidInputError(
                f"{self.m // 2} blocks of length {self.l} do not fit in n={self.n}"
            )

    @property
    def label(self) -> str:
        return f"m={self.m},l={self.l},s={self.s:g}"


@dataclass(frozen=True)
class GroundTruth:
    change_points: tuple[int, ...]
    mean_function: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class EvalMetrics:
    t: float
    p10: float
    p5: float
    fp: float


def default_grid(n: int = 10_000, noise: str = "gaussian") -> list[SimSpec]:
    """All 27 combinations of ``m``, ``l`` and ``s`` in the default benchmark grid."""
    return [
        SimSpec(n=n, m=m, l=l, s=s, noise=noise)
        for m, l, s in itertools.product(GRID_M, GRID_L, GRID_S)
    ]


def _layout(spec: SimSpec, rng: np.random.Generator) -> tuple[GroundTruth, np.ndarray]:
    blocks = spec.m // 2
    width = spec.n // blocks
    f = np.zeros(spec.n)
    altered = np.zeros(spec.n, dtype=bool)
    cps: list[int] = []
    for i in range(1, blocks + 1):
        lo, hi = (i - 1) * width + spec.l, i * width - spec.l
        if lo >= hi:
            raise InvalidInputError(
                f"empty sampling interval [{lo}, {hi}) for block {i} of {spec.label}"
            )
        cp = int(rng.integers(lo, hi))
        f[cp - 1 : cp - 1 + spec.l] = spec.s
        altered[cp - 1 : cp - 1 + spec.l] = True
        cps.extend((cp, cp + spec.l))
    return GroundTruth(change_points=tuple(cps), mean_function=f), altered


def gen_normal(spec: SimSpec) -> tuple[np.ndarray, GroundTruth]:
    """Block layout plus i.i.d. standard normal noise.

    Uses numpy's PCG64 stream seeded with ``spec.seed``; the block positions
    are drawn first, then ``n`` normal variates.
    """
    if spec.noise != "gaussian":
        raise InvalidInputError(f"gen_normal needs noise='gaussian', got {spec.noise!r}")
    rng = np.random.default_rng(spec.seed)
    truth, _ = _layout(spec, rng)
    return truth.mean_function + rng.standard_normal(spec.n), truth


def gen_pool(spec: SimSpec, neutral_pool, altered_pool) -> tuple[np.ndarray, GroundTruth]:
    """Same layout as :func:`gen_normal`, values resampled from empirical pools.

    Observations inside altered blocks are drawn with replacement from
    ``altered_pool``, all others from ``neutral_pool``.  The mean function of
    the returned truth is the block indicator scaled by ``spec.s``, kept for
    reference only.
    """
    if spec.noise != "pool":
        raise InvalidInputError(f"gen_pool needs noise='pool', got {spec.noise!r}")
    neutral = as_series(neutral_pool, name="neutral_pool")
    altered = as_series(altered_pool, name="altered_pool")
    rng = np.random.default_rng(spec.seed)
    truth, inside = _layout(spec, rng)
    x = neutral[rng.integers(0, neutral.size, spec.n)]
    x[inside] = altered[rng.integers(0, altered.size, int(inside.sum()))]
    return x, truth


def _detected(truth: np.ndarray, est: np.ndarray, tol: int) -> int:
    if truth.size == 0 or est.size == 0:
        return 0
    dist = np.abs(truth[:, None] - est[None, :]).min(axis=1)
    return int(np.count_nonzero(dist <= tol))


def _matched(truth: Sequence[int], est: Sequence[int], tol: int) -> int:
    pairs = sorted(
        (abs(e - t), ti, ei)
        for ti, t in enumerate(truth)
        for ei, e in enumerate(est)
        if abs(e - t) <= tol
    )
    used_t: set[int] = set()
    used_e: set[int] = set()
    for _, ti, ei in pairs:
        if ti not in used_t and ei not in used_e:
            used_t.add(ti)
            used_e.add(ei)
    return len(used_e)


def evaluate(truth, estimated: Sequence[int], elapsed: float = 0.0) -> EvalMetrics:
    """Detection rates at tolerance 10 and 5 plus the excess-detection count.

    A true change-point counts as detected at tolerance ``tol`` when some
    estimate lies within ``tol`` of it (inclusive).  ``fp`` is the number of
    estimates left over after pairing each true change-point with at most one
    estimate within tolerance 10, closest pairs first.  With no true
    change-points the detection rates are ``nan``.
    """
    cps = truth.change_points if isinstance(truth, GroundTruth) else truth
    t_arr = np.asarray(list(cps), dtype=np.int64)
    e_arr = np.asarray(list(estimated), dtype=np.int64)
    if t_arr.size:
        p10 = _detected(t_arr, e_arr, 10) / t_arr.size
        p5 = _detected(t_arr, e_arr, 5) / t_arr.size
    else:
        p10 = p5 = math.nan
    fp = max(0, e_arr.size - _matched(t_arr.tolist(), e_arr.tolist(), 10))
    return EvalMetrics(t=float(elapsed), p10=p10, p5=p5, fp=float(fp))


@dataclass(frozen=True)
class ReportRow:
    method: str
    m: int
    l: int
    s: float
    t_mean: float
    p10_mean: float
    p5_mean: float
    fp_mean: float
    replicates: int
    master_seed: int


CSV_COLUMNS = (
    "method", "m", "l", "s", "t_mean", "p10_mean", "p5_mean", "fp_mean",
    "replicates", "master_seed",
)


@dataclass
class SimReport:
    rows: list[ReportRow]

    def row(self, method: str, m: int, l: int, s: float) -> ReportRow:
        for r in self.rows:
            if (r.method, r.m, r.l, r.s) == (method, m, l, float(s)):
                return r
        raise KeyError((method, m, l, s))

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([
                r.method, r.m, r.l, f"{r.s:g}", f"{r.t_mean:.6f}", f"{r.p10_mean:.6f}",
                f"{r.p5_mean:.6f}", f"{r.fp_mean:.6f}", r.replicates, r.master_seed,
            ])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    def summary(self) -> str:
        lines = []
        width = max((len(r.method) for r in self.rows), default=6)
        current = None
        for r in self.rows:
            key = (r.m, r.l, r.s)
            if key != current:
                current = key
                lines.append(f"\nm={r.m} l={r.l} s={r.s:g} ({r.replicates} replicates)")
                lines.append(f"  {'method':<{width}}  {'t':>8}  {'p10':>6}  {'p5':>6}  {'FP':>6}")
            lines.append(
                f"  {r.method:<{width}}  {r.t_mean:8.4f}  {r.p10_mean:6.4f}  "
                f"{r.p5_mean:6.4f}  {r.fp_mean:6.4f}"
            )
        return "\n".join(lines).lstrip("\n")


class ReplicateError(RuntimeError):
    def __init__(self, spec: SimSpec, replicate: int, method: str | None, cause: Exception):
        where = f"scenario {spec.label}, replicate {replicate}"
        if method:
            where += f", method {method}"
        super().__init__(f"{where}: {cause}")
        self.spec = spec
        self.replicate = replicate
        self.method = method


def child_seed(master_seed: int, scenario: int, replicate: int) -> int:
    """Stable 64-bit seed for one (scenario, replicate) cell of a grid."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(scenario, replicate))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def default_threads() -> int:
    raw = os.environ.get("SAMECP_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInputError(f"SAMECP_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise InvalidInputError(f"SAMECP_THREADS must be a positive integer, got {raw!r}")
    return value


def run_grid(
    methods: Mapping[str, Segmenter],
    scenarios: Iterable[SimSpec],
    replicates: int = 100,
    *,
    master_seed: int = DEFAULT_MASTER_SEED,
    pools: tuple[np.ndarray, np.ndarray] | None = None,
    max_workers: int | None = None,
) -> SimReport:
    """Run every method on the same simulated series and average the metrics.

    Parameters
    ----------
    methods : mapping of name to callable
        Each callable maps a series to a list of 1-based change-points.
    scenarios : iterable of SimSpec
        The ``seed`` field is ignored; seeds derive from ``master_seed`` and
        the (scenario, replicate) position, so adding methods leaves the data
        unchanged.
    replicates : int
    master_seed : int
    pools : (neutral, altered), optional
        Needed for scenarios with ``noise='pool'``.
    max_workers : int, optional
        Replicates run on a thread pool of this size; defaults to the
        ``SAMECP_THREADS`` environment variable, else 1.
    """
    if replicates < 1:
        raise InvalidInputError(f"replicates must be >= 1, got {replicates}")
    if not methods:
        raise InvalidInputError("at least one method is required")
    scenarios = list(scenarios)
    workers = max_workers or default_threads()

    def one(cell: tuple[int, int]) -> list[EvalMetrics]:
        si, rep = cell
        spec = replace(scenarios[si], seed=child_seed(master_seed, si, rep))
        try:
            if spec.noise == "pool":
                if pools is None:
                    raise InvalidInputError("pool scenarios need neutral and altered pools")
                x, truth = gen_pool(spec, *pools)
            else:
                x, truth = gen_normal(spec)
        except Exception as exc:
            raise ReplicateError(spec, rep, None, exc) from exc
        out = []
        for name, fn in methods.items():
            try:
                start = time.perf_counter()
                est = list(fn(x))
                elapsed = time.perf_counter() - start
            except Exception as exc:
                raise ReplicateError(spec, rep, name, exc) from exc
            out.append(evaluate(truth, est, elapsed))
        return out

    cells = [(si, rep) for si in range(len(scenarios)) for rep in range(replicates)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, cells))
    else:
        results = [one(c) for c in cells]

    rows = []
    names = list(methods)
    for si, spec in enumerate(scenarios):
        block = results[si * replicates : (si + 1) * replicates]
        for mi, name in enumerate(names):
            metrics = [r[mi] for r in block]
            rows.append(ReportRow(
                method=name, m=spec.m, l=spec.l, s=float(spec.s),
                t_mean=float(np.mean([e.t for e in metrics])),
                p10_mean=float(np.mean([e.p10 for e in metrics])),
                p5_mean=float(np.mean([e.p5 for e in metrics])),
                fp_mean=float(np.mean([e.fp for e in metrics])),
                replicates=replicates, master_seed=master_seed,
            ))
    return SimReport(rows=rows)
