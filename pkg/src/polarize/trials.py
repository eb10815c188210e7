"""Seeded batches of random unit-vector systems run through the witness pipeline."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .sphere_opt import witness_from_longest_sum
from .vectors import UnitVectorSet, generate

MIX = ("random_uniform", "perturbed_orthonormal", "clustered")


def worker_count() -> int:
    """Worker cap from ``POLARIZE_THREADS``; defaults to all cores."""
    raw = os.environ.get("POLARIZE_THREADS", "").strip()
    cores = os.cpu_count() or 1
    if not raw:
        return cores
    try:
        return max(1, min(int(raw), cores))
    except ValueError:
        return cores


def random_instance(n: int, seed: int, index: int) -> tuple[str, UnitVectorSet]:
    """The ``index``-th instance of the mix for dimension ``n`` under ``seed``.

    Kinds rotate through ``MIX``; the parameter and the generator seed come
    from a ``SeedSequence`` keyed on ``(seed, n, index)``.
    """
    ss = np.random.SeedSequence([seed, n, index])
    rng = np.random.default_rng(ss)
    kind = MIX[index % len(MIX)]
    sub = int(rng.integers(2**63))
    if kind == "perturbed_orthonormal":
        param = float(rng.uniform(0.01, 0.5))
    elif kind == "clustered":
        param = float(rng.uniform(0.05, 1.0))
    else:
        param = None
    return kind, generate(kind, n, sub, param)


@dataclass(frozen=True)
class TrialSummary:
    n: int
    trials: int
    passed: int
    min_ratio: float  # smallest product / bound seen
    worst_index: int

    @property
    def ok(self) -> bool:
        return self.passed == self.trials


def _run_chunk(n, seed, indices):
    passed, worst, worst_i = 0, math.inf, -1
    for i in indices:
        _, vs = random_instance(n, seed, i)
        rep = witness_from_longest_sum(vs)
        passed += rep.passes
        ratio = rep.product / rep.bound
        if ratio < worst:
            worst, worst_i = ratio, i
    return passed, worst, worst_i


def run_random_trials(n: int, trials: int, seed: int, workers: int | None = None) -> TrialSummary:
    """Longest-sum witness on ``trials`` random systems; results do not depend on ``workers``."""
    if trials <= 0:
        return TrialSummary(n, 0, 0, math.inf, -1)
    workers = workers or worker_count()
    chunks = [range(k, trials, workers) for k in range(min(workers, trials))]
    if len(chunks) == 1:
        results = [_run_chunk(n, seed, chunks[0])]
    else:
        with ThreadPoolExecutor(len(chunks)) as pool:
            results = list(pool.map(lambda c: _run_chunk(n, seed, c), chunks))
    passed = sum(r[0] for r in results)
    worst, worst_i = min(((r[1], r[2]) for r in results), key=lambda t: (t[0], t[1]))
    return TrialSummary(n, trials, passed, worst, worst_i)
