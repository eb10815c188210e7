"""Maximizing ``|<x, v_1> ... <x, v_n>|`` over the unit sphere.

Everything works with the log objective ``F(x) = sum log|<x, v_i>|``.  On
the sphere its Riemannian gradient is ``g - <g, x> x`` with
``g = sum v_i / <x, v_i>``; note ``<g, x> = n`` identically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .sign_search import longest_sum
from .vectors import MAX_EXHAUSTIVE_N, UnitVectorSet, gram

PASS_RTOL = 1e-9
EQUALITY_RTOL = 1e-7
ZERO_TOL = 1e-14
X_RENORM_TOL = 1e-6


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int
    max_iters: int = 500
    grad_tol: float = 1e-10
    step_init: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be > 0")
        if not self.step_init > 0:
            raise ValueError("step_init must be > 0")

    @classmethod
    def default(cls, n: int, seed: int = 0, **overrides) -> OptimizerConfig:
        return cls(starts=overrides.pop("starts", None) or 8 + 2 * n, seed=seed, **overrides)


@dataclass(frozen=True, eq=False)
class WitnessReport:
    x: np.ndarray
    log_product: float
    product: float
    bound: float
    passes: bool
    source: str
    # longest-sum details, when the witness came from a sign search
    signs: str | None = None
    norm: float | None = None
    # optimizer statistics
    stats: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "source": self.source,
            "x": [float(t) for t in self.x],
            "log_product": self.log_product,
            "product": self.product,
            "bound": self.bound,
            "passes": self.passes,
        }
        if self.signs is not None:
            d["signs"] = self.signs
            d["norm"] = self.norm
        if self.stats:
            d["stats"] = dict(self.stats)
        return d


def bound(n: int) -> float:
    """``n**(-n/2)``."""
    return math.exp(-0.5 * n * math.log(n))


def log_objective(rows: np.ndarray, x: np.ndarray) -> float:
    ip = np.abs(rows @ x)
    if np.any(ip == 0.0):
        return -math.inf
    return float(np.sum(np.log(ip)))


def tangent_gradient(rows: np.ndarray, x: np.ndarray) -> np.ndarray:
    g = rows.T @ (1.0 / (rows @ x))
    return g - (g @ x) * x


def numerical_tangent_gradient(rows: np.ndarray, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central differences of ``F(y / ||y||)`` at a unit ``x``.

    Since ``F`` is homogeneous up to ``n log||y||``, this equals the tangent
    gradient exactly in the limit ``h -> 0``.
    """
    out = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        xp, xm = x + e, x - e
        out[k] = (log_objective(rows, xp / np.linalg.norm(xp)) - log_objective(rows, xm / np.linalg.norm(xm))) / (2 * h)
    return out


def _canonical_x(x):
    nz = np.flatnonzero(np.abs(x) > 0)
    if nz.size and x[nz[0]] < 0:
        return -x
    return x


def witness_product(vs: UnitVectorSet, x, source: str = "provided", **extra) -> WitnessReport:
    x = np.asarray(x, dtype=float)
    if x.shape != (vs.n,):
        raise ValueError(f"x has shape {x.shape}, expected ({vs.n},)")
    nx = float(np.linalg.norm(x))
    if not abs(nx - 1.0) <= X_RENORM_TOL:
        raise ValueError(f"x has norm {nx!r}, not within {X_RENORM_TOL} of 1")
    x = x / nx
    x.setflags(write=False)
    logp = log_objective(vs.rows, x)
    prod = math.exp(logp) if logp > -math.inf else 0.0
    b = bound(vs.n)
    return WitnessReport(x, logp, prod, b, prod >= b * (1 - PASS_RTOL), source, **extra)


def witness_from_longest_sum(vs: UnitVectorSet, method: str = "auto", seed: int = 0, verify: bool = False) -> WitnessReport:
    """Unit witness ``v / ||v||`` for the longest signed sum ``v``.

    With ``verify=True`` and ``2 <= n <= 14`` a failing witness raises
    ``AssertionError``: it would contradict the proven lower bound.
    """
    if method == "auto" and vs.n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"n={vs.n} is too large for exhaustive sign search; pass method='local_search'")
    res = longest_sum(vs, method=method, seed=seed)
    report = witness_product(vs, res.v / res.norm, source="longest_sum", signs=str(res.signs), norm=res.norm)
    if verify and 2 <= vs.n <= 14 and not report.passes:
        raise AssertionError(f"longest-sum witness fails the bound: {report.product!r} < {report.bound!r}")
    return report


def _ascend(rows, x, cfg, rng):
    """Backtracking Riemannian ascent from ``x``.

    Returns ``(x, F, iters, grad_norm, stop)`` where ``stop`` is one of
    ``grad_tol``, ``stalled`` (no representable ascent step left),
    ``max_iters`` or ``degenerate``.
    """
    n = rows.shape[0]
    for _ in range(10):
        if np.min(np.abs(rows @ x)) >= ZERO_TOL:
            break
        x = x + 1e-3 * rng.standard_normal(n)
        x /= np.linalg.norm(x)
    else:
        return x, -math.inf, 0, math.inf, "degenerate"

    f = log_objective(rows, x)
    step = cfg.step_init
    gnorm = math.inf
    stop = "max_iters"
    it = 0
    for it in range(1, cfg.max_iters + 1):
        t = tangent_gradient(rows, x)
        gnorm = float(np.linalg.norm(t))
        if gnorm < cfg.grad_tol:
            stop = "grad_tol"
            break
        while step > 1e-16:
            y = x + step * t
            y /= np.linalg.norm(y)
            fy = log_objective(rows, y)
            if fy > f:
                break
            step /= 2
        else:
            stop = "stalled"
            break
        x, f = y, fy
        step = min(2 * step, 1.0)
    return x, f, it, gnorm, stop


def _start_points(vs, cfg, rng):
    rows = vs.rows
    n = vs.n
    pts = []
    if n <= MAX_EXHAUSTIVE_N:
        res = longest_sum(vs, method="exhaustive")
    else:
        res = longest_sum(vs, method="local_search", seed=cfg.seed)
    pts.append(("longest_sum", res.v / res.norm))
    n_sign = (cfg.starts - 1) // 2
    for _ in range(n_sign):
        v = rng.choice([-1.0, 1.0], size=n) @ rows
        nv = np.linalg.norm(v)
        pts.append(("sign_sum", v / nv if nv > 1e-12 else None))
    while len(pts) < cfg.starts:
        pts.append(("uniform", None))
    out = []
    for kind, x in pts:
        if x is None:
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
        out.append((kind, x))
    return out


def maximize_product(vs: UnitVectorSet, config: OptimizerConfig | None = None) -> WitnessReport:
    """Multi-start ascent of the log-product on the sphere.

    The returned product is attained at the returned ``x``, hence a lower
    bound on the supremum.  The longest-sum witness is always the first
    start, so the result is never below it.
    """
    cfg = config or OptimizerConfig.default(vs.n)
    rng = np.random.default_rng(cfg.seed)
    rows = vs.rows
    best = None
    total_iters = 0
    for idx, (kind, x0) in enumerate(_start_points(vs, cfg, rng)):
        f0 = log_objective(rows, x0)
        x, f, iters, gnorm, stop = _ascend(rows, x0, cfg, rng)
        total_iters += iters
        if f0 > f:
            x, f = x0, f0
        x = _canonical_x(x)
        key = (-f, tuple(x))
        if best is None or key < best[0]:
            best = (key, x, f, idx, kind, iters, gnorm, stop)

    _, x, f, idx, kind, iters, gnorm, stop = best
    stats = {
        "starts": cfg.starts,
        "best_start": idx,
        "best_start_kind": kind,
        "iterations": iters,
        "total_iterations": total_iters,
        "grad_norm": gnorm,
        "stop": stop,
    }
    if f == -math.inf:
        stats["failure"] = "all starts degenerate"
    rep = witness_product(vs, x, source="optimizer")
    return replace(rep, stats=stats)


def equality_case_check(vs: UnitVectorSet, config: OptimizerConfig | None = None, verify: bool = False) -> bool:
    """True iff the maximized product equals ``n**(-n/2)`` and the system is orthonormal.

    With ``verify=True`` raises ``AssertionError`` if only one of the two
    conditions holds.
    """
    rep = maximize_product(vs, config)
    at_bound = abs(rep.product - rep.bound) <= EQUALITY_RTOL * rep.bound
    ortho = gram(vs).orthonormal
    if verify and at_bound != ortho:
        raise AssertionError(f"equality at bound={at_bound} but orthonormal={ortho}")
    return at_bound and ortho
