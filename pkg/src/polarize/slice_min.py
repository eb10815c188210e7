"""Minimum of the coordinate product on a slice of the cube [1/s, 1]^n.

For ``n >= 2`` and ``sqrt(n) <= s <= n`` the slice is the set of points of
``[1/s, 1]^n`` whose coordinates sum to ``s``.  The minimum of
``a_1 * ... * a_n`` over that set has a closed form: the first ``k0 - 1``
coordinates sit at ``1/s``, one coordinate absorbs the remainder and the rest
sit at ``1``.  ``mu_oracle`` recomputes the same minimum by enumeration plus a
randomized local descent and shares no code with the closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

FEASIBILITY_TOL = 1e-12
BREAKPOINT_TOL = 1e-9
LOG_PRODUCT_THRESHOLD = 1e-3

# Slack on the interval [sqrt(n), n]; lets breakpoints and longest-sum norms
# computed in floating point land on the endpoints.
_ENDPOINT_RTOL = 1e-12


@dataclass(frozen=True)
class CubeSliceProblem:
    n: int
    s: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        s = float(self.s)
        if not math.isfinite(s):
            raise DomainError(f"s must be finite, got {self.s!r}")
        lo, hi = math.sqrt(self.n), float(self.n)
        if s < lo * (1 - _ENDPOINT_RTOL) or s > hi * (1 + _ENDPOINT_RTOL):
            raise DomainError(f"s outside [√n, n]: s={s!r}, n={self.n}")
        object.__setattr__(self, "s", s)


@dataclass(frozen=True)
class SlicePoint:
    problem: CubeSliceProblem
    a: tuple[float, ...]
    tol: float = field(default=FEASIBILITY_TOL, compare=False)

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        object.__setattr__(self, "a", a)
        n, s = self.problem.n, self.problem.s
        if len(a) != n:
            raise DomainError(f"expected {n} coordinates, got {len(a)}")
        lo = 1.0 / s
        for i, x in enumerate(a):
            if not (lo - self.tol <= x <= 1.0 + self.tol):
                raise DomainError(f"a[{i}]={x!r} outside [1/s, 1] = [{lo!r}, 1]")
        if abs(math.fsum(a) - s) > n * self.tol:
            raise DomainError(f"coordinates sum to {math.fsum(a)!r}, expected s={s!r}")


@dataclass(frozen=True)
class MinimumCertificate:
    problem: CubeSliceProblem
    k0: int
    residual_sum: float
    minimizer: SlicePoint
    value: float


def _check(problem):
    if not isinstance(problem, CubeSliceProblem):
        raise TypeError("expected a CubeSliceProblem")


def k0_scan(problem: CubeSliceProblem) -> int:
    """Least ``k`` with ``n - k < s - k/s``, scanning ``k = 1, 2, ...``.

    Near-ties (the two sides equal up to rounding) count as *not* satisfying
    the strict inequality, so an exact breakpoint ``s_j`` yields ``j + 1``.
    """
    _check(problem)
    n, s = problem.n, problem.s
    tie = FEASIBILITY_TOL * n
    for k in range(1, n + 2):
        if (s - k / s) - (n - k) > tie:
            return k
    # unreachable for s >= sqrt(n): at k = n+1 the margin is 1 - 1/s > 0
    return n + 1


def k0_floor(problem: CubeSliceProblem) -> int:
    """``floor(s(n-s)/(s-1)) + 1``, unstable exactly at the breakpoints."""
    _check(problem)
    n, s = problem.n, problem.s
    return math.floor(s * (n - s) / (s - 1)) + 1


def _near_integer(x: float) -> bool:
    return abs(x - round(x)) <= BREAKPOINT_TOL


def k0(problem: CubeSliceProblem) -> int:
    """Number of coordinates pinned at ``1/s`` in the minimizer, plus one.

    Uses the floor formula away from breakpoints and the defining scan when
    ``s(n-s)/(s-1)`` is within ``BREAKPOINT_TOL`` of an integer.
    """
    _check(problem)
    n, s = problem.n, problem.s
    ratio = s * (n - s) / (s - 1)
    if _near_integer(ratio):
        return k0_scan(problem)
    return min(max(math.floor(ratio) + 1, 1), n + 1)


def product_value(point: SlicePoint) -> float:
    a = point.a
    if min(a) < LOG_PRODUCT_THRESHOLD:
        return math.exp(math.fsum(math.log(x) for x in a))
    return math.prod(a)


def mu_closed_form(problem: CubeSliceProblem) -> MinimumCertificate:
    _check(problem)
    n, s = problem.n, problem.s
    k = k0(problem)
    if k == n + 1:
        # s = sqrt(n): the slice is the single point (1/s, ..., 1/s)
        point = SlicePoint(problem, (1.0 / s,) * n)
        return MinimumCertificate(problem, k, s - n / s, point, s ** (-n))

    residual = s - (k - 1) / s
    free = residual - (n - k)
    point = SlicePoint(problem, (1.0 / s,) * (k - 1) + (free,) + (1.0,) * (n - k))
    value = (1.0 / s + s - n + k * (1.0 - 1.0 / s)) / s ** (k - 1)
    return MinimumCertificate(problem, k, residual, point, value)


def mu(n: int, s: float) -> float:
    return mu_closed_form(CubeSliceProblem(n, s)).value


def mu_values(n: int, s) -> np.ndarray:
    """Vectorised closed-form minimum over an array of slice levels.

    Same branch rules as ``mu_closed_form``; meant for dense scans where
    building a certificate per point is too slow.
    """
    s = np.asarray(s, dtype=float)
    lo = math.sqrt(n)
    if np.any(s < lo * (1 - _ENDPOINT_RTOL)) or np.any(s > n * (1 + _ENDPOINT_RTOL)):
        raise DomainError(f"s outside [√n, n] for n={n}")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = s * (n - s) / (s - 1)
    k = np.floor(ratio) + 1
    ambiguous = np.abs(ratio - np.round(ratio)) <= BREAKPOINT_TOL
    if np.any(ambiguous):
        sa = s[ambiguous]
        ks = np.full(sa.shape, n + 1.0)
        tie = FEASIBILITY_TOL * n
        for kk in range(n + 1, 0, -1):
            ks = np.where((sa - kk / sa) - (n - kk) > tie, kk, ks)
        k[ambiguous] = ks
    k = np.clip(k, 1, n + 1)
    value = (1.0 / s + s - n + k * (1.0 - 1.0 / s)) / s ** (k - 1)
    return np.where(k == n + 1, s ** (-float(n)), value)


# --- independent oracle ------------------------------------------------------


def _structured_minimum(n, s):
    lo = 1.0 / s
    best = None
    for p in range(n):
        q = n - 1 - p
        free = s - p * lo - q
        if lo - FEASIBILITY_TOL <= free <= 1.0 + FEASIBILITY_TOL:
            val = lo**p * free
            if best is None or val < best:
                best = val
    return best


def _random_feasible(n, s, rng):
    # a = lo + (1 - lo) * w with w in [0, 1]^n and sum(w) = target
    lo = 1.0 / s
    target = (s - n * lo) / (1.0 - lo)
    w = rng.random(n)
    fixed = np.zeros(n, dtype=bool)
    for _ in range(4 * n):
        room = target - w[fixed].sum()
        free_sum = w[~fixed].sum()
        if free_sum <= 0:
            w[~fixed] = room / max((~fixed).sum(), 1)
        else:
            w[~fixed] *= room / free_sum
        over = (w > 1.0) & ~fixed
        if not over.any():
            break
        w[over] = 1.0
        fixed |= over
    w = np.clip(w, 0.0, 1.0)
    return list(lo + (1.0 - lo) * w)


def _pair_transfer_descent(a, lo):
    """Move mass between coordinate pairs while the product drops.

    Candidate pair: the smallest coordinate that can still decrease and the
    largest that can still increase.  The step is capped by the box and halved
    whenever the move fails to lower the product; stops below 1e-12.
    """
    a = list(a)
    n = len(a)
    step = 1.0
    prod = math.prod(a)
    while step >= 1e-12:
        down = [i for i in range(n) if a[i] > lo + 1e-15]
        up = [i for i in range(n) if a[i] < 1.0 - 1e-15]
        if not down or not up:
            break
        i = min(down, key=lambda t: (a[t], t))
        j = max((t for t in up if t != i), key=lambda t: (a[t], -t), default=None)
        if j is None:
            break
        eps = min(step, a[i] - lo, 1.0 - a[j])
        trial = a.copy()
        trial[i] -= eps
        trial[j] += eps
        tprod = math.prod(trial)
        if eps > 0 and tprod < prod:
            a, prod = trial, tprod
        else:
            step /= 2
    return prod


def mu_oracle(problem: CubeSliceProblem, seed: int = 0, starts: int = 100) -> float:
    """Minimum of the product over the slice, computed without the closed form."""
    _check(problem)
    n, s = problem.n, problem.s
    best = _structured_minimum(n, s)
    if best is None:
        raise DomainError(f"no structured candidate is feasible for n={n}, s={s}")
    rng = np.random.default_rng(seed)
    lo = 1.0 / s
    for _ in range(starts):
        best = min(best, _pair_transfer_descent(_random_feasible(n, s, rng), lo))
    return best
