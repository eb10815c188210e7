"""Numerical checks of the lower bound ``mu(s) >= n**(-n/2)`` on ``[sqrt(n), n]``.

The argument runs through the breakpoints ``s_j`` (where ``k0`` jumps), the
pieces ``M_j`` of ``mu`` between consecutive breakpoints, and the comparison
``s_j**j <= sqrt(n**n)``.  Each ingredient gets a floating-point check here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError
from .slice_min import CubeSliceProblem, mu_closed_form, mu_values

BREAKPOINT_RTOL = 1e-11
DERIV_ZERO_TOL = 1e-14

# Printed reference table, n -> (column2, s_{n-1}^{n-1}, sqrt(n^n)).
# Values are given to three decimals; exact integers are stored as int.
PRINTED_TABLE = {
    3: (5.065, 4, 5.196),
    4: (2.666, 12.211, 16),
    5: (2.008, 43.053, 55.901),
    6: (1.698, 169.442, 216),
    7: (1.514, 729, 907.492),
    8: (1.389, 3380.607, 4096),
    9: (1.298, 16725.933, 19683),
    10: (1.227, 87610.098, 100000),
    11: (1.170, 482892.455, 534145.739),
    12: (1.123, 2787117.027, 2985984),
    13: (1.084, 16777216, 17403307.350),
    14: (1.049, 104973424.100, 105413504),
    15: (1.019, 680750436.468, 661735513.918),
    16: (0.992, 4564290812.351, 4294967296),
}
TABLE_RTOL = 5e-3


def _require_n(n, lo=2):
    if int(n) != n or n < lo:
        raise DomainError(f"n must be an integer >= {lo}, got {n!r}")
    return int(n)


def half_power(n: int) -> float:
    """``sqrt(n**n)``, exact whenever it is an integer."""
    r = math.isqrt(n**n)
    if r * r == n**n:
        return float(r)
    return math.sqrt(n**n)


@dataclass(frozen=True)
class BreakpointTable:
    n: int
    s: tuple[float, ...]

    def __getitem__(self, j):
        return self.s[j]

    def residuals(self) -> list[float]:
        n = self.n
        return [x * x - (n - j) * x - j for j, x in enumerate(self.s)]


def breakpoint(n: int, j: int) -> float:
    """Positive root of ``x**2 - (n-j) x - j``."""
    return ((n - j) + math.sqrt((n - j) ** 2 + 4 * j)) / 2


def breakpoints(n: int) -> BreakpointTable:
    n = _require_n(n)
    table = BreakpointTable(n, tuple(breakpoint(n, j) for j in range(n + 1)))
    s = table.s
    if any(abs(r) > 1e-12 * max(1.0, x * x) for r, x in zip(table.residuals(), s)):
        raise AssertionError(f"breakpoint residuals too large for n={n}")
    if s[n] != math.sqrt(n) or s[0] != n or any(s[j + 1] >= s[j] for j in range(n)):
        raise AssertionError(f"breakpoints not strictly decreasing from n to sqrt(n) for n={n}")
    return table


def mu_at_breakpoint(n: int, j: int) -> float:
    n = _require_n(n)
    if not 1 <= j <= n:
        raise DomainError(f"need 1 <= j <= n, got j={j}")
    s = breakpoint(n, j)
    value = mu_closed_form(CubeSliceProblem(n, s)).value
    expected = s ** (-j)
    if abs(value - expected) > BREAKPOINT_RTOL * expected:
        raise AssertionError(f"mu(s_{j}) = {value!r} but s_j^-j = {expected!r} (n={n})")
    return value


def _interval(n, j):
    if not 1 <= j <= n:
        raise DomainError(f"need 1 <= j <= n, got j={j}")
    return breakpoint(n, j), breakpoint(n, j - 1)


def mj_eval(n: int, j: int, x: float) -> float:
    """``x**(2-j) + (j-n) x**(1-j) + (1-j) x**(-j)``, the form of ``mu`` on ``(s_j, s_{j-1})``."""
    n = _require_n(n)
    lo, hi = _interval(n, j)
    if not lo * (1 - 1e-12) <= x <= hi * (1 + 1e-12):
        raise DomainError(f"x={x!r} outside [s_{j}, s_{j-1}] = [{lo!r}, {hi!r}]")
    return x ** (2 - j) + (j - n) * x ** (1 - j) + (1 - j) * x ** (-j)


def mj_derivative(n: int, j: int, x):
    x = np.asarray(x, dtype=float)
    return (x * x + (1 - j) * (x * x + (j - n) * x - j)) / x ** (j + 1)


@dataclass(frozen=True)
class QuasiConcavity:
    quasiconcave: bool | None  # None when the sign scan is indeterminate
    critical_point: float | None
    derivative_at_left: float


def quasiconcavity_check(n: int, j: int, grid: int = 10_000) -> QuasiConcavity:
    """Sign scan of ``M_j'`` on ``[s_j, s_{j-1}]``.

    Quasi-concave here means the sign pattern is ``+...+`` or ``+...+-...-``;
    in the second case the turning point is located by bisection.
    """
    n = _require_n(n)
    if grid < 100:
        raise ValueError("grid must be >= 100")
    lo, hi = _interval(n, j)
    xs = np.linspace(lo, hi, grid)
    d = mj_derivative(n, j, xs)
    left = float(d[0])

    zero = np.abs(d) < DERIV_ZERO_TOL
    if np.any(zero[1:] & zero[:-1]):
        return QuasiConcavity(None, None, left)
    signs = np.sign(d[~zero])
    changes = np.flatnonzero(np.diff(signs) != 0)
    if signs.size == 0:
        return QuasiConcavity(None, None, left)
    if changes.size == 0:
        return QuasiConcavity(bool(signs[0] > 0), None, left)
    if changes.size > 1 or signs[0] < 0:
        return QuasiConcavity(False, None, left)

    kept = xs[~zero]
    a, b = kept[changes[0]], kept[changes[0] + 1]
    t = bisect(lambda x: float(mj_derivative(n, j, x)), a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return QuasiConcavity(True, float(t), left)


# --- the auxiliary functions used for s_{n-1}^{n-1} <= sqrt(n^n) -------------


def log_half_power(n: int) -> float:
    return 0.5 * n * math.log(n)


def j_interval(n: int) -> tuple[float, float]:
    """``[n**(n/(2(n-1))), n**(n/(2(floor(n/2)+1))))]``."""
    return n ** (n / (2 * (n - 1))), n ** (n / (2 * (n // 2 + 1)))


def phi(n: int, x):
    x = np.asarray(x, dtype=float)
    return (1 - x) / (x * x - n * x) - np.log(x) / log_half_power(n)


def phi_prime(n: int, x):
    x = np.asarray(x, dtype=float)
    return (x * x - 2 * x + n) / (x * x * (x - n) ** 2) - 1 / (x * log_half_power(n))


def varphi(n: int, x):
    x = np.asarray(x, dtype=float)
    return (x * x - 2 * x + n) / (x * (x - n) ** 2)


def discriminant(n: int) -> int:
    """Discriminant of ``3x^2 + 2(n-4)x + 3n``, i.e. ``4(n-1)(n-16)``."""
    return 4 * (n - 1) * (n - 16)


@dataclass(frozen=True)
class TableRow:
    n: int
    column2: float
    s_nm1_pow: float
    half_power: float
    bound_holds: bool


def table_row(n: int) -> TableRow:
    n = _require_n(n, lo=3)
    left, _ = j_interval(n)
    col2 = log_half_power(n) * float(varphi(n, left))
    s_pow = breakpoint(n, n - 1) ** (n - 1)
    hp = half_power(n)
    return TableRow(n, col2, s_pow, hp, s_pow <= hp)


@dataclass(frozen=True)
class PhiAnalysis:
    phi_left: float
    phi_prime_positive: bool
    phi_prime_min: float
    discriminant: int
    fd_max_rel_error: float


def phi_analysis(n: int, grid: int = 1000) -> PhiAnalysis:
    """Value of ``phi`` at the left end of ``J_n`` and the sign of ``phi'`` on it.

    ``phi'`` is evaluated from its closed form; central differences at 20
    points serve as a cross-check (relative 1e-6).
    """
    n = _require_n(n, lo=3)
    if grid < 1000:
        raise ValueError("grid must be >= 1000")
    a, b = j_interval(n)
    xs = np.linspace(a, b, grid)
    dp = phi_prime(n, xs)

    probe = np.linspace(a, b, 20) if b > a else np.full(20, a)
    h = 1e-6 * probe
    fd = (phi(n, probe + h) - phi(n, probe - h)) / (2 * h)
    exact = phi_prime(n, probe)
    fd_err = float(np.max(np.abs(fd - exact) / np.maximum(np.abs(exact), 1e-300)))
    if fd_err > 1e-6:
        raise AssertionError(f"phi' closed form disagrees with finite differences ({fd_err:.3g}) for n={n}")

    return PhiAnalysis(float(phi(n, a)), bool(np.all(dp > 0)), float(dp.min()), discriminant(n), fd_err)


# --- global minimum of mu -----------------------------------------------------


@dataclass(frozen=True)
class GlobalMinimum:
    n: int
    min_value: float
    argmin: float
    bound_holds: bool
    grid_step: float
    points: int


def global_minimum_scan(n: int, grid: int = 10_000) -> GlobalMinimum:
    """Evaluate ``mu`` on a uniform grid of ``[sqrt(n), n]`` plus every breakpoint."""
    n = _require_n(n)
    if n > 14:
        raise DomainError("the bound is only claimed for n <= 14")
    if grid < 10_000:
        raise ValueError("grid must be >= 10000")
    lo = math.sqrt(n)
    xs = np.concatenate((np.linspace(lo, n, grid), breakpoints(n).s))
    vals = mu_values(n, xs)
    i = int(np.argmin(vals))
    b = math.exp(-0.5 * n * math.log(n))
    above = xs > lo
    holds = bool(vals[i] >= b * (1 - 1e-12) and np.all(vals[above] > b))
    return GlobalMinimum(n, float(vals[i]), float(xs[i]), holds, (n - lo) / (grid - 1), xs.size)


# --- full report for one n ------------------------------------------------------


@dataclass(frozen=True)
class BreakpointRecord:
    j: int
    s_j: float
    s_j_pow: float
    bound: float
    bound_holds: bool
    strict: bool


@dataclass(frozen=True)
class ProofCheckReport:
    n: int
    per_j: list[BreakpointRecord]
    phi_at_left_endpoint: float | None
    phi_prime_min_on_grid: float | None
    table_column2: float | None
    discriminant: int
    mj_quasiconcave: list[bool | None] = field(default_factory=list)


def proof_report(n: int, grid: int = 10_000) -> ProofCheckReport:
    n = _require_n(n)
    table = breakpoints(n)
    hp = half_power(n)
    per_j = []
    for j, s in enumerate(table.s):
        p = s**j
        # s_n^n equals sqrt(n^n) exactly; compare with a rounding margin
        per_j.append(BreakpointRecord(j, s, p, hp, p <= hp * (1 + 1e-12), p < hp * (1 - 1e-12)))
    qc = [quasiconcavity_check(n, j, grid).quasiconcave for j in range(1, n + 1)]
    if n >= 3:
        pa = phi_analysis(n, max(1000, grid))
        row = table_row(n)
        return ProofCheckReport(n, per_j, pa.phi_left, pa.phi_prime_min, row.column2, pa.discriminant, qc)
    return ProofCheckReport(n, per_j, None, None, None, discriminant(n), qc)
