"""Systems of n unit vectors in real n-space."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._gray import SignBlocks
from .errors import InputError, SizeError

RENORM_TOL = 1e-6
ORTHO_TOL = 1e-9
RIGIDITY_TOL = 1e-9
MAX_EXHAUSTIVE_N = 24

KINDS = ("orthonormal", "random_uniform", "perturbed_orthonormal", "clustered")


@dataclass(frozen=True, eq=False)
class UnitVectorSet:
    """Rows are the vectors ``v_1..v_n``; the array is read-only."""

    rows: np.ndarray

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    def __eq__(self, other):
        return isinstance(other, UnitVectorSet) and np.array_equal(self.rows, other.rows)

    def __hash__(self):
        return hash(self.rows.tobytes())


@dataclass(frozen=True)
class GramSummary:
    gram: np.ndarray
    max_offdiag_abs: float
    orthonormal: bool


def load(data) -> UnitVectorSet:
    """Validate a square matrix of vectors and renormalize its rows.

    Rows whose norm is off by more than ``RENORM_TOL`` are rejected rather
    than silently rescaled.
    """
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"vector data is not a numeric matrix: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"expected an n x n matrix, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise InputError("need n >= 2 vectors")
    if not np.all(np.isfinite(arr)):
        raise InputError("vector data contains non-finite entries")
    norms = np.linalg.norm(arr, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > RENORM_TOL)
    if bad.size:
        i = int(bad[0])
        raise InputError(f"row {i} has norm {norms[i]!r}, not within {RENORM_TOL} of 1")
    arr = arr / norms[:, None]
    arr.setflags(write=False)
    return UnitVectorSet(arr)


def gram(vs: UnitVectorSet, ortho_tol: float = ORTHO_TOL) -> GramSummary:
    g = vs.rows @ vs.rows.T
    g = 0.5 * (g + g.T)
    off = g - np.diag(np.diag(g))
    m = float(np.max(np.abs(off))) if vs.n > 1 else 0.0
    g.setflags(write=False)
    return GramSummary(g, m, m <= ortho_tol)


def _unit_rows(x):
    return x / np.linalg.norm(x, axis=1)[:, None]


def generate(kind: str, n: int, seed: int = 0, param: float | None = None) -> UnitVectorSet:
    """Deterministic test instances.

    ``param`` is the noise scale for ``perturbed_orthonormal`` and the cap
    angular radius (radians, in (0, pi/2]) for ``clustered``; other kinds
    ignore it.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    rng = np.random.default_rng(seed)

    if kind == "orthonormal":
        rows = np.eye(n)
    elif kind == "random_uniform":
        rows = _unit_rows(rng.standard_normal((n, n)))
    elif kind == "perturbed_orthonormal":
        if param is None or not (param >= 0 and math.isfinite(param)):
            raise ValueError(f"perturbed_orthonormal needs a noise scale >= 0, got {param!r}")
        rows = _unit_rows(np.eye(n) + param * rng.standard_normal((n, n)))
    else:
        if param is None or not (0 < param <= math.pi / 2):
            raise ValueError(f"clustered needs a cap radius in (0, pi/2], got {param!r}")
        axis = rng.standard_normal(n)
        axis /= np.linalg.norm(axis)
        # unit tangent directions at the axis, then rotate by angle <= param
        t = rng.standard_normal((n, n))
        t -= np.outer(t @ axis, axis)
        t = _unit_rows(t)
        theta = param * rng.random(n)
        rows = np.cos(theta)[:, None] * axis + np.sin(theta)[:, None] * t
        rows = _unit_rows(rows)
    rows.setflags(write=False)
    return UnitVectorSet(rows)


def _sign_sum_norms2(vs: UnitVectorSet):
    blocks = SignBlocks(vs.rows)
    for _, base in blocks:
        sums = base + blocks.low_sums
        yield np.einsum("ij,ij->i", sums, sums)


def mean_squared_sign_sum(vs: UnitVectorSet) -> float:
    """Average of ``||sum eps_i v_i||^2`` over all ``2**n`` sign vectors.

    The canonical half suffices since ``eps`` and ``-eps`` give the same norm.
    """
    if vs.n > MAX_EXHAUSTIVE_N:
        raise SizeError(f"exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE_N}")
    total = math.fsum(float(np.sum(q)) for q in _sign_sum_norms2(vs))
    return total / 2 ** (vs.n - 1)


def rigidity_check(vs: UnitVectorSet, tol: float = RIGIDITY_TOL) -> bool:
    """True iff every sign sum has squared norm ``n`` (within ``tol``)."""
    if vs.n > MAX_EXHAUSTIVE_N:
        raise SizeError(f"exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE_N}")
    n = vs.n
    ok = all(np.all(np.abs(q - n) <= tol) for q in _sign_sum_norms2(vs))
    if ok and not gram(vs).orthonormal:
        raise AssertionError("all sign sums have norm^2 = n but the system is not orthonormal")
    return ok
