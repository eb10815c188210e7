"""Longest signed sum ``max ||sum eps_i v_i||`` of a unit-vector system."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._gray import SignBlocks, sign_bits
from .errors import DomainError, SizeError
from .slice_min import CubeSliceProblem, SlicePoint
from .vectors import MAX_EXHAUSTIVE_N, UnitVectorSet

ALIGN_TOL = 1e-9
# norm^2 values this close count as a tie (decided lexicographically)
TIE_TOL = 1e-12
# a flip must raise norm^2 by more than 4 * FLIP_TOL to be taken
FLIP_TOL = 1e-12


@dataclass(frozen=True)
class SignAssignment:
    eps: tuple[int, ...]

    def __post_init__(self):
        eps = tuple(int(e) for e in self.eps)
        if any(e not in (-1, 1) for e in eps):
            raise ValueError("signs must be +1 or -1")
        if eps and eps[0] != 1:
            raise ValueError("canonical sign vectors start with +1")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def canonical(cls, eps) -> SignAssignment:
        eps = np.asarray(eps, dtype=int)
        if eps[0] < 0:
            eps = -eps
        return cls(tuple(eps))

    def __str__(self):
        return "".join("+" if e > 0 else "-" for e in self.eps)


@dataclass(frozen=True, eq=False)
class LongestSumResult:
    signs: SignAssignment
    v: np.ndarray
    norm: float
    method: str
    is_global: bool

    def alignments(self, vs: UnitVectorSet) -> np.ndarray:
        """``eps_i <v_i, v>`` for every i; all >= 1 at a local maximum."""
        return np.asarray(self.signs.eps) * (vs.rows @ self.v)


def _finish(vs, eps, method):
    eps = np.asarray(eps, dtype=float)
    v = eps @ vs.rows
    v.setflags(write=False)
    return LongestSumResult(SignAssignment.canonical(eps), v, float(np.linalg.norm(v)), method, method == "exhaustive")


def longest_sum_exhaustive(vs: UnitVectorSet) -> LongestSumResult:
    """Global maximum over all ``2**(n-1)`` canonical sign vectors.

    Ties (within ``TIE_TOL`` on the squared norm) go to the lexicographically
    smallest sign vector with ``+`` ordered before ``-``.
    """
    if vs.n > MAX_EXHAUSTIVE_N:
        raise SizeError(f"exhaustive sign search limited to n <= {MAX_EXHAUSTIVE_N}, got {vs.n}")
    blocks = SignBlocks(vs.rows)
    best_q, best_key, best_eps = -math.inf, None, None
    for high, base in blocks:
        sums = base + blocks.low_sums
        q = np.einsum("ij,ij->i", sums, sums)
        top = float(q.max())
        if top < best_q - TIE_TOL:
            continue
        cand = np.flatnonzero(q >= top - TIE_TOL)
        eps_list = [blocks.full_signs(high, i) for i in cand]
        i_min = min(range(len(cand)), key=lambda t: sign_bits(eps_list[t]))
        key = sign_bits(eps_list[i_min])
        q_c = float(q[cand[i_min]])
        if best_key is None or q_c > best_q + TIE_TOL:
            best_q, best_key, best_eps = q_c, key, eps_list[i_min]
        elif q_c >= best_q - TIE_TOL and key < best_key:
            best_q, best_key, best_eps = max(q_c, best_q), key, eps_list[i_min]
    return _finish(vs, best_eps, "exhaustive")


def _local_ascent(g, eps):
    """Steepest single-sign flips until every ``eps_k <v_k, v> >= 1``.

    Flipping ``eps_k`` changes ``||v||^2`` by ``4 - 4 eps_k <v_k, v>``.
    """
    c = g @ eps  # <v_k, v>
    while True:
        align = eps * c
        k = int(np.argmin(align))
        if align[k] >= 1.0 - FLIP_TOL:
            return eps
        c -= 2.0 * eps[k] * g[:, k]
        eps[k] = -eps[k]


def longest_sum_local(vs: UnitVectorSet, seed: int = 0, restarts: int = 16) -> LongestSumResult:
    """Best local maximum of the signed-sum norm over random restarts."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    g = vs.rows @ vs.rows.T
    rng = np.random.default_rng(seed)
    best_q, best_key, best_eps = -math.inf, None, None
    for _ in range(restarts):
        eps = rng.choice([-1.0, 1.0], size=vs.n)
        eps = _local_ascent(g, eps)
        if eps[0] < 0:
            eps = -eps
        q = float(eps @ g @ eps)
        key = sign_bits(eps)
        if q > best_q + TIE_TOL or (q >= best_q - TIE_TOL and key < best_key):
            best_q, best_key, best_eps = q, key, eps.copy()
    return _finish(vs, best_eps, "local_search")


def longest_sum(vs: UnitVectorSet, method: str = "auto", seed: int = 0, restarts: int = 32) -> LongestSumResult:
    if method == "auto":
        method = "exhaustive" if vs.n <= MAX_EXHAUSTIVE_N else "local_search"
    if method == "exhaustive":
        return longest_sum_exhaustive(vs)
    if method == "local_search":
        return longest_sum_local(vs, seed=seed, restarts=restarts)
    raise ValueError(f"unknown sign-search method {method!r}")


def lambda_map(vs: UnitVectorSet, result: LongestSumResult) -> SlicePoint:
    """Send the system to ``(eps_i <v_i, v> / ||v||)_i`` on the slice at ``s = ||v||``.

    Raises ``DomainError`` when ``result`` is not a local maximum for ``vs``,
    since the point then leaves ``[1/s, 1]^n``.
    """
    s = result.norm
    a = result.alignments(vs) / s
    try:
        return SlicePoint(CubeSliceProblem(vs.n, s), tuple(a))
    except DomainError as exc:
        raise DomainError(f"sign assignment is not a local maximum: {exc}") from None
