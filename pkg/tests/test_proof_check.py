import math

import numpy as np
import pytest

from polarize import proof_check as pc
from polarize.errors import DomainError
from polarize.slice_min import mu_values


@pytest.mark.parametrize("n", range(2, 17))
def test_breakpoint_invariants(n):
    t = pc.breakpoints(n)
    assert len(t.s) == n + 1
    assert t.s[0] == n and t.s[n] == math.sqrt(n)
    assert all(a > b for a, b in zip(t.s, t.s[1:]))
    for j, x in enumerate(t.s):
        assert abs(x * x - (n - j) * x - j) <= 1e-12 * max(1, x * x)


@pytest.mark.parametrize("n, j, value", [(3, 2, 2.0), (7, 6, 3.0), (13, 12, 4.0)])
def test_integer_breakpoints(n, j, value):
    s = pc.breakpoints(n).s[j]
    assert s == value
    assert s**j == value**j


def test_breakpoints_reject_small_n():
    with pytest.raises(DomainError):
        pc.breakpoints(1)


@pytest.mark.parametrize("n, j, expected", [(7, 6, 1 / 729), (3, 2, 1 / 4), (5, 5, 5**-2.5), (14, 14, 14**-7)])
def test_mu_at_breakpoint(n, j, expected):
    assert pc.mu_at_breakpoint(n, j) == pytest.approx(expected, rel=1e-11)


def test_mj_examples():
    for n in (3, 6, 11):
        lo, hi = pc.breakpoints(n).s[1], pc.breakpoints(n).s[0]
        for x in np.linspace(lo, hi, 7):
            assert pc.mj_eval(n, 1, x) == pytest.approx(x + 1 - n, abs=1e-13)
    assert pc.mj_eval(9, 7, 4.0) == pytest.approx(1 / 8192, rel=1e-13)
    assert pc.mj_eval(7, 6, 3.0) == pytest.approx(1 / 729, rel=1e-13)
    with pytest.raises(DomainError):
        pc.mj_eval(9, 7, 5.0)


@pytest.mark.parametrize("n", [2, 5, 9, 14])
def test_mj_equals_mu_inside_pieces(n):
    t = pc.breakpoints(n)
    for j in range(1, n + 1):
        xs = np.linspace(t.s[j], t.s[j - 1], 102)[1:-1]
        m = np.array([pc.mj_eval(n, j, x) for x in xs])
        np.testing.assert_allclose(m, mu_values(n, xs), rtol=1e-11)


def test_mj_derivative_matches_finite_differences():
    n, j = 12, 9
    lo, hi = pc.breakpoints(n).s[j], pc.breakpoints(n).s[j - 1]
    for x in np.linspace(lo, hi, 12)[1:-1]:
        h = 1e-6 * x
        fd = (pc.mj_eval(n, j, x + h) - pc.mj_eval(n, j, x - h)) / (2 * h)
        assert float(pc.mj_derivative(n, j, x)) == pytest.approx(fd, rel=1e-5, abs=1e-12)


def test_quasiconcavity_examples():
    q = pc.quasiconcavity_check(8, 1)
    assert q.quasiconcave and q.critical_point is None and q.derivative_at_left == pytest.approx(1.0)
    assert pc.quasiconcavity_check(14, 7, 10**4).quasiconcave
    q = pc.quasiconcavity_check(14, 13, 10**4)
    assert q.quasiconcave and q.derivative_at_left > 0
    if q.critical_point is not None:
        lo, hi = pc.breakpoints(14).s[13], pc.breakpoints(14).s[12]
        assert lo < q.critical_point < hi
        assert abs(float(pc.mj_derivative(14, 13, q.critical_point))) < 1e-12


@pytest.mark.parametrize("n", range(2, 17))
def test_every_piece_quasiconcave(n):
    for j in range(1, n + 1):
        q = pc.quasiconcavity_check(n, j, 2000)
        assert q.quasiconcave is True
        assert q.derivative_at_left > 0


def test_quasiconcavity_rejects_coarse_grid():
    with pytest.raises(ValueError):
        pc.quasiconcavity_check(5, 3, 50)


@pytest.mark.parametrize("n", range(3, 17))
def test_table_rows_against_printed(n):
    col2, s_pow, hp = pc.PRINTED_TABLE[n]
    row = pc.table_row(n)
    assert row.column2 == pytest.approx(col2, rel=5e-3)
    for got, want in ((row.s_nm1_pow, s_pow), (row.half_power, hp)):
        if isinstance(want, int):
            assert round(got) == want
        else:
            assert got == pytest.approx(want, rel=5e-3)
    assert row.bound_holds == (n <= 14)


def test_table_exact_entries():
    assert pc.table_row(3).s_nm1_pow == 4
    assert pc.table_row(7).s_nm1_pow == 729
    assert pc.table_row(13).s_nm1_pow == 16777216
    assert pc.table_row(14).half_power == 105413504
    assert pc.table_row(16).half_power == 4294967296


def test_phi_examples():
    a14 = pc.phi_analysis(14, 1000)
    assert a14.phi_prime_positive and a14.discriminant == -104 and a14.phi_left > 0
    a16 = pc.phi_analysis(16, 1000)
    assert a16.discriminant == 0
    assert not a16.phi_prime_positive


@pytest.mark.parametrize("n", range(3, 17))
def test_phi_sign_structure(n):
    a = pc.phi_analysis(n, 2000)
    assert (a.discriminant < 0) == (n <= 15)
    assert a.phi_prime_positive == (n <= 15)
    assert (a.phi_left >= 0) == (n <= 14)
    # phi at the left end of J_n encodes s_{n-1} <= n^{n/(2(n-1))}
    assert a.fd_max_rel_error < 1e-6


@pytest.mark.parametrize("n", range(2, 15))
def test_global_minimum(n):
    g = pc.global_minimum_scan(n, 10**4)
    assert g.bound_holds
    assert g.min_value == pytest.approx(n ** (-n / 2), rel=1e-10)
    assert abs(g.argmin - math.sqrt(n)) <= g.grid_step


def test_global_minimum_examples():
    assert pc.global_minimum_scan(2, 10**4).min_value == pytest.approx(0.5, rel=1e-14)
    assert 1 / pc.global_minimum_scan(5, 10**4).min_value == pytest.approx(55.901, rel=5e-3)


def test_global_minimum_guards():
    with pytest.raises(DomainError):
        pc.global_minimum_scan(15, 10**4)


@pytest.mark.parametrize("n", range(2, 15))
def test_lower_semicontinuity_probe(n):
    t = pc.breakpoints(n)
    for j in range(1, n + 1):
        at = pc.mu_at_breakpoint(n, j)
        for d in (1e-6, 1e-5, 1e-4):
            if t.s[j] + d <= n:
                assert mu_values(n, [t.s[j] + d])[0] >= at - 1e-9


@pytest.mark.parametrize("n", [2, 7, 14, 15, 16])
def test_proof_report(n):
    r = pc.proof_report(n, grid=1000)
    assert all(rec.bound_holds for rec in r.per_j) == (n <= 14)
    assert all(rec.strict for rec in r.per_j[:-1]) == (n <= 14)
    assert not r.per_j[-1].strict and r.per_j[-1].bound_holds
    assert all(r.mj_quasiconcave)
    assert (r.discriminant < 0) == (n <= 15)
