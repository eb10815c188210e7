import math

import numpy as np
import pytest
from scipy.stats import ortho_group

from polarize.sphere_opt import (
    OptimizerConfig,
    bound,
    equality_case_check,
    log_objective,
    maximize_product,
    numerical_tangent_gradient,
    tangent_gradient,
    witness_from_longest_sum,
    witness_product,
)
from polarize.vectors import generate, load


def angle_grid_max(vs, points=10**6):
    # 1-D oracle for n = 2: x = (cos t, sin t), t in [0, pi)
    t = np.linspace(0, np.pi, points, endpoint=False)
    x = np.stack((np.cos(t), np.sin(t)))
    return float(np.max(np.abs(np.prod(vs.rows @ x, axis=0))))


def test_witness_product_examples(basis, pair60):
    for n in (2, 5, 9):
        rep = witness_product(basis(n), np.ones(n) / math.sqrt(n))
        assert rep.product == pytest.approx(n ** (-n / 2), rel=1e-12) and rep.passes
    v = pair60.rows.sum(axis=0)
    rep = witness_product(pair60, v / np.linalg.norm(v))
    assert rep.product == pytest.approx(0.75, rel=1e-14) and rep.passes and rep.bound == pytest.approx(0.5)
    rep = witness_product(basis(3), np.eye(3)[0])
    assert rep.product == 0 and rep.log_product == -math.inf and not rep.passes


def test_witness_product_input_checks(basis):
    with pytest.raises(ValueError):
        witness_product(basis(3), np.ones(2) / math.sqrt(2))
    with pytest.raises(ValueError):
        witness_product(basis(3), np.ones(3))
    rep = witness_product(basis(2), np.array([1.0, 1.0]) / math.sqrt(2) * (1 + 1e-8))
    assert np.linalg.norm(rep.x) == pytest.approx(1, abs=1e-15)


def test_witness_from_longest_sum_examples(basis, pair60, duplicated_pair):
    rep = witness_from_longest_sum(basis(5), verify=True)
    assert rep.product == pytest.approx(5**-2.5, rel=1e-12) and rep.source == "longest_sum"
    assert witness_from_longest_sum(pair60).product == pytest.approx(0.75, rel=1e-14)
    rep = witness_from_longest_sum(duplicated_pair)
    assert rep.product == pytest.approx(1.0) and np.allclose(rep.x, [1, 0])


def test_maximize_examples(basis, pair60, duplicated_pair):
    assert maximize_product(basis(6), OptimizerConfig.default(6, seed=1)).product == pytest.approx(1 / 216, rel=1e-6)
    oracle = angle_grid_max(pair60)
    assert oracle == pytest.approx(0.75, abs=1e-9)
    assert maximize_product(pair60, OptimizerConfig.default(2, seed=1)).product == pytest.approx(0.75, abs=1e-9)
    rep = maximize_product(duplicated_pair, OptimizerConfig.default(2, seed=1))
    assert rep.product == pytest.approx(1.0, abs=1e-12) and abs(rep.x[0]) == pytest.approx(1.0)


def test_maximize_matches_angle_oracle_for_random_pairs():
    for seed in range(5):
        vs = generate("random_uniform", 2, seed)
        got = maximize_product(vs, OptimizerConfig.default(2, seed=seed)).product
        assert got == pytest.approx(angle_grid_max(vs), abs=1e-9)


@pytest.mark.parametrize("n", [3, 8, 14])
def test_orthonormal_structure(n, basis):
    rep = maximize_product(basis(n), OptimizerConfig.default(n, seed=n))
    assert rep.product == pytest.approx(n ** (-n / 2), rel=1e-6)
    np.testing.assert_allclose(np.abs(rep.x), n**-0.5, atol=1e-5)


def test_maximize_dominates_longest_sum():
    for seed in range(15):
        vs = generate(("random_uniform", "perturbed_orthonormal", "clustered")[seed % 3], 2 + seed % 9, seed, 0.3)
        w = witness_from_longest_sum(vs)
        m = maximize_product(vs, OptimizerConfig.default(vs.n, seed=seed, starts=6))
        assert m.product >= w.product * (1 - 1e-12)
        assert m.source == "optimizer" and np.linalg.norm(m.x) == pytest.approx(1, abs=1e-12)


def test_optimizer_is_deterministic():
    vs = generate("random_uniform", 7, 3)
    cfg = OptimizerConfig.default(7, seed=9)
    a, b = maximize_product(vs, cfg), maximize_product(vs, cfg)
    assert a.product == b.product and np.array_equal(a.x, b.x)


def test_gradient_against_finite_differences():
    rng = np.random.default_rng(0)
    for inst in range(20):
        vs = generate("random_uniform", 3 + inst % 10, inst)
        checked = 0
        while checked < 20:
            x = rng.standard_normal(vs.n)
            x /= np.linalg.norm(x)
            if np.min(np.abs(vs.rows @ x)) < 0.05:
                continue
            g = tangent_gradient(vs.rows, x)
            fd = numerical_tangent_gradient(vs.rows, x, h=1e-6)
            assert np.linalg.norm(g - fd) <= 1e-4 * np.linalg.norm(g)
            assert abs(g @ x) < 1e-10 * np.linalg.norm(g) + 1e-12
            checked += 1


def test_log_objective_zero_sentinel(basis):
    assert log_objective(basis(3).rows, np.array([1.0, 0, 0])) == -math.inf


def test_rotation_invariance():
    for seed in range(4):
        vs = generate("random_uniform", 5, seed)
        q = ortho_group.rvs(5, random_state=seed)
        rotated = load(vs.rows @ q.T)
        cfg = OptimizerConfig.default(5, seed=seed, starts=40)
        a, b = maximize_product(vs, cfg).product, maximize_product(rotated, cfg).product
        assert a == pytest.approx(b, rel=1e-9)


def test_equality_case(basis):
    assert equality_case_check(basis(7), verify=True)
    assert not equality_case_check(generate("perturbed_orthonormal", 6, 1, 0.1), verify=True)
    assert not equality_case_check(generate("clustered", 6, 7, 0.1), verify=True)


def test_longest_sum_witness_random_small_batch():
    for n in range(2, 15):
        for seed in range(30):
            rep = witness_from_longest_sum(generate("random_uniform", n, seed), verify=True)
            assert rep.passes


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(starts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(starts=1, grad_tol=0)
    assert OptimizerConfig.default(6).starts == 20


def test_bound():
    assert bound(4) == pytest.approx(1 / 16, rel=1e-15)
    assert bound(14) == pytest.approx(1 / 105413504, rel=1e-14)


def test_report_dict(pair60):
    d = witness_from_longest_sum(pair60).as_dict()
    assert d["signs"] == "++" and d["passes"] is True and len(d["x"]) == 2
