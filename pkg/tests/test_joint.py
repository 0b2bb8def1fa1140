import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chsh_steering.joint import (
    InfeasibleError, check_marginals, eta_max, global_eta_opt, is_jointly_measurable, jm_report, mother_povm,
)
from chsh_steering.measurements import DichotomicObservable
from chsh_steering.quantum import I2

X, Y, Z = np.eye(3)
S2 = 1 / math.sqrt(2)

angles = st.tuples(st.floats(0, math.pi), st.floats(0, 2 * math.pi))


def unit(theta, phi):
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


def random_pair(rng):
    m, n = rng.normal(size=(2, 3))
    return m / np.linalg.norm(m), n / np.linalg.norm(n)


def grid_feasible(m, n, eta, step=1e-4):
    """Scan gamma over [-1, 1] checking positivity of all four effects directly."""
    for gamma in np.arange(-1.0, 1.0 + step / 2, step):
        ok = True
        for a1 in (1, -1):
            for a2 in (1, -1):
                v = eta * (a1 * m + a2 * n)
                # eigenvalues of (1 + a1 a2 gamma) I + v.sigma are (1 + a1 a2 gamma) +/- |v|
                if 1 + a1 * a2 * gamma - np.linalg.norm(v) < -1e-12:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


class TestEtaMax:
    def test_parallel(self):
        assert eta_max(Z, Z) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert eta_max(X, Z) == pytest.approx(S2, abs=1e-15)

    def test_sixty_degrees(self):
        n = np.array([math.sin(math.pi / 3), 0, math.cos(math.pi / 3)])
        assert eta_max(Z, n) == pytest.approx(2 / (math.sqrt(3) + 1), abs=1e-12)
        assert eta_max(Z, n) == pytest.approx(0.7320508, abs=1e-7)

    def test_non_unit(self):
        with pytest.raises(ValueError):
            eta_max([0, 0, 0.5], X)

    @given(angles, angles)
    def test_symmetry(self, a, b):
        m, n = unit(*a), unit(*b)
        e = eta_max(m, n)
        assert eta_max(n, m) == pytest.approx(e, rel=1e-12)
        assert eta_max(-m, n) == pytest.approx(e, rel=1e-12)
        assert S2 - 1e-12 <= e <= 1 + 1e-12

    def test_agrees_with_gamma_grid(self, rng):
        for _ in range(15):
            m, n = random_pair(rng)
            e = eta_max(m, n)
            # away from the threshold by more than the grid resolution
            assert grid_feasible(m, n, e * (1 - 2e-4))
            assert not grid_feasible(m, n, min(1.0, e * (1 + 2e-4))) or e > 1 - 2e-4


class TestMotherPovm:
    def test_commuting(self):
        g = mother_povm(Z, Z, 1.0)
        assert g.gamma == pytest.approx(1.0)
        np.testing.assert_allclose(g.effect(1, 1), np.diag([1, 0]), atol=1e-12)
        np.testing.assert_allclose(g.effect(1, -1), 0, atol=1e-12)
        np.testing.assert_allclose(g.effect(-1, 1), 0, atol=1e-12)

    def test_orthogonal_boundary(self):
        g = mother_povm(X, Z, S2)
        assert g.gamma == pytest.approx(0.0, abs=1e-15)
        np.testing.assert_allclose(g.min_eigenvalues(), 0.0, atol=1e-12)
        for a1 in (1, -1):
            for a2 in (1, -1):
                v = S2 * (a1 * X + a2 * Z)
                np.testing.assert_allclose(
                    g.effect(a1, a2), 0.25 * (I2 + v[0] * np.array([[0, 1], [1, 0]]) + v[2] * np.diag([1, -1])),
                    atol=1e-12,
                )

    def test_orthogonal_interior(self):
        g = mother_povm(X, Z, 0.5)
        assert g.min_eigenvalues().min() > 0.01

    def test_conditions(self, rng):
        for _ in range(200):
            m, n = random_pair(rng)
            eta = rng.uniform(0.01, 1) * eta_max(m, n)
            g = mother_povm(m, n, eta)
            assert g.min_eigenvalues().min() >= -1e-12
            np.testing.assert_allclose(g.G.sum(axis=(0, 1)), I2, atol=1e-12)
            err = check_marginals(g, DichotomicObservable(m, eta), DichotomicObservable(n, eta))
            assert err <= 1e-12
            for a in (1, -1):
                np.testing.assert_allclose(g.marginal_first(a), 0.5 * (I2 + a * eta * _dot(m)), atol=1e-12)
                np.testing.assert_allclose(g.marginal_second(a), 0.5 * (I2 + a * eta * _dot(n)), atol=1e-12)

    def test_infeasible_above_threshold(self):
        with pytest.raises(InfeasibleError):
            mother_povm(X, Z, 0.72)

    def test_threshold_sharp(self, rng):
        for _ in range(50):
            m, n = random_pair(rng)
            e = eta_max(m, n)
            mother_povm(m, n, e)
            if e * (1 + 1e-6) <= 1:
                with pytest.raises(InfeasibleError):
                    mother_povm(m, n, e * (1 + 1e-6))
            # bisection recovers the threshold
            lo, hi = 0.0, 1.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                lo, hi = (mid, hi) if is_jointly_measurable(m, n, mid) else (lo, mid)
            assert lo == pytest.approx(e, rel=1e-6)


def _dot(v):
    return np.array([[v[2], v[0] - 1j * v[1]], [v[0] + 1j * v[1], -v[2]]])


class TestGlobalEtaOpt:
    def test_includes_orthogonal_pair(self):
        assert global_eta_opt(1, 0) <= S2 + 1e-12

    def test_many_samples(self):
        assert global_eta_opt(10_000, 5) == pytest.approx(S2, abs=1e-9)

    def test_parallel_only(self):
        assert global_eta_opt(100, 1, parallel_only=True) == pytest.approx(1.0)

    def test_deterministic(self):
        assert global_eta_opt(500, 3) == global_eta_opt(500, 3)

    def test_samples_positive(self):
        with pytest.raises(ValueError):
            global_eta_opt(0, 1)


def test_report():
    r = jm_report(X, Z)
    assert r.eta_max == pytest.approx(S2)
    assert r.jointly_measurable_at(0.7) and not r.jointly_measurable_at(0.71)
    assert r.marginal_error < 1e-12
    assert min(r.min_eigenvalues) >= -1e-12
