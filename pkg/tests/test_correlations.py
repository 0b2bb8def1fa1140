import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chsh_steering.correlations import (
    CorrelationTable, chsh_from_correlators, chsh_value, correlation_table,
    correlators_from_matrix, joint_probability, steering_from_correlators, steering_value,
)
from chsh_steering.measurements import MeasurementScenario, random_scenario
from chsh_steering.quantum import (
    TSIRELSON, phi_plus, product_state, pure_schmidt_state, random_mixed_state,
    random_pure_state, singlet, werner_state,
)
from oracles import s_from_directions, sigma_dot

S2 = 1 / math.sqrt(2)
X, Y, Z = np.eye(3)
OPT_TABLE = [[S2, S2], [S2, -S2]]

entries = st.floats(-1, 1)
tables = st.lists(entries, min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))


def scenario(m, n, c, d, eta=1.0):
    return MeasurementScenario.from_directions(m, n, c, d, eta)


class TestJointProbability:
    def test_product_zz(self):
        sc = scenario(Z, Z, Z, X)
        assert joint_probability(pure_schmidt_state(1.0), sc, 1, 1, 1, 1) == pytest.approx(1.0)

    def test_singlet_anticorrelated(self):
        sc = scenario(Z, Z, Z, X)
        assert joint_probability(singlet(), sc, 1, 1, 1, 1) == pytest.approx(0.0, abs=1e-15)

    def test_phi_plus_x_z(self):
        sc = scenario(X, Z, Z, X)
        p = joint_probability(phi_plus(), sc, 1, 1, 1, 1)
        # 4x4 trace oracle with explicit projectors
        proj = np.kron((np.eye(2) + sigma_dot(X)) / 2, (np.eye(2) + sigma_dot(Z)) / 2)
        assert p == pytest.approx(np.real(np.trace(proj @ phi_plus().rho)), abs=1e-15)
        assert p == pytest.approx(0.25, abs=1e-12)

    def test_normalized(self, rng):
        for _ in range(20):
            state, sc = random_mixed_state(rng), random_scenario(int(rng.integers(1e9)))
            for x in (1, 2):
                for y in (1, 2):
                    ps = [joint_probability(state, sc, x, y, a, b) for a in (1, -1) for b in (1, -1)]
                    assert sum(ps) == pytest.approx(1.0, abs=1e-12)
                    assert min(ps) >= -1e-12 and max(ps) <= 1 + 1e-12

    def test_bad_labels(self):
        with pytest.raises(ValueError):
            joint_probability(singlet(), scenario(Z, Z, Z, X), 0, 1, 1, 1)
        with pytest.raises(ValueError):
            joint_probability(singlet(), scenario(Z, Z, Z, X), 1, 1, 0, 1)

    def test_correlator_from_probabilities(self, rng):
        state, sc = random_pure_state(rng), random_scenario(3)
        t = correlation_table(state, sc)
        for x in (1, 2):
            for y in (1, 2):
                e = sum(a * b * joint_probability(state, sc, x, y, a, b) for a in (1, -1) for b in (1, -1))
                assert e == pytest.approx(t.E[x - 1, y - 1], abs=1e-12)


class TestCorrelationTable:
    def test_singlet(self):
        t = correlation_table(singlet(), scenario(Z, X, Z, X))
        assert t.E[0, 0] == pytest.approx(-1)
        assert t.E[0, 1] == pytest.approx(0, abs=1e-15)

    def test_singlet_unsharp(self):
        t = correlation_table(singlet(), scenario(Z, X, Z, X, eta=0.5))
        assert t.E[0, 0] == pytest.approx(-0.5)

    def test_phi_plus_diagonal(self):
        t = correlation_table(phi_plus(), scenario([S2, 0, S2], Z, X, Y))
        assert t.E[0, 0] == pytest.approx(S2, abs=1e-12)

    def test_matches_correlation_matrix(self, rng):
        for _ in range(20):
            state, sc = random_mixed_state(rng), random_scenario(int(rng.integers(1e9)))
            np.testing.assert_allclose(
                correlation_table(state, sc).E, correlators_from_matrix(state.correlation_matrix(), sc), atol=1e-12
            )

    def test_marginals(self):
        t = correlation_table(pure_schmidt_state(1.0), scenario(Z, X, Z, X))
        np.testing.assert_allclose(t.alice_marg, [1, 0], atol=1e-15)
        np.testing.assert_allclose(t.bob_marg, [1, 0], atol=1e-15)

    def test_range_check(self):
        with pytest.raises(ValueError):
            CorrelationTable.from_correlators([[1.5, 0], [0, 0]])

    def test_unsharp_scaling(self, rng):
        for _ in range(50):
            state = random_mixed_state(rng)
            sc = random_scenario(int(rng.integers(1e9)))
            eta = rng.uniform(0.01, 1)
            sharp = correlation_table(state, sc)
            soft = correlation_table(state, sc.with_alice_sharpness(eta))
            np.testing.assert_allclose(soft.E, eta * sharp.E, atol=1e-12)
            np.testing.assert_allclose(soft.alice_marg, eta * sharp.alice_marg, atol=1e-12)
            np.testing.assert_allclose(soft.bob_marg, sharp.bob_marg, atol=1e-12)


class TestSteeringValue:
    def test_zero(self):
        assert steering_value(CorrelationTable.from_correlators(np.zeros((2, 2)))) == 0

    def test_optimal_table(self):
        s = steering_value(CorrelationTable.from_correlators(OPT_TABLE))
        assert s == pytest.approx(2 * math.sqrt(2), abs=1e-15)

    def test_optimal_table_is_quantum(self):
        t = correlation_table(phi_plus(), scenario([S2, 0, S2], [S2, 0, -S2], X, Z))
        np.testing.assert_allclose(t.E, OPT_TABLE, atol=1e-12)

    def test_hand_formula(self, rng):
        for _ in range(20):
            e = rng.uniform(-1, 1, (2, 2))
            hand = math.sqrt((e[0, 0] + e[1, 0]) ** 2 + (e[0, 1] + e[1, 1]) ** 2) + math.sqrt(
                (e[0, 0] - e[1, 0]) ** 2 + (e[0, 1] - e[1, 1]) ** 2
            )
            assert steering_from_correlators(e) == pytest.approx(hand, rel=1e-14)

    def test_matches_trace_oracle(self, rng):
        for _ in range(20):
            state, sc = random_mixed_state(rng), random_scenario(int(rng.integers(1e9)))
            m, n = (o.direction for o in sc.alice)
            want = s_from_directions(state.rho, m, n, sc.bob.c, sc.bob.d)
            assert steering_value(correlation_table(state, sc)) == pytest.approx(want, abs=1e-12)

    @given(tables, st.floats(0, 10))
    def test_homogeneous(self, e, t):
        assert steering_from_correlators(t * e) == pytest.approx(t * steering_from_correlators(e), rel=1e-12, abs=1e-15)

    @given(tables)
    def test_bob_permutation(self, e):
        assert steering_from_correlators(e[:, ::-1]) == pytest.approx(steering_from_correlators(e), rel=1e-12)

    @given(tables, st.sampled_from([0, 1]))
    def test_alice_sign_flip(self, e, x):
        f = e.copy()
        f[x] *= -1
        assert steering_from_correlators(f) == pytest.approx(steering_from_correlators(e), rel=1e-12)

    def test_quantum_bound_random(self, rng):
        for _ in range(2000):
            state = random_pure_state(rng) if rng.uniform() < 0.5 else random_mixed_state(rng)
            sc = random_scenario(int(rng.integers(1e9)))
            assert steering_value(correlation_table(state, sc)) <= TSIRELSON + 1e-9

    def test_product_states_do_not_violate(self, rng):
        for _ in range(500):
            ra, rb = (v / np.linalg.norm(v) * rng.uniform() for v in rng.normal(size=(2, 3)))
            sc = random_scenario(int(rng.integers(1e9)))
            assert steering_value(correlation_table(product_state(ra, rb), sc)) <= 2 + 1e-9


class TestChsh:
    def test_zero(self):
        assert chsh_value(CorrelationTable.from_correlators(np.zeros((2, 2)))) == 0

    def test_optimal(self):
        assert chsh_from_correlators(OPT_TABLE) == pytest.approx(2 * math.sqrt(2))

    def test_identity_table(self):
        # enumerate the 4 placements of the minus sign by hand
        e = np.eye(2)
        combos = [
            abs(-e[0, 0] + e[0, 1] + e[1, 0] + e[1, 1]),
            abs(e[0, 0] - e[0, 1] + e[1, 0] + e[1, 1]),
            abs(e[0, 0] + e[0, 1] - e[1, 0] + e[1, 1]),
            abs(e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1]),
        ]
        assert chsh_from_correlators(e) == pytest.approx(max(combos)) == pytest.approx(2)

    def test_werner_chsh(self):
        t = correlation_table(werner_state(0.5), scenario([S2, 0, S2], [S2, 0, -S2], X, Z))
        assert chsh_value(t) == pytest.approx(math.sqrt(2), abs=1e-12)
