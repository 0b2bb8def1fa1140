"""Joint probabilities, correlators and the CHSH-like steering functional."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .measurements import MeasurementScenario, effects
from .quantum import I2, TwoQubitState, pauli_dot

ENTRY_TOL = 1e-9

# Outcome +1 is index 0, -1 is index 1 throughout.
OUTCOMES = (1, -1)
SETTINGS = (1, 2)


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """E[x, y] = <A_x B_y>, plus the one-party marginals <A_x> and <B_y>.

    Settings are 0-indexed in the arrays.
    """

    E: np.ndarray
    alice_marg: np.ndarray
    bob_marg: np.ndarray

    def __post_init__(self):
        E = np.array(self.E, dtype=float).reshape(2, 2)
        am = np.zeros(2) if self.alice_marg is None else np.array(self.alice_marg, dtype=float)
        bm = np.zeros(2) if self.bob_marg is None else np.array(self.bob_marg, dtype=float)
        for name, arr in (("E", E), ("alice_marg", am), ("bob_marg", bm)):
            if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1.0 + ENTRY_TOL):
                raise ValueError(f"{name} entries must lie in [-1, 1]: {arr.tolist()}")
            arr.setflags(write=False)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "alice_marg", am)
        object.__setattr__(self, "bob_marg", bm)

    @classmethod
    def from_correlators(cls, E) -> "CorrelationTable":
        return cls(E, None, None)

    def to_dict(self) -> dict:
        return {
            "E": self.E.tolist(),
            "alice_marginals": self.alice_marg.tolist(),
            "bob_marginals": self.bob_marg.tolist(),
        }


def _check_indices(x: int, y: int, a: int, b: int) -> None:
    if x not in SETTINGS or y not in SETTINGS:
        raise ValueError(f"settings must be 1 or 2, got x={x}, y={y}")
    if a not in OUTCOMES or b not in OUTCOMES:
        raise ValueError(f"outcomes must be +1 or -1, got a={a}, b={b}")


def joint_probability(
    state: TwoQubitState, scenario: MeasurementScenario, x: int, y: int, a: int, b: int
) -> float:
    """P(a, b | x, y) = Tr[(E_a|x (x) F_b|y) rho]."""
    _check_indices(x, y, a, b)
    ea = effects(scenario.alice[x - 1])
    fb = 0.5 * (I2 + b * pauli_dot(scenario.bob.directions[y - 1]))
    e = ea.plus if a == 1 else ea.minus
    return state.expectation(np.kron(e, fb))


def correlation_table(state: TwoQubitState, scenario: MeasurementScenario) -> CorrelationTable:
    """Correlators by direct trace against the density matrix."""
    A = [obs.operator for obs in scenario.alice]
    B = [pauli_dot(v) for v in scenario.bob.directions]
    E = [[state.expectation(np.kron(A[x], B[y])) for y in range(2)] for x in range(2)]
    am = [state.expectation(np.kron(A[x], I2)) for x in range(2)]
    bm = [state.expectation(np.kron(I2, B[y])) for y in range(2)]
    return CorrelationTable(np.clip(E, -1, 1), np.clip(am, -1, 1), np.clip(bm, -1, 1))


def steering_from_correlators(E) -> float:
    """The CHSH-like steering functional of a 2x2 correlator array.

    S = |(E1. + E2.)| + |(E1. - E2.)| where Ex. is row x viewed as a vector
    over Bob's two settings. Local hidden state models satisfy S <= 2.
    """
    E = np.asarray(E, dtype=float)
    plus = E[..., 0, :] + E[..., 1, :]
    minus = E[..., 0, :] - E[..., 1, :]
    return np.hypot(plus[..., 0], plus[..., 1]) + np.hypot(minus[..., 0], minus[..., 1])


def steering_value(t: CorrelationTable) -> float:
    return float(steering_from_correlators(t.E))


_CHSH_SIGNS = [
    np.array(s, dtype=float).reshape(2, 2)
    for s in itertools.product((1, -1), repeat=4)
    if np.prod(s) == -1
]


def chsh_from_correlators(E) -> float:
    E = np.asarray(E, dtype=float)
    return max(float(np.sum(s * E)) for s in _CHSH_SIGNS)


def chsh_value(t: CorrelationTable) -> float:
    """Largest CHSH combination over the relabelings with one minus sign."""
    return chsh_from_correlators(t.E)


def correlators_from_matrix(T: np.ndarray, scenario: MeasurementScenario) -> np.ndarray:
    """E[x, y] = eta_x m_x . T b_y, using the state's correlation matrix."""
    M = np.array([o.eta * o.direction for o in scenario.alice])
    Bv = np.array(scenario.bob.directions)
    return M @ T @ Bv.T
