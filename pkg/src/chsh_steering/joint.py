"""Joint measurability of two unsharp dichotomic qubit observables.

For unbiased effects (I +/- eta m.sigma)/2 and (I +/- eta n.sigma)/2 a
mother POVM exists iff

    eta * (|m + n| + |m - n|) <= 2,

and one is given by G[a1][a2] = (1/4)[(1 + a1 a2 gamma) I + eta (a1 m + a2 n).sigma]
for any gamma in [eta|m+n| - 1, 1 - eta|m-n|].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurements import DichotomicObservable, effects, random_unit_vectors
from .quantum import I2, bloch_vector, pauli_dot

UNIT_TOL = 1e-9
FEASIBILITY_TOL = 1e-12

SIGNS = (1, -1)


class InfeasibleError(ValueError):
    """The requested sharpness is above the joint-measurability threshold."""


def _unit(v) -> np.ndarray:
    return bloch_vector(v, unit=True, tol=UNIT_TOL)


def eta_max(m, n) -> float:
    """Largest sharpness at which (m, eta) and (n, eta) are jointly measurable."""
    m, n = _unit(m), _unit(n)
    return 2.0 / (np.linalg.norm(m + n) + np.linalg.norm(m - n))


def gamma_interval(m, n, eta: float) -> tuple[float, float]:
    m, n = np.asarray(m, float), np.asarray(n, float)
    return eta * np.linalg.norm(m + n) - 1.0, 1.0 - eta * np.linalg.norm(m - n)


@dataclass(frozen=True, eq=False)
class MotherPovm:
    """Four effects G[i][j]; index 0 is outcome +1, index 1 is outcome -1."""

    G: np.ndarray  # shape (2, 2, 2, 2)
    eta: float
    gamma: float

    def effect(self, a1: int, a2: int) -> np.ndarray:
        return self.G[SIGNS.index(a1), SIGNS.index(a2)]

    def marginal_first(self, a1: int) -> np.ndarray:
        return self.G[SIGNS.index(a1)].sum(axis=0)

    def marginal_second(self, a2: int) -> np.ndarray:
        return self.G[:, SIGNS.index(a2)].sum(axis=0)

    def min_eigenvalues(self) -> np.ndarray:
        return np.array([[np.linalg.eigvalsh(self.G[i, j]).min() for j in range(2)] for i in range(2)])


def mother_povm(m, n, eta: float, gamma: float | None = None) -> MotherPovm:
    """Mother observable for the unsharp pair, with gamma at the feasible midpoint.

    Raises ``InfeasibleError`` if eta exceeds ``eta_max(m, n)``.
    """
    m, n = _unit(m), _unit(n)
    eta = float(eta)
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"sharpness must lie in (0, 1], got {eta}")
    lo, hi = gamma_interval(m, n, eta)
    if lo > hi + FEASIBILITY_TOL:
        raise InfeasibleError(
            f"eta = {eta:.12g} exceeds the joint-measurability threshold {eta_max(m, n):.12g}"
        )
    if gamma is None:
        gamma = 0.5 * (lo + hi)
    G = np.empty((2, 2, 2, 2), dtype=complex)
    for i, a1 in enumerate(SIGNS):
        for j, a2 in enumerate(SIGNS):
            G[i, j] = 0.25 * ((1 + a1 * a2 * gamma) * I2 + eta * pauli_dot(a1 * m + a2 * n))
    return MotherPovm(G, eta, float(gamma))


def is_jointly_measurable(m, n, eta: float) -> bool:
    lo, hi = gamma_interval(_unit(m), _unit(n), eta)
    return lo <= hi + FEASIBILITY_TOL


def check_marginals(povm: MotherPovm, obs1: DichotomicObservable, obs2: DichotomicObservable) -> float:
    """Largest deviation between the mother's marginals and the target effects."""
    e1, e2 = effects(obs1), effects(obs2)
    dev = 0.0
    for a, t1, t2 in ((1, e1.plus, e2.plus), (-1, e1.minus, e2.minus)):
        dev = max(dev, np.abs(povm.marginal_first(a) - t1).max())
        dev = max(dev, np.abs(povm.marginal_second(a) - t2).max())
    return float(dev)


@dataclass(frozen=True)
class JmReport:
    m: tuple[float, float, float]
    n: tuple[float, float, float]
    eta_max: float
    gamma: float
    min_eigenvalues: tuple[float, float, float, float]
    marginal_error: float

    def jointly_measurable_at(self, eta: float) -> bool:
        return eta <= self.eta_max + FEASIBILITY_TOL

    def to_dict(self) -> dict:
        return {
            "m": list(self.m),
            "n": list(self.n),
            "eta_max": self.eta_max,
            "gamma": self.gamma,
            "min_eigenvalues": list(self.min_eigenvalues),
            "marginal_error": self.marginal_error,
        }


def jm_report(m, n) -> JmReport:
    """Threshold, construction parameter and positivity margins at eta_max."""
    m, n = _unit(m), _unit(n)
    e = eta_max(m, n)
    povm = mother_povm(m, n, e)
    err = check_marginals(povm, DichotomicObservable(m, e), DichotomicObservable(n, e))
    return JmReport(
        tuple(m.tolist()),
        tuple(n.tolist()),
        e,
        povm.gamma,
        tuple(povm.min_eigenvalues().ravel().tolist()),
        err,
    )


def global_eta_opt(samples: int, seed: int, *, parallel_only: bool = False) -> float:
    """Worst-case threshold over random unit pairs plus the orthogonal pair.

    ``parallel_only`` samples pairs with n = m (a sanity path where the
    orthogonal pair is not added).
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    m = random_unit_vectors(rng, samples)
    if parallel_only:
        n = m.copy()
    else:
        n = random_unit_vectors(rng, samples)
        m = np.vstack([m, [1.0, 0.0, 0.0]])
        n = np.vstack([n, [0.0, 1.0, 0.0]])
    vals = 2.0 / (np.linalg.norm(m + n, axis=1) + np.linalg.norm(m - n, axis=1))
    return float(vals.min())
