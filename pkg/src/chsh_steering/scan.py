"""Random sampling of the steering functional against the quantum bound 2*sqrt(2)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlations import correlation_table, steering_from_correlators, steering_value
from .measurements import MeasurementScenario, random_frames, random_unit_vectors
from .quantum import PAULIS, TSIRELSON, phi_plus

BOUND_TOL = 1e-9
CHUNK = 10_000

_PAULI_PAIRS = np.einsum("iab,jcd->ijacbd", PAULIS, PAULIS).reshape(3, 3, 4, 4)


class BoundViolation(AssertionError):
    """A sampled value exceeded 2*sqrt(2); this signals a bug, not physics."""


def batch_pure_states(rng: np.random.Generator, size: int) -> np.ndarray:
    psi = rng.normal(size=(size, 4)) + 1j * rng.normal(size=(size, 4))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    return psi[:, :, None] * psi[:, None, :].conj()


def batch_mixed_states(rng: np.random.Generator, size: int) -> np.ndarray:
    g = rng.normal(size=(size, 4, 4)) + 1j * rng.normal(size=(size, 4, 4))
    rho = g @ np.conj(np.transpose(g, (0, 2, 1)))
    return rho / np.trace(rho, axis1=1, axis2=2).real[:, None, None]


def batch_correlation_matrices(rhos: np.ndarray) -> np.ndarray:
    """T[k, i, j] = Tr[(sigma_i (x) sigma_j) rho_k]."""
    return np.real(np.einsum("ijab,kba->kij", _PAULI_PAIRS, rhos))


def optimal_phi_plus_scenario() -> MeasurementScenario:
    s = 1.0 / np.sqrt(2.0)
    return MeasurementScenario.from_directions([s, 0, s], [s, 0, -s], [1, 0, 0], [0, 0, 1])


@dataclass(frozen=True)
class BoundScanSummary:
    samples: int
    seed: int
    max_s: float
    argmax: int
    mean_s: float
    violations_of_two: int
    bound: float = TSIRELSON

    @property
    def ok(self) -> bool:
        return bool(self.max_s <= self.bound + BOUND_TOL)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "max_S": self.max_s,
            "argmax": self.argmax,
            "mean_S": self.mean_s,
            "count_S_above_2": self.violations_of_two,
            "bound": self.bound,
            "ok": self.ok,
        }


def sample_values(samples: int, seed: int) -> np.ndarray:
    """S for ``samples`` random (state, sharp scenario) pairs.

    Even indices use Haar-random pure states, odd indices Wishart mixed states.
    """
    rng = np.random.default_rng(seed)
    out = np.empty(samples)
    for start in range(0, samples, CHUNK):
        size = min(CHUNK, samples - start)
        n_pure = (size + 1) // 2  # CHUNK is even, so chunks start on a pure index
        rhos = np.empty((size, 4, 4), dtype=complex)
        rhos[0::2] = batch_pure_states(rng, n_pure)
        rhos[1::2] = batch_mixed_states(rng, size - n_pure)
        T = batch_correlation_matrices(rhos)
        M = random_unit_vectors(rng, 2 * size).reshape(size, 2, 3)
        c, d = random_frames(rng, size)
        B = np.stack([c, d], axis=1)
        E = np.einsum("kxi,kij,kyj->kxy", M, T, B)
        out[start:start + size] = steering_from_correlators(E)
    return out


def bound_scan(samples: int, seed: int, inject_optimal: bool = False) -> BoundScanSummary:
    """Sample S and report the maximum; raises ``BoundViolation`` above 2*sqrt(2)."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    vals = sample_values(samples, seed)
    if inject_optimal:
        best = steering_value(correlation_table(phi_plus(), optimal_phi_plus_scenario()))
        vals = np.append(vals, best)
    k = int(np.argmax(vals))
    summary = BoundScanSummary(
        samples=len(vals),
        seed=seed,
        max_s=float(vals[k]),
        argmax=k,
        mean_s=float(vals.mean()),
        violations_of_two=int(np.count_nonzero(vals > 2.0)),
    )
    if not summary.ok:
        raise BoundViolation(f"S = {summary.max_s!r} exceeds 2*sqrt(2) at sample {k}")
    return summary
