"""Dichotomic qubit observables, unsharp smearing and Bob's unbiased pair."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .quantum import I2, bloch_vector, pauli_dot

UNIT_TOL = 1e-9
ORTHO_TOL = 1e-9


def _frozen(v) -> np.ndarray:
    arr = np.array(v, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class EffectPair:
    plus: np.ndarray
    minus: np.ndarray


@dataclass(frozen=True, eq=False)
class DichotomicObservable:
    """A +/-1 valued qubit measurement along ``direction`` with sharpness ``eta``.

    Effects are (I +/- eta * direction . sigma) / 2; eta = 1 is projective.
    """

    direction: np.ndarray
    eta: float = 1.0

    def __post_init__(self):
        d = bloch_vector(self.direction, unit=True, tol=UNIT_TOL)
        eta = float(self.eta)
        if not (0.0 < eta <= 1.0):
            raise ValueError(f"sharpness must lie in (0, 1], got {eta}")
        object.__setattr__(self, "direction", _frozen(d))
        object.__setattr__(self, "eta", eta)

    @property
    def operator(self) -> np.ndarray:
        """The observable plus-effect minus minus-effect, eta * m.sigma."""
        return self.eta * pauli_dot(self.direction)


def effects(obs: DichotomicObservable) -> EffectPair:
    op = obs.operator
    return EffectPair(plus=0.5 * (I2 + op), minus=0.5 * (I2 - op))


def smear(obs: DichotomicObservable, eta: float) -> DichotomicObservable:
    """Mix the effects with weight ``eta``; repeated smearing multiplies sharpness."""
    eta = float(eta)
    if not (0.0 < eta <= 1.0):
        raise ValueError(f"smearing parameter must lie in (0, 1], got {eta}")
    return DichotomicObservable(obs.direction, obs.eta * eta)


@dataclass(frozen=True, eq=False)
class MubPair:
    """Bob's two sharp measurements along orthonormal directions c and d."""

    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        c = bloch_vector(self.c, unit=True, tol=UNIT_TOL)
        d = bloch_vector(self.d, unit=True, tol=UNIT_TOL)
        overlap = float(c @ d)
        if abs(overlap) > ORTHO_TOL:
            raise ValueError(f"Bob's directions are not orthogonal (c.d = {overlap:.3e})")
        object.__setattr__(self, "c", _frozen(c))
        object.__setattr__(self, "d", _frozen(d))

    @property
    def directions(self) -> tuple[np.ndarray, np.ndarray]:
        return self.c, self.d

    @classmethod
    def orthonormalized(cls, c, d, *, warn: bool = True) -> "MubPair":
        """Normalize ``c`` and Gram-Schmidt ``d`` against it.

        Emits a ``UserWarning`` when the input overlap exceeds the tolerance.
        """
        c = np.asarray(c, dtype=float)
        d = np.asarray(d, dtype=float)
        nc, nd = np.linalg.norm(c), np.linalg.norm(d)
        if nc == 0 or nd == 0:
            raise ValueError("Bob's directions must be nonzero")
        c = c / nc
        d = d / nd
        overlap = float(c @ d)
        if abs(overlap) > ORTHO_TOL and warn:
            warnings.warn(
                f"re-orthonormalizing Bob's pair (c.d = {overlap:.3e})", UserWarning, stacklevel=2
            )
        d = d - overlap * c
        nd = np.linalg.norm(d)
        if nd < 1e-12:
            raise ValueError("Bob's directions are parallel")
        return cls(c, d / nd)


@dataclass(frozen=True, eq=False)
class MeasurementScenario:
    alice: tuple[DichotomicObservable, DichotomicObservable]
    bob: MubPair
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.alice) != 2:
            raise ValueError("Alice needs exactly two observables")
        object.__setattr__(self, "alice", tuple(self.alice))

    @classmethod
    def from_directions(cls, m, n, c, d, eta: float = 1.0) -> "MeasurementScenario":
        return cls(
            (DichotomicObservable(m, eta), DichotomicObservable(n, eta)),
            MubPair(c, d),
        )

    def with_alice_sharpness(self, eta: float) -> "MeasurementScenario":
        return MeasurementScenario(
            tuple(DichotomicObservable(o.direction, eta) for o in self.alice), self.bob
        )

    def flat(self) -> list[float]:
        """m1, m2, c, d components concatenated (12 numbers)."""
        parts = [self.alice[0].direction, self.alice[1].direction, self.bob.c, self.bob.d]
        return [float(x) for p in parts for x in p]


def random_unit_vectors(rng: np.random.Generator, size: int) -> np.ndarray:
    v = rng.normal(size=(size, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_frames(rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """First two axes of Haar-random orthonormal frames."""
    q, r = np.linalg.qr(rng.normal(size=(size, 3, 3)))
    q = q * np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
    return q[:, :, 0], q[:, :, 1]


def random_scenario(seed: int) -> MeasurementScenario:
    """Sharp scenario with uniform Alice directions and a uniform Bob frame."""
    rng = np.random.default_rng(seed)
    m, n = random_unit_vectors(rng, 2)
    c, d = random_frames(rng, 1)
    return MeasurementScenario.from_directions(m, n, c[0], d[0])
