"""Local-hidden-state membership at the level of the four correlators.

A deterministic Alice strategy (a1, a2) paired with a hidden Bob qubit whose
Bloch projections onto (c, d) are (beta1, beta2) yields the correlator vector
(a1 beta1, a1 beta2, a2 beta1, a2 beta2). Bob's disk is replaced by the
inscribed regular ngon, so LP membership implies S <= 2 and S <= 2 cos(pi/ngon)
implies membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .correlations import correlators_from_matrix, steering_from_correlators
from .measurements import DichotomicObservable, MeasurementScenario, effects, random_frames, random_unit_vectors
from .quantum import I2, TwoQubitState, partial_trace_alice, random_mixed_state, random_pure_state

MEMBER_TOL = 1e-9
ALICE_STRATEGIES = tuple(itertools.product((1, -1), repeat=2))


class LpFailure(RuntimeError):
    """The LP solver failed for numerical reasons (distinct from infeasibility)."""


@dataclass(frozen=True, eq=False)
class Assemblage:
    """Bob's unnormalized conditional states sigma[a][x]; a index 0 is outcome +1."""

    sigma: np.ndarray  # shape (2, 2, 2, 2): [a, x, row, col]

    def reduced(self, x: int) -> np.ndarray:
        return self.sigma[:, x].sum(axis=0)

    def signaling_gap(self) -> float:
        return float(np.abs(self.reduced(0) - self.reduced(1)).max())

    def min_eigenvalue(self) -> float:
        return float(min(np.linalg.eigvalsh(s).min() for s in self.sigma.reshape(4, 2, 2)))


def assemblage_from_state(
    state: TwoQubitState, alice: tuple[DichotomicObservable, DichotomicObservable]
) -> Assemblage:
    sigma = np.empty((2, 2, 2, 2), dtype=complex)
    for x, obs in enumerate(alice):
        e = effects(obs)
        for a, eff in enumerate((e.plus, e.minus)):
            sigma[a, x] = partial_trace_alice(np.kron(eff, I2) @ state.rho)
    return Assemblage(sigma)


@dataclass(frozen=True)
class LhsVertex:
    alice_outcomes: tuple[int, int]
    bob_point: tuple[float, float]

    def __post_init__(self):
        b1, b2 = self.bob_point
        if b1 * b1 + b2 * b2 > 1.0 + 1e-12:
            raise ValueError("hidden Bob point lies outside the unit disk")

    def correlators(self) -> np.ndarray:
        a = np.array(self.alice_outcomes, dtype=float)
        return np.outer(a, self.bob_point)


def polygon_vertices(ngon: int) -> list[LhsVertex]:
    ang = 2.0 * np.pi * np.arange(ngon) / ngon
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    return [LhsVertex(s, tuple(p)) for s in ALICE_STRATEGIES for p in pts]


def _vertex_matrix(ngon: int) -> np.ndarray:
    """Columns are the flattened correlator vectors of all 4*ngon vertices."""
    ang = 2.0 * np.pi * np.arange(ngon) / ngon
    cols = []
    for a1, a2 in ALICE_STRATEGIES:
        cols.append(np.vstack([a1 * np.cos(ang), a1 * np.sin(ang), a2 * np.cos(ang), a2 * np.sin(ang)]))
    return np.hstack(cols)


@dataclass(frozen=True, eq=False)
class MembershipResult:
    member: bool
    margin: float
    s_value: float
    weights: np.ndarray | None = field(default=None, repr=False)
    ngon: int = 0

    def to_dict(self) -> dict:
        out = {"member": self.member, "margin": self.margin, "S": self.s_value, "ngon": self.ngon}
        if self.weights is not None:
            nz = np.flatnonzero(self.weights > 1e-12)
            out["support"] = [[int(i), float(self.weights[i])] for i in nz]
        return out


def lhs_membership(E, ngon: int = 256) -> MembershipResult:
    """Decide whether the correlators admit a local-hidden-state decomposition.

    Solves min s subject to |V w - E| <= s, w >= 0, sum w = 1. The optimal
    slack ``margin`` is 0 for members and measures the distance (max-norm)
    to the polytope otherwise.
    """
    if ngon < 8:
        raise ValueError("ngon must be at least 8")
    E = np.asarray(E, dtype=float).reshape(2, 2)
    if np.any(np.abs(E) > 1.0 + 1e-9):
        raise ValueError("correlators must lie in [-1, 1]")
    V = _vertex_matrix(ngon)
    nv = V.shape[1]
    e = E.ravel()
    # variables: w (nv), s (1)
    cost = np.zeros(nv + 1)
    cost[-1] = 1.0
    ones = np.ones((4, 1))
    A_ub = np.block([[V, -ones], [-V, -ones]])
    b_ub = np.concatenate([e, -e])
    A_eq = np.concatenate([np.ones(nv), [0.0]])[None, :]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0], bounds=(0, None), method="highs")
    if res.status != 0:
        raise LpFailure(f"LP solver failed: {res.message}")
    w = np.clip(res.x[:nv], 0.0, None)
    w = w / w.sum()
    margin = float(np.abs(V @ w - e).max())
    s = float(steering_from_correlators(E))
    member = margin <= MEMBER_TOL
    return MembershipResult(member, margin, s, w if member else None, ngon)


@dataclass
class CrossValidationReport:
    samples: int
    ngon: int
    members: int = 0
    nonmembers: int = 0
    in_gap: int = 0
    violations_member_implies_bound: list = field(default_factory=list)
    violations_bound_implies_member: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.violations_member_implies_bound or self.violations_bound_implies_member)

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "ngon": self.ngon,
            "members": self.members,
            "nonmembers": self.nonmembers,
            "in_gap": self.in_gap,
            "violations_member_implies_bound": self.violations_member_implies_bound,
            "violations_bound_implies_member": self.violations_bound_implies_member,
            "ok": self.ok,
        }


def check_table(E, ngon: int, report: CrossValidationReport) -> MembershipResult:
    """Run both implications on one table and record the outcome in ``report``."""
    res = lhs_membership(E, ngon)
    inner = 2.0 * np.cos(np.pi / ngon)
    if res.member:
        report.members += 1
        if res.s_value > 2.0 + 1e-8:
            report.violations_member_implies_bound.append(np.asarray(E).tolist())
    else:
        report.nonmembers += 1
        if res.s_value <= inner:
            report.violations_bound_implies_member.append(np.asarray(E).tolist())
    if inner < res.s_value <= 2.0:
        report.in_gap += 1
    return res


def quantum_tables(rng: np.random.Generator, count: int) -> np.ndarray:
    """Correlator tables of random states under random sharp scenarios."""
    out = np.empty((count, 2, 2))
    for k in range(count):
        state = random_pure_state(rng) if k % 2 == 0 else random_mixed_state(rng)
        m, n = random_unit_vectors(rng, 2)
        c, d = random_frames(rng, 1)
        sc = MeasurementScenario.from_directions(m, n, c[0], d[0])
        out[k] = correlators_from_matrix(state.correlation_matrix(), sc)
    return out


def cross_validate(samples: int, seed: int, ngon: int = 256, quantum: int = 0) -> CrossValidationReport:
    """Check the LP against the steering functional on random tables.

    ``samples`` tables are uniform in [-1, 1]^4; ``quantum`` more come from
    random states and settings.
    """
    if ngon < 64:
        raise ValueError("ngon must be at least 64 for cross-validation")
    rng = np.random.default_rng(seed)
    tables = rng.uniform(-1.0, 1.0, size=(samples, 2, 2))
    if quantum:
        tables = np.concatenate([tables, quantum_tables(rng, quantum)])
    report = CrossValidationReport(len(tables), ngon)
    for E in tables:
        check_table(E, ngon, report)
    return report
