"""Maximize the steering functional over measurement directions for a fixed state.

Settings are parametrized by seven angles:

    (theta1, phi1)      Alice's first direction m
    (theta2, phi2)      Alice's second direction n
    (theta_c, phi_c)    Bob's first direction c
    chi                 rotation of Bob's d in the plane orthogonal to c

so Bob's pair is orthonormal by construction rather than by penalty.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .correlations import correlation_table, steering_value
from .measurements import MeasurementScenario
from .quantum import TwoQubitState, pure_schmidt_state, werner_state

N_ANGLES = 7


@dataclass(frozen=True)
class OptConfig:
    restarts: int = 64
    seed: int = 42
    tol: float = 1e-10
    max_iters: int = 2000
    xtol: float = 1e-6

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True, eq=False)
class OptResult:
    s_opt: float
    scenario: MeasurementScenario
    restarts_used: int
    converged: bool
    angles: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        sc = self.scenario
        return {
            "s_opt": self.s_opt,
            "alice": [sc.alice[0].direction.tolist(), sc.alice[1].direction.tolist()],
            "bob": [sc.bob.c.tolist(), sc.bob.d.tolist()],
            "restarts_used": self.restarts_used,
            "converged": self.converged,
        }


def sphere_point(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def bob_frame(theta: float, phi: float, chi: float) -> tuple[np.ndarray, np.ndarray]:
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    c = np.array([st * cp, st * sp, ct])
    e1 = np.array([ct * cp, ct * sp, -st])
    e2 = np.array([-sp, cp, 0.0])
    return c, math.cos(chi) * e1 + math.sin(chi) * e2


def scenario_from_angles(x: Sequence[float]) -> MeasurementScenario:
    t1, p1, t2, p2, tc, pc, chi = (float(v) for v in x)
    c, d = bob_frame(tc, pc, chi)
    return MeasurementScenario.from_directions(sphere_point(t1, p1), sphere_point(t2, p2), c, d)


def make_objective(T: np.ndarray):
    """Negative steering value as a function of the seven angles.

    Written with scalar ``math`` calls; for 3-vectors this is several times
    faster than small-array numpy and dominates optimizer runtime.
    """
    (t00, t01, t02), (t10, t11, t12), (t20, t21, t22) = np.asarray(T, dtype=float).tolist()
    sin, cos, hypot = math.sin, math.cos, math.hypot

    def neg_s(x):
        t1, p1, t2, p2, tc, pc, chi = x
        s1 = sin(t1)
        m0, m1, m2 = s1 * cos(p1), s1 * sin(p1), cos(t1)
        s2 = sin(t2)
        n0, n1, n2 = s2 * cos(p2), s2 * sin(p2), cos(t2)
        st, ct, sp, cp = sin(tc), cos(tc), sin(pc), cos(pc)
        c0, c1, c2 = st * cp, st * sp, ct
        ch, sh = cos(chi), sin(chi)
        d0, d1, d2 = ch * ct * cp - sh * sp, ch * ct * sp + sh * cp, -ch * st
        tc0 = t00 * c0 + t01 * c1 + t02 * c2
        tc1 = t10 * c0 + t11 * c1 + t12 * c2
        tc2 = t20 * c0 + t21 * c1 + t22 * c2
        td0 = t00 * d0 + t01 * d1 + t02 * d2
        td1 = t10 * d0 + t11 * d1 + t12 * d2
        td2 = t20 * d0 + t21 * d1 + t22 * d2
        u0, u1, u2 = m0 + n0, m1 + n1, m2 + n2
        v0, v1, v2 = m0 - n0, m1 - n1, m2 - n2
        plus = hypot(u0 * tc0 + u1 * tc1 + u2 * tc2, u0 * td0 + u1 * td1 + u2 * td2)
        minus = hypot(v0 * tc0 + v1 * tc1 + v2 * tc2, v0 * td0 + v1 * td1 + v2 * td2)
        return -(plus + minus)

    return neg_s


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Per-restart generator derived from (seed, index) only."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def optimize(state: TwoQubitState, cfg: OptConfig | None = None) -> OptResult:
    """Multistart Nelder-Mead over the seven angles, all measurements sharp.

    The best restart wins; ties go to the lowest restart index. The reported
    value is recomputed from the returned scenario by direct trace.
    """
    cfg = cfg or OptConfig()
    f = make_objective(state.correlation_matrix())
    opts = {"xatol": cfg.xtol, "fatol": cfg.tol, "maxiter": cfg.max_iters}
    best_val, best_x, best_ok = math.inf, None, False
    for r in range(cfg.restarts):
        x0 = restart_rng(cfg.seed, r).uniform(0.0, 2.0 * math.pi, N_ANGLES)
        res = minimize(f, x0, method="Nelder-Mead", options=opts)
        if res.fun < best_val:
            best_val, best_x, best_ok = float(res.fun), res.x, bool(res.success)
    scenario = scenario_from_angles(best_x)
    s = steering_value(correlation_table(state, scenario))
    return OptResult(s, scenario, cfg.restarts, best_ok, np.array(best_x))


@dataclass(frozen=True)
class SweepRow:
    param: float
    s_opt: float
    scenario: tuple[float, ...]
    converged: bool

    COLUMNS = (
        "param", "s_opt",
        "m1x", "m1y", "m1z", "m2x", "m2y", "m2z",
        "cx", "cy", "cz", "dx", "dy", "dz",
        "converged",
    )

    def as_list(self) -> list:
        return [self.param, self.s_opt, *self.scenario, self.converged]

    def to_scenario(self) -> MeasurementScenario:
        v = np.array(self.scenario)
        return MeasurementScenario.from_directions(v[0:3], v[3:6], v[6:9], v[9:12])


STATE_FAMILIES = {"pure": pure_schmidt_state, "werner": werner_state}


def _sweep_point(args) -> SweepRow:
    family, p, cfg = args
    res = optimize(STATE_FAMILIES[family](p), cfg)
    return SweepRow(float(p), res.s_opt, tuple(res.scenario.flat()), res.converged)


def sweep(family: str, grid: Sequence[float], cfg: OptConfig | None = None, workers: int = 1) -> list[SweepRow]:
    """Optimize each grid point; rows come back in grid order regardless of workers."""
    if family not in STATE_FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(STATE_FAMILIES)}")
    cfg = cfg or OptConfig()
    grid = [float(p) for p in grid]
    for p in grid:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"grid values must lie in [0, 1], got {p}")
    jobs = [(family, p, cfg) for p in grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs))
    return [_sweep_point(j) for j in jobs]


def sweep_pure(grid: Sequence[float], cfg: OptConfig | None = None, workers: int = 1) -> list[SweepRow]:
    return sweep("pure", grid, cfg, workers)


def sweep_werner(grid: Sequence[float], cfg: OptConfig | None = None, workers: int = 1) -> list[SweepRow]:
    return sweep("werner", grid, cfg, workers)


def uniform_grid(points: int = 101, lo: float = 0.0, hi: float = 1.0) -> list[float]:
    if points < 1:
        raise ValueError("grid needs at least one point")
    if points == 1:
        return [lo]
    return np.linspace(lo, hi, points).tolist()


def threshold_crossing(rows: Sequence[SweepRow], level: float = 2.0) -> float | None:
    """First parameter where s_opt rises through ``level``, by linear interpolation."""
    for r0, r1 in zip(rows, rows[1:]):
        if r0.s_opt <= level < r1.s_opt:
            return r0.param + (level - r0.s_opt) * (r1.param - r0.param) / (r1.s_opt - r0.s_opt)
    return None
