"""Time-dependent harmonic oscillator: auxiliary-equation integration,
invariant bookkeeping, classical characteristics, and phase-space evolution
under the generator p theta / m - k(t) q lambda.

The auxiliary equation

    rho'' + k(t) rho = C / rho^3

turns the time-dependent oscillator q'' + k(t) q = 0 into a conserved
quantity; the observable part of that invariant is

    I = (1/2) [ (q / rho)^2 + (rho' q - rho p)^2 ],

constant along coupled (rho, q, p) trajectories when C = 1 (the form above
carries no C, so the auxiliary solution must be run with C = 1; unit mass
likewise).  Integrators are classic fixed-step 4th order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import PhysicsError
from .grid import PhaseGrid
from .operators import koopman_generator
from .propagation import kvn_step
from .states import KvNWavefunction

Stiffness = Callable[[float], float]


@dataclass(frozen=True)
class ErmakovState:
    rho: float
    rho_dot: float
    C: float = 1.0
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.rho <= 0:
            raise ValueError("auxiliary amplitude rho must be positive")
        if self.C <= 0:
            raise ValueError("Ermakov constant C must be positive")


@dataclass
class ErmakovTrajectory:
    t: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    C: float


def _rk4(rhs, state: np.ndarray, t: float, dt: float) -> np.ndarray:
    k1 = rhs(t, state)
    k2 = rhs(t + 0.5 * dt, state + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, state + 0.5 * dt * k2)
    k4 = rhs(t + dt, state + dt * k3)
    return state + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_ermakov(
    k: Stiffness, init: ErmakovState, t_final: float, dt: float
) -> ErmakovTrajectory:
    """Integrate the auxiliary equation, aborting if rho approaches zero."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    n = int(round((t_final - init.t) / dt))
    C = init.C

    def rhs(t, s):
        rho, rho_dot = s
        return np.array([rho_dot, C / rho**3 - k(t) * rho])

    ts = init.t + dt * np.arange(n + 1)
    rho = np.empty(n + 1)
    rho_dot = np.empty(n + 1)
    state = np.array([init.rho, init.rho_dot])
    rho[0], rho_dot[0] = state
    for i in range(n):
        state = _rk4(rhs, state, ts[i], dt)
        if state[0] <= 10 * dt * abs(state[1]) or state[0] <= 1e-12:
            raise PhysicsError(f"auxiliary amplitude approaching zero at t={ts[i + 1]:.6g}")
        rho[i + 1], rho_dot[i + 1] = state
    return ErmakovTrajectory(ts, rho, rho_dot, C)


def ermakov_residual(traj: ErmakovTrajectory, k: Stiffness) -> float:
    """Max interior defect of rho'' + k rho - C/rho^3 by centered differences."""
    dt = traj.t[1] - traj.t[0]
    rho = traj.rho
    dd = (rho[2:] - 2 * rho[1:-1] + rho[:-2]) / dt**2
    kt = np.array([k(t) for t in traj.t[1:-1]])
    resid = dd + kt * rho[1:-1] - traj.C / rho[1:-1] ** 3
    return float(np.max(np.abs(resid)))


@dataclass
class ClassicalTrajectory:
    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    mass: float


def solve_classical_tdho(
    k: Stiffness, q0: float, p0: float, mass: float, t_final: float, dt: float
) -> ClassicalTrajectory:
    """Characteristics q' = p/m, p' = -k(t) q by fixed-step 4th order."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    n = int(round(t_final / dt))
    ts = dt * np.arange(n + 1)

    def rhs(t, s):
        return np.array([s[1] / mass, -k(t) * s[0]])

    q = np.empty(n + 1)
    p = np.empty(n + 1)
    state = np.array([q0, p0], dtype=float)
    q[0], p[0] = state
    for i in range(n):
        state = _rk4(rhs, state, ts[i], dt)
        q[i + 1], p[i + 1] = state
    return ClassicalTrajectory(ts, q, p, mass)


def lewis_invariant_classical(q, p, rho, rho_dot) -> np.ndarray | float:
    """Observable part of the oscillator invariant (C = 1, unit mass)."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("rho must be positive")
    return 0.5 * ((np.asarray(q) / rho) ** 2 + (rho_dot * np.asarray(q) - rho * np.asarray(p)) ** 2)


@dataclass
class KvnOscillatorTrajectory:
    times: np.ndarray
    q_mean: np.ndarray
    p_mean: np.ndarray
    covariance: np.ndarray  # (n_samples, 2, 2) second central moments
    final_state: KvNWavefunction


def _phase_moments(state: KvNWavefunction):
    pg = state.grid
    rho = np.abs(state.amplitudes) ** 2 * pg.cell_area
    q = pg.q.points[:, None]
    p = pg.p.points[None, :]
    qm = float(np.sum(q * rho))
    pm = float(np.sum(p * rho))
    cqq = float(np.sum((q - qm) ** 2 * rho))
    cpp = float(np.sum((p - pm) ** 2 * rho))
    cqp = float(np.sum((q - qm) * (p - pm) * rho))
    return qm, pm, np.array([[cqq, cqp], [cqp, cpp]])


def kvn_tdho_evolve(
    psi0: KvNWavefunction, k: Stiffness, t_final: float, n_steps: int
) -> KvnOscillatorTrajectory:
    """Phase-space evolution with the stiffness sampled at step midpoints.

    Unit mass; the generator is rebuilt each step with k(t + dt/2), keeping
    the splitting second order for time-dependent stiffness.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    pg = psi0.grid
    dt = t_final / n_steps
    times = np.empty(n_steps + 1)
    qs = np.empty(n_steps + 1)
    ps = np.empty(n_steps + 1)
    covs = np.empty((n_steps + 1, 2, 2))
    state = psi0
    for i in range(n_steps + 1):
        times[i] = state.time
        qs[i], ps[i], covs[i] = _phase_moments(state)
        if i == n_steps:
            break
        k_mid = k(state.time + 0.5 * dt)
        G = koopman_generator(pg, lambda q, k_mid=k_mid: k_mid * q)
        state = kvn_step(state, G, dt)
    return KvnOscillatorTrajectory(times, qs, ps, covs, state)


def monodromy_matrix(k: Stiffness, t_final: float, dt: float, mass: float = 1.0) -> np.ndarray:
    """Fundamental solution of the linear flow d(q,p)/dt = (p/m, -k(t) q)."""
    n = int(round(t_final / dt))

    def rhs(t, M):
        A = np.array([[0.0, 1.0 / mass], [-k(t), 0.0]])
        return A @ M

    M = np.eye(2)
    for i in range(n):
        M = _rk4(rhs, M, i * dt, dt)
    return M
