"""Closed-form free-particle propagators and the Gaussian integral primitive.

The quantum free kernel K(x, x0, t) = sqrt(m/(2 pi i hbar t))
exp[i m (x-x0)^2 / (2 hbar t)] propagates configuration-space states by
quadrature.  Its classical counterpart is a pair of delta constraints that
reduce to the exact shear psi(x, p, t) = psi0(x - p t / m, p), realized
spectrally.  Oscillatory (Fresnel) integrals are defined by the principal
branch square root, i.e. the standard damping prescription with the damping
sent to zero.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError
from .grid import wavenumbers
from .states import KvNWavefunction, QWavefunction


def gaussian_integral(a: complex, b: complex = 0.0, c: complex = 0.0) -> complex:
    """integral exp(-a x^2 + b x + c) dx = sqrt(pi/a) exp(b^2/(4a) + c).

    Requires Re(a) > 0, or Re(a) = 0 with Im(a) != 0 (Fresnel case, defined
    by principal-branch continuation).
    """
    a, b, c = complex(a), complex(b), complex(c)
    if a == 0:
        raise DegenerateInputError("gaussian_integral diverges for a = 0")
    if a.real < 0 or (a.real == 0 and a.imag == 0):
        raise DegenerateInputError(f"gaussian_integral needs Re(a) >= 0, got {a}")
    return np.sqrt(np.pi / a) * np.exp(b * b / (4 * a) + c)


def free_quantum_kernel(
    x: np.ndarray | float, x0: np.ndarray | float, t: float,
    mass: float = 1.0, hbar: float = 1.0,
) -> np.ndarray | complex:
    """Free-particle propagator amplitude from x0 to x in time t > 0."""
    if t <= 0:
        raise ValueError(f"kernel needs t > 0, got {t}")
    pref = np.sqrt(mass / (2j * np.pi * hbar * t))
    return pref * np.exp(1j * mass * (np.asarray(x) - np.asarray(x0)) ** 2 / (2 * hbar * t))


def kernel_propagate(
    psi: QWavefunction, t: float, mass: float = 1.0, hbar: float = 1.0
) -> QWavefunction:
    """Propagate a compactly supported state by quadrature against the kernel."""
    g = psi.grid
    K = free_quantum_kernel(g.points[:, None], g.points[None, :], t, mass, hbar)
    out = K @ psi.amplitudes * g.dx
    return QWavefunction(g, out, time=psi.time + t)


def free_quantum_propagate(
    psi: QWavefunction, t: float, mass: float = 1.0, hbar: float = 1.0
) -> QWavefunction:
    """Exact free evolution in the Fourier representation (any t, one step)."""
    g = psi.grid
    k = wavenumbers(g)
    phase = np.exp(-1j * hbar * k**2 * t / (2 * mass))
    out = np.fft.ifft(phase * np.fft.fft(psi.amplitudes))
    return QWavefunction(g, out, time=psi.time + t)


def free_kvn_propagate(psi: KvNWavefunction, t: float, mass: float = 1.0) -> KvNWavefunction:
    """Exact classical shear psi(x - p t / m, p), realized spectrally."""
    if t < 0:
        raise ValueError(f"shear propagation needs t >= 0, got {t}")
    pg = psi.grid
    kq = wavenumbers(pg.q)[:, None]
    p = pg.p.points[None, :]
    phase = np.exp(-1j * kq * p * t / mass)
    out = np.fft.ifft(phase * np.fft.fft(psi.amplitudes, axis=0), axis=0)
    return KvNWavefunction(pg, out, time=psi.time + t)


def kernel_convolution(
    x: float, x0: float, t1: float, t2: float,
    mass: float = 1.0, hbar: float = 1.0,
    eps0: float = 0.02, levels: int = 5, points_per_cycle: float = 8.0,
) -> complex:
    """integral K(x, y, t2) K(y, x0, t1) dy by damped quadrature.

    The bare integrand oscillates without decaying, so each quadrature runs
    with a Gaussian damping exp(-eps y^2); the ladder of eps values
    (halved ``levels`` times from ``eps0``) is extrapolated polynomially to
    eps = 0.  The group law says the result equals K(x, x0, t1 + t2).
    """
    eps_values = [eps0 / 2**j for j in range(levels)]
    estimates = []
    slope_scale = mass * (1.0 / t1 + 1.0 / t2) / hbar
    for eps in eps_values:
        half_width = 6.0 / np.sqrt(eps) + abs(x) + abs(x0)
        dy = 2 * np.pi / (slope_scale * half_width) / points_per_cycle
        n = int(np.ceil(2 * half_width / dy))
        y = np.linspace(-half_width, half_width, n, endpoint=False)
        integrand = (
            free_quantum_kernel(x, y, t2, mass, hbar)
            * free_quantum_kernel(y, x0, t1, mass, hbar)
            * np.exp(-eps * y**2)
        )
        estimates.append(np.sum(integrand) * (y[1] - y[0]))
    return _neville_at_zero(eps_values, estimates)


def _neville_at_zero(xs, ys) -> complex:
    vals = list(ys)
    n = len(vals)
    for level in range(1, n):
        for i in range(n - level):
            x_i, x_j = xs[i], xs[i + level]
            vals[i] = (x_i * vals[i + 1] - x_j * vals[i]) / (x_i - x_j)
    return vals[0]


def delta_law_check(
    which: str,
    t: np.ndarray,
    q: np.ndarray,
    p: np.ndarray,
    mass: float = 1.0,
    vprime=None,
) -> float:
    """Largest violation of a discretized classical law along a trajectory.

    ``momentum-relation`` checks p_j = m (q_{j+1} - q_j) / dt, the forward
    difference form of p = m v; ``newton-second-law`` checks
    (p_{j+1} - p_j) / dt = -V'(q_j).  Both vanish with dt for trajectories
    generated by a consistent integrator.
    """
    t, q, p = (np.asarray(v, dtype=float) for v in (t, q, p))
    if not (t.shape == q.shape == p.shape) or t.ndim != 1 or len(t) < 2:
        raise ValueError("trajectory arrays must be equal-length 1-D with >= 2 samples")
    dt = np.diff(t)
    if which == "momentum-relation":
        resid = p[:-1] - mass * np.diff(q) / dt
    elif which == "newton-second-law":
        if vprime is None:
            raise ValueError("newton-second-law residual needs the force law vprime")
        resid = np.diff(p) / dt + vprime(q[:-1])
    else:
        raise ValueError(f"unknown delta law {which!r}")
    return float(np.max(np.abs(resid)))
