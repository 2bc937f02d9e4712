"""Wavefunctions, density matrices, inner products and expectation values.

Grid states come in two flavors: ``QWavefunction`` (complex field over a
``Grid1D``) and ``KvNWavefunction`` (complex field over a ``PhaseGrid``).
Both are value-semantic; ``normalize`` returns a new state.  Mixed states of
small finite systems are handled by ``DensityMatrix`` (dense, dim <= 64).

Planck's constant is a parameter (default 1) so that hbar-explicit formulas
stay testable away from natural units.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import GridMismatchError, PhysicsError
from .grid import Grid1D, PhaseGrid

MAX_DENSITY_DIM = 64


@dataclass(frozen=True)
class QWavefunction:
    """Configuration-space state psi(q) on a periodic grid."""

    grid: Grid1D
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.grid.n,):
            raise ValueError(f"amplitude shape {amp.shape} != ({self.grid.n},)")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def measure(self) -> float:
        return self.grid.dx

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.measure)

    def normalize(self) -> "QWavefunction":
        return replace(self, amplitudes=self.amplitudes / np.sqrt(self.norm_squared()))


@dataclass(frozen=True)
class KvNWavefunction:
    """Phase-space state psi(q, p); axis 0 is q, axis 1 is p."""

    grid: PhaseGrid
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != self.grid.shape:
            raise ValueError(f"amplitude shape {amp.shape} != {self.grid.shape}")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def measure(self) -> float:
        return self.grid.cell_area

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.measure)

    def normalize(self) -> "KvNWavefunction":
        return replace(self, amplitudes=self.amplitudes / np.sqrt(self.norm_squared()))


Wavefunction = QWavefunction | KvNWavefunction


def _require_same_grid(phi: Wavefunction, psi: Wavefunction) -> None:
    if type(phi) is not type(psi) or phi.grid != psi.grid:
        raise GridMismatchError("states live on different grids")


def inner_product(phi: Wavefunction, psi: Wavefunction) -> complex:
    """<phi|psi> with the grid measure.

    Real and imaginary parts are accumulated separately so that swapping the
    arguments conjugates the result bit-for-bit (vectorized complex products
    do not guarantee that).
    """
    _require_same_grid(phi, psi)
    a, b = phi.amplitudes, psi.amplitudes
    re = np.sum(a.real * b.real + a.imag * b.imag)
    im = np.sum(a.real * b.imag - a.imag * b.real)
    return complex(re * phi.measure, im * phi.measure)


def born_density(psi: Wavefunction) -> np.ndarray:
    """Pointwise probability density |psi|^2 (unit total mass for a normalized state)."""
    return np.abs(psi.amplitudes) ** 2


def expectation(op, psi: Wavefunction) -> complex:
    """<psi| op |psi> for a normalized state.

    When ``op`` is flagged Hermitian the imaginary part must be numerical
    noise; a residue above 1e-10 raises :class:`PhysicsError`.
    """
    _require_same_grid(psi, psi)
    applied = op.apply(psi.amplitudes)
    value = complex(np.sum(np.conj(psi.amplitudes) * applied) * psi.measure)
    if getattr(op, "hermitian", False) and abs(value.imag) > 1e-10:
        raise PhysicsError(
            f"Hermitian expectation grew an imaginary part {value.imag:.3e}"
        )
    return value


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state of a small system."""

    entries: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got {rho.shape}")
        if rho.shape[0] > MAX_DENSITY_DIM:
            raise ValueError(f"density matrices limited to dim <= {MAX_DENSITY_DIM}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
            raise ValueError("density matrix trace must be 1")
        eigs = np.linalg.eigvalsh(rho)
        if eigs.min() < -1e-10:
            raise ValueError(f"density matrix has negative eigenvalue {eigs.min():.3e}")
        pur = float(np.real(np.trace(rho @ rho)))
        if pur < 1.0 / rho.shape[0] - 1e-10 or pur > 1.0 + 1e-10:
            raise ValueError(f"purity {pur} outside [1/dim, 1]")
        object.__setattr__(self, "entries", rho)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def pure_density(psi: np.ndarray, time: float = 0.0) -> DensityMatrix:
    """|psi><psi| from a normalized finite-dimensional state vector."""
    v = np.asarray(psi, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), time=time)


def purity(rho: DensityMatrix) -> float:
    """Tr rho^2; 1 for pure states, down to 1/dim for maximally mixed ones."""
    return float(np.real(np.trace(rho.entries @ rho.entries)))


def measure_probability(rho: DensityMatrix, a: np.ndarray) -> float:
    """Tr[rho |a><a|] for a normalized vector |a>."""
    v = np.asarray(a, dtype=complex)
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError("projector target |a> must be normalized")
    value = float(np.real(v.conj() @ rho.entries @ v))
    return min(max(value, 0.0), 1.0)


def _check_orthonormal(basis: np.ndarray) -> np.ndarray:
    b = np.asarray(basis, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("basis must be a square matrix of column vectors")
    gram = b.conj().T @ b
    if np.max(np.abs(gram - np.eye(b.shape[0]))) > 1e-10:
        raise ValueError("basis columns are not orthonormal")
    return b


def collapse(psi: np.ndarray, basis: np.ndarray, index: int) -> np.ndarray:
    """Projective collapse onto basis column ``index`` (the outcome state)."""
    b = _check_orthonormal(basis)
    return b[:, index].copy()


def dephase(rho: DensityMatrix, basis: np.ndarray) -> DensityMatrix:
    """Zero the off-diagonal entries of ``rho`` in the given orthonormal basis.

    This is the non-selective projective measurement: the outcome is not
    recorded, so coherences between outcomes are destroyed while the
    populations (and the trace) are kept.
    """
    b = _check_orthonormal(basis)
    in_basis = b.conj().T @ rho.entries @ b
    diag = np.diag(np.diag(in_basis))
    out = b @ diag @ b.conj().T
    out = 0.5 * (out + out.conj().T)  # scrub rounding asymmetry
    return DensityMatrix(out, time=rho.time)
