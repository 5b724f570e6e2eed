"""Time evolution of spinor envelopes under H = -i v0 sigma_z d/dz + delta(z) sigma_y.

The propagator is a lattice split-step with dt = dz / v0: a local rotation by the
mass term, an exact one-cell shift of each component, and the rotation again.
Every factor is an isometry, so the norm is conserved to roundoff.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, NonNormalizableWarning, ResolutionWarning, WraparoundWarning
from .model import Sampled, sample_on_grid

CHIRAL_PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)
CHIRAL_MINUS = np.array([1.0, -1.0]) / np.sqrt(2.0)

# cells next to the periodic seam that must stay empty
_SEAM_CELLS = 10
_SEAM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpinorField:
    grid: object
    psi1: np.ndarray
    psi2: np.ndarray

    def __post_init__(self):
        n = self.grid.n_cells
        for name in ("psi1", "psi2"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (n,):
                raise ConfigurationError(f"{name} must have {n} samples, got shape {arr.shape}")
            object.__setattr__(self, name, arr)

    @property
    def z(self):
        return self.grid.midpoints

    def density(self):
        return np.abs(self.psi1) ** 2 + np.abs(self.psi2) ** 2

    def norm2(self):
        return float(np.sum(self.density()) * self.grid.dz)

    def normalized(self):
        n = np.sqrt(self.norm2())
        if n == 0:
            raise ConfigurationError("cannot normalize a zero field")
        return SpinorField(self.grid, self.psi1 / n, self.psi2 / n)

    def mean_position(self):
        rho = self.density()
        return float(np.sum(self.z * rho) / np.sum(rho))

    def rms_width(self):
        rho = self.density()
        mu = np.sum(self.z * rho) / np.sum(rho)
        return float(np.sqrt(np.sum((self.z - mu) ** 2 * rho) / np.sum(rho)))

    def inner(self, other):
        """<self|other> with the grid measure dz."""
        return complex(
            np.sum(np.conj(self.psi1) * other.psi1 + np.conj(self.psi2) * other.psi2) * self.grid.dz
        )

    def overlap(self, other):
        return abs(self.inner(other))


def _spinor(chi):
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (2,):
        raise ConfigurationError("spinor must have two components")
    n = np.linalg.norm(chi)
    if n == 0:
        raise ConfigurationError("spinor must be nonzero")
    return chi / n


def gaussian_spinor(grid, sigma, z0=0.0, chi=CHIRAL_PLUS):
    """chi * exp(-(z - z0)^2 / 2 sigma^2) / (pi^(1/4) sigma^(1/2)), renormalized on the grid."""
    if not sigma > 0:
        raise ConfigurationError("sigma must be positive")
    sc = grid.scale
    if not sc.z_min <= z0 <= sc.z_max:
        raise DomainError(f"z0={z0} outside [{sc.z_min}, {sc.z_max}]")
    if sigma < 2 * grid.dz:
        warnings.warn(f"sigma={sigma} is under two cells ({grid.dz})", ResolutionWarning, stacklevel=2)
    chi = _spinor(chi)
    env = np.exp(-((grid.midpoints - z0) ** 2) / (2 * sigma**2)) / (np.pi**0.25 * np.sqrt(sigma))
    return SpinorField(grid, chi[0] * env, chi[1] * env).normalized()


def detuning_phase(sampled):
    """(1/v0) * integral of delta from the domain center to each cell midpoint.

    The sampled profile is integrated exactly as the piecewise-constant function it is.
    """
    grid = sampled.grid
    d = sampled.values
    dz = grid.dz
    n = grid.n_cells
    edges = np.concatenate([[0.0], np.cumsum(d * dz)])
    mids = edges[:-1] + 0.5 * d * dz
    ref = edges[n // 2] if n % 2 == 0 else mids[n // 2]
    return (mids - ref) / grid.scale.v0


def zero_mode_state(profile, grid, chirality=1):
    """Normalized E = 0 solution chi * exp(-chirality * Phi(z)).

    ``chirality=+1`` pairs (1, 1)/sqrt2 with exp(-Phi), which is the localized
    state for a kink rising from -delta0 to +delta0; ``-1`` gives the partner
    (1, -1)/sqrt2 * exp(+Phi).  A state that has not decayed at the domain edges
    triggers NonNormalizableWarning.
    """
    if chirality not in (1, -1):
        raise ConfigurationError("chirality must be +1 or -1")
    sampled = sample_on_grid(profile, grid)
    expo = -chirality * detuning_phase(sampled)
    env = np.exp(expo - expo.max())
    if max(env[0], env[-1]) > 1e-6:
        warnings.warn(
            "zero-mode envelope does not decay at the domain edges; the state is not normalizable here",
            NonNormalizableWarning,
            stacklevel=2,
        )
    chi = CHIRAL_PLUS if chirality == 1 else CHIRAL_MINUS
    return SpinorField(grid, chi[0] * env, chi[1] * env).normalized()


def _rotation(sampled):
    theta = 0.5 * sampled.values * sampled.grid.dz / sampled.grid.scale.v0
    return np.cos(theta), np.sin(theta)


def _split_step(psi1, psi2, c, s):
    a = c * psi1 - s * psi2
    b = s * psi1 + c * psi2
    a = np.roll(a, 1)
    b = np.roll(b, -1)
    return c * a - s * b, s * a + c * b


def _check_grid(field, sampled):
    if field.grid != sampled.grid:
        raise ConfigurationError("field and profile live on different grids")


def step(field, sampled):
    """One Strang step of length dt = dz / v0 (periodic boundaries)."""
    sampled = sample_on_grid(sampled, field.grid)
    _check_grid(field, sampled)
    c, s = _rotation(sampled)
    p1, p2 = _split_step(field.psi1, field.psi2, c, s)
    return SpinorField(field.grid, p1, p2)


@dataclass(frozen=True)
class EvolutionConfig:
    n_steps: int
    stride: int = 1
    boundary: str = "periodic"

    def __post_init__(self):
        if int(self.n_steps) != self.n_steps or self.n_steps < 0:
            raise ConfigurationError("n_steps must be a nonnegative integer")
        if int(self.stride) != self.stride or self.stride < 1:
            raise ConfigurationError("stride must be a positive integer")
        if self.boundary != "periodic":
            raise ConfigurationError("only periodic boundaries are supported")

    @classmethod
    def for_duration(cls, grid, t_final, stride=1):
        dt = grid.dz / grid.scale.v0
        return cls(int(round(t_final / dt)), stride)

    @staticmethod
    def dt(grid):
        return grid.dz / grid.scale.v0


@dataclass(frozen=True, eq=False)
class Trajectory:
    grid: object
    times: np.ndarray
    psi: np.ndarray  # (n_snapshots, 2, n_cells)
    norm2: np.ndarray
    mean_z: np.ndarray
    rms_width: np.ndarray
    overlap0: np.ndarray

    def snapshot(self, k):
        return SpinorField(self.grid, self.psi[k, 0], self.psi[k, 1])

    @property
    def final(self):
        return self.snapshot(-1)


def evolve(field, profile, config):
    """Apply ``config.n_steps`` split steps, recording every ``config.stride``-th state."""
    grid = field.grid
    sampled = sample_on_grid(profile, grid)
    c, s = _rotation(sampled)
    dt = EvolutionConfig.dt(grid)
    psi1, psi2 = field.psi1.copy(), field.psi2.copy()
    snaps, times = [], []
    warned = False

    def record(k):
        times.append(k * dt)
        snaps.append(np.stack([psi1, psi2]))

    record(0)
    for k in range(1, config.n_steps + 1):
        psi1, psi2 = _split_step(psi1, psi2, c, s)
        if not warned:
            edge = (
                np.sum(np.abs(psi1[:_SEAM_CELLS]) ** 2 + np.abs(psi2[:_SEAM_CELLS]) ** 2)
                + np.sum(np.abs(psi1[-_SEAM_CELLS:]) ** 2 + np.abs(psi2[-_SEAM_CELLS:]) ** 2)
            ) * grid.dz
            if edge > _SEAM_TOL:
                warnings.warn(
                    f"wave packet reached the periodic seam at t={k * dt:g}; enlarge the domain",
                    WraparoundWarning,
                    stacklevel=2,
                )
                warned = True
        if k % config.stride == 0 or k == config.n_steps:
            record(k)

    psi = np.array(snaps)
    z = grid.midpoints
    rho = np.abs(psi[:, 0]) ** 2 + np.abs(psi[:, 1]) ** 2
    total = rho.sum(axis=1)
    mean_z = (rho * z).sum(axis=1) / total
    width = np.sqrt((rho * (z[None, :] - mean_z[:, None]) ** 2).sum(axis=1) / total)
    ov = np.abs(
        (np.conj(psi[0, 0])[None] * psi[:, 0] + np.conj(psi[0, 1])[None] * psi[:, 1]).sum(axis=1)
        * grid.dz
    )
    return Trajectory(grid, np.array(times), psi, total * grid.dz, mean_z, width, ov)


def hamiltonian_residual(field, sampled):
    """||H psi|| / ||psi|| with central differences (periodic) for d/dz."""
    sampled = sample_on_grid(sampled, field.grid)
    _check_grid(field, sampled)
    dz = field.grid.dz
    v0 = field.grid.scale.v0
    d = sampled.values
    p1, p2 = field.psi1, field.psi2
    dp1 = (np.roll(p1, -1) - np.roll(p1, 1)) / (2 * dz)
    dp2 = (np.roll(p2, -1) - np.roll(p2, 1)) / (2 * dz)
    h1 = -1j * v0 * dp1 - 1j * d * p2
    h2 = 1j * v0 * dp2 + 1j * d * p1
    num = np.sum(np.abs(h1) ** 2 + np.abs(h2) ** 2)
    den = np.sum(np.abs(p1) ** 2 + np.abs(p2) ** 2)
    return float(np.sqrt(num / den))
