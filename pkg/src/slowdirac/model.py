"""Physical scales, grids, mass profiles and slow-light coefficients.

Internal units are micrometres and milliseconds, so the default group velocity
17 m/s is ``v0 = 17`` and detunings are in rad/ms.  Profile amplitudes are
usually set through two dimensionless numbers:

* opacity ``theta = delta0 * L / v0``
* kink sharpness ``sharpness = lam * L``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError
from .rng import rng_stream

# vacuum light speed in um/ms; the "1" in the slow-light coefficient A is 1/c
SPEED_OF_LIGHT = 2.99792458e11

NOISE_CELL = 0.1


@dataclass(frozen=True)
class PhysicalScale:
    v0: float = 17.0
    length: float = 300.0
    z_min: float | None = None
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not (self.v0 > 0 and math.isfinite(self.v0)):
            raise ConfigurationError(f"v0 must be positive, got {self.v0}")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ConfigurationError(f"length must be positive, got {self.length}")
        if not self.c > 0:
            raise ConfigurationError(f"c must be positive, got {self.c}")
        if self.z_min is None:
            object.__setattr__(self, "z_min", -0.5 * self.length)

    @property
    def z_max(self):
        return self.z_min + self.length

    @property
    def center(self):
        return self.z_min + 0.5 * self.length

    def delta_from_opacity(self, theta):
        """Detuning amplitude (rad/ms) for a given opacity."""
        return theta * self.v0 / self.length

    def opacity(self, delta0):
        return delta0 * self.length / self.v0


@dataclass(frozen=True)
class Grid:
    """Uniform cell grid over the scale's domain."""

    scale: PhysicalScale
    n_cells: int

    def __post_init__(self):
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ConfigurationError(f"n_cells must be a positive integer, got {self.n_cells}")
        object.__setattr__(self, "n_cells", int(self.n_cells))

    @property
    def dz(self):
        return self.scale.length / self.n_cells

    @property
    def midpoints(self):
        # half-integer offsets are exact, so midpoints are exactly mirror-symmetric
        offsets = np.arange(self.n_cells) + 0.5 - 0.5 * self.n_cells
        return self.scale.center + offsets * self.dz

    @property
    def edges(self):
        offsets = np.arange(self.n_cells + 1) - 0.5 * self.n_cells
        return self.scale.center + offsets * self.dz

    def cell_index(self, z):
        idx = np.floor((np.asarray(z, dtype=float) - self.scale.z_min) / self.dz).astype(int)
        return np.clip(idx, 0, self.n_cells - 1)


# -- noise -------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative uniform noise ``eps in [-a, a]`` constant on cells of width ``cell``."""

    amplitude: float
    seed: int = 1
    cell: float = NOISE_CELL

    def __post_init__(self):
        if not 0 <= self.amplitude < 1:
            raise ConfigurationError(f"noise amplitude must lie in [0, 1), got {self.amplitude}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not self.cell > 0:
            raise ConfigurationError(f"noise cell must be positive, got {self.cell}")
        object.__setattr__(self, "seed", int(self.seed))

    def n_cells(self, scale):
        return math.ceil(scale.length / self.cell - 1e-9)


def generate_noise(spec, n_noise_cells):
    """Relative fluctuations ``a * (2u - 1)`` for each noise cell."""
    return _noise_cached(float(spec.amplitude), spec.seed, int(n_noise_cells)).copy()


@lru_cache(maxsize=256)
def _noise_cached(a, seed, n):
    eps = a * (2.0 * rng_stream(seed, n) - 1.0)
    eps.flags.writeable = False
    return eps


# -- mass profiles -----------------------------------------------------------


class MassProfile:
    """A detuning field delta(z).  Subclasses implement ``_values``."""

    def _values(self, z, scale):
        raise NotImplementedError

    def has_noise(self):
        return False


@dataclass(frozen=True)
class Kink(MassProfile):
    delta0: float
    lam: float
    center: float = 0.0

    @classmethod
    def from_opacity(cls, theta, sharpness, scale):
        return cls(scale.delta_from_opacity(theta), sharpness / scale.length, scale.center)

    def _values(self, z, scale):
        return self.delta0 * np.tanh(self.lam * (z - self.center))


@dataclass(frozen=True)
class Sine(MassProfile):
    delta0: float
    k: float
    center: float = 0.0

    @classmethod
    def from_opacity(cls, theta, k, scale):
        return cls(scale.delta_from_opacity(theta), k, scale.center)

    def _values(self, z, scale):
        return self.delta0 * np.sin(self.k * (z - self.center))


@dataclass(frozen=True)
class Constant(MassProfile):
    delta0: float

    @classmethod
    def from_opacity(cls, theta, scale):
        return cls(scale.delta_from_opacity(theta))

    def _values(self, z, scale):
        return np.full(np.shape(z), float(self.delta0))


@dataclass(frozen=True, eq=False)
class Sampled(MassProfile):
    """Piecewise-constant values, one per grid cell."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_cells,):
            raise ConfigurationError(
                f"expected {self.grid.n_cells} cell values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("sampled profile contains non-finite values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def _values(self, z, scale):
        return self.values[self.grid.cell_index(z)]

    def integral(self):
        """Midpoint-rule integral of delta over the domain."""
        return float(np.sum(self.values) * self.grid.dz)


@dataclass(frozen=True)
class Noisy(MassProfile):
    base: MassProfile
    noise: NoiseSpec

    def has_noise(self):
        return True

    def _values(self, z, scale):
        eps = generate_noise(self.noise, self.noise.n_cells(scale))
        idx = np.floor((z - scale.z_min) / self.noise.cell).astype(int)
        idx = np.clip(idx, 0, len(eps) - 1)
        return self.base._values(z, scale) * (1.0 + eps[idx])


def evaluate_profile(profile, z, scale):
    """delta(z) on the domain of ``scale``; raises DomainError outside it."""
    z_arr = np.asarray(z, dtype=float)
    tol = 1e-12 * scale.length
    if np.any(z_arr < scale.z_min - tol) or np.any(z_arr > scale.z_max + tol):
        raise DomainError(f"z outside [{scale.z_min}, {scale.z_max}]")
    out = profile._values(z_arr, scale)
    return float(out) if np.ndim(out) == 0 else out


def sample_on_grid(profile, grid):
    """Piecewise-constant sampling at cell midpoints."""
    if isinstance(profile, Sampled):
        if profile.grid != grid:
            raise ConfigurationError("sampled profile lives on a different grid")
        return profile
    if profile.has_noise():
        cell = profile.noise.cell
        ratio = cell / grid.dz
        if grid.dz > cell * (1 + 1e-9) or abs(ratio - round(ratio)) > 1e-6 * ratio:
            raise ConfigurationError(
                f"grid spacing {grid.dz} does not subdivide the noise cell {cell}"
            )
    return Sampled(profile._values(grid.midpoints, grid.scale), grid)


# -- mixing angle ------------------------------------------------------------


@dataclass(frozen=True)
class MixingAngle:
    """Control-field phase ``S = (1 + f) * pi / 2``."""

    f: float = 0.0

    def __post_init__(self):
        if not abs(self.f) < 1:
            raise ConfigurationError(f"mixing fraction must satisfy |f| < 1, got {self.f}")

    @property
    def S(self):
        return (1.0 + self.f) * math.pi / 2

    # written in terms of f so that f = 0 gives exactly sin S = 1, cos S = 0
    @property
    def sin(self):
        return math.cos(self.f * math.pi / 2)

    @property
    def cos(self):
        return -math.sin(self.f * math.pi / 2)


@dataclass(frozen=True)
class CoefficientSet:
    A: float
    B: float
    C: np.ndarray | float = field(default=0.0)


def coefficients(angle, v0, delta, c=1.0):
    """Coefficients of the generalized slow-light equation.

    ``A = 1/c + 1/(v0 sin^2 S)``, ``B = cos S / (v0 sin^2 S)`` and
    ``C = delta / (v0 sin S)``.  ``c`` is the empty-waveguide light speed in the
    units of ``v0``; the default 1 corresponds to measuring speeds in units of c.
    """
    if not isinstance(angle, MixingAngle):
        angle = MixingAngle(angle)
    s, co = angle.sin, angle.cos
    A = 1.0 / c + 1.0 / (v0 * s * s)
    B = co / (v0 * s * s)
    C = np.asarray(delta, dtype=float) / (v0 * s)
    return CoefficientSet(A, B, float(C) if C.ndim == 0 else C)
