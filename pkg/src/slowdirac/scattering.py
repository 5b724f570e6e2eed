"""Stationary scattering of a monochromatic probe by a piecewise-constant detuning profile.

Each cell carries a constant detuning, so its transfer matrix is the exact
exponential of a traceless 2x2 generator N.  The product over cells is formed in
the chiral basis (Hadamard-rotated, where the detuning term is diagonal).  There
every cell matrix has the shape ``[[p, iq], [ir, s]]`` with p, q, r, s real, so
the composition runs in real arithmetic.  At zero probe detuning all
off-diagonals vanish identically and the product is a product of exponentials
with no cancellation.  This is what keeps the zero-mode resonance exact at large
opacity, where a product in the field basis loses it to roundoff.  Runs of
equal cell values are merged into one slab before the product.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, SingularBoundaryError, TransferOverflowError
from .model import Constant, Kink, MixingAngle, Noisy, Sampled, Sine, coefficients, sample_on_grid

IDEAL = "ideal"
GENERALIZED = "generalized"

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

_SERIES_CUTOFF = 1e-6
_OVERFLOW_LIMIT = 1e300
# upper bound on frequencies x cells held in memory at once
_CHUNK_ELEMENTS = 1 << 21


def _check_mode(mode, angle):
    if mode not in (IDEAL, GENERALIZED):
        raise ConfigurationError(f"mode must be 'ideal' or 'generalized', got {mode!r}")
    if angle is None:
        angle = MixingAngle(0.0)
    elif not isinstance(angle, MixingAngle):
        angle = MixingAngle(angle)
    if mode == IDEAL and angle.f != 0:
        raise ConfigurationError("a mixing-angle error needs mode='generalized'")
    return angle


def _generator_parts(delta_omega, delta, scale, angle, mode):
    """Real (a, b, C) such that N = i*a*sigma_z + b*sigma_y - C*sigma_x."""
    if mode == IDEAL:
        return (
            np.asarray(delta_omega, dtype=float) / scale.v0,
            np.zeros_like(np.asarray(delta_omega, dtype=float)),
            np.asarray(delta, dtype=float) / scale.v0,
        )
    coef = coefficients(angle, scale.v0, delta, c=scale.c)
    dw = np.asarray(delta_omega, dtype=float)
    return dw * coef.A, dw * coef.B, np.asarray(coef.C, dtype=float)


def generator_matrix(delta_omega, delta, scale, angle=None, mode=IDEAL):
    """Generator N of d/dz for the stationary envelope at probe detuning ``delta_omega``.

    ideal:        N = (i dw / v0) sigma_z - (delta / v0) sigma_x
    generalized:  N = i dw A sigma_z + dw B sigma_y - C sigma_x
    """
    angle = _check_mode(mode, angle)
    a, b, C = _generator_parts(float(delta_omega), float(delta), scale, angle, mode)
    return 1j * a * SIGMA_Z + b * SIGMA_Y - C * SIGMA_X


def cell_propagator(N, dz):
    """exp(N dz) for a traceless 2x2 N."""
    if not dz > 0:
        raise ConfigurationError("cell width must be positive")
    N = np.asarray(N, dtype=complex)
    s2 = -(N[0, 0] * N[1, 1] - N[0, 1] * N[1, 0])
    s = np.sqrt(s2)
    if abs(s * dz) < _SERIES_CUTOFF:
        Nd = N * dz
        return IDENTITY + Nd + Nd @ Nd / 2
    return np.cosh(s * dz) * IDENTITY + (np.sinh(s * dz) / s) * N


def _cell_factors(s2, dz):
    """c0 = cosh(s dz), c1 = sinh(s dz)/s for real s2 (either sign)."""
    dz = np.broadcast_to(dz, s2.shape)
    k = np.sqrt(np.abs(s2))
    x = k * dz
    c0 = np.empty_like(s2)
    c1 = np.empty_like(s2)
    small = x < _SERIES_CUTOFF
    hyp = ~small & (s2 > 0)
    osc = ~small & (s2 <= 0)
    h = dz[small]
    c0[small] = 1.0 + 0.5 * s2[small] * h * h
    c1[small] = h * (1.0 + s2[small] * h * h / 6.0)
    c0[hyp] = np.cosh(x[hyp])
    c1[hyp] = np.sinh(x[hyp]) / k[hyp]
    c0[osc] = np.cos(x[osc])
    c1[osc] = np.sin(x[osc]) / k[osc]
    return c0, c1


def _chiral_product(p, q, r, s):
    """Ordered product over the last axis, cell 0 applied first.

    Each factor is [[p, iq], [ir, s]].  Accumulation is strictly sequential: every
    step multiplies the running product by a near-identity cell, which keeps the
    roundoff in det W at the 1e-13 level even across narrow resonances.  A
    balanced-tree reduction multiplies large sub-products and loses ~1e3 of that.
    """
    P, Q, R, S = p[..., 0], q[..., 0], r[..., 0], s[..., 0]
    for i in range(1, p.shape[-1]):
        p2, q2, r2, s2 = p[..., i], q[..., i], r[..., i], s[..., i]
        P, Q, R, S = p2 * P - q2 * R, p2 * Q + q2 * S, r2 * P + s2 * R, s2 * S - r2 * Q
    return P, Q, R, S


def _slabs(values, dz):
    """Merge runs of equal cell values into single slabs: (values, widths).

    A homogeneous run has the exact propagator exp(N * m * dz), so merging is
    exact and avoids piling up identical rounding errors cell after cell.
    """
    starts = np.flatnonzero(np.concatenate([[True], values[1:] != values[:-1]]))
    counts = np.diff(np.append(starts, len(values)))
    return values[starts], counts * dz


def _transfer_chunk(freqs, deltas, widths, scale, angle, mode):
    a, b, C = _generator_parts(freqs[:, None], deltas[None, :], scale, angle, mode)
    a, b, C = np.broadcast_arrays(a, b, C)
    s2 = C * C + b * b - a * a
    c0, c1 = _cell_factors(s2, widths[None, :])
    # chiral-basis generator: N' = [[-C, i(a+b)], [i(a-b), C]]
    # cell-major layout so each step of the product reads contiguous memory
    cells = [np.ascontiguousarray(x.T) for x in (c0 - c1 * C, c1 * (a + b), c1 * (a - b), c0 + c1 * C)]
    del a, b, C, s2, c0, c1
    p, q, r, s = _chiral_product(*(x.T for x in cells))
    W = np.empty(freqs.shape + (2, 2), dtype=complex)
    # back to the field basis: W = H W' H with H the Hadamard matrix
    W[:, 0, 0] = 0.5 * ((p + s) + 1j * (q + r))
    W[:, 0, 1] = 0.5 * ((p - s) + 1j * (r - q))
    W[:, 1, 0] = 0.5 * ((p - s) + 1j * (q - r))
    W[:, 1, 1] = 0.5 * ((p + s) - 1j * (q + r))
    return W


def transfer_matrices(sampled, freqs, angle=None, mode=IDEAL, workers=1):
    """Total transfer matrices (z_min -> z_max) for every frequency, shape (F, 2, 2)."""
    angle = _check_mode(mode, angle)
    if not isinstance(sampled, Sampled):
        raise ConfigurationError("transfer_matrices needs a Sampled profile; see sample_on_grid")
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    grid = sampled.grid
    values, widths = _slabs(sampled.values, grid.dz)
    per_chunk = max(1, _CHUNK_ELEMENTS // len(values))
    chunks = [freqs[i : i + per_chunk] for i in range(0, len(freqs), per_chunk)]

    def job(fr):
        # overflow shows up as inf/nan and is reported below
        with np.errstate(over="ignore", invalid="ignore"):
            return _transfer_chunk(fr, values, widths, grid.scale, angle, mode)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, chunks))
    else:
        parts = [job(c) for c in chunks]
    W = np.concatenate(parts, axis=0) if parts else np.empty((0, 2, 2), complex)
    bad = ~np.isfinite(W).all(axis=(1, 2)) | (np.abs(W).max(axis=(1, 2), initial=0) > _OVERFLOW_LIMIT)
    if np.any(bad):
        dw = freqs[np.argmax(bad)]
        raise TransferOverflowError(
            f"transfer matrix overflow at delta_omega={dw:g}: opacity too large for this grid; "
            "reduce the opacity or split the medium"
        )
    return W


def total_transfer(sampled, delta_omega, angle=None, mode=IDEAL):
    """Ordered product W_n ... W_1 of exact cell propagators at one frequency."""
    return transfer_matrices(sampled, [delta_omega], angle, mode)[0]


def reflect_transmit(W):
    """(R, T) for unit incidence in component 1 from the left, nothing incident from the right."""
    W = np.asarray(W)
    w22 = W[..., 1, 1]
    if np.any(np.abs(w22) < 1e-300):
        raise SingularBoundaryError("|W22| vanishes; boundary-value problem is singular")
    T = 1.0 / w22
    R = -W[..., 1, 0] / w22
    if np.ndim(T) == 0:
        return complex(R), complex(T)
    return R, T


def pseudo_unitarity_error(W):
    """max |W^dagger sigma_z W - sigma_z| per matrix."""
    W = np.asarray(W)
    M = np.conj(np.swapaxes(W, -1, -2)) @ SIGMA_Z @ W - SIGMA_Z
    return np.abs(M).max(axis=(-2, -1))


def det_error(W):
    W = np.asarray(W)
    return np.abs(W[..., 0, 0] * W[..., 1, 1] - W[..., 0, 1] * W[..., 1, 0] - 1.0)


def reference_delta(profile):
    """Nominal detuning amplitude used as the frequency unit of a spectrum."""
    if isinstance(profile, (Kink, Sine, Constant)):
        return abs(profile.delta0)
    if isinstance(profile, Noisy):
        return reference_delta(profile.base)
    if isinstance(profile, Sampled):
        return float(np.max(np.abs(profile.values)))
    raise ConfigurationError(f"no reference detuning for {type(profile).__name__}")


def default_sweep(delta0, count=801, lo=-2.0, hi=2.0):
    return np.linspace(lo * delta0, hi * delta0, count)


@dataclass(frozen=True, eq=False)
class Spectrum:
    delta_omega: np.ndarray
    R: np.ndarray
    T: np.ndarray
    transfer: np.ndarray
    delta0: float
    metadata: dict = field(default_factory=dict)

    @property
    def T2(self):
        return np.abs(self.T) ** 2

    @property
    def R2(self):
        return np.abs(self.R) ** 2

    @property
    def normalized_frequency(self):
        return self.delta_omega / self.delta0

    def flux_error(self):
        return np.abs(self.R2 + self.T2 - 1.0)

    def det_error(self):
        return det_error(self.transfer)

    def relative_det_error(self):
        """|det W - 1| scaled by |W22|^2, the size of the products that cancel in det W."""
        scale = np.maximum(1.0, np.abs(self.transfer[:, 1, 1]) ** 2)
        return self.det_error() / scale

    def __len__(self):
        return len(self.delta_omega)


def spectrum(profile, freqs, grid, angle=None, mode=IDEAL, delta0=None, workers=1, metadata=None):
    """Reflection/transmission over an increasing frequency sweep."""
    freqs = np.asarray(freqs, dtype=float)
    if freqs.ndim != 1 or len(freqs) == 0:
        raise DomainError("frequency sweep must be a nonempty 1-D sequence")
    if np.any(np.diff(freqs) <= 0):
        raise DomainError("frequency sweep must be strictly increasing")
    sampled = sample_on_grid(profile, grid)
    W = transfer_matrices(sampled, freqs, angle, mode, workers=workers)
    R, T = reflect_transmit(W)
    if delta0 is None:
        delta0 = reference_delta(profile)
    meta = {"mode": mode, "mixing_f": _check_mode(mode, angle).f, "n_cells": grid.n_cells}
    meta.update(metadata or {})
    return Spectrum(freqs, R, T, W, float(delta0), meta)


def zero_frequency_transmission(sampled, angle=None):
    """Closed-form (|R|^2, |T|^2) at zero probe detuning.

    All cell generators are then multiples of sigma_x and commute, so the total
    matrix is exp(-Phi sigma_x) with Phi = integral(delta) / (v0 sin S).
    """
    if angle is None:
        angle = MixingAngle(0.0)
    elif not isinstance(angle, MixingAngle):
        angle = MixingAngle(angle)
    phi = sampled.integral() / (sampled.grid.scale.v0 * angle.sin)
    t2 = 1.0 / np.cosh(phi) ** 2
    return float(np.tanh(phi) ** 2), float(t2)


def midgap_peak(spec, window=0.5):
    """Frequency and value of max |T|^2 over |dw| < window * delta0."""
    mask = np.abs(spec.delta_omega) < window * spec.delta0
    if not np.any(mask):
        raise DomainError("spectrum has no points inside the mid-gap window")
    t2 = spec.T2[mask]
    i = int(np.argmax(t2))
    return float(spec.delta_omega[mask][i]), float(t2[i])


def gap_edges(spec, level=0.5):
    """Edges of the reflection window on each side of zero detuning.

    Walking outward from dw = 0 (the zero itself excluded), an edge is the first
    upward crossing of ``level`` after |T|^2 has been below it.  The crossing is
    linearly interpolated.  Sides without such a crossing give None.
    """
    dw, t2 = spec.delta_omega, spec.T2

    def side(idx):
        seen_low = False
        prev = None
        for i in idx:
            if t2[i] < level:
                seen_low = True
            elif seen_low:
                j = prev
                frac = (level - t2[j]) / (t2[i] - t2[j])
                return float(dw[j] + frac * (dw[i] - dw[j]))
            prev = i
        return None

    pos = [i for i in np.argsort(dw) if dw[i] > 0]
    neg = [i for i in np.argsort(dw)[::-1] if dw[i] < 0]
    return side(neg), side(pos)
