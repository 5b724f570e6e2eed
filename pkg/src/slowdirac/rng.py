"""Portable splitmix64 uniform stream.

The generator is fixed (rather than numpy's default) so that noise profiles are
reproducible bit-for-bit from a seed in any language.
"""

import numpy as np

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

# largest double below 1.0; only reached when z rounds up to 2**64
_BELOW_ONE = np.nextafter(1.0, 0.0)


def splitmix64(seed, n):
    """Return the first ``n`` raw 64-bit outputs for ``seed`` as a uint64 array.

    The state after draw i is ``seed + (i+1)*gamma (mod 2**64)``, so the whole
    stream is computed at once with wrapping uint64 arithmetic.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    seed = int(seed) & _MASK
    idx = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + idx * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
    return z


def rng_stream(seed, n):
    """Uniforms in [0, 1): each raw output divided by 2**64."""
    u = splitmix64(seed, n).astype(np.float64) * 2.0**-64
    # z / 2**64 rounds to exactly 1.0 for z >= 2**64 - 1024
    return np.minimum(u, _BELOW_ONE)
