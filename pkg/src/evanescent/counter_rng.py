"""Stateless counter-based uniforms keyed by (seed, stream, counter).

Each value is a SplitMix64 output: the per-stream key is derived from the
master seed and the stream index, and the counter selects the position in
that stream.  Any element can be computed independently of every other,
so the draws do not depend on evaluation order or on how work is split.
"""

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_STREAM = np.uint64(0xD1B54A32D192ED03)
_S30, _S27, _S31 = np.uint64(30), np.uint64(27), np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 2.0**-53


def mix64(z):
    """SplitMix64 finaliser applied elementwise to a uint64 array (wrapping)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def stream_keys(seed, streams):
    """Per-stream keys for ``streams`` (array of indices) under master ``seed``."""
    with np.errstate(over="ignore"):
        base = mix64(np.array([check_seed(seed)], dtype=np.uint64) + _GOLDEN)
        return mix64(base ^ (np.asarray(streams, dtype=np.uint64) * _STREAM))


def bits(keys, counter):
    """64 random bits for each key at position ``counter`` (scalar or array)."""
    with np.errstate(over="ignore"):
        ctr = np.asarray(counter, dtype=np.uint64) + np.uint64(1)
        return mix64(np.asarray(keys, dtype=np.uint64) + ctr * _GOLDEN)


def uniform(keys, counter):
    """Uniform doubles on [0, 1) with 53 random bits."""
    return (bits(keys, counter) >> _S11).astype(np.float64) * _INV53


def exponential(keys, counter, scale=1.0):
    """Exponential variates by inverse CDF; ``1 - u`` is exact, so the result is finite."""
    return -scale * np.log(1.0 - uniform(keys, counter))
