import numpy as np

"""
Constants
"""
_MASK64 = 0xFFFFFFFFFFFFFFFF
# SplitMix64 (Steele, Lea & Flood 2014). Pinned, changing them changes every replicate seed
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
_SPLITMIX_MUL2 = 0x94D049BB133111EB
# Uniforms are (j + 0.5) * 2^-52 for j uniform on {0, ..., 2^52 - 1}
_UNIFORM_BITS = 52


def _splitmix64_mix(z: int) -> int:
    """
    The SplitMix64 output function applied to a 64-bit state.

    Parameters
    ----------
    z : int
        the 64-bit state

    Returns
    -------
    mixed : int
        the mixed 64-bit value
    """
    z = ((z ^ (z >> 30)) * _SPLITMIX_MUL1) & _MASK64
    z = ((z ^ (z >> 27)) * _SPLITMIX_MUL2) & _MASK64
    return z ^ (z >> 31)


def mix_seed(base_seed: int, index: int) -> int:
    """
    Derive the seed of replicate number index from a base seed.
    The result is the (index + 1)-th output of a SplitMix64 stream started at base_seed, i.e.
    mix(base_seed + (index + 1) * 0x9E3779B97F4A7C15 mod 2^64).

    Parameters
    ----------
    base_seed : int
        The base seed of an experiment. Reduced modulo 2^64
    index : int
        The replicate index (>= 0)

    Returns
    -------
    seed : int
        A 64-bit seed
    """
    assert index >= 0, "index must be non-negative"
    state = (int(base_seed) + (int(index) + 1) * _SPLITMIX_GAMMA) & _MASK64
    return _splitmix64_mix(state)


def make_generator(seed: int) -> np.random.Generator:
    """
    Create the generator used for all sampling: numpy's PCG64 (128-bit state) seeded with the 64-bit seed.

    Parameters
    ----------
    seed : int
        The seed. Reduced modulo 2^64

    Returns
    -------
    generator : np.random.Generator
        A fresh generator owning its own state
    """
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


def open_uniforms(generator: np.random.Generator, n: int) -> np.ndarray:
    """
    Draw n uniforms from the open interval (0, 1).
    Each value is (j + 0.5) * 2^-52 for an integer j drawn uniformly from {0, ..., 2^52 - 1}, so 0 and 1 never occur
    and every value is exactly representable.

    Parameters
    ----------
    generator : np.random.Generator
        The generator (see make_generator)
    n : int
        Number of values

    Returns
    -------
    u : np.ndarray
        Array of shape (n,) with values in (0, 1)
    """
    j = generator.integers(0, 2 ** _UNIFORM_BITS, size=n, dtype=np.int64)
    return (j.astype(np.float64) + 0.5) * 2.0 ** -_UNIFORM_BITS
