"""Named reference states and seeded random state generators."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, IndicesOutOfRange
from .state import StateTensor, new_state


def w_state() -> StateTensor:
    """(|001> + |010> + |100>) / sqrt(3) on three qubits."""
    amps = np.zeros(8)
    amps[[1, 2, 4]] = 1.0 / np.sqrt(3.0)
    return StateTensor((2, 2, 2), amps, label="W")


def ghz(n: int = 3) -> StateTensor:
    """(|0...0> + |1...1>) / sqrt(2) on n qubits, n >= 2."""
    if n < 2:
        raise DimensionMismatch("GHZ needs at least two qubits")
    amps = np.zeros(2 ** n)
    amps[[0, -1]] = 1.0 / np.sqrt(2.0)
    return StateTensor((2,) * n, amps, label=f"GHZ{n}")


def bell() -> StateTensor:
    """(|00> + |11>) / sqrt(2)."""
    amps = np.zeros(4)
    amps[[0, 3]] = 1.0 / np.sqrt(2.0)
    return StateTensor((2, 2), amps, label="Bell")


def basis_state(dims, occupation) -> StateTensor:
    """The product basis state |i1 i2 ... in> for the given occupation."""
    dims = tuple(int(d) for d in dims)
    occupation = tuple(int(i) for i in occupation)
    if len(occupation) != len(dims):
        raise DimensionMismatch(
            f"occupation {occupation} does not match dims {dims}")
    if any(i < 0 or i >= d for i, d in zip(occupation, dims)):
        raise IndicesOutOfRange(f"occupation {occupation} outside dims {dims}")
    flat = 0
    for i, d in zip(occupation, dims):
        flat = flat * d + i
    amps = np.zeros(int(np.prod(dims)))
    amps[flat] = 1.0
    return StateTensor(dims, amps)


def haar_random_state(dims, seed: int = 0, label: str | None = None) -> StateTensor:
    """A generic random pure state (complex Gaussian, normalized)."""
    dims = tuple(int(d) for d in dims)
    rng = np.random.default_rng(seed)
    size = int(np.prod(dims))
    amps = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return new_state(dims, amps / np.linalg.norm(amps), label)
