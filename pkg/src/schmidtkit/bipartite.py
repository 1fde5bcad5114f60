"""Bipartite Schmidt decomposition, Schmidt number, and reduced spectra.

The bipartite decomposition always exists: flatten the state across the
cut and take the singular value decomposition.  Singular values are the
Schmidt coefficients, left singular vectors belong to the left block,
and rows of V+ (conjugated right singular vectors) to the right block.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from . import tolerances
from .linalg import phase_fix
from .state import Bipartition, SchmidtDecomposition, StateTensor, flatten, reduced_density

__all__ = [
    "BipartiteDecomposition",
    "schmidt_decompose_bipartite",
    "schmidt_number",
    "spectra",
]


@dataclass(frozen=True)
class BipartiteDecomposition:
    """A two-family Schmidt decomposition plus the cut it came from.

    The underlying decomposition lives on the grouped dimensions
    (prod of left dims, prod of right dims); reconstructing it yields
    the state with its axes permuted to left-block-then-right-block.
    """

    decomposition: SchmidtDecomposition
    bipartition: Bipartition

    @property
    def coefficients(self) -> np.ndarray:
        return self.decomposition.coefficients

    @property
    def rank(self) -> int:
        return self.decomposition.rank


def schmidt_decompose_bipartite(
    state: StateTensor,
    bipartition: Bipartition,
    rank_tol: float | None = None,
) -> BipartiteDecomposition:
    """Schmidt decomposition of a pure state across one cut.

    Coefficients are the singular values above rank_tol * sigma_max
    (descending).  For reproducible output each left vector's first
    nonzero component is made real positive, with the compensating
    phase pushed onto the matching right vector.
    """
    rank_tol = tolerances.RANK_TOL if rank_tol is None else rank_tol
    m = flatten(state, bipartition)
    u, sing, vh = np.linalg.svd(m, full_matrices=False)
    keep = sing > rank_tol * sing[0]
    coeffs = sing[keep]
    left = u[:, keep].T.copy()
    right = vh[keep, :].copy()
    for l in range(coeffs.size):
        left[l], phase = phase_fix(left[l])
        right[l] = right[l] * phase
    dims = (left.shape[1], right.shape[1])
    dec = SchmidtDecomposition(dims, coeffs / np.linalg.norm(coeffs), (left, right))
    return BipartiteDecomposition(dec, bipartition)


def schmidt_number(
    state: StateTensor,
    bipartition: Bipartition,
    rank_tol: float | None = None,
) -> int:
    """Rank of the flattened state across the cut.

    Counts singular values above rank_tol * sigma_max, which equals the
    number of nonzero eigenvalues of either side's reduced density.
    """
    rank_tol = tolerances.RANK_TOL if rank_tol is None else rank_tol
    sing = np.linalg.svd(flatten(state, bipartition), compute_uv=False)
    return int(np.count_nonzero(sing > rank_tol * sing[0]))


def spectra(state: StateTensor, keep) -> np.ndarray:
    """Eigenvalues of the reduced density on the kept subsystems.

    Returned descending; rounding noise below zero (within PSD_TOL,
    guaranteed by the DensityMatrix type) is clamped to zero.
    """
    rho = reduced_density(state, keep)
    vals = np.linalg.eigvalsh(rho.entries)[::-1]
    return np.clip(vals, 0.0, None)
