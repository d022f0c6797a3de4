"""Shared test utilities."""

import math

import numpy as np

from probeview import DensityMatrix, FockVector, Mixture, ModeSplit


def number_vector(n: int) -> FockVector:
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    return FockVector(coeffs)


def cat_vector() -> FockVector:
    return FockVector(np.array([1.0, 1.0]) / math.sqrt(2.0))


def split_from_amplitude(q0: float) -> ModeSplit:
    return ModeSplit(q0, math.sqrt(1.0 - q0 * q0))


def spectral_mixture(rho: DensityMatrix) -> Mixture:
    """Rewrite a density matrix as a mixture of its eigenvectors.

    Lets a mixed state be fed back into the pure-state reduction path;
    tiny negative eigenvalues from rounding are clipped to zero.
    """
    vals, vecs = np.linalg.eigh(rho.elems)
    weights = np.clip(vals, 0.0, None)
    weights = weights / weights.sum()
    states = tuple(
        FockVector(vecs[:, k] / np.linalg.norm(vecs[:, k])) for k in range(vals.size)
    )
    return Mixture(tuple(float(w) for w in weights), states)


def pad_matrix(elems: np.ndarray, dim: int) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    out[: elems.shape[0], : elems.shape[1]] = elems
    return out
