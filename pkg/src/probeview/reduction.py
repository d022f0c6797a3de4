"""Partial trace of a single-mode state over the complement of a region.

Restricting a state with mode amplitudes (q0, q1) to the region is the
same as sending it through a lossy channel of transmissivity q0**2: the
matrix elements of the reduced state are

    <i|rho0|j> = sum_o psi_{o+i} conj(psi_{o+j})
                 * sqrt((o+i)! (o+j)!) / (o! sqrt(i! j!))
                 * q1**(2*o) * q0**(i+j)          (j >= i),

with the conjugate expression for j < i.  For a state supported on
|0>..|N| the sum terminates at o = N - max(i, j), so the series is exact.
Number, coherent, and thermal inputs additionally admit closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    Coherent,
    DensityMatrix,
    FockVector,
    Mixture,
    ModeSplit,
    Thermal,
    ValidationError,
    VacuumLimitError,
)

__all__ = [
    "ReductionReport",
    "BetaPrime",
    "binomial_pmf",
    "reduce_number_state",
    "reduce_pure_general",
    "reduce_mixed",
    "reduce_coherent",
    "beta_prime",
    "reduce_thermal",
]

# float(comb(n, n//2)) overflows a little above n = 1029
_EXACT_COMB_LIMIT = 1000


@dataclass(frozen=True)
class ReductionReport:
    """Reduced state plus bookkeeping about the series evaluation."""

    rho0: DensityMatrix
    series_terms_used: int
    tail_bound: float


@dataclass(frozen=True)
class BetaPrime:
    """Effective inverse temperature of a reduced thermal state."""

    beta_prime: float
    energy: float

    def __post_init__(self) -> None:
        if not (self.beta_prime > 0.0 and self.energy > 0.0):
            raise ValidationError("beta_prime and energy must be positive")

    @property
    def beta_prime_energy(self) -> float:
        return self.beta_prime * self.energy


def binomial_pmf(n: int, p: float, i: int) -> float:
    """Probability of i successes in n trials with success probability p.

    Uses the exact integer binomial coefficient with float powers, which
    keeps sum_i pmf(n, p, i) within 1e-14 of 1 well past n = 200; above
    the float-overflow bound for C(n, i) it falls back to log-gamma.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValidationError(f"trial count must be a nonnegative integer, got {n!r}")
    if not isinstance(i, (int, np.integer)) or i < 0:
        raise ValidationError(f"success count must be a nonnegative integer, got {i!r}")
    if i > n:
        raise ValidationError(f"success count {i} exceeds trial count {n}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"success probability must lie in [0, 1], got {p!r}")
    if p == 0.0:
        return 1.0 if i == 0 else 0.0
    if p == 1.0:
        return 1.0 if i == n else 0.0
    if n <= _EXACT_COMB_LIMIT:
        return math.comb(n, i) * p**i * (1.0 - p) ** (n - i)
    log_pmf = (
        math.lgamma(n + 1)
        - math.lgamma(i + 1)
        - math.lgamma(n - i + 1)
        + i * math.log(p)
        + (n - i) * math.log1p(-p)
    )
    return math.exp(log_pmf)


def reduce_number_state(n: int, split: ModeSplit) -> DensityMatrix:
    """Reduced state of |n>: diagonal binomial distribution B(n, q0**2)."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValidationError(f"occupation must be a nonnegative integer, got {n!r}")
    diag = np.array([binomial_pmf(int(n), split.q0sq, i) for i in range(int(n) + 1)])
    return DensityMatrix(np.diag(diag.astype(complex)))


def _series_kernel(psi: np.ndarray, q0: float, q1sq: float) -> np.ndarray:
    """Evaluate the reduction series for every (i, j) of a support-N input."""
    dim = psi.size
    rho = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(i, dim):
            length = dim - j
            # weights K(o) via the exact term ratio
            # K(o+1)/K(o) = q1^2 sqrt((o+1+i)(o+1+j)) / (o+1); K(0) = q0^(i+j)
            weights = np.empty(length)
            weights[0] = q0 ** (i + j)
            if length > 1:
                o = np.arange(1.0, length)
                weights[1:] = weights[0] * np.cumprod(q1sq * np.sqrt((o + i) * (o + j)) / o)
            value = weights @ (psi[i : i + length] * np.conj(psi[j : j + length]))
            rho[i, j] = value
            rho[j, i] = np.conj(value)
    return rho


def reduce_pure_general(psi: FockVector, split: ModeSplit, tol: float = 1e-10) -> ReductionReport:
    """Reduce a pure state to the region via the general matrix-element series.

    Parameters
    ----------
    psi
        Normalized amplitudes psi_0..psi_N.
    split
        Region/complement amplitudes (q0, q1).
    tol
        Requested bound on neglected series mass.  Finite-support inputs
        terminate the series exactly, so the reported tail bound is 0.

    Returns
    -------
    ReductionReport
        Reduced density matrix of dimension N+1, the largest summation
        index reached, and the tail bound.
    """
    if not isinstance(psi, FockVector):
        raise ValidationError("input state must be a FockVector")
    if not 0.0 < float(tol):
        raise ValidationError(f"tolerance must be positive, got {tol!r}")
    dim = psi.dim
    if split.q0 == 1.0:
        rho = np.outer(psi.coeffs, psi.coeffs.conj())
        return ReductionReport(DensityMatrix(rho), 0, 0.0)
    if split.q0 == 0.0:
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
        return ReductionReport(DensityMatrix(rho), 0, 0.0)
    rho = _series_kernel(psi.coeffs, split.q0, split.q1sq)
    return ReductionReport(DensityMatrix(rho), dim - 1, 0.0)


def reduce_mixed(family: Mixture, split: ModeSplit, tol: float = 1e-10) -> ReductionReport:
    """Reduce a convex mixture of pure states, component by component.

    The partial trace is linear, so the reduced mixture is the weighted
    sum of the reduced components (padded to a common dimension).
    """
    if not isinstance(family, Mixture):
        raise ValidationError("input must be a Mixture")
    dim = max(state.dim for state in family.states)
    rho = np.zeros((dim, dim), dtype=complex)
    terms = 0
    tail = 0.0
    for weight, state in zip(family.weights, family.states):
        report = reduce_pure_general(state, split, tol)
        block = report.rho0.elems
        rho[: block.shape[0], : block.shape[1]] += weight * block
        terms = max(terms, report.series_terms_used)
        tail += weight * report.tail_bound
    return ReductionReport(DensityMatrix(rho), terms, tail)


def reduce_coherent(alpha: complex, split: ModeSplit) -> Coherent:
    """Reduced coherent state: exactly the coherent state with amplitude q0*alpha."""
    return Coherent(complex(alpha) * split.q0)


def beta_prime(beta: float, energy: float, q0_sq: float) -> BetaPrime:
    """Effective inverse temperature after restriction to the region.

    beta' = (1/E) * ln((q0^2 + exp(beta*E) - 1) / q0^2), which is >= beta
    for q0^2 <= 1 and reduces to beta at q0^2 = 1.

    Raises
    ------
    VacuumLimitError
        At q0^2 = 0, where beta' diverges (the reduced state is vacuum).
    """
    beta = float(beta)
    energy = float(energy)
    q0_sq = float(q0_sq)
    if not (math.isfinite(beta) and beta > 0.0 and math.isfinite(energy) and energy > 0.0):
        raise ValidationError("beta and energy must be positive and finite")
    if q0_sq == 0.0:
        raise VacuumLimitError("q0 = 0 reduces a thermal state to vacuum; beta' diverges")
    if not 0.0 < q0_sq <= 1.0:
        raise ValidationError(f"q0_sq must lie in (0, 1], got {q0_sq!r}")
    if q0_sq == 1.0:
        return BetaPrime(beta, energy)
    be = beta * energy
    if be > 690.0:
        # expm1 would overflow; use ln((q0^2 - 1) e^{-bE} + 1) + bE - ln q0^2
        bpe = be + math.log1p((q0_sq - 1.0) * math.exp(-be)) - math.log(q0_sq)
    else:
        bpe = math.log1p(math.expm1(be) / q0_sq)
    return BetaPrime(bpe / energy, energy)


def reduce_thermal(beta: float, energy: float, split: ModeSplit) -> Thermal:
    """Reduced thermal state: thermal again, at inverse temperature beta'."""
    result = beta_prime(beta, energy, split.q0sq)
    return Thermal(result.beta_prime, energy)
