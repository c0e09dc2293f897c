"""Exact divergences, conditional mutual information, and separation bounds.

Natural logarithms throughout, so every divergence and mutual information
is in nats. All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.linalg import cho_solve

from .core import (
    PrecisionMatrix,
    _cholesky_lower,
    edge_set_of,
    factorize,
    invert,
    schur_complement,
)
from .errors import (
    DimensionMismatch,
    EmptySet,
    IndexOutOfRange,
    IndexOverlap,
    InvalidParameters,
    NoEdges,
    NoMissingEdge,
    NotPositiveDefinite,
    SameVertex,
)

__all__ = [
    "BoundReport",
    "kl_gaussian",
    "conditional_mutual_info",
    "block_conditional_mutual_info",
    "c_theta_star",
    "one_edge_lower_bound",
    "omega_inf_lower_bound",
    "verify_separation",
]

# Magnitudes below this are floating-point residue of identical inputs and
# round to exactly zero.
_KL_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """A divergence compared against its guaranteed lower bound."""

    kl_value: float
    lower_bound: float
    slack: float
    witness_edge: Optional[tuple[int, int]] = None

    def to_dict(self) -> dict:
        return {
            "kl": self.kl_value,
            "bound": self.lower_bound,
            "slack": self.slack,
            "witness_edge": list(self.witness_edge) if self.witness_edge is not None else None,
        }


def kl_gaussian(theta1: PrecisionMatrix, theta2: PrecisionMatrix) -> float:
    """KL(N(0, inv(theta1)) || N(0, inv(theta2))) in nats.

    Closed form for zero-mean Gaussians:
        0.5 * (tr(theta2 @ inv(theta1)) - p + log det theta1 - log det theta2).
    Asymmetric in its arguments; zero iff the matrices coincide.
    """
    if theta1.p != theta2.p:
        raise DimensionMismatch(f"orders differ: {theta1.p} vs {theta2.p}")
    f1 = factorize(theta1)
    f2 = factorize(theta2)
    sigma1 = cho_solve((f1.factor, True), np.eye(theta1.p))
    trace = float(np.sum(theta2.matrix * sigma1))
    value = 0.5 * (trace - theta1.p + f1.log_determinant - f2.log_determinant)
    return 0.0 if abs(value) < _KL_ZERO_TOL else value


def conditional_mutual_info(theta: PrecisionMatrix, i: int, j: int) -> float:
    """I(X_i; X_j | all other coordinates) under N(0, inv(theta)), in nats.

    Depends only on the 2x2 block over (i, j):
        0.5 * log(t_ii t_jj / (t_ii t_jj - t_ij^2)),
    evaluated as -0.5 * log1p(-t_ij^2 / (t_ii t_jj)) so a zero coupling
    gives exactly 0.
    """
    i, j = int(i), int(j)
    if i == j:
        raise SameVertex(f"i == j == {i}")
    for v in (i, j):
        if not 0 <= v < theta.p:
            raise IndexOutOfRange(f"vertex {v} out of range for p={theta.p}")
    arr = theta.matrix
    a = arr[i, i] * arr[j, j]
    b = arr[i, j] ** 2
    if b >= a:
        raise NotPositiveDefinite(f"2x2 block over ({i}, {j}) is numerically singular")
    return -0.5 * math.log1p(-b / a)


def _conditional_logdet(sigma: np.ndarray, target: tuple[int, ...], given: tuple[int, ...]) -> float:
    """log det Cov(X_target | X_given), from the joint covariance array.

    Marginalizes to target + given first (a covariance submatrix), then
    takes the Schur complement of the given block.
    """
    idx = target + given
    sub = sigma[np.ix_(idx, idx)]
    cond = schur_complement(sub, range(len(target))) if given else sub
    lower = _cholesky_lower(cond)
    return 2.0 * float(np.sum(np.log(np.diag(lower))))


def block_conditional_mutual_info(theta: PrecisionMatrix, i: int, subset: Iterable[int]) -> float:
    """I(X_i; X_subset | everything else) under N(0, inv(theta)), in nats.

    Entropy decomposition through conditional covariances: with R the
    remaining coordinates,
        0.5 * (log det Cov(X_i | R) + log det Cov(X_S | R)
               - log det Cov(X_{i union S} | R)).
    When {i} + subset exhausts the vertices, R is empty and this is the
    plain mutual information I(X_i; X_subset).
    """
    p = theta.p
    i = int(i)
    s = tuple(sorted({int(v) for v in subset}))
    if not s:
        raise EmptySet("subset is empty")
    if not 0 <= i < p or s[0] < 0 or s[-1] >= p:
        raise IndexOutOfRange(f"vertex indices must lie in [0, {p})")
    if i in s:
        raise IndexOverlap(f"vertex {i} appears in the subset")
    sigma = invert(theta).matrix
    rest = tuple(v for v in range(p) if v != i and v not in set(s))
    value = 0.5 * (
        _conditional_logdet(sigma, (i,), rest)
        + _conditional_logdet(sigma, s, rest)
        - _conditional_logdet(sigma, (i,) + s, rest)
    )
    return 0.0 if -_KL_ZERO_TOL < value < 0.0 else value


def c_theta_star(theta: PrecisionMatrix, zero_tol: float = 1e-12) -> float:
    """Smallest edgewise ratio t_ii t_jj / (t_ii t_jj - t_ij^2) over the support.

    The minimum runs over strictly off-diagonal entries with magnitude
    above zero_tol; it is always > 1 for a PD matrix and equals
    exp(2 * min edgewise conditional mutual information).
    """
    if zero_tol < 0.0:
        raise InvalidParameters("zero_tol must be >= 0")
    arr = theta.matrix
    rows, cols = np.triu_indices(theta.p, k=1)
    off = arr[rows, cols]
    mask = np.abs(off) > zero_tol
    if not np.any(mask):
        raise NoEdges("matrix has no off-diagonal support")
    diag = np.diag(arr)
    a = diag[rows[mask]] * diag[cols[mask]]
    b = off[mask] ** 2
    return float(np.min(a / (a - b)))


def one_edge_lower_bound(theta_star: PrecisionMatrix, zero_tol: float = 1e-12) -> float:
    """Guaranteed KL gap (nats) when any single true edge is missing.

    Equal to 0.5 * log of the separation constant of theta_star; strictly
    positive whenever theta_star has at least one edge.
    """
    return 0.5 * math.log(c_theta_star(theta_star, zero_tol))


def omega_inf_lower_bound(alpha: float, h: float) -> float:
    """Worst-case one-edge KL gap over the entrywise class:
    0.5 * log(1 / (1 - alpha^2 / h^2)).

    Increasing in alpha for fixed h and unbounded as alpha approaches h.
    """
    if not (0.0 < alpha < h):
        raise InvalidParameters(f"requires 0 < alpha < h, got alpha={alpha}, h={h}")
    return -0.5 * math.log1p(-((alpha / h) ** 2))


def verify_separation(
    theta_star: PrecisionMatrix,
    theta: PrecisionMatrix,
    zero_tol: float = 1e-12,
) -> BoundReport:
    """Check KL(theta_star's Gaussian || theta's) against the one-edge bound.

    Requires that theta misses at least one edge of theta_star (otherwise
    theta could equal theta_star and the divergence would be zero). The
    returned slack is kl - bound and is nonnegative up to roundoff.
    """
    if theta_star.p != theta.p:
        raise DimensionMismatch(f"orders differ: {theta_star.p} vs {theta.p}")
    missing = sorted(edge_set_of(theta_star, zero_tol).difference(edge_set_of(theta, zero_tol)))
    if not missing:
        raise NoMissingEdge("every edge of theta_star is present in theta")
    kl = kl_gaussian(theta_star, theta)
    bound = one_edge_lower_bound(theta_star, zero_tol)
    return BoundReport(
        kl_value=kl,
        lower_bound=bound,
        slack=kl - bound,
        witness_edge=missing[0],
    )
