"""Core matrix types and dense SPD linear algebra.

Matrix wrappers freeze their arrays at construction (exactly symmetric,
read-only), so instances are safe to share across threads; every operation
here is a pure function of its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

import numpy as np
from scipy.linalg import cho_solve

from .errors import (
    DimensionMismatch,
    EmptyIndexSet,
    IndexOutOfRange,
    InvalidParameters,
    NotPositiveDefinite,
)

__all__ = [
    "PrecisionMatrix",
    "CovarianceMatrix",
    "SpdFactorization",
    "EdgeSet",
    "OmegaInf",
    "OmegaF",
    "MatrixClassSpec",
    "factorize",
    "invert",
    "schur_complement",
    "edge_set_of",
    "class_membership",
]

# Largest relative asymmetry accepted at construction; anything below is
# averaged away so the stored entries are bit-for-bit symmetric.
_ASYMMETRY_RTOL = 1e-8


def _cholesky_lower(arr: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, raising NotPositiveDefinite on failure."""
    try:
        lower = np.linalg.cholesky(arr)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"Cholesky factorization failed: {exc}") from None
    if not np.all(np.isfinite(lower)):
        raise NotPositiveDefinite("Cholesky factor has non-finite pivots")
    return lower


def _frozen_symmetric(entries: object, what: str) -> np.ndarray:
    arr = np.array(entries, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{what} must be square, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ValueError(f"{what} must have order >= 2, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} has non-finite entries")
    gap = float(np.max(np.abs(arr - arr.T)))
    if gap > _ASYMMETRY_RTOL * max(1.0, float(np.max(np.abs(arr)))):
        raise ValueError(f"{what} is not symmetric: max |M - M^T| = {gap:.3g}")
    arr = 0.5 * (arr + arr.T)
    arr.flags.writeable = False
    return arr


class PrecisionMatrix:
    """Inverse covariance of a zero-mean Gaussian: symmetric positive definite.

    Construction rejects anything not finite, square of order >= 2,
    symmetric (up to roundoff, then symmetrized exactly), and
    Cholesky-factorizable.
    """

    __slots__ = ("matrix",)

    def __init__(self, entries: object) -> None:
        arr = _frozen_symmetric(entries, "precision matrix")
        _cholesky_lower(arr)
        self.matrix = arr

    @property
    def p(self) -> int:
        return int(self.matrix.shape[0])

    def __repr__(self) -> str:
        return f"PrecisionMatrix(p={self.p})"


class CovarianceMatrix:
    """Covariance of a zero-mean Gaussian, or an estimate of one.

    Construction enforces symmetry and finiteness only: empirical
    second-moment matrices from few samples are merely PSD, and
    diagonal-corrected estimates may even be slightly indefinite.
    Operations that need positive definiteness (factorize, invert,
    schur_complement) raise NotPositiveDefinite at the point of use.
    """

    __slots__ = ("matrix",)

    def __init__(self, entries: object) -> None:
        self.matrix = _frozen_symmetric(entries, "covariance matrix")

    @property
    def p(self) -> int:
        return int(self.matrix.shape[0])

    def __repr__(self) -> str:
        return f"CovarianceMatrix(p={self.p})"


MatrixLike = Union[PrecisionMatrix, CovarianceMatrix]


@dataclass(frozen=True, eq=False)
class SpdFactorization:
    """Lower-triangular factor L with log det(L @ L.T) cached in nats."""

    factor: np.ndarray
    log_determinant: float


def factorize(m: MatrixLike) -> SpdFactorization:
    """Cholesky-factorize an SPD matrix; log det = 2 * sum(log diag(L))."""
    lower = _cholesky_lower(m.matrix)
    diag = np.diag(lower)
    if np.any(diag <= 0.0):
        raise NotPositiveDefinite("Cholesky factor has a nonpositive pivot")
    log_det = 2.0 * float(np.sum(np.log(diag)))
    lower.flags.writeable = False
    return SpdFactorization(factor=lower, log_determinant=log_det)


def invert(m: MatrixLike) -> MatrixLike:
    """Invert a PD matrix; precision and covariance swap roles.

    Solves against the identity through the Cholesky factor, so
    M @ invert(M) == I to ~1e-10 relative error for well conditioned input.
    """
    fact = factorize(m)
    inverse = cho_solve((fact.factor, True), np.eye(m.p))
    if isinstance(m, PrecisionMatrix):
        return CovarianceMatrix(inverse)
    return PrecisionMatrix(inverse)


def schur_complement(m: Union[MatrixLike, np.ndarray], keep: Iterable[int]) -> np.ndarray:
    """A - B D^{-1} B^T for the block over `keep` (A) against its complement (D).

    det(result) == det(M) / det(D). Applied to a covariance, the result is
    the conditional covariance of the kept coordinates given the rest.
    """
    arr = m.matrix if isinstance(m, (PrecisionMatrix, CovarianceMatrix)) else np.asarray(m, dtype=float)
    p = int(arr.shape[0])
    keep_idx = sorted({int(k) for k in keep})
    if not keep_idx:
        raise EmptyIndexSet("keep is empty")
    if keep_idx[0] < 0 or keep_idx[-1] >= p:
        raise IndexOutOfRange(f"keep indices must lie in [0, {p})")
    kept = set(keep_idx)
    comp = [k for k in range(p) if k not in kept]
    if not comp:
        raise EmptyIndexSet("keep must be a proper subset; its complement is empty")
    a = arr[np.ix_(keep_idx, keep_idx)]
    b = arr[np.ix_(keep_idx, comp)]
    d = arr[np.ix_(comp, comp)]
    d_lower = _cholesky_lower(d)
    s = a - b @ cho_solve((d_lower, True), b.T)
    return 0.5 * (s + s.T)


def _normalized_edge(edge: object) -> tuple[int, int]:
    i, j = (int(v) for v in edge)
    if i == j:
        raise ValueError(f"self-loop ({i}, {i}) is not a valid edge")
    return (i, j) if i < j else (j, i)


class EdgeSet:
    """Undirected graph on {0, ..., p-1} as a set of off-diagonal pairs.

    Edges are stored normalized as (i, j) with i < j. The diagonal is never
    part of an edge set: diagonals of a PD precision matrix are always
    nonzero and stay free in every constrained fit.
    """

    __slots__ = ("p", "edges")

    def __init__(self, p: int, edges: Iterable[object] = ()) -> None:
        p = int(p)
        if p < 2:
            raise ValueError(f"vertex count must be >= 2, got {p}")
        normalized = set()
        for edge in edges:
            pair = _normalized_edge(edge)
            if pair[0] < 0 or pair[1] >= p:
                raise ValueError(f"edge {pair} out of range for p={p}")
            normalized.add(pair)
        self.p = p
        self.edges = frozenset(normalized)

    @classmethod
    def complete(cls, p: int) -> "EdgeSet":
        return cls(p, [(i, j) for i in range(p) for j in range(i + 1, p)])

    def without(self, *edges: object) -> "EdgeSet":
        dropped = {_normalized_edge(e) for e in edges}
        return EdgeSet(self.p, self.edges - dropped)

    def difference(self, other: "EdgeSet") -> frozenset:
        """Edges present here but absent from `other` (orders must match)."""
        if other.p != self.p:
            raise DimensionMismatch(f"vertex counts differ: {self.p} vs {other.p}")
        return frozenset(self.edges - other.edges)

    def is_subset_of(self, other: "EdgeSet") -> bool:
        if other.p != self.p:
            raise DimensionMismatch(f"vertex counts differ: {self.p} vs {other.p}")
        return self.edges <= other.edges

    def __contains__(self, edge: object) -> bool:
        try:
            return _normalized_edge(edge) in self.edges
        except (TypeError, ValueError):
            return False

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeSet):
            return NotImplemented
        return self.p == other.p and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.p, self.edges))

    def __repr__(self) -> str:
        return f"EdgeSet(p={self.p}, edges={sorted(self.edges)})"


@dataclass(frozen=True)
class OmegaInf:
    """Entrywise matrix class: diagonals at most h, couplings at least alpha.

    alpha / h acts as a normalized minimum signal strength; positive
    definiteness forces alpha < h.
    """

    alpha: float
    h: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < self.h):
            raise InvalidParameters(f"requires 0 < alpha < h, got alpha={self.alpha}, h={self.h}")


@dataclass(frozen=True)
class OmegaF:
    """Frobenius-norm ball of precision matrices."""

    gamma: float

    def __post_init__(self) -> None:
        if not self.gamma > 0.0:
            raise InvalidParameters(f"gamma must be positive, got {self.gamma}")


MatrixClassSpec = Union[OmegaInf, OmegaF]


def edge_set_of(theta: MatrixLike, zero_tol: float = 1e-12) -> EdgeSet:
    """Off-diagonal support: edge (i, j), i < j, iff |theta[i, j]| > zero_tol."""
    if zero_tol < 0.0:
        raise InvalidParameters("zero_tol must be >= 0")
    arr = theta.matrix
    rows, cols = np.triu_indices(theta.p, k=1)
    mask = np.abs(arr[rows, cols]) > zero_tol
    return EdgeSet(theta.p, zip(rows[mask].tolist(), cols[mask].tolist()))


def class_membership(theta: PrecisionMatrix, spec: MatrixClassSpec, zero_tol: float = 1e-12) -> bool:
    """Whether theta belongs to the given matrix class.

    OmegaInf: every diagonal <= h and every off-diagonal entry above
    zero_tol has magnitude >= alpha. OmegaF: Frobenius norm <= gamma.
    """
    if zero_tol < 0.0:
        raise InvalidParameters("zero_tol must be >= 0")
    arr = theta.matrix
    if isinstance(spec, OmegaF):
        return bool(np.linalg.norm(arr) <= spec.gamma)
    if isinstance(spec, OmegaInf):
        if np.any(np.diag(arr) > spec.h):
            return False
        rows, cols = np.triu_indices(theta.p, k=1)
        off = np.abs(arr[rows, cols])
        return bool(np.all(off[off > zero_tol] >= spec.alpha))
    raise TypeError(f"unsupported matrix class spec: {type(spec).__name__}")
