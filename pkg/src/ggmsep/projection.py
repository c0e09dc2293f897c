"""KL-optimal edge deletions and the support-constrained Gaussian MLE.

The two ``project_remove_*`` functions perform covariance surgery: the
covariance entries being severed are replaced by the values implied by
zero partial covariance given the remaining coordinates. That leaves every
other conditional of the distribution untouched, so the divergence paid is
exactly the corresponding conditional mutual information, the smallest
possible for any distribution missing those edges.

``fit_graph_mle`` minimizes the Gaussian negative log likelihood over
precision matrices supported on a given graph (diagonal always free)
inside a Frobenius ball, the inner optimization behind graph scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.linalg import cho_solve

from .core import (
    CovarianceMatrix,
    EdgeSet,
    PrecisionMatrix,
    _cholesky_lower,
    factorize,
    invert,
)
from .errors import (
    DimensionMismatch,
    EmptySet,
    IndexOutOfRange,
    IndexOverlap,
    InfeasibleStart,
    InvalidParameters,
    SameVertex,
)
from .serialization import matrix_doc

__all__ = [
    "FitOptions",
    "FitResult",
    "project_remove_edge",
    "project_remove_star",
    "nll",
    "nll_gradient",
    "fit_graph_mle",
]


def _validate_vertex(p: int, v: int) -> int:
    v = int(v)
    if not 0 <= v < p:
        raise IndexOutOfRange(f"vertex {v} out of range for p={p}")
    return v


def project_remove_edge(theta1: PrecisionMatrix, edge: Iterable[int]) -> PrecisionMatrix:
    """Precision of the KL-closest distribution whose graph drops one edge.

    Sigma[i, j] is replaced by Sigma[i, rest] @ inv(Sigma[rest, rest]) @
    Sigma[rest, j] (zero when p == 2 and nothing remains), which zeroes the
    partial covariance of (X_i, X_j) given the rest while preserving both
    one-dimensional conditionals and the marginal of the rest. The KL
    divergence from theta1's Gaussian to the result equals
    conditional_mutual_info(theta1, i, j).
    """
    i, j = (int(v) for v in edge)
    if i == j:
        raise SameVertex(f"edge endpoints coincide: ({i}, {j})")
    i, j = _validate_vertex(theta1.p, i), _validate_vertex(theta1.p, j)
    sigma = np.array(invert(theta1).matrix)
    rest = [v for v in range(theta1.p) if v != i and v != j]
    if rest:
        lower = _cholesky_lower(sigma[np.ix_(rest, rest)])
        target = float(sigma[i, rest] @ cho_solve((lower, True), sigma[rest, j]))
    else:
        target = 0.0
    sigma[i, j] = sigma[j, i] = target
    theta2 = np.array(invert(CovarianceMatrix(sigma)).matrix)
    theta2[i, j] = theta2[j, i] = 0.0
    return PrecisionMatrix(theta2)


def project_remove_star(theta1: PrecisionMatrix, vertex: int, neighbors: Iterable[int]) -> PrecisionMatrix:
    """Drop every edge between `vertex` and `neighbors` at the least KL cost.

    The cross covariances Cov(X_vertex, X_u) for u in neighbors are
    replaced by their values implied by conditional independence given the
    remaining coordinates (plain independence when nothing remains); all
    other covariance entries are preserved. The divergence paid equals
    block_conditional_mutual_info(theta1, vertex, neighbors).
    """
    p = theta1.p
    v = _validate_vertex(p, int(vertex))
    ns = sorted({int(u) for u in neighbors})
    if not ns:
        raise EmptySet("neighbors is empty")
    if ns[0] < 0 or ns[-1] >= p:
        raise IndexOutOfRange(f"neighbor indices must lie in [0, {p})")
    if v in ns:
        raise IndexOverlap(f"vertex {v} appears among its neighbors")
    sigma = np.array(invert(theta1).matrix)
    rest = [u for u in range(p) if u != v and u not in set(ns)]
    if rest:
        lower = _cholesky_lower(sigma[np.ix_(rest, rest)])
        cross = sigma[v, rest] @ cho_solve((lower, True), sigma[np.ix_(rest, ns)])
    else:
        cross = np.zeros(len(ns))
    sigma[v, ns] = cross
    sigma[ns, v] = cross
    theta2 = np.array(invert(CovarianceMatrix(sigma)).matrix)
    theta2[v, ns] = 0.0
    theta2[ns, v] = 0.0
    return PrecisionMatrix(theta2)


def nll(theta: PrecisionMatrix, sigma_hat: CovarianceMatrix) -> float:
    """Gaussian negative log likelihood up to constants:
    -log det(theta) + tr(sigma_hat @ theta).

    sigma_hat may be merely PSD (small-sample estimates); only theta must
    be positive definite.
    """
    if theta.p != sigma_hat.p:
        raise DimensionMismatch(f"orders differ: {theta.p} vs {sigma_hat.p}")
    fact = factorize(theta)
    return -fact.log_determinant + float(np.sum(sigma_hat.matrix * theta.matrix))


def nll_gradient(theta: PrecisionMatrix, sigma_hat: CovarianceMatrix) -> np.ndarray:
    """Gradient of nll in theta: sigma_hat - inv(theta).

    Symmetric, and exactly zero at theta = inv(sigma_hat).
    """
    if theta.p != sigma_hat.p:
        raise DimensionMismatch(f"orders differ: {theta.p} vs {sigma_hat.p}")
    return sigma_hat.matrix - invert(theta).matrix


@dataclass(frozen=True)
class FitOptions:
    """Knobs for the projected-gradient fit."""

    max_iterations: int = 5000
    gradient_tolerance: float = 1e-8
    initial_step: float = 1.0
    backtracking_ratio: float = 0.5
    armijo_constant: float = 1e-4

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise InvalidParameters("max_iterations must be >= 1")
        if not self.gradient_tolerance > 0:
            raise InvalidParameters("gradient_tolerance must be positive")
        if not self.initial_step > 0:
            raise InvalidParameters("initial_step must be positive")
        if not 0.0 < self.backtracking_ratio < 1.0:
            raise InvalidParameters("backtracking_ratio must be in (0, 1)")
        if not self.armijo_constant > 0:
            raise InvalidParameters("armijo_constant must be positive")

    def to_dict(self) -> dict:
        return {
            "max_iterations": self.max_iterations,
            "gradient_tolerance": self.gradient_tolerance,
            "initial_step": self.initial_step,
            "backtracking_ratio": self.backtracking_ratio,
            "armijo_constant": self.armijo_constant,
        }


@dataclass(frozen=True, eq=False)
class FitResult:
    """Constrained-MLE output: fitted precision plus convergence diagnostics.

    objective_trace holds the accepted objective values (monotone
    non-increasing by construction); it is diagnostic only and not part of
    the JSON document.
    """

    theta_hat: PrecisionMatrix
    objective: float
    iterations: int
    converged: bool
    projected_gradient_norm: float
    objective_trace: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "theta_hat": matrix_doc(self.theta_hat),
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "projected_gradient_norm": self.projected_gradient_norm,
        }


def _support_mask(graph: EdgeSet) -> np.ndarray:
    mask = np.eye(graph.p, dtype=bool)
    for i, j in graph.edges:
        mask[i, j] = mask[j, i] = True
    return mask


def _project_feasible(arr: np.ndarray, mask: np.ndarray, gamma: float) -> np.ndarray:
    # Zeroing off-support entries is the orthogonal projection onto the
    # support subspace; since that subspace passes through the ball's
    # center, following it with a rescale into the ball projects exactly
    # onto the intersection.
    out = np.where(mask, arr, 0.0)
    if math.isfinite(gamma):
        norm = float(np.linalg.norm(out))
        if norm > gamma:
            out = out * (gamma / norm)
    return out


def _barrier_objective(arr: np.ndarray, sig: np.ndarray) -> tuple[float, Optional[np.ndarray]]:
    # -log det is +inf outside the PD cone, which is how the line search
    # rejects steps that leave it.
    try:
        lower = np.linalg.cholesky(arr)
    except np.linalg.LinAlgError:
        return math.inf, None
    log_det = 2.0 * float(np.sum(np.log(np.diag(lower))))
    return -log_det + float(np.sum(sig * arr)), lower


def _gradient(lower: np.ndarray, sig: np.ndarray, eye: np.ndarray) -> np.ndarray:
    inverse = cho_solve((lower, True), eye)
    return sig - 0.5 * (inverse + inverse.T)


def _gradient_map_norm(x: np.ndarray, grad: np.ndarray, mask: np.ndarray, gamma: float) -> float:
    return float(np.linalg.norm(x - _project_feasible(x - grad, mask, gamma)))


def _bb_step(dx: np.ndarray, dgrad: np.ndarray, fallback: float) -> float:
    num = float(np.sum(dx * dx))
    den = float(np.sum(dx * dgrad))
    if num == 0.0 or den <= 0.0 or not math.isfinite(den):
        return fallback
    return min(max(num / den, 1e-12), 1e10)


def fit_graph_mle(
    sigma_hat: CovarianceMatrix,
    graph: EdgeSet,
    gamma: float,
    opts: FitOptions = FitOptions(),
    *,
    initial: Optional[PrecisionMatrix] = None,
) -> FitResult:
    """Minimize nll over PD matrices supported on `graph` (plus diagonal)
    with Frobenius norm at most gamma.

    Projected gradient descent with monotone Armijo backtracking. Trial
    steps use a Barzilai-Borwein scale from the previous accepted move;
    candidates outside the PD cone cost +inf and are rejected by the line
    search, so every iterate is feasible and strictly PD. Convergence is
    declared when the unit-step gradient mapping
    ``x - project(x - grad)`` has Frobenius norm at most
    gradient_tolerance. gamma=inf disables the ball.

    Starts from diag(1 / sigma_hat diagonal), rescaled into the ball if
    needed; a non-converged run returns its best (last) iterate with
    converged=False rather than raising.
    """
    if graph.p != sigma_hat.p:
        raise DimensionMismatch(f"orders differ: graph p={graph.p}, sigma p={sigma_hat.p}")
    if not gamma > 0:
        raise InvalidParameters(f"gamma must be positive (inf allowed), got {gamma}")
    sig = sigma_hat.matrix
    diag = np.diag(sig)
    if np.any(diag <= 0):
        raise InfeasibleStart("sigma_hat has a nonpositive diagonal entry; no diagonal start exists")
    mask = _support_mask(graph)
    eye = np.eye(graph.p)

    x = np.diag(1.0 / diag) if initial is None else np.array(initial.matrix)
    x = _project_feasible(x, mask, gamma)
    f, lower = _barrier_objective(x, sig)
    if not math.isfinite(f):
        raise InvalidParameters("initial point is not positive definite after projection")

    grad = _gradient(lower, sig, eye)
    gnorm = _gradient_map_norm(x, grad, mask, gamma)
    trace = [f]
    step = opts.initial_step
    iterations = 0

    while gnorm > opts.gradient_tolerance and iterations < opts.max_iterations:
        t = step
        accepted = False
        while t > 1e-20:
            cand = _project_feasible(x - t * grad, mask, gamma)
            move = cand - x
            if not np.any(move):
                t *= opts.backtracking_ratio
                continue
            f_cand, lower_cand = _barrier_objective(cand, sig)
            decrease = float(np.sum(grad * move))
            if f_cand <= f + opts.armijo_constant * decrease and f_cand <= f:
                accepted = True
                break
            t *= opts.backtracking_ratio
        if not accepted:
            break
        new_grad = _gradient(lower_cand, sig, eye)
        step = _bb_step(move, new_grad - grad, fallback=opts.initial_step)
        x, f, grad = cand, f_cand, new_grad
        trace.append(f)
        iterations += 1
        gnorm = _gradient_map_norm(x, grad, mask, gamma)

    return FitResult(
        theta_hat=PrecisionMatrix(x),
        objective=f,
        iterations=iterations,
        converged=gnorm <= opts.gradient_tolerance,
        projected_gradient_norm=gnorm,
        objective_trace=tuple(trace),
    )
