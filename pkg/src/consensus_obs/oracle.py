"""
Independent numerical ground truth: symmetric eigendecomposition, Kalman and PBH
rank tests, kernel bases. Nothing here consults the number-theoretic analyses.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import ConsistencyError, InvalidInputError
from .spectral import EigenPair

EPS = np.finfo(float).eps
RANK_SAFETY = 64
CLUSTER_TOL = 1e-8
KERNEL_TOL = 1e-9
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class RankResult:
    rank: int
    singular_values: tuple
    threshold: float
    route: str = "svd"

    def deficiency(self, n):
        return n - self.rank


def matrix_rank(M):
    """Rank with threshold sigma_max * max(rows, cols) * eps * 64."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return RankResult(0, (), 0.0)
    s = linalg.svd(M, compute_uv=False)
    threshold = (s[0] if s.size else 0.0) * max(M.shape) * EPS * RANK_SAFETY
    return RankResult(int(np.sum(s > threshold)), tuple(float(x) for x in s), float(threshold))


def observability_matrix(A, C):
    """O = [C; CA; ...; CA^{n-1}], rows built iteratively."""
    A = np.asarray(A, dtype=float)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    n = A.shape[0]
    if A.shape != (n, n) or C.shape[1] != n:
        raise InvalidInputError(f"Dimension mismatch: A is {A.shape}, C is {C.shape}")
    blocks = [C]
    for _ in range(n - 1):
        blocks.append(blocks[-1] @ A)
    return np.vstack(blocks)


def reachability_matrix(A, B):
    """R = [B | AB | ... | A^{n-1}B]."""
    return observability_matrix(np.asarray(A).T, np.asarray(B).T).T


def _conditioned(A):
    """Affine rescaling onto [-1, 1] via Gershgorin bounds; observability is unchanged."""
    diag = np.diag(A)
    radius = np.sum(np.abs(A), axis=1) - np.abs(diag)
    lo, hi = np.min(diag - radius), np.max(diag + radius)
    half = max((hi - lo) / 2.0, 1.0)
    return (A - (hi + lo) / 2.0 * np.eye(A.shape[0])) / half


def kalman_rank(A, C):
    result = matrix_rank(observability_matrix(_conditioned(np.asarray(A, dtype=float)), C))
    return RankResult(result.rank, result.singular_values, result.threshold, "kalman")


def check_symmetric(A, tol=SYMMETRY_TOL):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"Expected a square matrix, got shape {A.shape}")
    if A.size and np.max(np.abs(A - A.T)) > tol:
        raise InvalidInputError("Matrix is not symmetric")
    return A


def symmetric_eigen(A, tol=SYMMETRY_TOL, residual_tol=1e-9):
    """Full spectral decomposition; every pair is residual-checked."""
    A = check_symmetric(A, tol)
    if A.shape[0] == 0:
        return []
    values, vectors = linalg.eigh(A)
    pairs = []
    for k in range(values.size):
        v = vectors[:, k]
        significant = np.flatnonzero(np.abs(v) > 1e-12)
        if significant.size and v[significant[0]] < 0:
            v = -v
        pair = EigenPair(float(values[k]), v)
        if pair.residual(A) > residual_tol:
            raise ConsistencyError(f"Eigen residual {pair.residual(A):.2e} above {residual_tol}")
        pairs.append(pair)
    return pairs


def eigen_clusters(A, tol=CLUSTER_TOL, symmetry_tol=SYMMETRY_TOL):
    """Group eigh output into (eigenvalue, orthonormal eigenspace basis) clusters."""
    A = check_symmetric(A, symmetry_tol)
    values, vectors = linalg.eigh(A)
    clusters = []
    start = 0
    for k in range(1, values.size + 1):
        if k == values.size or values[k] - values[k - 1] > tol * max(1.0, abs(values[k])):
            clusters.append((float(np.mean(values[start:k])), vectors[:, start:k]))
            start = k
    return clusters


def unobservable_eigenspace(A, C, tol=KERNEL_TOL, symmetry_tol=SYMMETRY_TOL):
    """
    For each eigenvalue of the symmetric A, a basis of {v : Av = lambda v, Cv = 0}.
    Only eigenvalues with a non-trivial basis are returned.
    """
    C = np.atleast_2d(np.asarray(C, dtype=float))
    result = []
    for lam, V in eigen_clusters(A, symmetry_tol=symmetry_tol):
        CV = C @ V
        _, s, Vh = linalg.svd(CV, full_matrices=True)
        rank = int(np.sum(s > tol))
        if rank < V.shape[1]:
            result.append((lam, V @ Vh[rank:].T))
    return result


def pbh_observability_rank(A, C, tol=KERNEL_TOL, symmetry_tol=SYMMETRY_TOL):
    """rank(O) = n - sum of PBH kernel dimensions over the spectrum."""
    n = np.asarray(A).shape[0]
    deficiency = sum(basis.shape[1] for _, basis in unobservable_eigenspace(A, C, tol, symmetry_tol))
    return RankResult(n - deficiency, (), tol, "pbh")


def observability_rank(A, C, route="auto", kalman_max_n=25, symmetry_tol=SYMMETRY_TOL):
    n = np.asarray(A).shape[0]
    if route == "auto":
        route = "kalman" if n <= kalman_max_n else "pbh"
    if route == "kalman":
        return kalman_rank(A, C)
    if route == "pbh":
        return pbh_observability_rank(A, C, symmetry_tol=symmetry_tol)
    raise InvalidInputError(f"Unknown rank route {route!r}")


def is_observable(A, C, route="auto", kalman_max_n=25, symmetry_tol=SYMMETRY_TOL):
    n = np.asarray(A).shape[0]
    return observability_rank(A, C, route, kalman_max_n, symmetry_tol).rank == n


def reachability_rank(A, B, route="auto", kalman_max_n=25, symmetry_tol=SYMMETRY_TOL):
    """Rank of the reachability matrix of (A, B), computed from the dual pair."""
    return observability_rank(np.asarray(A).T, np.asarray(B).T, route, kalman_max_n, symmetry_tol)


def pbh_rank(A, M, lam, observability=True):
    """rank [A - lam I; C] (observability) or rank [A - lam I | B] (reachability)."""
    A = np.asarray(A, dtype=float)
    shifted = A - lam * np.eye(A.shape[0])
    M = np.atleast_2d(np.asarray(M, dtype=float))
    stacked = np.vstack([shifted, M]) if observability else np.hstack([shifted, M])
    s = linalg.svd(stacked, compute_uv=False)
    threshold = KERNEL_TOL * max(1.0, s[0] if s.size else 0.0)
    return RankResult(int(np.sum(s > threshold)), tuple(float(x) for x in s), threshold, "pbh")


def pbh_kernel(A, C, lam, tol=KERNEL_TOL):
    """Orthonormal basis of ker [A - lam I; C]."""
    A = np.asarray(A, dtype=float)
    stacked = np.vstack([A - lam * np.eye(A.shape[0]), np.atleast_2d(C)])
    basis = linalg.null_space(stacked, rcond=tol)
    logging.debug(f"PBH kernel at lambda={lam:.6f} has dimension {basis.shape[1]}")
    return basis
