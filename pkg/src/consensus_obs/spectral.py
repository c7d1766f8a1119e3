"""
Closed-form spectra of the tridiagonal families N_nu, M_mu, the path and cycle
Laplacians and the path adjacency matrix.

Every eigenvalue of interest here has the form 2 - 2cos(a*pi/b). It is carried
as the reduced fraction a/b so that eigenvalue coincidences between blocks are
decided exactly, never with a floating tolerance.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError
from .graphs import GraphTopology, laplacian, submatrix_M, submatrix_N


@dataclass(frozen=True)
class CosEigenvalue:
    """2 - 2cos(a*pi/b) (or 2cos(a*pi/b) for adjacency spectra), a/b in [0, 1] reduced."""
    numerator: int
    denominator: int
    adjacency: bool = False

    def __post_init__(self):
        if self.denominator < 1 or self.numerator < 0:
            raise InvalidInputError(f"Bad angle {self.numerator}/{self.denominator}")
        angle = Fraction(self.numerator, self.denominator)
        if angle > 1:
            raise InvalidInputError(f"Angle {angle} outside [0, 1]")
        object.__setattr__(self, 'numerator', angle.numerator)
        object.__setattr__(self, 'denominator', angle.denominator)

    @classmethod
    def from_angle(cls, angle, adjacency=False):
        angle = Fraction(angle)
        return cls(angle.numerator, angle.denominator, adjacency)

    @property
    def angle(self):
        return Fraction(self.numerator, self.denominator)

    @property
    def value(self):
        c = math.cos(self.numerator * math.pi / self.denominator)
        return 2.0 * c if self.adjacency else 2.0 - 2.0 * c

    def __str__(self):
        head = "2cos" if self.adjacency else "2-2cos"
        return f"{head}({self.numerator}pi/{self.denominator})"


@dataclass(frozen=True, eq=False)
class EigenPair:
    eigenvalue: float
    eigenvector: np.ndarray
    exact: CosEigenvalue | None = field(default=None)

    @classmethod
    def from_exact(cls, exact, vector):
        return cls(exact.value, normalize(vector), exact)

    def residual(self, A):
        """||A v - lambda v||_inf"""
        v = self.eigenvector
        return float(np.max(np.abs(A @ v - self.eigenvalue * v))) if v.size else 0.0


def normalize(v):
    """Unit 2-norm, first non-negligible component positive."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise InvalidInputError("Cannot normalize the zero vector")
    v = v / norm
    significant = np.flatnonzero(np.abs(v) > 1e-12)
    if significant.size and v[significant[0]] < 0:
        v = -v
    return v


# --- exact block spectra -------------------------------------------------

def angles_N(nu):
    return [Fraction(2 * k - 1, 2 * nu + 1) for k in range(1, nu + 1)]


def angles_M(mu):
    return [Fraction(k, mu + 1) for k in range(1, mu + 1)]


def block_spectrum(kind, size):
    """Exact angle set of a boundary block: kind 'N' (either orientation) or 'M'."""
    if size < 0:
        raise InvalidInputError(f"Block size must be >= 0, got {size}")
    if kind == 'N':
        return frozenset(angles_N(size))
    if kind == 'M':
        return frozenset(angles_M(size))
    raise InvalidInputError(f"Unknown block kind {kind!r}")


def in_block_spectrum(kind, size, angle):
    """Exact membership: is 2 - 2cos(angle pi) an eigenvalue of the block?"""
    angle = Fraction(angle)
    if not 0 < angle < 1:
        return False
    if kind == 'N':
        q, r = divmod(2 * size + 1, angle.denominator)
        return r == 0 and (angle.numerator * q) % 2 == 1
    if kind == 'M':
        return (size + 1) % angle.denominator == 0
    raise InvalidInputError(f"Unknown block kind {kind!r}")


def common_angles(blocks):
    """
    Exact intersection of block spectra; an empty block has an empty spectrum.
    The smallest block is enumerated and every other block is tested by membership.
    """
    blocks = list(blocks)
    if not blocks or any(size == 0 for _, size in blocks):
        return frozenset()
    kind, size = min(blocks, key=lambda block: block[1])
    return frozenset(a for a in block_spectrum(kind, size)
                     if all(in_block_spectrum(k, s, a) for k, s in blocks))


def block_vector(kind, size, angle):
    """
    Closed-form eigenvector of a block for angle a/b (theta = a*pi/b).
    kind: 'N' (degree-one end first), 'RN' (reversed N, degree-one end last), 'M'.
    """
    theta = float(angle) * math.pi
    j = np.arange(1, size + 1)
    if kind == 'M':
        return np.sin(j * theta)
    v = np.sin((size + j) * theta)
    if kind == 'RN':
        return v[::-1].copy()
    if kind == 'N':
        return v
    raise InvalidInputError(f"Unknown block kind {kind!r}")


# --- family spectra -------------------------------------------------------

def eigen_N(nu):
    if nu < 1:
        raise InvalidInputError(f"N_nu needs nu >= 1, got {nu}")
    return [EigenPair.from_exact(CosEigenvalue.from_angle(a), block_vector('N', nu, a))
            for a in angles_N(nu)]


def eigen_M(mu):
    if mu < 0:
        raise InvalidInputError(f"M_mu needs mu >= 0, got {mu}")
    return [EigenPair.from_exact(CosEigenvalue.from_angle(a), block_vector('M', mu, a))
            for a in angles_M(mu)]


def path_mode(n, angle):
    """Path Laplacian eigenvector cos((j - 1/2) theta), j = 1..n."""
    theta = float(angle) * math.pi
    return np.cos((np.arange(1, n + 1) - 0.5) * theta)


def eigen_path_laplacian(n):
    """lambda_k = 2 - 2cos((k-1) pi / n), k = 1..n."""
    if n < 1:
        raise InvalidInputError(f"Path needs n >= 1, got {n}")
    pairs = []
    for k in range(1, n + 1):
        angle = Fraction(k - 1, n)
        pairs.append(EigenPair.from_exact(CosEigenvalue.from_angle(angle), path_mode(n, angle)))
    return pairs


def eigen_cycle_laplacian(n):
    """
    lambda_j = 2 - 2cos(2 pi j / n), j = 0..n-1, with the real Fourier basis:
    cos modes for j < n/2, sin modes for j > n/2.
    """
    if n < 3:
        raise InvalidInputError(f"Cycle needs n >= 3, got {n}")
    ell = np.arange(n)
    pairs = []
    for j in range(n):
        folded = min(j, n - j)
        angle = Fraction(2 * folded, n)
        if j <= n / 2:
            vector = np.cos(2 * math.pi * folded * ell / n)
        else:
            vector = np.sin(2 * math.pi * folded * ell / n)
        pairs.append(EigenPair.from_exact(CosEigenvalue.from_angle(angle), vector))
    return pairs


def eigen_path_adjacency(n):
    """lambda_k = 2cos(k pi / (n+1)), (v_k)_i = sin(i k pi / (n+1))."""
    if n < 1:
        raise InvalidInputError(f"Path needs n >= 1, got {n}")
    return [EigenPair.from_exact(CosEigenvalue.from_angle(Fraction(k, n + 1), adjacency=True),
                                 block_vector('M', n, Fraction(k, n + 1)))
            for k in range(1, n + 1)]


def multiplicities(pairs):
    """Exact eigenvalue -> multiplicity."""
    counts = {}
    for pair in pairs:
        counts[pair.exact] = counts.get(pair.exact, 0) + 1
    return counts


# --- identities used as self-tests ----------------------------------------

CHARPOLY_SAMPLES = (-1.0, 0.5, 2.7, 5.0)


def _charpoly(A, s):
    if A.shape[0] == 0:
        return 1.0
    return float(np.linalg.det(s * np.eye(A.shape[0]) - A))


def _close(lhs, terms, rel=1e-8):
    rhs = sum(terms)
    scale = max([1.0, abs(lhs)] + [abs(t) for t in terms])
    return abs(lhs - rhs) <= rel * scale


def charpoly_recursion_check(mu):
    """
    Check the three characteristic-polynomial recursions for N_mu and M_mu,
    and det(sI - L_mu) = s det(sI - M_{mu-1}) for the path, at fixed samples.
    """
    if mu < 3:
        raise InvalidInputError(f"Recursions need mu >= 3, got {mu}")
    N = {k: submatrix_N(k) for k in (mu - 2, mu - 1, mu)}
    M = {k: submatrix_M(k) for k in (mu - 2, mu - 1, mu)}
    L = laplacian(GraphTopology.path(mu))
    for s in CHARPOLY_SAMPLES:
        pN = {k: _charpoly(A, s) for k, A in N.items()}
        pM = {k: _charpoly(A, s) for k, A in M.items()}
        checks = [
            _close(pN[mu], [(s - 1) * pM[mu - 1], -pM[mu - 2]]),
            _close(pN[mu], [(s - 2) * pN[mu - 1], -pN[mu - 2]]),
            _close(pM[mu], [(s - 2) * pM[mu - 1], -pM[mu - 2]]),
            _close(_charpoly(L, s), [s * pM[mu - 1]]),
        ]
        if not all(checks):
            return False
    return True


def N_embeds_in_M2nu_check(nu, tol=1e-9):
    """spectrum(N_nu) is contained in spectrum(M_2nu) with eigenvectors [Pi v; v]."""
    if nu < 1:
        raise InvalidInputError(f"N_nu needs nu >= 1, got {nu}")
    if not block_spectrum('N', nu) <= block_spectrum('M', 2 * nu):
        return False
    M2 = submatrix_M(2 * nu)
    for pair in eigen_N(nu):
        v = pair.eigenvector
        w = np.concatenate([v[::-1], v])
        if np.max(np.abs(M2 @ w - pair.eigenvalue * w)) > tol:
            return False
    return True
