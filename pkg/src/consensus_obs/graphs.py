"""
Path and cycle graphs with the canonical 1-based labeling, their Laplacians and
the boundary blocks N_nu / M_mu that appear when a graph is cut at the
observation (control) nodes.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import DEFAULT_SETTINGS
from .errors import InvalidInputError


class GraphKind(str, Enum):
    PATH = "path"
    CYCLE = "cycle"


@dataclass(frozen=True)
class GraphTopology:
    kind: GraphKind
    n: int

    def __post_init__(self):
        object.__setattr__(self, 'kind', GraphKind(self.kind))
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidInputError(f"Node count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, 'n', int(self.n))

    @classmethod
    def path(cls, n):
        return cls(GraphKind.PATH, n)

    @classmethod
    def cycle(cls, n):
        if n < 3:
            raise InvalidInputError(f"A cycle needs at least 3 nodes, got {n}")
        return cls(GraphKind.CYCLE, n)

    @property
    def is_path(self):
        return self.kind is GraphKind.PATH

    def edges(self):
        """1-based edge list in the canonical labeling."""
        if self.is_path:
            return [(i, i + 1) for i in range(1, self.n)]
        return [(i, i % self.n + 1) for i in range(1, self.n + 1)]

    def max_degree(self):
        if self.n == 1:
            return 0
        if self.is_path and self.n == 2:
            return 1
        return 2

    def check_size(self, max_n=None):
        limit = DEFAULT_SETTINGS.max_n if max_n is None else max_n
        if self.n > limit:
            raise InvalidInputError(f"n={self.n} exceeds the configured cap of {limit}")
        return self

    def __str__(self):
        return f"{self.kind.value}({self.n})"


@dataclass(frozen=True)
class NodeSet:
    labels: tuple
    n: int

    def __post_init__(self):
        labels = tuple(int(label) for label in self.labels)
        if not labels:
            raise InvalidInputError("Node set must not be empty")
        if len(set(labels)) != len(labels):
            raise InvalidInputError(f"Duplicate node labels in {list(labels)}")
        for label in labels:
            if label < 1 or label > self.n:
                raise InvalidInputError(f"Node label {label} outside [1, {self.n}]")
        object.__setattr__(self, 'labels', tuple(sorted(labels)))

    @classmethod
    def of(cls, labels, n):
        if isinstance(labels, int):
            labels = (labels,)
        return cls(tuple(labels), n)

    @classmethod
    def parse(cls, text, n):
        """Parse a comma-separated list of 1-based labels, e.g. '2,5'."""
        try:
            labels = [int(part) for part in text.split(',') if part.strip()]
        except ValueError:
            raise InvalidInputError(f"Node list must be comma-separated integers, got {text!r}")
        return cls(tuple(labels), n)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self.labels

    @property
    def indices(self):
        """0-based positions for array indexing."""
        return [label - 1 for label in self.labels]

    def has_external(self):
        return 1 in self.labels or self.n in self.labels

    def shifted(self, offset):
        """Rotate every label by offset on a ring of n nodes."""
        return NodeSet(tuple((label - 1 + offset) % self.n + 1 for label in self.labels), self.n)

    def mirrored(self):
        """Reflect labels i -> n + 1 - i."""
        return NodeSet(tuple(self.n + 1 - label for label in self.labels), self.n)

    def __str__(self):
        return "{" + ",".join(str(label) for label in self.labels) + "}"


def adjacency(g):
    A = np.zeros((g.n, g.n))
    for i, j in g.edges():
        if i != j:
            A[i - 1, j - 1] = 1.0
            A[j - 1, i - 1] = 1.0
    return A


def laplacian(g):
    """L = D - A for the path or cycle g."""
    A = adjacency(g)
    return np.diag(A.sum(axis=1)) - A


def _tridiagonal(diagonal):
    size = len(diagonal)
    T = np.diag(np.asarray(diagonal, dtype=float))
    if size > 1:
        off = -np.ones(size - 1)
        T += np.diag(off, 1) + np.diag(off, -1)
    return T


def submatrix_N(nu):
    """N_nu: tridiagonal, diagonal (1, 2, ..., 2), off-diagonal -1."""
    if nu < 1:
        raise InvalidInputError(f"N_nu needs nu >= 1, got {nu}")
    diagonal = [2.0] * nu
    diagonal[0] = 1.0
    return _tridiagonal(diagonal)


def submatrix_M(mu):
    """M_mu: tridiagonal, all-2 diagonal, off-diagonal -1. M_0 is the empty matrix."""
    if mu < 0:
        raise InvalidInputError(f"M_mu needs mu >= 0, got {mu}")
    if mu == 0:
        return np.zeros((0, 0))
    return _tridiagonal([2.0] * mu)


def reversal_matrix(d):
    """Pi, the permutation reversing all components of a d-vector."""
    return np.fliplr(np.eye(d))


def input_matrix(g, s):
    """B = [e_{i_1} | ... | e_{i_m}] for node set s."""
    if s.n != g.n:
        raise InvalidInputError(f"Node set built for n={s.n} used on {g}")
    B = np.zeros((g.n, len(s)))
    for col, idx in enumerate(s.indices):
        B[idx, col] = 1.0
    return B


def output_matrix(g, s):
    """C = B^T, one row per observation node."""
    return input_matrix(g, s).T
