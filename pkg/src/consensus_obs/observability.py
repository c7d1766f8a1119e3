"""
Shared result types for the path and cycle analyses, plus the block-witness
builder that turns a common boundary-block eigenvalue into an unobservable
eigenvector of the whole Laplacian.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_SETTINGS
from .errors import ConsistencyError, VerificationError
from .graphs import GraphTopology, NodeSet, input_matrix, laplacian, output_matrix
from .oracle import observability_rank, pbh_kernel, reachability_rank, unobservable_eigenspace
from .spectral import CosEigenvalue, EigenPair, block_vector, normalize


@dataclass(frozen=True, eq=False)
class ObservabilityReport:
    topology: GraphTopology
    nodes: NodeSet
    observable: bool
    blocking_moduli: tuple = ()
    unobservable_eigenpairs: tuple = ()
    witness_subspace: tuple = ()
    oracle_checked: bool = False

    def __post_init__(self):
        empties = {not self.blocking_moduli, not self.unobservable_eigenpairs, not self.witness_subspace}
        if empties != {self.observable}:
            raise ConsistencyError(
                f"Inconsistent report for {self.topology} {self.nodes}: observable={self.observable}, "
                f"{len(self.blocking_moduli)} moduli, {len(self.unobservable_eigenpairs)} eigenpairs, "
                f"{len(self.witness_subspace)} witnesses")

    @property
    def eigenvalues(self):
        return [pair.exact for pair in self.unobservable_eigenpairs]

    @property
    def deficiency(self):
        """n - rank(O)."""
        return len(self.witness_subspace)

    def with_oracle(self):
        return ObservabilityReport(self.topology, self.nodes, self.observable, self.blocking_moduli,
                                   self.unobservable_eigenpairs, self.witness_subspace, True)


@dataclass(frozen=True, order=True)
class Symbol:
    """One marking symbol: a modulus p^alpha, plus the residue class on cycles."""
    modulus: int
    residue: int | None = None

    def __str__(self):
        if self.residue is None:
            return str(self.modulus)
        return f"{self.modulus}:{self.residue}"


@dataclass(frozen=True)
class NodeMarking:
    topology: GraphTopology
    symbols: dict = field(default_factory=dict)  # label -> tuple of Symbol

    def of(self, label):
        return self.symbols.get(label, ())

    @property
    def moduli(self):
        return sorted({sym.modulus for syms in self.symbols.values() for sym in syms})

    def nodes_with(self, symbol):
        return [label for label in range(1, self.topology.n + 1) if symbol in self.of(label)]

    def unmarked(self):
        return [label for label in range(1, self.topology.n + 1) if not self.of(label)]

    def common_symbols(self, nodes):
        """Symbols carried by every node of the set."""
        common = None
        for label in nodes:
            mine = set(self.of(label))
            common = mine if common is None else common & mine
        return sorted(common or ())

    def blocks(self, nodes):
        return bool(self.common_symbols(nodes))


# --- witness construction -----------------------------------------------

@dataclass(frozen=True)
class Segment:
    """A run of unobserved nodes between cuts: block kind, 0-based start, length."""
    kind: str
    start: int
    size: int


def chain_witness(n, segments, angle):
    """
    Concatenate block eigenvectors along the graph. Across each observation
    node the neighbours must cancel, so each block's scale is
    alpha_next = -alpha * last / first_next. Nodes outside segments stay zero.
    """
    x = np.zeros(n)
    alpha = 1.0
    previous_last = None
    for seg in segments:
        if seg.size == 0:
            continue
        v = block_vector(seg.kind, seg.size, angle)
        if previous_last is not None:
            alpha = -previous_last / v[0]
        idx = (np.arange(seg.start, seg.start + seg.size)) % n
        x[idx] = alpha * v
        previous_last = alpha * v[-1]
    return x


def verified_witness(L, C, exact, candidate, tolerances=DEFAULT_SETTINGS.tolerances):
    """
    Accept the closed-form candidate if it passes both PBH conditions, otherwise
    fall back to the numerical kernel of [L - lambda I; C].
    """
    lam = exact.value
    if np.linalg.norm(candidate) > 0:
        v = normalize(candidate)
        residual = float(np.max(np.abs(L @ v - lam * v)))
        leak = float(np.max(np.abs(C @ v))) if C.size else 0.0
        if residual <= tolerances.residual and leak <= tolerances.witness_zero:
            return [v]
        logging.warning(f"Closed-form witness for {exact} rejected (residual {residual:.2e}, "
                        f"output {leak:.2e}); using numerical kernel")
    basis = pbh_kernel(L, C, lam)
    if basis.shape[1] == 0:
        raise ConsistencyError(f"No unobservable eigenvector at {exact} although the blocks share it")
    return [normalize(basis[:, k]) for k in range(basis.shape[1])]


def witnesses_for(topology, nodes, segments, angles, tolerances=DEFAULT_SETTINGS.tolerances):
    """Eigenpairs and witness vectors for each common angle, ascending in eigenvalue."""
    if not angles:
        return (), ()
    L = laplacian(topology)
    C = output_matrix(topology, nodes)
    pairs, witnesses = [], []
    for angle in sorted(angles):
        exact = CosEigenvalue.from_angle(angle)
        for v in verified_witness(L, C, exact, chain_witness(topology.n, segments, angle), tolerances):
            pairs.append(EigenPair(exact.value, v, exact))
            witnesses.append(v)
    return tuple(pairs), tuple(witnesses)


# --- oracle cross-check ---------------------------------------------------

def oracle_cross_check(report, settings=DEFAULT_SETTINGS):
    """
    Compare a theorem verdict with the independent numerical oracle: the rank
    deficiency and the unobservable eigenvalues must match.
    """
    L = laplacian(report.topology)
    C = output_matrix(report.topology, report.nodes)
    tol = settings.tolerances.symmetry
    rank = observability_rank(L, C, kalman_max_n=settings.kalman_max_n, symmetry_tol=tol)
    numeric = unobservable_eigenspace(L, C, symmetry_tol=tol)
    numeric_dim = sum(basis.shape[1] for _, basis in numeric)
    configuration = {"graph": str(report.topology), "nodes": str(report.nodes)}

    if rank.rank + report.deficiency != report.topology.n or numeric_dim != report.deficiency:
        raise VerificationError(
            f"{report.topology} {report.nodes}: theorem deficiency {report.deficiency}, "
            f"oracle rank {rank.rank} ({rank.route}), PBH kernel dimension {numeric_dim}",
            configuration)

    expected = sorted(pair.eigenvalue for pair in report.unobservable_eigenpairs)
    found = sorted(lam for lam, basis in numeric for _ in range(basis.shape[1]))
    if not np.allclose(expected, found, atol=1e-7):
        raise VerificationError(
            f"{report.topology} {report.nodes}: eigenvalues {expected} vs oracle {found}", configuration)

    logging.info(f"Oracle agrees on {report.topology} {report.nodes}: rank {rank.rank}")
    return report.with_oracle()


def oracle_observable(topology, nodes, settings=DEFAULT_SETTINGS):
    L = laplacian(topology)
    rank = observability_rank(L, output_matrix(topology, nodes), kalman_max_n=settings.kalman_max_n,
                              symmetry_tol=settings.tolerances.symmetry)
    return rank.rank == topology.n


def oracle_reachable(topology, nodes, settings=DEFAULT_SETTINGS):
    """Reachability of (L, B) decided on the input pair itself."""
    L = laplacian(topology)
    rank = reachability_rank(L, input_matrix(topology, nodes), kalman_max_n=settings.kalman_max_n,
                             symmetry_tol=settings.tolerances.symmetry)
    return rank.rank == topology.n


class BaseAnalyzer:
    """Settings and the oracle cross-check policy shared by the path and cycle analyzers."""

    def __init__(self, settings=DEFAULT_SETTINGS, oracle_check=None):
        self.settings = settings
        self.oracle_check = oracle_check

    def should_check(self, n):
        if self.oracle_check is None:
            return n <= self.settings.oracle_max_n
        return self.oracle_check

    def finish(self, report, detail=""):
        verdict = "observable" if report.observable else "unobservable"
        logging.info(f"{report.topology} {report.nodes}: {verdict} {detail}".rstrip())
        if self.should_check(report.topology.n):
            return oracle_cross_check(report, self.settings)
        return report
