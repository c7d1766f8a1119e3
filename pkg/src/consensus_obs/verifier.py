"""
Theorem-versus-oracle sweeps. Each sweep returns a pandas DataFrame with one
row per configuration, sorted by configuration; `check` raises on the first
disagreement.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

import numpy as np
import pandas as pd

from .analysis import analyzer_for
from .config import DEFAULT_SETTINGS
from .errors import InvalidInputError, VerificationError
from .graphs import (GraphKind, GraphTopology, NodeSet, adjacency, laplacian, output_matrix,
                     submatrix_M, submatrix_N)
from .number_theory import is_prime
from .observability import oracle_reachable
from .oracle import observability_rank, symmetric_eigen
from .spectral import eigen_cycle_laplacian, eigen_M, eigen_N, eigen_path_adjacency, eigen_path_laplacian

COLUMNS = ["kind", "n", "size", "nodes", "theorem", "oracle", "deficiency", "rank", "agree"]


def check_configuration(kind, n, labels, settings=DEFAULT_SETTINGS, duality=False):
    """Theorem verdict and oracle rank for one configuration, as a sweep row."""
    g = GraphTopology(GraphKind(kind), n)
    nodes = NodeSet(tuple(labels), n)
    report = analyzer_for(kind, settings, oracle_check=False).analyze(n, nodes)
    rank = observability_rank(laplacian(g), output_matrix(g, nodes), kalman_max_n=settings.kalman_max_n,
                               symmetry_tol=settings.tolerances.symmetry)
    oracle = rank.rank == n
    row = {
        "kind": g.kind.value, "n": n, "size": len(nodes), "nodes": str(nodes),
        "theorem": report.observable, "oracle": oracle,
        "deficiency": report.deficiency, "rank": rank.rank,
        "agree": report.observable == oracle and report.deficiency == n - rank.rank,
    }
    if duality:
        row["reachable"] = oracle_reachable(g, nodes, settings)
        row["agree"] = row["agree"] and row["reachable"] == oracle
    return row


def _check_args(args):
    return check_configuration(*args)


class SweepRunner:
    def __init__(self, settings=DEFAULT_SETTINGS, workers=None):
        self.settings = settings
        self.workers = workers or settings.workers

    def _run(self, configs):
        configs = list(configs)
        if self.workers > 1 and len(configs) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(_check_args, configs, chunksize=64))
        else:
            rows = [_check_args(c) for c in configs]
        frame = pd.DataFrame(rows, columns=COLUMNS + (["reachable"] if rows and "reachable" in rows[0] else []))
        logging.info(f"Sweep of {len(frame)} configurations, {int((~frame['agree']).sum()) if len(frame) else 0} disagreements")
        return frame

    def _limit(self, max_n):
        if max_n > self.settings.max_n:
            raise InvalidInputError(f"max-n {max_n} exceeds the configured cap of {self.settings.max_n}")

    def path_configs(self, max_n, subset_sizes=(1, 2), internal_only=False, duality=False,
                     random_subsets=0, random_size=3, seed=None):
        rng = np.random.default_rng(self.settings.simulation.seed if seed is None else seed)
        for n in range(2, max_n + 1):
            labels = range(2, n) if internal_only else range(1, n + 1)
            for size in subset_sizes:
                for combo in combinations(labels, size):
                    yield ("path", n, combo, self.settings, duality)
            if random_subsets and n >= random_size:
                for _ in range(random_subsets):
                    combo = sorted(int(x) for x in rng.choice(np.arange(1, n + 1), random_size, replace=False))
                    yield ("path", n, tuple(combo), self.settings, duality)

    def cycle_configs(self, max_n, subset_sizes=(2,), min_n=3, duality=False):
        for n in range(max(min_n, 3), max_n + 1):
            for size in subset_sizes:
                for combo in combinations(range(1, n + 1), size):
                    yield ("cycle", n, combo, self.settings, duality)

    def path_sweep(self, max_n, subset_sizes=(1, 2), **kwargs):
        self._limit(max_n)
        return self._run(self.path_configs(max_n, subset_sizes, **kwargs))

    def cycle_sweep(self, max_n, subset_sizes=(2,), **kwargs):
        self._limit(max_n)
        return self._run(self.cycle_configs(max_n, subset_sizes, **kwargs))

    def power_of_two_sweep(self, max_exponent=12, oracle_max_n=64):
        """Every singleton of a 2^k path is observable; the oracle spot-checks small k."""
        rows = []
        for k in range(1, max_exponent + 1):
            n = 2 ** k
            analyzer = analyzer_for("path", self.settings, oracle_check=True)
            if n <= oracle_max_n:
                blocked = [i for i in range(1, n + 1) if not analyzer.single_node(n, i).observable]
            else:
                blocked = [i for i in range(1, n + 1) if analyzer.congruence_moduli(n, (i,))]
            rows.append({"n": n, "singletons": n, "unobservable": len(blocked),
                         "oracle_checked": n <= oracle_max_n, "agree": not blocked})
        return pd.DataFrame(rows)

    def prime_cycle_sweep(self, max_prime=97, max_composite=60):
        """Primes: all pairs observable. Composites: an unobservable pair exists."""
        rows = []
        fast = analyzer_for("cycle", self.settings, oracle_check=False)
        checked = analyzer_for("cycle", self.settings)
        for n in range(3, max(max_prime, max_composite) + 1):
            if is_prime(n) and n <= max_prime:
                blocked = [c for c in combinations(range(1, n + 1), 2)
                           if not fast.multi_node(n, c).observable]
                rows.append({"n": n, "prime": True, "example": "", "agree": not blocked})
            elif not is_prime(n) and n <= max_composite:
                example = checked.unobservable_pair_example(n)
                rows.append({"n": n, "prime": False, "example": str(example.nodes) if example else "",
                             "agree": example is not None})
        return pd.DataFrame(rows)

    def spectral_fidelity_sweep(self, max_size=200, tol=1e-9):
        """Closed-form spectra against the numerical eigensolver, family by family."""
        families = {
            "N": (submatrix_N, eigen_N, 1),
            "M": (submatrix_M, eigen_M, 1),
            "path": (lambda k: laplacian(GraphTopology.path(k)), eigen_path_laplacian, 1),
            "cycle": (lambda k: laplacian(GraphTopology.cycle(k)), eigen_cycle_laplacian, 3),
            "path_adjacency": (lambda k: adjacency(GraphTopology.path(k)), eigen_path_adjacency, 1),
        }
        rows = []
        for family, (build, closed_form, start) in families.items():
            for size in range(start, max_size + 1):
                A = build(size)
                exact = np.sort([pair.eigenvalue for pair in closed_form(size)])
                pairs = symmetric_eigen(A, self.settings.tolerances.symmetry)
                numeric = np.sort([pair.eigenvalue for pair in pairs])
                deviation = float(np.max(np.abs(exact - numeric)))
                residual = max(pair.residual(A) for pair in closed_form(size))
                rows.append({"family": family, "size": size, "deviation": deviation,
                             "residual": residual, "agree": deviation <= tol and residual <= tol})
        return pd.DataFrame(rows)


def check(frame, what="sweep"):
    """Raise VerificationError carrying the first disagreeing configuration."""
    if frame.empty:
        return frame
    bad = frame[~frame["agree"].astype(bool)]
    if not bad.empty:
        first = bad.iloc[0].to_dict()
        raise VerificationError(f"{what}: {len(bad)} disagreement(s), first at {first}", first)
    return frame
