"""
Reachability and observability of the consensus dynamics on a cycle.

Observation nodes cut the ring into M blocks whose sizes are the gaps minus
one. With g the gcd of the gaps, the blocks share the angles v/g, and such an
angle is a true unobservable mode only when v*(n/g) is even: the block
eigenvectors are glued with a sign flip per block and must close around the
ring. Hence the set is unobservable iff g >= 3, or g = 2 and 4 | n.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ConsistencyError, InvalidInputError, NotFoundError
from .graphs import GraphTopology, NodeSet
from .number_theory import gcd_list, prime_power_divisors
from .observability import (BaseAnalyzer, NodeMarking, ObservabilityReport, Segment, Symbol,
                            oracle_reachable, witnesses_for)
from .spectral import common_angles


@dataclass(frozen=True)
class GapVector:
    gaps: tuple

    def __post_init__(self):
        if not self.gaps or any(gap < 1 for gap in self.gaps):
            raise InvalidInputError(f"Gaps must be positive, got {self.gaps}")

    @classmethod
    def of(cls, nodes):
        """(i_2 - i_1, ..., i_m - i_{m-1}, n + i_1 - i_m) for a sorted node set."""
        labels = list(nodes)
        gaps = [b - a for a, b in zip(labels, labels[1:])]
        gaps.append(nodes.n + labels[0] - labels[-1])
        return cls(tuple(gaps))

    @property
    def n(self):
        return sum(self.gaps)

    @property
    def gcd(self):
        return gcd_list(self.gaps)

    def __len__(self):
        return len(self.gaps)


def cycle_moduli(n):
    """Marking moduli: odd prime powers of n, and powers of two only when 4 | n."""
    return [q for q in prime_power_divisors(n) if q % 2 or n % 4 == 0]


def cycle_angles(n, g):
    """Angles v/g, 1 <= v < g, that are eigenvalues of the n-cycle."""
    return [Fraction(v, g) for v in range(1, g) if (v * (n // g)) % 2 == 0]


def segments(n, nodes):
    labels = list(nodes)
    nxt = labels[1:] + [labels[0] + n]
    return [Segment('M', a, b - a - 1) for a, b in zip(labels, nxt)]


class CycleAnalyzer(BaseAnalyzer):
    def _topology(self, n):
        return GraphTopology.cycle(n).check_size(self.settings.max_n)

    def _nodes(self, n, nodes):
        nodes = nodes if isinstance(nodes, NodeSet) else NodeSet.of(nodes, n)
        if nodes.n != n:
            raise InvalidInputError(f"Node set built for n={nodes.n} used on cycle({n})")
        return nodes

    # --- decision routes ----------------------------------------------------

    def gcd_moduli(self, n, nodes):
        g = GapVector.of(nodes).gcd
        return [q for q in cycle_moduli(n) if g % q == 0]

    def spectral_angles(self, n, nodes):
        """Common M-block angles that are also cycle eigenvalues."""
        gaps = GapVector.of(nodes).gaps
        common = common_angles([('M', gap - 1) for gap in gaps])
        return frozenset(a for a in common if (a.numerator * (n // a.denominator)) % 2 == 0)

    def _report(self, n, nodes):
        g = self._topology(n)
        moduli = self.gcd_moduli(n, nodes)
        angles = self.spectral_angles(n, nodes)
        expected = set(cycle_angles(n, GapVector.of(nodes).gcd))
        if bool(moduli) != bool(angles) or angles != expected:
            raise ConsistencyError(f"cycle({n}) {nodes}: gcd moduli {moduli} but block angles {sorted(angles)}")
        pairs, witnesses = witnesses_for(g, nodes, segments(n, nodes), angles, self.settings.tolerances)
        report = ObservabilityReport(g, nodes, not moduli, tuple(moduli), pairs, witnesses)
        return self.finish(report, f"(gaps {GapVector.of(nodes).gaps})")

    # --- operations ---------------------------------------------------------

    def single_node(self, n, i):
        """Always unobservable: each doubled eigenvalue keeps one mode vanishing at i."""
        nodes = NodeSet.of(i, self._topology(n).n)
        report = self._report(n, nodes)
        if len(report.unobservable_eigenpairs) != (n - 1) // 2:
            raise ConsistencyError(f"Single node on cycle({n}) should hide {(n - 1) // 2} eigenvalues")
        return report

    def multi_node(self, n, nodes):
        nodes = self._nodes(n, nodes)
        if len(nodes) < 2:
            raise InvalidInputError("A single observation node is handled by cycle_single_node")
        return self._report(n, nodes)

    def analyze(self, n, nodes):
        nodes = self._nodes(n, nodes)
        if len(nodes) == 1:
            return self.single_node(n, nodes.labels[0])
        return self.multi_node(n, nodes)

    def unobservable_cycle_set(self, n, p, kappa):
        """
        Returns ({kappa + l*p}, eigenpairs, witnesses). The eigenvalues are
        2 - 2cos(v pi / p) for those v with v*(n/p) even.
        """
        g = self._topology(n)
        if p < 2 or n % p:
            raise InvalidInputError(f"Period {p} must be >= 2 and divide n={n}")
        if not 1 <= kappa <= p:
            raise InvalidInputError(f"Residue {kappa} outside [1, {p}]")
        nodes = NodeSet.of([kappa + ell * p for ell in range(n // p)], n)
        angles = [a for a in self.spectral_angles(n, nodes) if p % a.denominator == 0]
        pairs, witnesses = witnesses_for(g, nodes, segments(n, nodes), angles, self.settings.tolerances)
        return nodes, list(pairs), list(witnesses)

    def mark(self, n):
        g = self._topology(n)
        symbols = {}
        for q in cycle_moduli(n):
            for label in range(1, n + 1):
                kappa = (label - 1) % q + 1
                symbols[label] = symbols.get(label, ()) + (Symbol(q, kappa),)
        return NodeMarking(g, symbols)

    def select_observable_set(self, n, max_size=2):
        """Lexicographically first smallest observable set; {1, 2} for every n."""
        marking = self.mark(n)
        for size in range(2, max_size + 1):
            for combo in combinations(range(1, n + 1), size):
                if marking.blocks(combo):
                    continue
                nodes = NodeSet.of(combo, n)
                if not self.analyze(n, nodes).observable:
                    raise ConsistencyError(f"Marking admits {nodes} on cycle({n}) but it is unobservable")
                return nodes
        raise NotFoundError(f"No observable set with at most {max_size} nodes on cycle({n})")

    def unobservable_pair_example(self, n):
        """An unobservable pair {1, 1+q} for composite n; None when n is prime."""
        for q in cycle_moduli(n):
            if q >= n:
                continue
            nodes = NodeSet.of((1, 1 + q), n)
            report = self.analyze(n, nodes)
            if not report.observable:
                return report
        return None

    def reachability(self, n, nodes):
        return oracle_reachable(self._topology(n), self._nodes(n, nodes), self.settings)


_default = CycleAnalyzer()


def cycle_single_node(n, i):
    return _default.single_node(n, i)


def cycle_multi_node(n, nodes):
    return _default.multi_node(n, nodes)


def unobservable_cycle_set(n, p, kappa):
    return _default.unobservable_cycle_set(n, p, kappa)


def mark_cycle_nodes(n):
    return _default.mark(n)


def select_observable_set(n, max_size=2):
    return _default.select_observable_set(n, max_size)


def unobservable_pair_example(n):
    return _default.unobservable_pair_example(n)
