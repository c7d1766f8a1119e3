"""
Reachability and observability of the consensus dynamics on a path.

A set of observation nodes i_1 < ... < i_m cuts the path into an N block on the
left, M blocks between consecutive nodes and a reversed N block on the right.
The set is unobservable exactly when these blocks share an eigenvalue, which
happens exactly when an odd prime p dividing n divides every term of

    2(i_1 - 1) + 1,  i_2 - i_1,  ...,  i_m - i_{m-1},  2(n - i_m) + 1.

Both routes are evaluated and must agree.
"""
import logging
from itertools import combinations

from .errors import ConsistencyError, InvalidInputError, NotFoundError
from .graphs import GraphTopology, NodeSet
from .number_theory import congruent, factorize, gcd_list, odd_prime_power_divisors
from .observability import (BaseAnalyzer, NodeMarking, ObservabilityReport, Segment, Symbol,
                            oracle_reachable, witnesses_for)
from .spectral import common_angles


def chain_terms(n, nodes):
    labels = list(nodes)
    gaps = [b - a for a, b in zip(labels, labels[1:])]
    return [2 * (labels[0] - 1) + 1, *gaps, 2 * (n - labels[-1]) + 1]


def boundary_blocks(n, nodes):
    """(kind, size) of every block the observation nodes cut the path into."""
    labels = list(nodes)
    blocks = [('N', labels[0] - 1)]
    blocks.extend(('M', b - a - 1) for a, b in zip(labels, labels[1:]))
    blocks.append(('N', n - labels[-1]))
    return blocks


def segments(n, nodes):
    labels = list(nodes)
    segs = [Segment('N', 0, labels[0] - 1)]
    segs.extend(Segment('M', a, b - a - 1) for a, b in zip(labels, labels[1:]))
    segs.append(Segment('RN', labels[-1], n - labels[-1]))
    return segs


def prime_power_set(n, m):
    """I_o^m = { l*m - (m-1)/2 : l = 1..n/m }."""
    return [ell * m - (m - 1) // 2 for ell in range(1, n // m + 1)]


def blocking_gcd(n, nodes):
    """gcd of the chain terms; an odd prime of n blocks the set iff it divides this."""
    return gcd_list(chain_terms(n, nodes))


class PathAnalyzer(BaseAnalyzer):
    def _topology(self, n):
        return GraphTopology.path(n).check_size(self.settings.max_n)

    # --- decision routes ----------------------------------------------------

    def congruence_moduli(self, n, nodes):
        """
        Odd prime powers p^alpha | n for which the congruence chain holds.
        A singleton uses (n - i) = (i - 1) mod p^alpha directly.
        """
        labels = list(nodes)
        d = blocking_gcd(n, labels)
        moduli = []
        for m in odd_prime_power_divisors(n):
            if len(labels) == 1:
                i = labels[0]
                holds = congruent(n - i, i - 1, m)
            else:
                holds = d % m == 0
            if holds:
                moduli.append(m)
        return moduli

    def spectral_angles(self, n, nodes):
        """Exact common angles of all boundary blocks."""
        return common_angles(boundary_blocks(n, nodes))

    def _decide(self, n, nodes):
        moduli = self.congruence_moduli(n, nodes)
        angles = self.spectral_angles(n, nodes)
        denominator = max((a.denominator for a in angles), default=1)
        if bool(moduli) != bool(angles) or moduli != odd_prime_power_divisors(denominator):
            raise ConsistencyError(
                f"path({n}) {nodes}: congruence moduli {moduli} but common block angles "
                f"{sorted(angles)}")
        return moduli, angles

    def _report(self, n, nodes):
        g = self._topology(n)
        moduli, angles = self._decide(n, nodes)
        pairs, witnesses = witnesses_for(g, nodes, segments(n, nodes), angles, self.settings.tolerances)
        report = ObservabilityReport(g, nodes, not moduli, tuple(moduli), pairs, witnesses)
        return self.finish(report, f"(moduli {list(moduli)})")

    # --- operations ---------------------------------------------------------

    def single_node(self, n, i):
        nodes = NodeSet.of(i, n)
        return self._report(n, nodes)

    def multi_node(self, n, nodes):
        if not isinstance(nodes, NodeSet):
            nodes = NodeSet.of(nodes, n)
        if nodes.n != n:
            raise InvalidInputError(f"Node set built for n={nodes.n} used on path({n})")
        if nodes.has_external():
            logging.debug(f"path({n}) {nodes} contains an external node")
        return self._report(n, nodes)

    def analyze(self, n, nodes):
        nodes = nodes if isinstance(nodes, NodeSet) else NodeSet.of(nodes, n)
        if len(nodes) == 1:
            return self.single_node(n, nodes.labels[0])
        return self.multi_node(n, nodes)

    def unobservable_set_for_prime_power(self, n, m):
        """
        Returns (I_o^m, eigenpairs, witnesses) for an odd prime power m | n.
        The eigenvalues are 2 - 2cos((2v-1) pi / m), v = 1..(m-1)/2.
        """
        if m < 3 or m % 2 == 0 or len(factorize(m).factors) != 1:
            raise InvalidInputError(f"Modulus must be an odd prime power, got {m}")
        if n % m:
            raise InvalidInputError(f"Modulus {m} does not divide n={n}")
        g = self._topology(n)
        nodes = NodeSet.of(prime_power_set(n, m), n)
        angles = [a for a in self.spectral_angles(n, nodes) if m % a.denominator == 0]
        pairs, witnesses = witnesses_for(g, nodes, segments(n, nodes), angles, self.settings.tolerances)
        if len(pairs) != (m - 1) // 2:
            raise ConsistencyError(f"Expected {(m - 1) // 2} eigenvalues for modulus {m}, got {len(pairs)}")
        return nodes, list(pairs), list(witnesses)

    def mark(self, n):
        if n < 2:
            raise InvalidInputError(f"Marking needs a path with n >= 2, got {n}")
        g = self._topology(n)
        symbols = {}
        for m in odd_prime_power_divisors(n):
            for label in prime_power_set(n, m):
                symbols[label] = symbols.get(label, ()) + (Symbol(m),)
        return NodeMarking(g, symbols)

    def select_observable_set(self, n, max_size=1, internal_only=False):
        """
        Lexicographically first among the smallest node sets sharing no symbol.
        Any single external node works. Restricted to internal nodes a set
        always exists once max_size exceeds the number of distinct odd primes of n
        (and n has enough internal nodes).
        """
        marking = self.mark(n)
        candidates = range(2, n) if internal_only else range(1, n + 1)
        for size in range(1, max_size + 1):
            for combo in combinations(candidates, size):
                if marking.blocks(combo):
                    continue
                nodes = NodeSet.of(combo, n)
                report = self.analyze(n, nodes)
                if not report.observable:
                    raise ConsistencyError(f"Marking admits {nodes} on path({n}) but it is unobservable")
                return nodes
        scope = "internal " if internal_only else ""
        raise NotFoundError(f"No observable set of {scope}nodes with at most {max_size} nodes on path({n})")

    def central_node_analysis(self, n):
        if n < 3 or n % 2 == 0:
            raise InvalidInputError(f"Central node analysis needs odd n >= 3, got {n}")
        report = self.single_node(n, (n + 1) // 2)
        if len(report.unobservable_eigenpairs) != (n - 1) // 2:
            raise ConsistencyError(f"Central node of path({n}) should hide {(n - 1) // 2} eigenvalues")
        return report

    def reachability(self, n, nodes):
        nodes = nodes if isinstance(nodes, NodeSet) else NodeSet.of(nodes, n)
        return oracle_reachable(self._topology(n), nodes, self.settings)


_default = PathAnalyzer()


def path_single_node_observable(n, i):
    return _default.single_node(n, i)


def path_multi_node_observable(n, nodes):
    return _default.multi_node(n, nodes)


def unobservable_set_for_prime_power(n, m):
    return _default.unobservable_set_for_prime_power(n, m)


def mark_path_nodes(n):
    return _default.mark(n)


def select_observable_set(n, max_size=1, internal_only=False):
    return _default.select_observable_set(n, max_size, internal_only)


def central_node_analysis(n):
    return _default.central_node_analysis(n)


def reachability(n, nodes):
    return _default.reachability(n, nodes)
