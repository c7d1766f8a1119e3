from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from consensus_obs.cycle_analysis import (CycleAnalyzer, GapVector, cycle_angles, cycle_moduli,
                                          cycle_single_node, unobservable_pair_example)
from consensus_obs.errors import InvalidInputError
from consensus_obs.graphs import GraphTopology, NodeSet, laplacian, output_matrix
from consensus_obs.number_theory import is_prime
from consensus_obs.observability import Symbol
from consensus_obs.oracle import observability_rank


@pytest.fixture
def cycles(settings):
    return CycleAnalyzer(settings)


def test_gap_vector():
    gaps = GapVector.of(NodeSet.of((4, 13), 15))
    assert gaps.gaps == (9, 6)
    assert gaps.gcd == 3
    assert gaps.n == 15
    assert GapVector.of(NodeSet.of((2, 13), 15)).gcd == 1
    assert GapVector.of(NodeSet.of(3, 7)).gaps == (7,)
    with pytest.raises(InvalidInputError):
        GapVector((3, 0))


@pytest.mark.parametrize("n, count", [(3, 1), (4, 1), (5, 2), (6, 2), (15, 7)])
def test_single_node_hides_the_doubled_eigenvalues(cycles, n, count):
    report = cycles.single_node(n, 1)
    assert not report.observable
    assert len(report.unobservable_eigenpairs) == count


def test_single_node_examples(cycles):
    report = cycles.single_node(3, 1)
    assert np.allclose([p.eigenvalue for p in report.unobservable_eigenpairs], [3.0])
    report = cycles.single_node(4, 2)
    assert np.allclose([p.eigenvalue for p in report.unobservable_eigenpairs], [2.0])


def test_pair_examples(cycles):
    report = cycles.multi_node(15, (4, 13))
    assert not report.observable
    assert report.blocking_moduli == (3,)
    assert [e.angle for e in report.eigenvalues] == [Fraction(2, 3)]
    assert np.allclose(report.unobservable_eigenpairs[0].eigenvalue, 3.0)
    assert report.deficiency == 1

    assert cycles.multi_node(15, (5, 12)).observable
    assert cycles.multi_node(15, (2, 13)).observable
    assert cycles.multi_node(7, (1, 2)).observable
    # g = 2 blocks only when 4 divides n
    assert cycles.multi_node(6, (1, 3)).observable
    assert not cycles.multi_node(8, (1, 3)).observable


def test_oracle_rank_for_the_pair(cycles):
    g = GraphTopology.cycle(15)
    L = laplacian(g)
    C = output_matrix(g, NodeSet.of((4, 13), 15))
    assert observability_rank(L, C).rank == 14


def test_multi_node_needs_two_nodes(cycles):
    with pytest.raises(InvalidInputError):
        cycles.multi_node(7, (3,))


def test_unobservable_cycle_set(cycles):
    nodes, pairs, witnesses = cycles.unobservable_cycle_set(15, 5, 4)
    assert nodes.labels == (4, 9, 14)
    assert sorted(p.exact.angle for p in pairs) == [Fraction(2, 5), Fraction(4, 5)]
    assert len(witnesses) == 2

    nodes, pairs, _ = cycles.unobservable_cycle_set(4, 2, 1)
    assert nodes.labels == (1, 3)
    assert np.allclose([p.eigenvalue for p in pairs], [2.0])

    nodes, _, _ = cycles.unobservable_cycle_set(6, 3, 2)
    assert nodes.labels == (2, 5)

    with pytest.raises(InvalidInputError):
        cycles.unobservable_cycle_set(15, 4, 1)
    with pytest.raises(InvalidInputError):
        cycles.unobservable_cycle_set(15, 5, 6)


def test_markings(cycles):
    marking = cycles.mark(15)
    for label in range(1, 16):
        assert sorted(s.modulus for s in marking.of(label)) == [3, 5]
        neighbour = label % 15 + 1
        assert not set(marking.of(label)) & set(marking.of(neighbour))
    assert marking.nodes_with(Symbol(5, 4)) == [4, 9, 14]

    marking = cycles.mark(9)
    assert marking.moduli == [3, 9]
    assert len({marking.of(label)[1] for label in range(1, 10)}) == 9

    assert cycle_moduli(12) == [2, 3, 4]
    assert cycle_moduli(10) == [5]


def test_cycle_angles():
    assert cycle_angles(15, 3) == [Fraction(2, 3)]
    assert cycle_angles(8, 4) == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert cycle_angles(6, 2) == []


def test_select_and_pair_example(cycles):
    for n in (3, 7, 12, 15):
        assert cycles.select_observable_set(n).labels == (1, 2)
    assert unobservable_pair_example(13) is None
    for n in (4, 6, 9, 15, 25):
        report = cycles.unobservable_pair_example(n)
        assert report is not None and not report.observable


def test_witnesses_are_valid(cycles):
    for n, labels in [(15, (4, 13)), (12, (1, 4, 7)), (9, (2,)), (16, (1, 5, 9))]:
        report = cycles.analyze(n, labels)
        L = laplacian(report.topology)
        C = output_matrix(report.topology, report.nodes)
        for pair in report.unobservable_eigenpairs:
            v = pair.eigenvector
            assert np.max(np.abs(L @ v - pair.eigenvalue * v)) <= 1e-9
            assert np.max(np.abs(C @ v)) <= 1e-12


def test_module_wrapper_uses_defaults():
    assert len(cycle_single_node(5, 3).unobservable_eigenpairs) == 2


@hsettings(max_examples=60, deadline=None)
@given(st.integers(min_value=3, max_value=36).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n), min_size=2, max_size=4), st.integers(0, n - 1))))
def test_verdict_is_rotation_invariant_and_follows_gcd(case):
    n, labels, offset = case
    analyzer = CycleAnalyzer()
    nodes = NodeSet.of(sorted(labels), n)
    report = analyzer.analyze(n, nodes)
    g = GapVector.of(nodes).gcd
    assert report.observable == (not (g >= 3 or (g == 2 and n % 4 == 0)))
    assert analyzer.analyze(n, nodes.shifted(offset)).observable == report.observable
    assert analyzer.analyze(n, nodes.mirrored()).observable == report.observable


def test_prime_cycles_are_observable_from_any_pair():
    analyzer = CycleAnalyzer(oracle_check=False)
    for n in (5, 7, 11, 13):
        assert is_prime(n)
        for i in range(2, n + 1):
            assert analyzer.multi_node(n, (1, i)).observable
