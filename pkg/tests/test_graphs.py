import numpy as np
import pytest

from consensus_obs.errors import InvalidInputError
from consensus_obs.graphs import (GraphKind, GraphTopology, NodeSet, adjacency, input_matrix, laplacian,
                                  output_matrix, reversal_matrix, submatrix_M, submatrix_N)


def test_path_and_cycle_laplacians():
    assert np.array_equal(laplacian(GraphTopology.path(2)), [[1, -1], [-1, 1]])
    assert np.array_equal(laplacian(GraphTopology.cycle(3)), [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])

    L = laplacian(GraphTopology.path(6))
    assert np.array_equal(np.diag(L), [1, 2, 2, 2, 2, 1])
    assert np.array_equal(np.diag(L, 1), -np.ones(5))
    assert np.isclose(np.linalg.eigvalsh(L), 1.0).any()


@pytest.mark.parametrize("g", [GraphTopology.path(7), GraphTopology.cycle(7), GraphTopology.path(1)])
def test_laplacian_rows_sum_to_zero(g):
    L = laplacian(g)
    assert np.allclose(L.sum(axis=1), 0)
    assert np.array_equal(L, L.T)


def test_topology_validation():
    with pytest.raises(InvalidInputError):
        GraphTopology.path(0)
    with pytest.raises(InvalidInputError):
        GraphTopology.cycle(2)
    with pytest.raises(InvalidInputError):
        GraphTopology.path(50).check_size(10)
    assert GraphTopology(GraphKind("cycle"), 5).max_degree() == 2
    assert GraphTopology.path(2).max_degree() == 1
    assert str(GraphTopology.cycle(15)) == "cycle(15)"


def test_boundary_blocks():
    assert np.array_equal(submatrix_N(1), [[1]])
    assert np.array_equal(submatrix_N(2), [[1, -1], [-1, 2]])
    assert np.array_equal(submatrix_M(1), [[2]])
    assert submatrix_M(0).shape == (0, 0)
    assert np.allclose(np.linalg.eigvalsh(submatrix_M(2)), [1, 3])
    with pytest.raises(InvalidInputError):
        submatrix_N(0)
    with pytest.raises(InvalidInputError):
        submatrix_M(-1)


def test_reversal_matrix():
    v = np.arange(4.0)
    assert np.array_equal(reversal_matrix(4) @ v, v[::-1])


def test_node_set_parsing_and_validation():
    s = NodeSet.parse("5, 2", 6)
    assert s.labels == (2, 5)
    assert s.indices == [1, 4]
    assert str(s) == "{2,5}"
    assert s.has_external() is False
    assert NodeSet.of(1, 6).has_external()

    for text in ["", "0", "7", "2,2", "a"]:
        with pytest.raises(InvalidInputError):
            NodeSet.parse(text, 6)


def test_node_set_symmetries():
    s = NodeSet.of((4, 13), 15)
    assert s.shifted(3).labels == (1, 7)
    assert s.mirrored().labels == (3, 12)


def test_input_and_output_matrices():
    g = GraphTopology.path(6)
    B = input_matrix(g, NodeSet.of((2, 5), 6))
    assert B.shape == (6, 2)
    assert B[1, 0] == 1 and B[4, 1] == 1 and B.sum() == 2
    assert np.array_equal(output_matrix(g, NodeSet.of((2, 5), 6)), B.T)
    assert np.array_equal(input_matrix(GraphTopology.path(3), NodeSet.of(2, 3))[:, 0], [0, 1, 0])
    with pytest.raises(InvalidInputError):
        input_matrix(g, NodeSet.of(1, 5))


def test_cycle_adjacency_wraps():
    A = adjacency(GraphTopology.cycle(5))
    assert A[0, 4] == 1 and A[4, 0] == 1
    assert np.array_equal(A.sum(axis=1), 2 * np.ones(5))


@pytest.mark.parametrize("nu", range(1, 31))
def test_N_is_path_laplacian_plus_corner(nu):
    e = np.zeros((nu, 1))
    e[-1] = 1.0
    assert np.array_equal(submatrix_N(nu), laplacian(GraphTopology.path(nu)) + e @ e.T)


@pytest.mark.parametrize("d", [1, 2, 5, 12])
def test_reversal_is_an_involutive_path_symmetry(d):
    P = reversal_matrix(d)
    L = laplacian(GraphTopology.path(d))
    assert np.array_equal(P @ P, np.eye(d))
    assert np.array_equal(P @ L @ P, L)
    # the mirrored N block has its degree-one node last
    assert np.diag(P @ submatrix_N(d) @ P)[-1] == 1.0
