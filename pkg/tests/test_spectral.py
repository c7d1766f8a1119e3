import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from consensus_obs.errors import InvalidInputError
from consensus_obs.graphs import GraphTopology, adjacency, laplacian, submatrix_M, submatrix_N
from consensus_obs.spectral import (CosEigenvalue, N_embeds_in_M2nu_check, block_spectrum, charpoly_recursion_check,
                                    common_angles, eigen_cycle_laplacian, eigen_M, eigen_N, eigen_path_adjacency,
                                    eigen_path_laplacian, in_block_spectrum, multiplicities)


def values(pairs):
    return sorted(pair.eigenvalue for pair in pairs)


def test_eigen_N_examples():
    assert np.allclose(values(eigen_N(1)), [1.0])
    assert np.allclose(values(eigen_N(2)), [0.3820, 2.6180], atol=1e-4)
    assert np.allclose(values(eigen_N(4)), [0.1206, 1.0, 2.3473, 3.5321], atol=1e-4)


def test_eigen_M_examples():
    assert eigen_M(0) == []
    assert np.allclose(values(eigen_M(2)), [1.0, 3.0])
    assert np.allclose(values(eigen_M(4)), [0.3820, 1.3820, 2.6180, 3.6180], atol=1e-4)


def test_path_and_cycle_spectra():
    assert np.allclose(values(eigen_path_laplacian(2)), [0, 2])
    assert np.allclose(values(eigen_path_laplacian(4)), [0, 2 - math.sqrt(2), 2, 2 + math.sqrt(2)])
    assert np.allclose(values(eigen_cycle_laplacian(4)), [0, 2, 2, 4])
    assert np.allclose(values(eigen_cycle_laplacian(3)), [0, 3, 3])
    assert multiplicities(eigen_cycle_laplacian(6))[CosEigenvalue(1, 3)] == 2
    assert np.allclose(values(eigen_path_adjacency(1)), [0])
    assert np.allclose(values(eigen_path_adjacency(3)), [-math.sqrt(2), 0, math.sqrt(2)])


@pytest.mark.parametrize("build, closed_form, size", [
    (submatrix_N, eigen_N, 9),
    (submatrix_M, eigen_M, 11),
    (lambda k: laplacian(GraphTopology.path(k)), eigen_path_laplacian, 12),
    (lambda k: laplacian(GraphTopology.cycle(k)), eigen_cycle_laplacian, 12),
])
def test_closed_forms_are_orthonormal_eigenpairs(build, closed_form, size):
    A = build(size)
    pairs = closed_form(size)
    assert all(pair.residual(A) <= 1e-9 for pair in pairs)
    V = np.column_stack([pair.eigenvector for pair in pairs])
    assert np.allclose(V.T @ V, np.eye(size), atol=1e-9)


def test_cos_eigenvalue_is_reduced_and_exact():
    e = CosEigenvalue(2, 6)
    assert (e.numerator, e.denominator) == (1, 3)
    assert e == CosEigenvalue.from_angle(Fraction(1, 3))
    assert math.isclose(e.value, 1.0)
    assert str(e) == "2-2cos(1pi/3)"
    with pytest.raises(InvalidInputError):
        CosEigenvalue(4, 3)


def test_block_membership_matches_enumeration():
    for size in range(0, 30):
        for kind in ("N", "M"):
            if kind == "N" and size == 0:
                continue
            spectrum = block_spectrum(kind, size)
            for b in range(2, 40):
                for a in range(1, b):
                    angle = Fraction(a, b)
                    assert in_block_spectrum(kind, size, angle) == (angle in spectrum)


def test_common_angles():
    assert common_angles([('N', 1), ('N', 4)]) == {Fraction(1, 3)}
    assert common_angles([('N', 2), ('M', 4)]) == {Fraction(1, 5), Fraction(3, 5)}
    assert common_angles([('N', 1), ('M', 0), ('N', 1)]) == frozenset()
    assert common_angles([]) == frozenset()


@given(st.integers(min_value=1, max_value=40))
def test_N_spectrum_lies_in_M_2nu(nu):
    assert block_spectrum('N', nu) <= block_spectrum('M', 2 * nu)


def test_identities():
    assert all(charpoly_recursion_check(mu) for mu in (3, 5, 10))
    assert all(N_embeds_in_M2nu_check(nu) for nu in (1, 2, 7))
    with pytest.raises(InvalidInputError):
        charpoly_recursion_check(2)


@pytest.mark.parametrize("mu", [1, 2, 3, 7, 20, 64])
def test_M_spectrum_is_shifted_path_adjacency(mu):
    shifted = sorted(pair.eigenvalue + 2.0 for pair in eigen_path_adjacency(mu))
    assert np.allclose(values(eigen_M(mu)), shifted, atol=1e-12)
    assert np.allclose(np.linalg.eigvalsh(adjacency(GraphTopology.path(mu)) + 2.0 * np.eye(mu)),
                       values(eigen_M(mu)), atol=1e-10)


def test_eigenvectors_never_vanish_at_the_ends():
    smallest = 1.0
    for size in range(1, 201):
        for pair in [*eigen_N(size), *eigen_M(size), *eigen_path_laplacian(size)]:
            v = pair.eigenvector
            smallest = min(smallest, abs(v[0]), abs(v[-1]))
    assert smallest > 1e-4


def test_exact_and_numeric_equality_agree():
    classes = {}
    for b in range(1, 501):
        for a in range(b + 1):
            exact = CosEigenvalue(a, b)
            classes.setdefault(exact, []).append(exact.value)
    for members in classes.values():
        assert max(members) - min(members) <= 1e-12
    distinct = np.sort([members[0] for members in classes.values()])
    assert np.min(np.diff(distinct)) > 1e-12
