from dataclasses import replace

import pandas as pd
import pytest

from consensus_obs.errors import InvalidInputError, VerificationError
from consensus_obs.verifier import SweepRunner, check, check_configuration


def test_single_configuration_row(settings):
    row = check_configuration("path", 6, (2,), settings)
    assert row["theorem"] is False and row["oracle"] is False
    assert row["rank"] == 5 and row["deficiency"] == 1 and row["agree"]

    row = check_configuration("cycle", 15, (4, 13), settings, duality=True)
    assert row["rank"] == 14 and row["reachable"] is False and row["agree"]


def test_small_sweeps_agree(settings):
    runner = SweepRunner(settings, workers=1)
    frame = check(runner.path_sweep(12, (1, 2), duality=True), "paths")
    assert len(frame) == sum(n + n * (n - 1) // 2 for n in range(2, 13))
    assert frame["agree"].all()
    assert "reachable" in frame.columns

    frame = check(runner.cycle_sweep(12, (2, 3)), "cycles")
    assert frame["agree"].all()
    assert (~frame["theorem"]).any()


def test_internal_only_and_random_subsets(settings):
    runner = SweepRunner(settings)
    frame = runner.path_sweep(8, (1,), internal_only=True)
    assert len(frame) == sum(n - 2 for n in range(2, 9))
    frame = check(runner.path_sweep(10, (1,), random_subsets=5))
    assert (frame["size"] == 3).sum() == 5 * 8


def test_check_reports_first_disagreement():
    frame = pd.DataFrame([{"kind": "path", "n": 6, "nodes": "{2}", "agree": True},
                          {"kind": "path", "n": 7, "nodes": "{3}", "agree": False}])
    with pytest.raises(VerificationError) as exc:
        check(frame, "demo")
    assert exc.value.configuration["n"] == 7
    assert check(pd.DataFrame()).empty


def test_sweep_cap(settings):
    with pytest.raises(InvalidInputError):
        SweepRunner(settings).path_sweep(settings.max_n + 1)


def test_power_of_two_sweep(settings):
    frame = SweepRunner(settings).power_of_two_sweep(max_exponent=8, oracle_max_n=16)
    assert frame["agree"].all()
    assert frame["oracle_checked"].tolist() == [True] * 4 + [False] * 4


def test_spectral_fidelity_small(settings):
    frame = SweepRunner(settings).spectral_fidelity_sweep(max_size=30)
    assert frame["agree"].all()
    assert set(frame["family"]) == {"N", "M", "path", "cycle", "path_adjacency"}


@pytest.mark.slow
def test_exhaustive_path_sweep(settings):
    runner = SweepRunner(settings, workers=2)
    check(runner.path_sweep(40, (1, 2), random_subsets=100), "paths up to 40")


@pytest.mark.slow
def test_exhaustive_cycle_sweep(settings):
    runner = SweepRunner(settings, workers=2)
    check(runner.cycle_sweep(36, (2,)), "cycle pairs up to 36")
    check(runner.cycle_sweep(24, (3,)), "cycle triples up to 24")


@pytest.mark.slow
def test_prime_cycles_and_spectra(settings):
    runner = SweepRunner(settings)
    check(runner.prime_cycle_sweep(max_prime=97, max_composite=60), "prime cycles")
    check(runner.power_of_two_sweep(max_exponent=12, oracle_max_n=64), "powers of two")
    check(runner.spectral_fidelity_sweep(max_size=200), "closed-form spectra")


def test_symmetry_tolerance_reaches_the_oracle(settings):
    strict = replace(settings, kalman_max_n=0, tolerances=replace(settings.tolerances, symmetry=-1.0))
    with pytest.raises(InvalidInputError):
        SweepRunner(strict, workers=1).spectral_fidelity_sweep(max_size=3)
    with pytest.raises(InvalidInputError):
        check_configuration("path", 6, (2,), strict)
    assert check_configuration("path", 6, (2,), replace(settings, kalman_max_n=0))["agree"]
