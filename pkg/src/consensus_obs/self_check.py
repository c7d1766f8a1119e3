import logging

import numpy as np

from .analysis import analyzer_for
from .config import DEFAULT_SETTINGS
from .errors import ConsensusObsError
from .graphs import GraphTopology, NodeSet
from .observability import Symbol
from .simulator import SimMode, indistinguishability_demo, steering_demo
from .spectral import N_embeds_in_M2nu_check, charpoly_recursion_check, eigen_N
from .verifier import SweepRunner, check


class SelfCheckFailure(ConsensusObsError):
    pass


def expect(condition, message):
    if not condition:
        raise SelfCheckFailure(message)


class SelfCheckRunner:
    """Reproduces the four reference markings and a small oracle sweep."""

    def __init__(self, settings=DEFAULT_SETTINGS, out=print):
        self.settings = settings
        self.out = out
        self.paths = analyzer_for("path", settings, oracle_check=True)
        self.cycles = analyzer_for("cycle", settings, oracle_check=True)

    def run(self):
        self.out("🚀 Starting Self-Check")
        steps = [
            ("Spectral identities", self._spectral),
            ("Path 6: single symbol class", self._path_6),
            ("Path 15: two prime moduli", self._path_15),
            ("Path 9: prime power modulus", self._path_9),
            ("Cycle 15: residue classes", self._cycle_15),
            ("Oracle sweep (paths and cycles, n <= 12)", self._sweep),
            ("Indistinguishable initial states", self._indistinguishable),
            ("Gramian steering", self._steer),
        ]

        success = True
        for name, func in steps:
            try:
                func()
                self.out(f"  Running: {name}... ✅ PASS")
            except Exception as e:
                logging.exception(f"Self-check step failed: {name}")
                self.out(f"  Running: {name}... ❌ FAIL: {e}")
                success = False
                break

        if success:
            self.out("\n✨ Self-Check Completed Successfully!")
        else:
            self.out("\n⚠️ Self-Check Failed. Please review errors.")
        return success

    def _spectral(self):
        expect(all(charpoly_recursion_check(mu) for mu in (3, 5, 10)), "characteristic polynomial recursion")
        expect(all(N_embeds_in_M2nu_check(nu) for nu in (1, 2, 7)), "spectrum(N_nu) inside spectrum(M_2nu)")
        values = sorted(pair.eigenvalue for pair in eigen_N(4))
        expect(np.allclose(values, [0.12, 1.0, 2.35, 3.53], atol=5e-3), f"spectrum(N_4) = {values}")

    def _path_6(self):
        marking = self.paths.mark(6)
        expect(marking.nodes_with(Symbol(3)) == [2, 5], "symbol 3 on {2,5}")
        expect(marking.unmarked() == [1, 3, 4, 6], "unmarked {1,3,4,6}")
        report = self.paths.single_node(6, 2)
        expect(not report.observable and [str(e) for e in report.eigenvalues] == ["2-2cos(1pi/3)"],
               "node 2 hides lambda = 1")

    def _path_15(self):
        marking = self.paths.mark(15)
        expect(marking.nodes_with(Symbol(3)) == [2, 5, 8, 11, 14], "symbol 3")
        expect(marking.nodes_with(Symbol(5)) == [3, 8, 13], "symbol 5")
        report = self.paths.single_node(15, 3)
        values = sorted(pair.eigenvalue for pair in report.unobservable_eigenpairs)
        expect(np.allclose(values, [0.3820, 2.6180], atol=1e-4), f"square node eigenvalues {values}")
        expect(not self.paths.multi_node(15, (2, 5)).observable, "{2,5} share lambda = 1")

    def _path_9(self):
        marking = self.paths.mark(9)
        expect(marking.nodes_with(Symbol(3)) == [2, 5, 8] and marking.nodes_with(Symbol(9)) == [5], "symbols 3, 9")
        report = self.paths.central_node_analysis(9)
        expect(len(report.unobservable_eigenpairs) == 4, "central node hides spectrum(N_4)")

    def _cycle_15(self):
        marking = self.cycles.mark(15)
        expect(all(len(marking.of(i)) == 2 for i in range(1, 16)), "two symbols per node")
        for pair, observable in (((4, 13), False), ((8, 14), False), ((2, 13), True), ((5, 12), True)):
            expect(self.cycles.multi_node(15, pair).observable == observable, f"pair {pair}")

    def _sweep(self):
        runner = SweepRunner(self.settings, workers=1)
        check(runner.path_sweep(12, (1, 2), duality=True), "path sweep")
        check(runner.cycle_sweep(12, (1, 2), duality=True), "cycle sweep")

    def _indistinguishable(self):
        g = GraphTopology.path(6)
        witness = self.paths.single_node(6, 2).witness_subspace[0]
        for mode in SimMode:
            result = indistinguishability_demo(g, NodeSet.of(2, 6), witness, mode=mode, settings=self.settings)
            expect(result.passed, f"output gap {result.output_gap:.2e} in {mode.value} mode")

    def _steer(self):
        g = GraphTopology.path(4)
        target = np.array([1.0, -0.5, 0.25, 2.0])
        result = steering_demo(g, NodeSet.of(2, 4), target, settings=self.settings)
        expect(result.reached, "path 4 is reachable from node 2")
