from .config import DEFAULT_SETTINGS
from .cycle_analysis import CycleAnalyzer
from .graphs import GraphKind, NodeSet
from .path_analysis import PathAnalyzer

ANALYZERS = {GraphKind.PATH: PathAnalyzer, GraphKind.CYCLE: CycleAnalyzer}


def analyzer_for(kind, settings=DEFAULT_SETTINGS, oracle_check=None):
    return ANALYZERS[GraphKind(kind)](settings, oracle_check)


def analyze(topology, nodes, settings=DEFAULT_SETTINGS, oracle_check=None):
    """Run the path or cycle analysis matching the topology."""
    if not isinstance(nodes, NodeSet):
        nodes = NodeSet.of(nodes, topology.n)
    return analyzer_for(topology.kind, settings, oracle_check).analyze(topology.n, nodes)


def mark(topology, settings=DEFAULT_SETTINGS):
    return analyzer_for(topology.kind, settings).mark(topology.n)
