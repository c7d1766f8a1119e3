import json
from dataclasses import dataclass, field

import numpy as np
from rich.console import Console
from rich.table import Table
from rich.theme import Theme

from .graphs import GraphKind, GraphTopology, NodeSet
from .observability import NodeMarking, ObservabilityReport, Symbol
from .spectral import CosEigenvalue, EigenPair

SCHEMA_VERSION = "1.0"

custom_theme = Theme({
    "info": "cyan",
    "warning": "yellow",
    "error": "bold red",
    "success": "bold green",
    "header": "bold blue",
    "key": "bold magenta",
    "value": "white"
})
console = Console(theme=custom_theme)
err_console = Console(theme=custom_theme, stderr=True)


# --- serialization --------------------------------------------------------

def eigenvalue_to_dict(exact):
    return {"a": exact.numerator, "b": exact.denominator, "value": exact.value}


def topology_to_dict(g):
    return {"kind": g.kind.value, "n": g.n}


def topology_from_dict(data):
    return GraphTopology(GraphKind(data["kind"]), int(data["n"]))


def report_to_dict(report):
    return {
        "graph": topology_to_dict(report.topology),
        "nodes": list(report.nodes.labels),
        "observable": report.observable,
        "blocking_moduli": list(report.blocking_moduli),
        "unobservable_eigenpairs": [
            {"eigenvalue": eigenvalue_to_dict(pair.exact), "eigenvector": pair.eigenvector.tolist()}
            for pair in report.unobservable_eigenpairs
        ],
        "witness_subspace": [w.tolist() for w in report.witness_subspace],
        "oracle_checked": report.oracle_checked,
    }


def report_from_dict(data):
    g = topology_from_dict(data["graph"])
    pairs = []
    for item in data["unobservable_eigenpairs"]:
        exact = CosEigenvalue(item["eigenvalue"]["a"], item["eigenvalue"]["b"])
        pairs.append(EigenPair(float(item["eigenvalue"]["value"]), np.array(item["eigenvector"]), exact))
    return ObservabilityReport(
        g, NodeSet(tuple(data["nodes"]), g.n), bool(data["observable"]),
        tuple(data["blocking_moduli"]), tuple(pairs),
        tuple(np.array(w) for w in data["witness_subspace"]), bool(data["oracle_checked"]))


def marking_to_dict(marking):
    return {
        "graph": topology_to_dict(marking.topology),
        "symbols": {str(label): [{"modulus": s.modulus, "residue": s.residue} for s in marking.of(label)]
                    for label in range(1, marking.topology.n + 1)},
    }


def marking_from_dict(data):
    symbols = {}
    for label, items in data["symbols"].items():
        if items:
            symbols[int(label)] = tuple(Symbol(item["modulus"], item["residue"]) for item in items)
    return NodeMarking(topology_from_dict(data["graph"]), symbols)


@dataclass(frozen=True, eq=False)
class ReportDocument:
    """JSON envelope written by every CLI command that emits a report."""
    command: dict
    report: ObservabilityReport | None = None
    marking: NodeMarking | None = None
    oracle: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "report": report_to_dict(self.report) if self.report else None,
            "marking": marking_to_dict(self.marking) if self.marking else None,
            "oracle": self.oracle,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            command=data["command"],
            report=report_from_dict(data["report"]) if data.get("report") else None,
            marking=marking_from_dict(data["marking"]) if data.get("marking") else None,
            oracle=data.get("oracle", {}),
            schema_version=data["schema_version"],
        )

    def serialize(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def parse(cls, text):
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, ReportDocument):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def oracle_summary(report):
    return {"checked": report.oracle_checked, "rank": report.topology.n - report.deficiency,
            "deficiency": report.deficiency}


# --- text / DOT renderers ---------------------------------------------------

def marking_text(marking):
    """One line per node: 'node 5: 3,9', unmarked nodes show '-'."""
    lines = [f"# {marking.topology}"]
    for label in range(1, marking.topology.n + 1):
        symbols = ",".join(str(s) for s in marking.of(label)) or "-"
        lines.append(f"node {label}: {symbols}")
    return "\n".join(lines)


def marking_dot(marking):
    g = marking.topology
    lines = [f"graph {g.kind.value}{g.n} {{", "  node [shape=circle];"]
    for label in range(1, g.n + 1):
        symbols = ",".join(str(s) for s in marking.of(label))
        text = f"{label}\\n{symbols}" if symbols else str(label)
        lines.append(f'  n{label} [label="{text}"];')
    for i, j in g.edges():
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines)


def marking_json(marking):
    return json.dumps(marking_to_dict(marking), indent=2)


# --- rich console output ----------------------------------------------------

class ConsensusReporter:
    def __init__(self, out=None):
        self.console = out or console

    def print_report(self, report):
        verdict = "[success]OBSERVABLE[/]" if report.observable else "[warning]UNOBSERVABLE[/]"
        self.console.rule(f"{report.topology} observed at {report.nodes}")
        self.console.print(f"Verdict: {verdict}")
        if report.observable:
            return
        self.console.print(f"Blocking moduli: {', '.join(str(m) for m in report.blocking_moduli)}")
        table = Table(title="Unobservable eigenvalues", show_header=True)
        table.add_column("Angle a/b", justify="right")
        table.add_column("2-2cos(a pi/b)", justify="right")
        table.add_column("Witness", overflow="fold")
        for pair in report.unobservable_eigenpairs:
            table.add_row(f"{pair.exact.numerator}/{pair.exact.denominator}", f"{pair.eigenvalue:.6f}",
                          np.array2string(pair.eigenvector, precision=3, suppress_small=True))
        self.console.print(table)

    def print_marking(self, marking):
        table = Table(title=f"Node symbols on {marking.topology}", show_header=True)
        table.add_column("Node", justify="right")
        table.add_column("Symbols")
        for label in range(1, marking.topology.n + 1):
            table.add_row(str(label), ", ".join(str(s) for s in marking.of(label)) or "-")
        self.console.print(table)

    def print_sweep(self, frame, title):
        """Summary of a verification sweep frame, grouped by graph kind and subset size."""
        table = Table(title=title, show_header=True, header_style="bold green")
        table.add_column("Graph")
        table.add_column("Subset size", justify="right")
        table.add_column("Configurations", justify="right")
        table.add_column("Unobservable", justify="right")
        table.add_column("Disagreements", justify="right")
        if frame.empty:
            self.console.print(table)
            return
        summary = frame.groupby(["kind", "size"]).agg(
            configurations=("agree", "size"),
            unobservable=("theorem", lambda s: int((~s.astype(bool)).sum())),
            disagreements=("agree", lambda s: int((~s.astype(bool)).sum())),
        ).reset_index()
        for _, row in summary.iterrows():
            table.add_row(row["kind"], str(row["size"]), str(row["configurations"]),
                          str(row["unobservable"]), str(row["disagreements"]))
        table.add_section()
        table.add_row("[bold]TOTAL[/]", "", f"[bold]{len(frame)}[/]", "",
                      f"[bold]{int((~frame['agree'].astype(bool)).sum())}[/]")
        self.console.print(table)
