"""
Renderers for lattices, measure tables and cancellation tables.

Text documents (DOT, JSON records, the cancellation grid) are returned as
strings so commands can write them to stdout or a file unchanged.
"""

import json

from rich.table import Table

from infolattice.errors import LatticeError
from infolattice.lattice import EMPTY, PowerSetLattice, members, popcount, sign_plus
from infolattice.measures import MeasureTable
from infolattice.sumrules import SumRule, WeightedLatticeGraph
from infolattice.transforms import CancellationTable, LatticeFunction

MAX_DOT_N = 10


def fixed(value: float) -> str:
    """Nine decimal places, without a negative zero."""
    text = f"{value:.9f}"
    return "0.000000000" if text == "-0.000000000" else text


def _sign(mask: int) -> str:
    return "+" if sign_plus(mask) > 0 else "-"


def measure_records(table: MeasureTable) -> list[dict[str, object]]:
    """
    One record per node, ascending by mask: labels, H, I, M and the Δ weight of
    every edge arriving from below (keyed by the variable that joins).
    """
    lattice = table.lattice
    graph = WeightedLatticeGraph(table.interaction)
    records = []
    for mask in lattice.nodes():
        records.append(
            {
                "mask": mask,
                "subset": [lattice.labels[i] for i in members(mask)],
                "H": float(fixed(table.entropy[mask])),
                "I": float(fixed(table.interaction[mask])),
                "M": float(fixed(table.multi[mask])),
                "delta": {
                    lattice.labels[x]: float(fixed(w)) for x, w in graph.descending_weights(mask)
                },
            }
        )
    return records


def render_records(records: list[dict[str, object]]) -> str:
    """JSON lines, keys in a fixed order."""
    return "".join(json.dumps(record, ensure_ascii=False) + "\n" for record in records)


def measure_rich_table(table: MeasureTable, unit: str = "bits") -> Table:
    lattice = table.lattice
    graph = WeightedLatticeGraph(table.interaction)
    out = Table(title=f"Information measures ({unit})", show_header=True)
    out.add_column("Subset", style="cyan")
    out.add_column("H", justify="right")
    out.add_column("I", justify="right")
    out.add_column("M", justify="right")
    out.add_column("Δ (edges from below)")
    for mask in lattice.nodes():
        if mask == EMPTY:
            continue
        weights = ", ".join(
            f"+{lattice.labels[x]}: {fixed(w)}" for x, w in graph.descending_weights(mask)
        )
        out.add_row(
            lattice.label(mask),
            fixed(table.entropy[mask]),
            fixed(table.interaction[mask]),
            fixed(table.multi[mask]),
            weights,
        )
    return out


def render_dot(lattice: PowerSetLattice, table: MeasureTable | None = None) -> str:
    """
    The lattice as a DOT digraph, edges pointing upward.

    Nodes are labelled with their members and the sign (-1)^(|tau|+1); when a
    measure table is given, node labels add H and I and edges carry Δ.

    Raises:
        LatticeError: If the lattice has more than MAX_DOT_N variables
    """
    if lattice.n > MAX_DOT_N:
        raise LatticeError(f"DOT export is limited to {MAX_DOT_N} variables, got {lattice.n}")
    lines = ["digraph lattice {", "\trankdir=BT;", "\tnode [shape=box];"]
    for mask in lattice.nodes():
        label = f"{lattice.label(mask)}\\n{_sign(mask)}"
        if table is not None:
            label += f"\\nH={fixed(table.entropy[mask])}\\nI={fixed(table.interaction[mask])}"
        lines.append(f'\t{mask} [label="{label}"];')
    for lower, upper, _ in lattice.covering_edges():
        if table is None:
            lines.append(f"\t{lower} -> {upper};")
        else:
            weight = table.interaction[upper] - table.interaction[lower]
            lines.append(f'\t{lower} -> {upper} [label="Δ={fixed(weight)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_document(lattice: PowerSetLattice, table: MeasureTable | None = None) -> str:
    """The lattice as a JSON document of nodes and covering edges."""
    nodes: list[dict[str, object]] = []
    for mask in lattice.nodes():
        node: dict[str, object] = {
            "mask": mask,
            "subset": [lattice.labels[i] for i in members(mask)],
            "sign": sign_plus(mask),
        }
        if table is not None:
            node["H"] = float(fixed(table.entropy[mask]))
            node["I"] = float(fixed(table.interaction[mask]))
        nodes.append(node)
    edges: list[dict[str, object]] = []
    for lower, upper, x in lattice.covering_edges():
        edge: dict[str, object] = {"from": lower, "to": upper, "added": lattice.labels[x]}
        if table is not None:
            edge["delta"] = float(fixed(table.interaction[upper] - table.interaction[lower]))
        edges.append(edge)
    document = {"n": lattice.n, "labels": list(lattice.labels), "nodes": nodes, "edges": edges}
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def render_cancellation(ct: CancellationTable) -> str:
    """
    Aligned text grid: one row per sigma, one column per tau, each non-zero cell
    showing sigma with its sign, and a trailing Sums column.
    """
    lattice = ct.lattice
    order = sorted(lattice.nodes(), key=lambda m: (-popcount(m), m))
    header = [f"{lattice.label(tau)} {_sign_plain_of(tau)}" for tau in order]
    rows = []
    sums = ct.row_sums
    for sigma in order:
        cells = []
        for tau in order:
            entry = int(ct.entries[sigma, tau])
            sign = "+" if entry > 0 else "-"
            cells.append(f"{lattice.label(sigma)} {sign}" if entry else "")
        total = int(sums[sigma])
        rows.append((cells, lattice.label(sigma) if total == 1 else str(total)))

    width = max(len(text) for text in header + [c for cells, _ in rows for c in cells])
    lines = ["  ".join(h.ljust(width) for h in header) + "  Sums"]
    for cells, shown in rows:
        lines.append("  ".join(c.ljust(width) for c in cells) + f"  {shown}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _sign_plain_of(mask: int) -> str:
    # column header sign (-1)^|tau|
    return "-" if popcount(mask) % 2 else "+"


def sum_rule_rich_table(rules: list[SumRule], F: LatticeFunction, name: str) -> Table:
    """One row per rule instance: its chain, chain sum and residual."""
    lattice = F.lattice
    out = Table(title=f"Sum rules on {name}", show_header=True)
    out.add_column("Rule", style="cyan")
    out.add_column("Chain")
    out.add_column("Chain sum", justify="right")
    out.add_column("Residual", justify="right")
    for rule in rules:
        out.add_row(
            rule.rule_id,
            " → ".join(lattice.label(node) for node in rule.chain),
            fixed(rule.chain_sum),
            f"{rule.residual:.3e}",
        )
    return out
