"""Ring cluster topologies for the n-qubit oracle.

2n nodes alternate working/auxiliary around a ring; every working node is
gadget-connected to every auxiliary node (n^2 gadget edges), and each
working node carries a protruding readout leg.  The expanded form replaces
each gadget edge with one measurement node and two cluster-state
(Hadamard) edges: 2n + n^2 nodes, 2n^2 edges.
"""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ClusterTopology", "topology"]


@dataclass(frozen=True)
class ClusterTopology:
    n: int
    ring: tuple[str, ...]  # node names in ring order, w1, a1, w2, a2, ...
    gadget_edges: tuple[tuple[str, str], ...]
    legs: tuple[str, ...]  # working nodes carrying a readout leg

    @property
    def node_count(self) -> int:
        return len(self.ring)

    @property
    def gadget_edge_count(self) -> int:
        return len(self.gadget_edges)

    @property
    def leg_count(self) -> int:
        return len(self.legs)

    def expanded_nodes(self) -> list[str]:
        return list(self.ring) + [f"m{j}{k}" for (wj, ak) in self.gadget_edges
                                  for j, k in [(wj[1:], ak[1:])]]

    def expanded_edges(self) -> list[tuple[str, str]]:
        edges = []
        for wj, ak in self.gadget_edges:
            m = f"m{wj[1:]}{ak[1:]}"
            edges.append((wj, m))
            edges.append((m, ak))
        return edges

    def to_json(self, expanded: bool = False) -> dict:
        roles = {name: ("working" if name.startswith("w") else "auxiliary") for name in self.ring}
        if expanded:
            nodes = self.expanded_nodes()
            for name in nodes[len(self.ring):]:
                roles[name] = "gadget"
            edges = [{"a": a, "b": b, "h": True} for a, b in self.expanded_edges()]
        else:
            nodes = list(self.ring)
            edges = [{"a": a, "b": b, "h": False} for a, b in self.gadget_edges]
        return {
            "n": self.n,
            "expanded": expanded,
            "nodes": [{"id": name, "role": roles[name]} for name in nodes],
            "edges": edges,
            "legs": list(self.legs),
        }

    def to_dot(self, expanded: bool = False) -> str:
        data = self.to_json(expanded)
        kind = "expanded" if expanded else "compact"
        lines = [
            "graph cluster_topology {",
            f"  // {kind} n={self.n}: nodes={len(data['nodes'])}, "
            f"edges={len(data['edges'])}, legs={len(data['legs'])}",
        ]
        fill = {"working": "green", "auxiliary": "green", "gadget": "gray"}
        for nd in data["nodes"]:
            lines.append(
                f'  {nd["id"]} [label="{nd["id"]}", style=filled, fillcolor={fill[nd["role"]]}];'
            )
        style = "[style=dashed, color=blue]" if expanded else "[style=dashed, color=red]"
        for e in data["edges"]:
            lines.append(f'  {e["a"]} -- {e["b"]} {style};')
        for i, leg in enumerate(self.legs):
            lines.append(f"  leg{i} [shape=point];")
            lines.append(f"  {leg} -- leg{i};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def topology(n: int) -> ClusterTopology:
    """Ring layout of the n-qubit oracle cluster."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ring = []
    for i in range(1, n + 1):
        ring += [f"w{i}", f"a{i}"]
    gadgets = tuple((f"w{j}", f"a{k}") for j in range(1, n + 1) for k in range(1, n + 1))
    legs = tuple(f"w{i}" for i in range(1, n + 1))
    return ClusterTopology(n, tuple(ring), gadgets, legs)
