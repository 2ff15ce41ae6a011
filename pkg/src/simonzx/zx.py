"""ZX diagrams: phased Z/X spiders, brute-force tensor evaluation, rewrites.

Tensor semantics follow the unnormalized convention: a Z spider of phase a
contributes |0..0><0..0| + e^{ia}|1..1><1..1| across its legs, an X spider
the same in the |+->-basis with |+-> = |0> +- |1>, and a Hadamard edge
inserts [[1,1],[1,-1]].  Every diagram equality is read up to a nonzero
global scalar, so rewrite soundness is checked with `proportional`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Spider",
    "ZxDiagram",
    "eval_tensor",
    "proportional",
    "proportionality_residual",
    "fuse_spiders",
    "color_change",
    "remove_identity",
    "copy_rule",
    "verify_adaptive_cnot",
    "adaptive_cnot_gadget",
    "HADAMARD",
    "ContractionTooLarge",
]

TWO_PI = 2.0 * math.pi
PHASE_TOL = 1e-12

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128)

MAX_FRONTIER = 24


class ContractionTooLarge(RuntimeError):
    pass


def canonical_phase(phase: float) -> float:
    p = phase % TWO_PI
    if p > TWO_PI - PHASE_TOL:
        p = 0.0
    return p


def phase_is(phase: float, value: float, tol: float = PHASE_TOL) -> bool:
    return abs(canonical_phase(phase - value)) < tol or abs(canonical_phase(phase - value) - TWO_PI) < tol


def display_phase(phase: float) -> float:
    """Snap near-multiples of pi/2 for display; never used in arithmetic."""
    p = canonical_phase(phase)
    snapped = round(p / (math.pi / 2)) * (math.pi / 2)
    return canonical_phase(snapped) if abs(p - snapped) < 1e-12 else p


@dataclass
class Spider:
    kind: str  # "Z" | "X"
    phase: float

    def __post_init__(self) -> None:
        if self.kind not in ("Z", "X"):
            raise ValueError(f"spider kind must be Z or X, got {self.kind!r}")
        self.phase = canonical_phase(self.phase)


@dataclass
class ZxDiagram:
    """Open graph of spiders with plain/Hadamard edges and ordered boundaries.

    Boundary legs share the id space with spiders but carry no tensor; each
    must have degree exactly one.  Edges form a multiset and may include
    transient self-loops during rewriting.
    """

    nodes: dict[int, Spider] = field(default_factory=dict)
    edges: list[list] = field(default_factory=list)  # [a, b, hadamard]
    inputs: list[int] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    _next_id: int = 0

    # -------------------------------------------------------- construction

    def _fresh(self) -> int:
        i = self._next_id
        self._next_id = i + 1
        return i

    def add_spider(self, kind: str, phase: float = 0.0) -> int:
        i = self._fresh()
        self.nodes[i] = Spider(kind, phase)
        return i

    def add_input(self) -> int:
        i = self._fresh()
        self.inputs.append(i)
        return i

    def add_output(self) -> int:
        i = self._fresh()
        self.outputs.append(i)
        return i

    def add_edge(self, a: int, b: int, hadamard: bool = False) -> None:
        for x in (a, b):
            if x not in self.nodes and x not in self.inputs and x not in self.outputs:
                raise KeyError(f"unknown id {x}")
        self.edges.append([a, b, bool(hadamard)])

    # ------------------------------------------------------------- queries

    @property
    def boundaries(self) -> list[int]:
        return self.inputs + self.outputs

    def is_boundary(self, i: int) -> bool:
        return i in self.inputs or i in self.outputs

    def incident(self, i: int) -> list[int]:
        """Indices of edges touching i; self-loops appear twice."""
        out = []
        for k, (a, b, _h) in enumerate(self.edges):
            if a == i:
                out.append(k)
            if b == i:
                out.append(k)
        return out

    def degree(self, i: int) -> int:
        return len(self.incident(i))

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b, _h in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out

    def validate(self) -> None:
        for leg in self.boundaries:
            if self.degree(leg) != 1:
                raise ValueError(f"boundary {leg} has degree {self.degree(leg)}, want 1")
        for a, b, _h in self.edges:
            for x in (a, b):
                if x not in self.nodes and not self.is_boundary(x):
                    raise ValueError(f"edge endpoint {x} is neither spider nor boundary")

    def copy(self) -> ZxDiagram:
        d = ZxDiagram(
            nodes={i: Spider(s.kind, s.phase) for i, s in self.nodes.items()},
            edges=[list(e) for e in self.edges],
            inputs=list(self.inputs),
            outputs=list(self.outputs),
        )
        d._next_id = self._next_id
        return d

    # --------------------------------------------------------------- json

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": i, "kind": s.kind, "phase": round(display_phase(s.phase), 12)}
                for i, s in sorted(self.nodes.items())
            ],
            "edges": [{"a": a, "b": b, "h": bool(h)} for a, b, h in self.edges],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_json(cls, obj: dict) -> ZxDiagram:
        d = cls()
        for nd in obj["nodes"]:
            d.nodes[int(nd["id"])] = Spider(nd["kind"], float(nd["phase"]))
        d.inputs = [int(i) for i in obj["inputs"]]
        d.outputs = [int(i) for i in obj["outputs"]]
        for e in obj["edges"]:
            d.edges.append([int(e["a"]), int(e["b"]), bool(e["h"])])
        d._next_id = max([*d.nodes, *d.inputs, *d.outputs], default=-1) + 1
        d.validate()
        return d

    def to_dot(self, comment: str | None = None) -> str:
        lines = ["graph zx {"]
        if comment:
            lines.append(f"  // {comment}")
        for i, s in sorted(self.nodes.items()):
            color = "green" if s.kind == "Z" else "red"
            label = f"{s.kind}({display_phase(s.phase):.4g})"
            lines.append(
                f'  n{i} [label="{label}", shape=ellipse, style=filled, fillcolor={color}];'
            )
        for leg in self.inputs:
            lines.append(f'  n{leg} [label="in", shape=point];')
        for leg in self.outputs:
            lines.append(f'  n{leg} [label="out", shape=point];')
        for a, b, h in self.edges:
            style = ' [style=dashed, color=blue]' if h else ""
            lines.append(f"  n{a} -- n{b}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# -------------------------------------------------------------- evaluation


def _apply_to_axis(t: np.ndarray, m: np.ndarray, axis: int) -> np.ndarray:
    moved = np.tensordot(t, m, axes=([axis], [1]))
    return np.moveaxis(moved, -1, axis)


def _spider_tensor(spider: Spider, degree: int) -> np.ndarray:
    if degree == 0:
        return np.array(1.0 + cmath.exp(1j * spider.phase), dtype=np.complex128)
    t = np.zeros((2,) * degree, dtype=np.complex128)
    t[(0,) * degree] = 1.0
    t[(1,) * degree] = cmath.exp(1j * spider.phase)
    if spider.kind == "X":
        for ax in range(degree):
            t = _apply_to_axis(t, HADAMARD, ax)
    return t


def eval_tensor(d: ZxDiagram, max_frontier: int = MAX_FRONTIER) -> np.ndarray:
    """Contract the diagram to a dense tensor, axes ordered inputs then outputs.

    Raises ContractionTooLarge when any intermediate would exceed
    max_frontier open binary axes.
    """
    d.validate()
    if len(d.boundaries) > max_frontier:
        raise ContractionTooLarge(f"{len(d.boundaries)} boundary legs exceed {max_frontier}")

    boundary_label = {leg: ("b", leg) for leg in d.boundaries}
    pieces: list[tuple[np.ndarray, list]] = []

    for i, spider in d.nodes.items():
        slots = d.incident(i)
        labels: list = []
        absorb_h: list[bool] = []
        seen_edges: set[int] = set()
        for e in slots:
            a, b, h = d.edges[e]
            other = b if a == i else a
            if a == b == i:  # self-loop: both slots belong to this spider
                labels.append(("e", e, len([l for l in labels if l[:2] == ("e", e)])))
                absorb_h.append(h and e not in seen_edges)
                seen_edges.add(e)
                continue
            if other in boundary_label:
                labels.append(boundary_label[other])
            else:
                labels.append(("e", e, 0))
            # absorb the Hadamard on the endpoint listed first, or on the
            # spider side when the other endpoint is a boundary
            first_slot = d.edges[e][0] == i or other in boundary_label
            absorb_h.append(h and first_slot and e not in seen_edges)
            seen_edges.add(e)
        t = _spider_tensor(spider, len(labels))
        for ax, do_h in enumerate(absorb_h):
            if do_h:
                t = _apply_to_axis(t, HADAMARD, ax)
        # trace out self-loop axis pairs
        while True:
            dup = None
            for k in range(len(labels)):
                for m in range(k + 1, len(labels)):
                    if labels[k][:2] == labels[m][:2] and labels[k][0] == "e":
                        dup = (k, m)
                        break
                if dup:
                    break
            if not dup:
                break
            k, m = dup
            t = np.trace(t, axis1=k, axis2=m)
            labels = [l for idx, l in enumerate(labels) if idx not in (k, m)]
        pieces.append((t, [l[:2] for l in labels]))

    for e, (a, b, h) in enumerate(d.edges):
        if a in boundary_label and b in boundary_label:
            m = HADAMARD if h else np.eye(2, dtype=np.complex128)
            pieces.append((m, [boundary_label[a], boundary_label[b]]))

    if not pieces:
        return np.array(1.0, dtype=np.complex128)

    acc, acc_labels = pieces.pop(0)
    while pieces:
        best, best_shared = None, -1
        for idx, (_t, labels) in enumerate(pieces):
            shared = len(set(acc_labels) & set(labels))
            if shared > best_shared:
                best, best_shared = idx, shared
        t, labels = pieces.pop(best)
        acc, acc_labels = _pair_contract(acc, acc_labels, t, labels, max_frontier)

    label_order = [("b", leg) for leg in d.inputs + d.outputs]
    if set(acc_labels) != set(label_order):
        raise AssertionError("contraction lost track of boundary legs")
    perm = [acc_labels.index(l) for l in label_order]
    return np.transpose(acc, perm) if perm else acc


def _pair_contract(a, a_labels, b, b_labels, max_frontier):
    shared = [l for l in a_labels if l in b_labels]
    out_labels = [l for l in a_labels if l not in shared] + [l for l in b_labels if l not in shared]
    if len(out_labels) > max_frontier:
        raise ContractionTooLarge(f"contraction frontier {len(out_labels)} exceeds {max_frontier}")
    mapping: dict = {}
    for l in a_labels + b_labels:
        mapping.setdefault(l, len(mapping))
    result = np.einsum(
        a,
        [mapping[l] for l in a_labels],
        b,
        [mapping[l] for l in b_labels],
        [mapping[l] for l in out_labels],
    )
    return result, out_labels


def proportionality_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Relative residual of the best a = lambda*b fit, lambda from b's peak entry."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    amax, bmax = np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0)
    if amax == 0.0 and bmax == 0.0:
        return 0.0
    if amax == 0.0 or bmax == 0.0:
        return math.inf
    idx = np.unravel_index(int(np.abs(b).argmax()), b.shape) if b.ndim else ()
    lam = a[idx] / b[idx]
    if lam == 0:
        return math.inf
    scale = max(amax, abs(lam) * bmax)
    return float(np.abs(a - lam * b).max() / scale)


def proportional(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff a = lambda*b entrywise for some nonzero lambda, within tol."""
    return proportionality_residual(a, b) <= tol


# ---------------------------------------------------------------- rewrites


def fuse_spiders(d: ZxDiagram, edge_index: int) -> ZxDiagram:
    """Merge the two same-kind spiders joined by a plain edge, adding phases.

    Parallel plain edges to the partner collapse; a parallel Hadamard edge
    becomes a self-loop, which adds pi to the phase (pairs cancel).
    """
    a, b, h = d.edges[edge_index]
    if h:
        raise ValueError("fusion needs a plain edge")
    if a == b:
        raise ValueError("cannot fuse a self-loop")
    if a not in d.nodes or b not in d.nodes:
        raise ValueError("fusion endpoints must be spiders")
    if d.nodes[a].kind != d.nodes[b].kind:
        raise ValueError("fusion needs same-kind spiders")
    out = d.copy()
    keep, drop = a, b
    out.nodes[keep].phase = canonical_phase(out.nodes[keep].phase + out.nodes[drop].phase)
    del out.nodes[drop]
    del out.edges[edge_index]
    for e in out.edges:
        if e[0] == drop:
            e[0] = keep
        if e[1] == drop:
            e[1] = keep
    _cleanup_self_loops(out, keep)
    return out


def _cleanup_self_loops(d: ZxDiagram, node: int) -> None:
    loops = [k for k, (a, b, _h) in enumerate(d.edges) if a == node and b == node]
    extra_pi = sum(1 for k in loops if d.edges[k][2])
    for k in reversed(loops):
        del d.edges[k]
    if extra_pi % 2:
        d.nodes[node].phase = canonical_phase(d.nodes[node].phase + math.pi)


def cancel_parallel_hadamard_pairs(d: ZxDiagram, a: int, b: int) -> ZxDiagram:
    """Drop Hadamard edges between two spiders pairwise (mod-2 reduction)."""
    if a not in d.nodes or b not in d.nodes or a == b:
        raise ValueError("needs two distinct spiders")
    out = d.copy()
    par = [k for k, (x, y, h) in enumerate(out.edges) if h and {x, y} == {a, b}]
    for k in reversed(par[: len(par) - (len(par) % 2)]):
        del out.edges[k]
    return out


def color_change(d: ZxDiagram, node: int) -> ZxDiagram:
    """Toggle a spider's kind and the plain/Hadamard flag of its edges."""
    if node not in d.nodes:
        raise ValueError(f"{node} is not a spider")
    out = d.copy()
    s = out.nodes[node]
    s.kind = "X" if s.kind == "Z" else "Z"
    for e in out.edges:
        touches = (e[0] == node) + (e[1] == node)
        if touches == 1:
            e[2] = not e[2]
        # self-loops toggle twice: unchanged
    return out


def remove_identity(d: ZxDiagram, node: int) -> ZxDiagram:
    """Delete a phase-0 degree-2 spider whose edges are both Hadamard (or
    both plain); the neighbors get joined by a plain edge."""
    if node not in d.nodes:
        raise ValueError(f"{node} is not a spider")
    if not phase_is(d.nodes[node].phase, 0.0):
        raise ValueError("identity removal needs phase 0")
    slots = d.incident(node)
    if len(slots) != 2:
        raise ValueError(f"identity removal needs degree 2, got {len(slots)}")
    e1, e2 = slots
    if e1 == e2:
        raise ValueError("cannot remove a self-looped spider")
    h1, h2 = d.edges[e1][2], d.edges[e2][2]
    if h1 != h2:
        raise ValueError("edges must be both Hadamard or both plain")
    n1 = d.edges[e1][0] if d.edges[e1][1] == node else d.edges[e1][1]
    n2 = d.edges[e2][0] if d.edges[e2][1] == node else d.edges[e2][1]
    out = d.copy()
    for k in sorted((e1, e2), reverse=True):
        del out.edges[k]
    del out.nodes[node]
    out.add_edge(n1, n2, hadamard=False)
    return out


def copy_rule(d: ZxDiagram, state_node: int) -> ZxDiagram:
    """Push a phase-0 X state through a phase-0 Z spider, deleting the spider
    and emitting a fresh X(0) state onto each of its other legs."""
    if state_node not in d.nodes:
        raise ValueError(f"{state_node} is not a spider")
    s = d.nodes[state_node]
    if s.kind != "X" or not phase_is(s.phase, 0.0):
        raise ValueError("copy rule needs a phase-0 X state")
    slots = d.incident(state_node)
    if len(slots) != 1:
        raise ValueError("copy rule needs a degree-1 state")
    e = slots[0]
    a, b, h = d.edges[e]
    if h:
        raise ValueError("copy rule needs a plain attachment")
    z = b if a == state_node else a
    if z not in d.nodes or d.nodes[z].kind != "Z":
        raise ValueError("copy rule target must be a Z spider")
    if not phase_is(d.nodes[z].phase, 0.0):
        raise ValueError("copy rule target must have phase 0")
    out = d.copy()
    del out.edges[e]
    del out.nodes[state_node]
    retargeted = [k for k, (x, y, _h) in enumerate(out.edges) if x == z or y == z]
    for k in retargeted:
        if out.edges[k][0] == z and out.edges[k][1] == z:
            raise ValueError("copy rule target may not carry self-loops")
        fresh = out.add_spider("X", 0.0)
        if out.edges[k][0] == z:
            out.edges[k][0] = fresh
        else:
            out.edges[k][1] = fresh
    del out.nodes[z]
    return out


# -------------------------------------------------- adaptive CNOT gadget


def adaptive_cnot_gadget(on: bool) -> ZxDiagram:
    """The switchable-CNOT fragment: two wires whose line spiders are
    Hadamard-linked through a phase-0 hub, the hub terminated by a Z(pi/2)
    effect (gate on) or an X(0) effect (gate off)."""
    d = ZxDiagram()
    in_t, in_b = d.add_input(), d.add_input()
    out_t, out_b = d.add_output(), d.add_output()
    top = d.add_spider("Z", 0.0)
    bot = d.add_spider("Z", 0.0)
    hub = d.add_spider("Z", 0.0)
    term = d.add_spider("Z", math.pi / 2) if on else d.add_spider("X", 0.0)
    d.add_edge(in_t, top)
    d.add_edge(top, out_t)
    d.add_edge(in_b, bot)
    d.add_edge(bot, out_b)
    d.add_edge(top, hub, hadamard=True)
    d.add_edge(hub, bot, hadamard=True)
    d.add_edge(hub, term)
    return d


def _operator_tensor(m: np.ndarray, qubits: int) -> np.ndarray:
    """Matrix [out, in] -> tensor with axes [in..., out...], one per wire."""
    t = m.reshape((2,) * (2 * qubits))
    out_axes = list(range(qubits))
    in_axes = list(range(qubits, 2 * qubits))
    return np.transpose(t, in_axes + out_axes)


def verify_adaptive_cnot(setting: str, tol: float = 1e-9) -> tuple[bool, float]:
    """Check the gadget against its closed form by tensor proportionality.

    "cnot_on": the Z(pi/2) effect yields the CNOT conjugated by Hadamards on
    the target wire with a -pi/2 phase correction trailing each wire.
    "cnot_off": the X(0) effect disconnects the wires.
    """
    if setting not in ("cnot_on", "cnot_off"):
        raise ValueError("setting must be 'cnot_on' or 'cnot_off'")
    on = setting == "cnot_on"
    got = eval_tensor(adaptive_cnot_gadget(on))
    if on:
        cnot = np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
        )
        h_target = np.kron(np.eye(2), HADAMARD)
        corr = np.kron(np.diag([1, np.exp(-1j * math.pi / 2)]),
                       np.diag([1, np.exp(-1j * math.pi / 2)]))
        ref = corr @ h_target @ cnot @ h_target
    else:
        ref = np.eye(4, dtype=np.complex128)
    residual = proportionality_residual(got, _operator_tensor(ref, 2))
    return residual <= tol, residual
