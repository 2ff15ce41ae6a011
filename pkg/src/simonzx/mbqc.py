"""Circuit-to-cluster compilation: raw ZX translation of the switchable
Simon oracle, the fixed simplification pipeline to graph-like (MBQC) form,
measurement-pattern extraction, and post-selected pattern simulation.

Structure of the raw translation for n working / n auxiliary qubits:

* working line j:  |+> state - site(j,1) - ... - site(j,n) =H= output
* auxiliary line k: |0> state =H= site(1,k) - ... - site(n,k) =H= flip(k) - output
* per CNOT slot (j,k): a phase-0 hub Hadamard-linked to site(j,k) on the
  working line and site(j,k) on the auxiliary line, terminated by the
  adaptive node that switches the gate.

Corrective sites absorb +pi/2 whenever their slot is on, cancelling the
-pi/2 phases the gadget identity leaves on both wires; flip nodes carry pi
exactly when the X gate is present.  Working output legs are Hadamard
edges: the compiled form lives in the x-measurement frame, so the final
readout is the z-basis contraction of the output boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .bits import BitString
from .synth import GateList
from .zx import (
    ZxDiagram,
    color_change,
    eval_tensor,
    fuse_spiders,
    phase_is,
    proportionality_residual,
    remove_identity,
)

__all__ = [
    "Slot",
    "OracleSettings",
    "AdaptiveDiagram",
    "CompiledDiagram",
    "MeasurementPattern",
    "build_raw_translation",
    "instantiate",
    "simplify_to_mbqc",
    "simplify_adaptive",
    "extract_pattern",
    "pattern_to_diagram",
    "simulate_pattern",
    "mbqc_state_tensor",
    "mbqc_outcome_distribution",
    "circuit_to_zx",
    "PipelineStuck",
    "MAX_PATTERN_QUBITS",
]

Slot = tuple[int, int]  # (control j, target k), both 1-based

HALF_PI = math.pi / 2

MAX_PATTERN_QUBITS = 24


class PipelineStuck(RuntimeError):
    """The fixed simplification pipeline could not reach graph-like form."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage!r}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class OracleSettings:
    """Which CNOT slots and which auxiliary X flips are switched on."""

    n: int
    cnot_on: frozenset[Slot]
    x_flip: frozenset[int]

    def __post_init__(self) -> None:
        for j, k in self.cnot_on:
            if not (1 <= j <= self.n and 1 <= k <= self.n):
                raise ValueError(f"slot {(j, k)} out of range for n={self.n}")
        for k in self.x_flip:
            if not 1 <= k <= self.n:
                raise ValueError(f"flip {k} out of range for n={self.n}")

    @classmethod
    def from_gates(cls, gl: GateList) -> OracleSettings:
        cnots = frozenset((g.control, g.target) for g in gl if g.kind == "cnot")
        flips = frozenset(g.target for g in gl if g.kind == "x")
        return cls(gl.n, cnots, flips)

    @classmethod
    def all_off(cls, n: int) -> OracleSettings:
        return cls(n, frozenset(), frozenset())

    def on(self, slot: Slot) -> bool:
        return slot in self.cnot_on

    def flipped(self, k: int) -> bool:
        return k in self.x_flip


@dataclass
class AdaptiveDiagram:
    """A switchable oracle diagram plus the bookkeeping for its knobs.

    adaptive_nodes maps each CNOT slot to the node whose terminal effect
    switches it; flip_nodes maps each auxiliary index to its X-flip node;
    corrective_sites maps each slot to the (working, auxiliary) spiders
    that receive +pi/2 when the slot is on.  Output boundary ids are split
    into working and auxiliary halves.
    """

    n: int
    base: ZxDiagram
    adaptive_nodes: dict[Slot, int]
    flip_nodes: dict[int, int]
    corrective_sites: dict[Slot, tuple[int, int]]
    working_outputs: list[int]
    aux_outputs: list[int]

    def validate(self) -> None:
        assert len(self.adaptive_nodes) == self.n * self.n
        assert len(self.flip_nodes) == self.n


def build_raw_translation(n: int) -> AdaptiveDiagram:
    """Generalized raw translation of the n-qubit switchable Simon oracle."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = ZxDiagram()
    w_site: dict[Slot, int] = {}
    a_site: dict[Slot, int] = {}
    hubs: dict[Slot, int] = {}
    grays: dict[Slot, int] = {}
    flips: dict[int, int] = {}
    w_out: list[int] = []
    a_out: list[int] = []

    for j in range(1, n + 1):
        init = d.add_spider("Z", 0.0)  # |+>
        prev = init
        for k in range(1, n + 1):
            site = d.add_spider("Z", 0.0)
            w_site[(j, k)] = site
            d.add_edge(prev, site)
            prev = site
        out = d.add_output()
        d.add_edge(prev, out, hadamard=True)
        w_out.append(out)

    for k in range(1, n + 1):
        init = d.add_spider("X", 0.0)  # |0>
        prev, had = init, True
        for j in range(1, n + 1):
            site = d.add_spider("Z", 0.0)
            a_site[(j, k)] = site
            d.add_edge(prev, site, hadamard=had)
            prev, had = site, False
        flip = d.add_spider("X", 0.0)
        flips[k] = flip
        d.add_edge(prev, flip, hadamard=True)
        out = d.add_output()
        d.add_edge(flip, out)
        a_out.append(out)

    for j in range(1, n + 1):
        for k in range(1, n + 1):
            hub = d.add_spider("Z", 0.0)
            gray = d.add_spider("Z", 0.0)
            hubs[(j, k)] = hub
            grays[(j, k)] = gray
            d.add_edge(w_site[(j, k)], hub, hadamard=True)
            d.add_edge(hub, a_site[(j, k)], hadamard=True)
            d.add_edge(hub, gray)

    sites = {slot: (w_site[slot], a_site[slot]) for slot in grays}
    adaptive = AdaptiveDiagram(n, d, grays, flips, sites, w_out, a_out)
    adaptive.validate()
    return adaptive


def instantiate(a: AdaptiveDiagram, settings: OracleSettings) -> ZxDiagram:
    """Fix every knob: adaptive nodes become Z(pi/2) (on) or X(0) (off)
    terminal effects, corrective sites gain pi/2 per on slot, flip nodes
    take phase pi when the X gate is present."""
    if settings.n != a.n:
        raise ValueError(f"settings are for n={settings.n}, diagram has n={a.n}")
    d = a.base.copy()
    for slot, gray in a.adaptive_nodes.items():
        if settings.on(slot):
            d.nodes[gray].kind = "Z"
            d.nodes[gray].phase = HALF_PI
            wsite, asite = a.corrective_sites[slot]
            for site in (wsite, asite):
                d.nodes[site].phase = (d.nodes[site].phase + HALF_PI) % (2 * math.pi)
        else:
            d.nodes[gray].kind = "X"
            d.nodes[gray].phase = 0.0
    for k, flip in a.flip_nodes.items():
        d.nodes[flip].phase = math.pi if settings.flipped(k) else 0.0
    return d


# ------------------------------------------------------------ the pipeline


@dataclass
class CompiledDiagram:
    """Pipeline output: the graph-like diagram plus per-stage snapshots."""

    diagram: ZxDiagram
    stages: list[tuple[str, ZxDiagram]]
    n: int
    tags: dict[int, list[tuple]] = field(default_factory=dict)

    def nodes_tagged(self, name: str) -> dict:
        found = {}
        for node, tags in self.tags.items():
            for t in tags:
                if t[0] == name:
                    found[t[1]] = node
        return found

    @property
    def spider_count(self) -> int:
        return len(self.diagram.nodes)

    def stage_residuals(self) -> list[tuple[str, float]]:
        """Tensor proportionality of consecutive same-shape pipeline stages."""
        out = []
        prev_name, prev = self.stages[0]
        prev_t = eval_tensor(prev)
        for name, diag in self.stages[1:]:
            t = eval_tensor(diag)
            if t.shape == prev_t.shape:
                out.append((f"{prev_name}->{name}", proportionality_residual(t, prev_t)))
            prev_name, prev_t = name, t
        return out


def _fuse_all(d: ZxDiagram, tags: dict[int, list]) -> ZxDiagram:
    while True:
        idx = None
        for k, (a, b, h) in enumerate(d.edges):
            if h or a == b:
                continue
            if a in d.nodes and b in d.nodes and d.nodes[a].kind == d.nodes[b].kind:
                idx = k
                break
        if idx is None:
            return d
        keep, drop = d.edges[idx][0], d.edges[idx][1]
        d = fuse_spiders(d, idx)
        if drop in tags:
            tags.setdefault(keep, []).extend(tags.pop(drop))
        _drop_hadamard_pairs(d, keep)


def _drop_hadamard_pairs(d: ZxDiagram, node: int) -> None:
    by_neighbor: dict[int, list[int]] = {}
    for k, (a, b, h) in enumerate(d.edges):
        if h and node in (a, b) and a != b:
            other = b if a == node else a
            if other in d.nodes:
                by_neighbor.setdefault(other, []).append(k)
    doomed = []
    for ks in by_neighbor.values():
        doomed.extend(ks[: len(ks) - (len(ks) % 2)])
    for k in sorted(doomed, reverse=True):
        del d.edges[k]


def _elide_identities(d: ZxDiagram, tags: dict[int, list]) -> ZxDiagram:
    while True:
        target = None
        for node, spider in d.nodes.items():
            if node in tags or not phase_is(spider.phase, 0.0):
                continue
            slots = d.incident(node)
            if len(slots) != 2 or slots[0] == slots[1]:
                continue
            if d.edges[slots[0]][2] != d.edges[slots[1]][2]:
                continue
            if any(d.is_boundary(nb) for nb in d.neighbors(node)):
                continue
            target = node
            break
        if target is None:
            return d
        d = remove_identity(d, target)


def _pipeline(
    d: ZxDiagram,
    aux_outputs: Sequence[int],
    keep_aux: bool,
    tags: dict[int, list] | None = None,
) -> CompiledDiagram:
    tags = dict(tags or {})
    n_work = len(d.outputs) - len(aux_outputs)
    stages: list[tuple[str, ZxDiagram]] = [("input", d.copy())]

    # 1. annihilate auxiliary outputs with the fusing X(0) plug
    d = d.copy()
    if not keep_aux:
        for leg in aux_outputs:
            slots = d.incident(leg)
            if len(slots) != 1:
                raise PipelineStuck("plug", f"aux output {leg} has degree {len(slots)}")
            plug = d.add_spider("X", 0.0)
            edge = d.edges[slots[0]]
            edge[0 if edge[0] == leg else 1] = plug
            d.outputs.remove(leg)
    stages.append(("plug", d.copy()))

    # 2. color-change every X spider to Z
    for node in [i for i, s in d.nodes.items() if s.kind == "X"]:
        d = color_change(d, node)
    stages.append(("color", d.copy()))

    # 3. fuse plain edges to exhaustion (parallel Hadamard pairs cancel)
    d = _fuse_all(d, tags)
    stages.append(("fuse", d.copy()))

    # 4. drop redundant phase-0 degree-2 spiders
    d = _elide_identities(d, tags)
    stages.append(("elide", d.copy()))

    # 5. give every Hadamard output leg a plain readout spider
    for leg in list(d.outputs):
        slots = d.incident(leg)
        if len(slots) != 1:
            raise PipelineStuck("readout", f"output {leg} has degree {len(slots)}")
        edge = d.edges[slots[0]]
        if not edge[2]:
            continue
        readout = d.add_spider("Z", 0.0)
        edge[0 if edge[0] == leg else 1] = readout
        edge[2] = True
        d.add_edge(readout, leg, hadamard=False)
    stages.append(("readout", d.copy()))

    _assert_graph_like(d)
    return CompiledDiagram(d, stages, n_work, tags)


def _assert_graph_like(d: ZxDiagram) -> None:
    for i, s in d.nodes.items():
        if s.kind != "Z":
            raise PipelineStuck("final", f"node {i} is still an X spider")
    for a, b, h in d.edges:
        internal = a in d.nodes and b in d.nodes
        if internal and not h:
            raise PipelineStuck("final", f"plain internal edge {a}-{b} survived")
        if a == b:
            raise PipelineStuck("final", f"self-loop on {a} survived")


def simplify_to_mbqc(
    d: ZxDiagram, aux_outputs: Sequence[int], keep_aux: bool = False
) -> CompiledDiagram:
    """Run the fixed pipeline on an instantiated raw translation.

    With keep_aux the auxiliary outputs survive as readout legs instead of
    being annihilated; that variant backs the sampling-mode comparison
    against the circuit simulator.
    """
    return _pipeline(d, aux_outputs, keep_aux)


def simplify_adaptive(a: AdaptiveDiagram, keep_aux: bool = False) -> tuple[CompiledDiagram, AdaptiveDiagram]:
    """Pipeline over the symbolic diagram; knob registries follow the fusions.

    Adaptive terminals fuse into their gadget hubs (the hub becomes the
    adaptive qubit), flips fuse into the auxiliary line spiders.
    """
    tags: dict[int, list] = {}
    for slot, gray in a.adaptive_nodes.items():
        tags.setdefault(gray, []).append(("adaptive", slot))
    for k, flip in a.flip_nodes.items():
        tags.setdefault(flip, []).append(("flip", k))
    for slot, (wsite, asite) in a.corrective_sites.items():
        tags.setdefault(wsite, []).append(("wsite", slot))
        tags.setdefault(asite, []).append(("asite", slot))
    compiled = _pipeline(a.base, a.aux_outputs, keep_aux, tags)
    grays = compiled.nodes_tagged("adaptive")
    flips = compiled.nodes_tagged("flip")
    wsites = compiled.nodes_tagged("wsite")
    asites = compiled.nodes_tagged("asite")
    simplified = AdaptiveDiagram(
        a.n,
        compiled.diagram,
        {slot: grays[slot] for slot in a.adaptive_nodes},
        {k: flips[k] for k in a.flip_nodes},
        {slot: (wsites[slot], asites[slot]) for slot in a.corrective_sites},
        list(compiled.diagram.outputs[: a.n]),
        list(compiled.diagram.outputs[a.n :]),
    )
    return compiled, simplified


# ----------------------------------------------------------------- pattern


@dataclass
class MeasurementPattern:
    """Cluster graph plus per-node measurement angles and output designation.

    planes: "xy" for plain angle measurements; adaptive hubs carry
    ("adaptive", slot) entries in `slots` and are measured either at pi/2
    in the x-y plane (slot on) or with the X-node effect <0| (slot off).
    """

    nodes: list[int]
    edges: list[tuple[int, int]]
    angles: dict[int, float]
    planes: dict[int, str]
    outputs: list[int]
    slots: dict[Slot, int] = field(default_factory=dict)
    flips: dict[int, int] = field(default_factory=dict)
    corrective_sites: dict[Slot, tuple[int, int]] = field(default_factory=dict)

    def validate(self) -> None:
        measured = set(self.nodes) - set(self.outputs)
        if set(self.angles) != measured:
            raise ValueError("every non-output node needs exactly one angle")


def extract_pattern(compiled: CompiledDiagram) -> MeasurementPattern:
    """Read a graph-like diagram as cluster qubits + measurement angles."""
    d = compiled.diagram
    if d.inputs:
        raise ValueError("pattern extraction expects a state (no input legs)")
    _assert_graph_like(d)
    outputs = []
    for leg in d.outputs:
        nb = d.neighbors(leg)[0]
        if nb not in d.nodes:
            raise ValueError(f"output leg {leg} attaches to another boundary")
        if not phase_is(d.nodes[nb].phase, 0.0):
            raise ValueError(f"output spider {nb} carries a phase")
        outputs.append(nb)
    nodes = sorted(d.nodes)
    edges = [
        (a, b) for a, b, h in d.edges if a in d.nodes and b in d.nodes
    ]
    angles = {i: d.nodes[i].phase for i in nodes if i not in outputs}
    planes = {i: "xy" for i in angles}
    slots = compiled.nodes_tagged("adaptive")
    for slot, node in slots.items():
        planes[node] = "adaptive"
    flips = compiled.nodes_tagged("flip")
    wsites = compiled.nodes_tagged("wsite")
    asites = compiled.nodes_tagged("asite")
    sites = {slot: (wsites[slot], asites[slot]) for slot in wsites if slot in asites}
    pattern = MeasurementPattern(nodes, edges, angles, planes, outputs, slots, flips, sites)
    pattern.validate()
    return pattern


def pattern_to_diagram(p: MeasurementPattern) -> ZxDiagram:
    """Rebuild the graph-like diagram a concrete pattern denotes."""
    d = ZxDiagram()
    ids = {}
    for node in p.nodes:
        ids[node] = d.add_spider("Z", p.angles.get(node, 0.0))
    for a, b in p.edges:
        d.add_edge(ids[a], ids[b], hadamard=True)
    for node in p.outputs:
        leg = d.add_output()
        d.add_edge(ids[node], leg)
    return d


def simulate_pattern(
    p: MeasurementPattern,
    settings: OracleSettings | None = None,
    eager: bool = True,
    max_qubits: int = MAX_PATTERN_QUBITS,
) -> np.ndarray:
    """Build the cluster state and apply outcome-0 projectors.

    Each node is prepared as |+>, every edge becomes a controlled-Z, and a
    measured node is contracted against <0| + e^{i:angle}<1| (the X-node
    effect <0| for switched-off adaptive hubs).  With eager=True nodes are
    projected out as soon as all their edges exist, keeping the live
    register small; the result is identical.  Returns the unnormalized
    tensor over the outputs, axes in output order.
    """
    angles = dict(p.angles)
    if settings is not None:
        for slot, (wsite, asite) in p.corrective_sites.items():
            if settings.on(slot):
                angles[wsite] = angles.get(wsite, 0.0) + HALF_PI
                angles[asite] = angles.get(asite, 0.0) + HALF_PI
        for k, node in p.flips.items():
            if settings.flipped(k):
                angles[node] = angles.get(node, 0.0) + math.pi

    effects: dict[int, tuple[complex, complex]] = {}
    for node, angle in angles.items():
        if p.planes.get(node) == "adaptive":
            if settings is None:
                raise ValueError("adaptive pattern needs settings to simulate")
            slot = next(s for s, nd in p.slots.items() if nd == node)
            if settings.on(slot):
                effects[node] = (1.0, complex(np.exp(1j * (angle + HALF_PI))))
            else:
                effects[node] = (1.0, 0.0)  # X(0) effect, <0|
        else:
            effects[node] = (1.0, complex(np.exp(1j * angle)))

    pending = {node: 0 for node in p.nodes}
    for a, b in p.edges:
        pending[a] += 1
        pending[b] += 1

    live: list[int] = []
    amps = np.ones(1, dtype=np.complex128)

    def qubit_of(node: int) -> int:
        return live.index(node) + 1

    applied: set[int] = set()
    for node in p.nodes:
        if len(live) + 1 > max_qubits:
            raise ValueError(f"live cluster register would exceed {max_qubits} qubits")
        live.append(node)
        amps = np.repeat(amps, 2)  # new qubit in |+> at the least-significant slot
        for idx, (a, b) in enumerate(p.edges):
            if idx in applied:
                continue
            if node in (a, b):
                other = b if a == node else a
                if other in live:
                    kernels.apply_cz(amps, len(live), qubit_of(a), qubit_of(b))
                    applied.add(idx)
                    pending[a] -= 1
                    pending[b] -= 1
        if eager:
            for cand in [q for q in live if q in effects and pending[q] == 0]:
                c0, c1 = effects[cand]
                amps = kernels.apply_effect(amps, len(live), qubit_of(cand), c0, c1)
                live.remove(cand)
    if not eager:
        for node in p.nodes:
            if node in effects:
                c0, c1 = effects[node]
                amps = kernels.apply_effect(amps, len(live), qubit_of(node), c0, c1)
                live.remove(node)

    if set(live) != set(p.outputs):
        raise AssertionError("simulation left the wrong qubits alive")
    t = amps.reshape((2,) * len(live))
    perm = [live.index(o) for o in p.outputs]
    return np.transpose(t, perm) if perm else t


# ------------------------------------------------------------- high level


def mbqc_state_tensor(gl: GateList) -> np.ndarray:
    """Compile the oracle through the keep-aux pipeline and evaluate it:
    a (2,)*2n tensor with axes [working readouts..., auxiliary readouts...]."""
    raw = build_raw_translation(gl.n)
    inst = instantiate(raw, OracleSettings.from_gates(gl))
    compiled = simplify_to_mbqc(inst, raw.aux_outputs, keep_aux=True)
    return simulate_pattern(extract_pattern(compiled))


def mbqc_outcome_distribution(gl: GateList) -> dict[BitString, float]:
    """Working-register readout law of the post-selected pattern, auxiliary
    readouts marginalized (deferred measurement)."""
    t = mbqc_state_tensor(gl)
    n = gl.n
    probs = np.abs(t.reshape(1 << n, -1)) ** 2
    marg = probs.sum(axis=1)
    marg /= marg.sum()
    return {BitString.from_int(m, n): float(marg[m]) for m in range(1 << n)}


# --------------------------------------------------- circuit-to-ZX helper


def circuit_to_zx(q: int, ops: Sequence[tuple], initial: Sequence[str] | None = None) -> ZxDiagram:
    """Translate an {H, X, CNOT} circuit to a ZX diagram.

    initial entries are "zero" (X(0) state), "plus" (Z(0) state), or None
    for an open input leg; H gates become Hadamard edges on the wire, X a
    phase-pi X spider, CNOT the usual Z-X plain bridge.
    """
    d = ZxDiagram()
    front: list[int] = []
    pending_h = [False] * q
    for w in range(q):
        init = initial[w] if initial is not None else None
        if init is None:
            front.append(d.add_input())
        elif init == "zero":
            front.append(d.add_spider("X", 0.0))
        elif init == "plus":
            front.append(d.add_spider("Z", 0.0))
        else:
            raise ValueError(f"unsupported initial state {init!r}")

    def advance(w: int, node: int) -> None:
        d.add_edge(front[w], node, hadamard=pending_h[w])
        front[w] = node
        pending_h[w] = False

    for op in ops:
        if op[0] == "h":
            pending_h[op[1] - 1] ^= True
        elif op[0] == "x":
            advance(op[1] - 1, d.add_spider("X", math.pi))
        elif op[0] == "cnot":
            cw, tw = op[1] - 1, op[2] - 1
            cz_, tx = d.add_spider("Z", 0.0), d.add_spider("X", 0.0)
            advance(cw, cz_)
            advance(tw, tx)
            d.add_edge(cz_, tx)
        else:
            raise ValueError(f"unsupported op {op[0]!r}")
    for w in range(q):
        out = d.add_output()
        d.add_edge(front[w], out, hadamard=pending_h[w])
    return d
