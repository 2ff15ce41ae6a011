"""Deterministic factorization of a characteristic into a CNOT/X gate list.

Every gate characteristic has a distinct first nonzero bit (X(k) leads at
k-1, CNOT(j,k) at 2^(n-j)*n + k-1), so the gate set is an echelon basis of
a (n^2+n)-dimensional subspace of GF(2)^(n*2^n).  Scanning the target
characteristic left to right and XOR-ing off the leader gate at each
nonzero bit therefore terminates with an all-zero string exactly when the
function is affine over GF(2); the leftover residual is the obstruction
otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bits import (
    BitString,
    Characteristic,
    FunctionTable,
    Gate,
    characteristic_of_function,
    characteristic_of_gate,
)

__all__ = [
    "GateList",
    "Factorization",
    "gate_set",
    "leader_table",
    "factorize",
    "synthesize_oracle",
    "simulate_gates",
    "gate_list_table",
    "is_affine",
    "affine_table",
]


@dataclass(frozen=True)
class GateList:
    """Ordered CNOT/X gates on an n-qubit working/auxiliary register pair."""

    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        if len(set(self.gates)) != len(self.gates):
            # each gate is involutive over GF(2); duplicates would cancel
            raise ValueError("gate list contains duplicates")
        for g in self.gates:
            if not 1 <= g.target <= self.n:
                raise ValueError(f"{g} target out of range for n={self.n}")
            if g.kind == "cnot" and not 1 <= g.control <= self.n:
                raise ValueError(f"{g} control out of range for n={self.n}")

    def to_json(self) -> dict:
        gates = []
        for g in self.gates:
            if g.kind == "cnot":
                gates.append({"kind": "cnot", "control": g.control, "target": g.target})
            else:
                gates.append({"kind": "x", "target": g.target})
        return {"n": self.n, "gates": gates}

    @classmethod
    def from_json(cls, obj: dict) -> GateList:
        gates = []
        for g in obj["gates"]:
            if g["kind"] == "cnot":
                gates.append(Gate.cnot(int(g["control"]), int(g["target"])))
            elif g["kind"] == "x":
                gates.append(Gate.x(int(g["target"])))
            else:
                raise ValueError(f"unknown gate kind {g['kind']!r}")
        return cls(int(obj["n"]), tuple(gates))

    def __iter__(self):
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)


def gate_set(n: int) -> list[Gate]:
    """All n^2 CNOTs plus n X gates available to the oracle."""
    gates = [Gate.cnot(j, k) for j in range(1, n + 1) for k in range(1, n + 1)]
    gates += [Gate.x(k) for k in range(1, n + 1)]
    return gates


def leader_table(n: int) -> dict[int, Gate]:
    """Map each gate's first nonzero characteristic bit to that gate."""
    table: dict[int, Gate] = {}
    for g in gate_set(n):
        lead = characteristic_of_gate(g, n).first_nonzero()
        assert lead is not None
        if lead in table:
            raise AssertionError(f"leader collision at {lead}: {table[lead]} vs {g}")
        table[lead] = g
    return table


@dataclass(frozen=True)
class Factorization:
    """Outcome of the left-to-right scan; residual is all-zero on success."""

    gates: GateList
    residual: Characteristic

    @property
    def realizable(self) -> bool:
        return self.residual.is_zero()


def factorize(c: Characteristic) -> Factorization:
    """Factor a characteristic over the gate set by leading-bit elimination."""
    leaders = leader_table(c.n)
    work = list(c.bits.bits)
    chosen: list[Gate] = []
    for pos in range(len(work)):
        if not work[pos]:
            continue
        gate = leaders.get(pos)
        if gate is None:
            continue  # leaderless position; survives into the residual
        chosen.append(gate)
        for i, b in enumerate(characteristic_of_gate(gate, c.n).bits):
            work[i] ^= b
        assert work[pos] == 0
    residual = Characteristic(c.n, BitString(tuple(work)))
    return Factorization(GateList(c.n, tuple(chosen)), residual)


def synthesize_oracle(f: FunctionTable) -> Factorization:
    """Factor f's characteristic; realizable exactly when f is affine."""
    return factorize(characteristic_of_function(f))


def simulate_gates(gl: GateList, t: BitString) -> BitString:
    """Classical action of the oracle gates on working input t, aux starting at 0."""
    aux = [0] * gl.n
    for g in gl:
        if g.kind == "cnot":
            aux[g.target - 1] ^= t.bit(g.control)
        else:
            aux[g.target - 1] ^= 1
    return BitString(tuple(aux))


def gate_list_table(gl: GateList) -> FunctionTable:
    """Tabulate the classical simulation of a gate list on every input."""
    outs = tuple(
        simulate_gates(gl, BitString.from_int(t, gl.n)) for t in range(1 << gl.n)
    )
    return FunctionTable(gl.n, outs)


def is_affine(f: FunctionTable) -> bool:
    """Direct test of f(t1 ^ t2) = f(t1) ^ f(t2) ^ f(0) over all pairs."""
    f0 = f(0)
    size = 1 << f.n
    for a in range(size):
        fa = f(a)
        for b in range(size):
            lhs = f(a ^ b)
            rhs = fa ^ f(b) ^ f0
            if lhs != rhs:
                return False
    return True


def affine_table(matrix: list[list[int]], offset: BitString) -> FunctionTable:
    """Build the table of t -> A.t ^ c from a row-major GF(2) matrix A."""
    n = offset.n
    outs = []
    for t in range(1 << n):
        tb = BitString.from_int(t, n)
        row_bits = tuple(
            sum(matrix[r][c] & tb.bits[c] for c in range(n)) % 2 for r in range(n)
        )
        outs.append(BitString(row_bits) ^ offset)
    return FunctionTable(n, tuple(outs))
