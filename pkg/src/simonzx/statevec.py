"""Dense statevector simulation of Simon circuits and the full protocol.

Qubit 1 is the most-significant index bit.  A Simon circuit uses 2n qubits:
working register 1..n (prepared |+>), auxiliary register n+1..2n (prepared
|0>).  States are kept unnormalized (the calculus drops scalars);
probabilities divide by the total norm.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bits import BitString, FunctionTable, PeriodSolution, find_period, gf2_nullspace, gf2_rank
from .synth import Factorization, GateList, synthesize_oracle

__all__ = [
    "Circuit",
    "run_state",
    "working_outcome_distribution",
    "oracle_circuit",
    "oracle_state_tensor",
    "ProtocolResult",
    "run_simon_protocol",
]

MAX_QUBITS = 24  # desk scale; 2^24 complex amplitudes is the ceiling


@dataclass
class Circuit:
    """Gate list over q qubits with per-qubit initial states ("zero"/"plus")."""

    q: int
    initial: tuple[str, ...]
    ops: list[tuple] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.q > MAX_QUBITS:
            raise ValueError(f"q={self.q} exceeds the {MAX_QUBITS}-qubit cap")
        if len(self.initial) != self.q:
            raise ValueError("need one initial state per qubit")
        if any(s not in ("zero", "plus") for s in self.initial):
            raise ValueError("initial states must be 'zero' or 'plus'")

    def _check(self, *qubits: int) -> None:
        for i in qubits:
            if not 1 <= i <= self.q:
                raise IndexError(f"qubit {i} out of range [1, {self.q}]")

    def h(self, i: int) -> Circuit:
        self._check(i)
        self.ops.append(("h", i))
        return self

    def x(self, i: int) -> Circuit:
        self._check(i)
        self.ops.append(("x", i))
        return self

    def cnot(self, control: int, target: int) -> Circuit:
        self._check(control, target)
        self.ops.append(("cnot", control, target))
        return self


def run_state(c: Circuit) -> np.ndarray:
    """Apply initial states then ops in order; returns 2^q unnormalized amplitudes."""
    amps = np.ones(1, dtype=np.complex128)
    for s in c.initial:
        amps = np.kron(amps, np.array([1, 0] if s == "zero" else [1, 1], dtype=np.complex128))
    for op in c.ops:
        if op[0] == "h":
            kernels.apply_hadamard(amps, c.q, op[1])
        elif op[0] == "x":
            kernels.apply_pauli_x(amps, c.q, op[1])
        elif op[0] == "cnot":
            kernels.apply_cnot(amps, c.q, op[1], op[2])
        else:
            raise ValueError(f"unsupported op {op[0]!r}")
    return amps


def oracle_circuit(gl: GateList) -> Circuit:
    """The Simon circuit for an oracle gate list: |+>^n working, |0>^n aux."""
    n = gl.n
    c = Circuit(2 * n, ("plus",) * n + ("zero",) * n)
    for g in gl:
        if g.kind == "cnot":
            c.cnot(g.control, n + g.target)
        else:
            c.x(n + g.target)
    return c


def working_outcome_distribution(c: Circuit, n: int) -> dict[BitString, float]:
    """Exact x-basis outcome distribution of working qubits 1..n.

    Realized by appending a Hadamard to each working qubit and taking the
    z-basis marginal over the rest.
    """
    amps = run_state(c).copy()
    for i in range(1, n + 1):
        kernels.apply_hadamard(amps, c.q, i)
    probs = np.abs(amps.reshape(1 << n, -1)) ** 2
    marg = probs.sum(axis=1)
    marg /= marg.sum()
    return {BitString.from_int(m, n): float(marg[m]) for m in range(1 << n)}


def oracle_state_tensor(gl: GateList) -> np.ndarray:
    """Oracle output state with the working register rotated into its
    measurement frame (H on each working qubit), as a (2,)*2n tensor with
    axes [w1..wn, a1..an].

    This is the reference every compiled diagram is compared against: the
    z-diagonal of the working axes is exactly the x-basis outcome law.
    """
    n = gl.n
    c = oracle_circuit(gl)
    for i in range(1, n + 1):
        c.h(i)
    return run_state(c).reshape((2,) * (2 * n))


def distribution_from_state_tensor(t: np.ndarray, n: int) -> dict[BitString, float]:
    """Working-outcome law from a [w-axes, aux-axes] tensor, aux marginalized."""
    probs = np.abs(t.reshape(1 << n, -1)) ** 2
    marg = probs.sum(axis=1)
    marg /= marg.sum()
    return {BitString.from_int(m, n): float(marg[m]) for m in range(1 << n)}


@dataclass(frozen=True)
class ProtocolResult:
    kind: str  # "two-to-one" | "bijective" | "underdetermined"
    period: BitString | None
    rounds_used: int
    verified: bool
    seed: int


def run_simon_protocol(
    f: FunctionTable,
    rng_seed: int = 0,
    max_rounds: int = 200,
    distribution: dict[BitString, float] | None = None,
) -> ProtocolResult:
    """Sample working outcomes until n-1 independent equations pin the period.

    Sampling is inverse-CDF over the exact outcome distribution (computed
    from the synthesized oracle circuit unless one is supplied).  A sample
    is kept only when it raises the GF(2) rank; the candidate period is the
    unique nonzero nullspace vector, confirmed by the classical two-point
    check f(a) ?= f(a ^ s), which separates two-to-one from bijective.
    """
    synth = synthesize_oracle(f)
    if not synth.realizable:
        raise ValueError("function is not affine; no CNOT/X oracle exists")
    n = f.n
    if distribution is None:
        distribution = working_outcome_distribution(oracle_circuit(synth.gates), n)
    outcomes = sorted(distribution, key=BitString.to_int)
    weights = np.array([distribution[m] for m in outcomes], dtype=float)
    cdf = np.cumsum(weights / weights.sum())
    rng = np.random.default_rng(rng_seed)

    rows: list[BitString] = []
    rounds = 0
    while gf2_rank(rows) < n - 1 and rounds < max_rounds:
        rounds += 1
        m = outcomes[int(np.searchsorted(cdf, rng.random(), side="right"))]
        if m.is_zero():
            continue
        if gf2_rank(rows + [m]) > gf2_rank(rows):
            rows.append(m)

    if gf2_rank(rows) < n - 1:
        return ProtocolResult("underdetermined", None, rounds, False, rng_seed)

    candidates = [s for s in _nullspace_vectors(rows, n) if not s.is_zero()]
    assert len(candidates) == 1
    s = candidates[0]
    a1 = BitString.zeros(n)
    if f(a1) == f(a1 ^ s):
        kind, period = "two-to-one", s
    else:
        kind, period = "bijective", BitString.zeros(n)

    truth = find_period(f)
    verified = truth.kind == kind and truth.period == period
    return ProtocolResult(kind, period, rounds, verified, rng_seed)


def _nullspace_vectors(rows: list[BitString], n: int) -> list[BitString]:
    basis = gf2_nullspace(rows, n)
    vecs = [BitString.zeros(n)]
    for b in basis:
        vecs += [v ^ b for v in vecs]
    return vecs
