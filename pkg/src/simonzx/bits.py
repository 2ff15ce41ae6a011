"""Bit strings, GF(2) linear algebra, and characteristic encodings.

Conventions used throughout the package:

* Bit 1 is the leftmost, most-significant bit, so the integer value of a
  bit string reads off directly (``010`` -> 2) and inputs enumerate in
  increasing binary order.
* A function table stores the images of all 2^n inputs; its characteristic
  is the concatenation of those images, a string of n*2^n bits.  Gates get
  characteristics through their action on the all-zero function, and
  characteristics compose by XOR.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "BitString",
    "FunctionTable",
    "PeriodReport",
    "Characteristic",
    "Gate",
    "find_period",
    "characteristic_of_function",
    "characteristic_of_gate",
    "gf2_rank",
    "gf2_nullspace",
    "gf2_solve_period",
    "PeriodSolution",
]


@dataclass(frozen=True)
class BitString:
    """Fixed-length string of bits; bit 1 is the leftmost (most significant)."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not all(b in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0/1, got {self.bits}")

    @classmethod
    def from_str(cls, s: str) -> BitString:
        return cls(tuple(int(c) for c in s))

    @classmethod
    def from_int(cls, value: int, n: int) -> BitString:
        if not 0 <= value < (1 << n):
            raise ValueError(f"value {value} out of range for {n} bits")
        return cls(tuple((value >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> BitString:
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    def bit(self, i: int) -> int:
        """The i-th bit, 1-based from the left."""
        if not 1 <= i <= self.n:
            raise IndexError(f"bit index {i} out of range [1, {self.n}]")
        return self.bits[i - 1]

    def __xor__(self, other: BitString) -> BitString:
        if self.n != other.n:
            raise ValueError("length mismatch in xor")
        return BitString(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def dot(self, other: BitString) -> int:
        """Inner product modulo 2."""
        if self.n != other.n:
            raise ValueError("length mismatch in dot")
        return sum(a & b for a, b in zip(self.bits, other.bits)) % 2

    def to_int(self) -> int:
        v = 0
        for b in self.bits:
            v = (v << 1) | b
        return v

    def is_zero(self) -> bool:
        return not any(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __repr__(self) -> str:
        return f"BitString({self})"


@dataclass(frozen=True)
class FunctionTable:
    """Explicit map from n-bit inputs to n-bit outputs, inputs in increasing order."""

    n: int
    outputs: tuple[BitString, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.outputs) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} outputs, got {len(self.outputs)}")
        if any(w.n != self.n for w in self.outputs):
            raise ValueError("every output must have length n")

    @classmethod
    def from_strings(cls, outputs: Iterable[str]) -> FunctionTable:
        outs = tuple(BitString.from_str(s) for s in outputs)
        if not outs:
            raise ValueError("empty output list")
        return cls(outs[0].n, outs)

    @classmethod
    def from_json(cls, obj: dict) -> FunctionTable:
        table = cls(int(obj["n"]), tuple(BitString.from_str(s) for s in obj["outputs"]))
        return table

    def to_json(self) -> dict:
        return {"n": self.n, "outputs": [str(w) for w in self.outputs]}

    def __call__(self, t: BitString | int) -> BitString:
        idx = t if isinstance(t, int) else t.to_int()
        return self.outputs[idx]

    def inputs(self) -> list[BitString]:
        return [BitString.from_int(v, self.n) for v in range(1 << self.n)]


@dataclass(frozen=True)
class PeriodReport:
    """Result of the brute-force periodicity check.

    kind is "bijective", "two-to-one", or "invalid"; period is 0^n for a
    bijective table, the unique nonzero s for a two-to-one one, and None
    when the table satisfies no Simon promise.
    """

    kind: str
    period: BitString | None

    @property
    def is_periodic(self) -> bool:
        return self.kind in ("bijective", "two-to-one")


def find_period(f: FunctionTable) -> PeriodReport:
    """Classify a table as bijective / two-to-one with unique period / invalid."""
    groups: dict[int, list[int]] = {}
    for t in range(1 << f.n):
        groups.setdefault(f(t).to_int(), []).append(t)
    sizes = {len(g) for g in groups.values()}
    if sizes == {1}:
        return PeriodReport("bijective", BitString.zeros(f.n))
    if sizes == {2}:
        offsets = {g[0] ^ g[1] for g in groups.values()}
        if len(offsets) == 1:
            return PeriodReport("two-to-one", BitString.from_int(offsets.pop(), f.n))
    return PeriodReport("invalid", None)


@dataclass(frozen=True)
class Characteristic:
    """Length n*2^n bit string; block i (0-based) is the image of input i."""

    n: int
    bits: BitString

    def __post_init__(self) -> None:
        if self.bits.n != self.n << self.n:
            raise ValueError(
                f"characteristic for n={self.n} must have {self.n << self.n} bits, "
                f"got {self.bits.n}"
            )

    @classmethod
    def from_str(cls, n: int, s: str) -> Characteristic:
        return cls(n, BitString.from_str(s))

    def __xor__(self, other: Characteristic) -> Characteristic:
        if self.n != other.n:
            raise ValueError("width mismatch in characteristic xor")
        return Characteristic(self.n, self.bits ^ other.bits)

    def block(self, i: int) -> BitString:
        return BitString(self.bits.bits[i * self.n : (i + 1) * self.n])

    def first_nonzero(self) -> int | None:
        for i, b in enumerate(self.bits):
            if b:
                return i
        return None

    def is_zero(self) -> bool:
        return self.bits.is_zero()

    def to_table(self) -> FunctionTable:
        return FunctionTable(self.n, tuple(self.block(i) for i in range(1 << self.n)))

    def __str__(self) -> str:
        return str(self.bits)


@dataclass(frozen=True)
class Gate:
    """A CNOT from working qubit `control` to auxiliary `target`, or an X on `target`."""

    kind: str
    target: int
    control: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("cnot", "x"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "cnot" and self.control is None:
            raise ValueError("cnot needs a control")
        if self.kind == "x" and self.control is not None:
            raise ValueError("x gate takes no control")

    @classmethod
    def cnot(cls, control: int, target: int) -> Gate:
        return cls("cnot", target, control)

    @classmethod
    def x(cls, target: int) -> Gate:
        return cls("x", target)

    def __str__(self) -> str:
        if self.kind == "cnot":
            return f"CNOT({self.control},{self.target})"
        return f"X({self.target})"


def characteristic_of_function(f: FunctionTable) -> Characteristic:
    """Concatenate f's outputs over all inputs in increasing order."""
    bits: list[int] = []
    for w in f.outputs:
        bits.extend(w.bits)
    return Characteristic(f.n, BitString(tuple(bits)))


def characteristic_of_gate(g: Gate, n: int) -> Characteristic:
    """Characteristic of a single CNOT or X gate on an n-qubit register pair.

    A CNOT(j,k) sets bit k-1 of every block whose input has bit j (from the
    left) equal to 1; an X(k) sets bit k-1 of every block.  This is the
    action of the gate on the all-zero function and reproduces the n=2
    reference table bit-exactly.
    """
    if not 1 <= g.target <= n:
        raise ValueError(f"target {g.target} out of range [1, {n}]")
    bits = [0] * (n << n)
    if g.kind == "x":
        for block in range(1 << n):
            bits[block * n + g.target - 1] = 1
    else:
        if g.control is None or not 1 <= g.control <= n:
            raise ValueError(f"control {g.control} out of range [1, {n}]")
        for block in range(1 << n):
            if (block >> (n - g.control)) & 1:
                bits[block * n + g.target - 1] = 1
    return Characteristic(n, BitString(tuple(bits)))


def _as_matrix(rows: Iterable[BitString]) -> np.ndarray:
    return np.array([list(r.bits) for r in rows], dtype=np.uint8)


def gf2_rank(rows: list[BitString]) -> int:
    if not rows:
        return 0
    return _gf2_rref(_as_matrix(rows))[1]


def _gf2_rref(a: np.ndarray) -> tuple[np.ndarray, int, list[int]]:
    """Row-reduce over GF(2); returns (rref matrix, rank, pivot columns)."""
    a = a.copy() & 1
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, r, pivots


def gf2_nullspace(rows: list[BitString], n: int) -> list[BitString]:
    """Basis of {s : m . s = 0 for every row m}, as length-n bit strings."""
    if not rows:
        return [BitString.from_int(1 << (n - 1 - i), n) for i in range(n)]
    a, _, pivots = _gf2_rref(_as_matrix(rows))
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(n, dtype=np.uint8)
        v[fc] = 1
        for r, pc in enumerate(pivots):
            if a[r, fc]:
                v[pc] = 1
        basis.append(BitString(tuple(int(b) for b in v)))
    return basis


@dataclass(frozen=True)
class PeriodSolution:
    """Outcome of solving the accumulated m . s = 0 system."""

    status: str  # "unique" | "underdetermined" | "inconsistent"
    period: BitString | None = None


def gf2_solve_period(samples: list[BitString]) -> PeriodSolution:
    """Gaussian elimination on m . s = 0 over GF(2).

    Rank n-1 pins the unique nonzero s; lower rank is underdetermined; full
    rank forces s = 0 (the bijective case) and is reported as inconsistent.
    An empty sample list is underdetermined.
    """
    if not samples:
        return PeriodSolution("underdetermined")
    n = samples[0].n
    if any(m.n != n for m in samples):
        raise ValueError("samples must share a length")
    rank = gf2_rank(samples)
    if rank == n:
        return PeriodSolution("inconsistent")
    if rank < n - 1:
        return PeriodSolution("underdetermined")
    basis = gf2_nullspace(samples, n)
    assert len(basis) == 1
    return PeriodSolution("unique", basis[0])
