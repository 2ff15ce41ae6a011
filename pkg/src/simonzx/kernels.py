"""Hot statevector kernels: numba-jitted loops with a pure-numpy fallback.

The backend is picked once from the SIMONZX_BACKEND environment variable
("numba" when importable, else "numpy") and can be switched at runtime with
set_backend().  All kernels mutate or replace a dense complex128 amplitude
array over q qubits; qubit bit positions are counted from the least
significant bit, so qubit i (1-based, MSB first) sits at position q - i.

Gates use the unnormalized Hadamard [[1,1],[1,-1]] to match the diagram
calculus; probabilities are always normalized downstream.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


__all__ = [
    "set_backend",
    "backend_name",
    "apply_hadamard",
    "apply_pauli_x",
    "apply_phase",
    "apply_cnot",
    "apply_cz",
    "apply_effect",
]

_VALID = ("numba", "numpy")


def _initial_backend() -> str:
    choice = os.environ.get("SIMONZX_BACKEND", "").strip().lower()
    if choice in _VALID:
        if choice == "numba" and not HAVE_NUMBA:
            raise RuntimeError("SIMONZX_BACKEND=numba but numba is not importable")
        return choice
    return "numba" if HAVE_NUMBA else "numpy"


_backend = _initial_backend()


def set_backend(name: str) -> None:
    global _backend
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _backend = name


def backend_name() -> str:
    return _backend


def _pos(q: int, i: int) -> int:
    if not 1 <= i <= q:
        raise IndexError(f"qubit {i} out of range [1, {q}]")
    return q - i


# ---------------------------------------------------------------- numba path


@njit(cache=True)
def _h_nb(amps, stride):
    step = 2 * stride
    for base in range(0, amps.shape[0], step):
        for off in range(base, base + stride):
            a = amps[off]
            b = amps[off + stride]
            amps[off] = a + b
            amps[off + stride] = a - b


@njit(cache=True)
def _x_nb(amps, stride):
    step = 2 * stride
    for base in range(0, amps.shape[0], step):
        for off in range(base, base + stride):
            a = amps[off]
            amps[off] = amps[off + stride]
            amps[off + stride] = a


@njit(cache=True)
def _phase_nb(amps, stride, factor):
    step = 2 * stride
    for base in range(0, amps.shape[0], step):
        for off in range(base, base + stride):
            amps[off + stride] *= factor


@njit(cache=True)
def _cnot_nb(amps, cbit, tbit):
    for m in range(amps.shape[0]):
        if (m & cbit) and not (m & tbit):
            partner = m | tbit
            a = amps[m]
            amps[m] = amps[partner]
            amps[partner] = a


@njit(cache=True)
def _cz_nb(amps, abit, bbit):
    both = abit | bbit
    for m in range(amps.shape[0]):
        if (m & both) == both:
            amps[m] = -amps[m]


@njit(cache=True)
def _effect_nb(amps, pos, c0, c1):
    half = amps.shape[0] >> 1
    out = np.empty(half, dtype=np.complex128)
    low_mask = (1 << pos) - 1
    for m in range(half):
        low = m & low_mask
        high = (m >> pos) << (pos + 1)
        idx0 = high | low
        out[m] = c0 * amps[idx0] + c1 * amps[idx0 | (1 << pos)]
    return out


# ---------------------------------------------------------------- numpy path


def _view(amps: np.ndarray, pos: int) -> np.ndarray:
    # axes: (high bits, target bit, low bits)
    return amps.reshape(-1, 2, 1 << pos)


def _h_np(amps, stride):
    v = _view(amps, int(stride).bit_length() - 1)
    a = v[:, 0, :].copy()
    v[:, 0, :] += v[:, 1, :]
    v[:, 1, :] = a - v[:, 1, :]


def _x_np(amps, stride):
    v = _view(amps, int(stride).bit_length() - 1)
    v[:, [0, 1], :] = v[:, [1, 0], :]


def _phase_np(amps, stride, factor):
    v = _view(amps, int(stride).bit_length() - 1)
    v[:, 1, :] *= factor


def _cnot_np(amps, cbit, tbit):
    m = np.arange(amps.shape[0])
    src = np.nonzero(((m & cbit) != 0) & ((m & tbit) == 0))[0]
    amps[src], amps[src | tbit] = amps[src | tbit], amps[src].copy()


def _cz_np(amps, abit, bbit):
    both = abit | bbit
    m = np.arange(amps.shape[0])
    amps[(m & both) == both] *= -1


def _effect_np(amps, pos, c0, c1):
    v = _view(amps, pos)
    return (c0 * v[:, 0, :] + c1 * v[:, 1, :]).reshape(-1)


# ------------------------------------------------------------------- facade


def apply_hadamard(amps: np.ndarray, q: int, i: int) -> None:
    stride = 1 << _pos(q, i)
    (_h_nb if _backend == "numba" else _h_np)(amps, stride)


def apply_pauli_x(amps: np.ndarray, q: int, i: int) -> None:
    stride = 1 << _pos(q, i)
    (_x_nb if _backend == "numba" else _x_np)(amps, stride)


def apply_phase(amps: np.ndarray, q: int, i: int, theta: float) -> None:
    stride = 1 << _pos(q, i)
    factor = complex(np.exp(1j * theta))
    (_phase_nb if _backend == "numba" else _phase_np)(amps, stride, factor)


def apply_cnot(amps: np.ndarray, q: int, control: int, target: int) -> None:
    if control == target:
        raise ValueError("control and target must differ")
    cbit, tbit = 1 << _pos(q, control), 1 << _pos(q, target)
    (_cnot_nb if _backend == "numba" else _cnot_np)(amps, cbit, tbit)


def apply_cz(amps: np.ndarray, q: int, a: int, b: int) -> None:
    if a == b:
        raise ValueError("cz qubits must differ")
    abit, bbit = 1 << _pos(q, a), 1 << _pos(q, b)
    (_cz_nb if _backend == "numba" else _cz_np)(amps, abit, bbit)


def apply_effect(amps: np.ndarray, q: int, i: int, c0: complex, c1: complex) -> np.ndarray:
    """Contract qubit i against the bra c0<0| + c1<1|, dropping that qubit."""
    pos = _pos(q, i)
    fn = _effect_nb if _backend == "numba" else _effect_np
    return fn(amps, pos, complex(c0), complex(c1))
