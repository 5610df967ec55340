"""Dense statevector simulation for a handful of qubits.

Qubit 0 is the most significant bit of the basis index, so the basis
state ``|x_0 x_1 ... x_{n-1}>`` sits at index ``int("x_0 x_1 ...", 2)``.
Every gate returns a new :class:`Statevector`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import pi, sqrt

import numpy as np

from .groups import FunctionTable, to_bits

MAX_QUBITS = 12
NORM_TOL = 1e-12

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)


class Statevector:
    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, amplitudes, n_qubits: int | None = None, *, check: bool = True):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size))) if n_qubits is None else n_qubits
        if amps.size != 1 << n:
            raise ValueError(f"{amps.size} amplitudes do not match {n} qubits")
        if n > MAX_QUBITS:
            raise ValueError(f"at most {MAX_QUBITS} qubits supported")
        if check and abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError("statevector is not normalized")
        self.n_qubits = n
        self.amplitudes = amps

    @classmethod
    def basis(cls, n_qubits: int, index: int | str = 0) -> Statevector:
        if isinstance(index, str):
            index = int(index, 2)
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps, n_qubits)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self):
        return f"Statevector(n_qubits={self.n_qubits})"


@dataclass(frozen=True)
class RegisterLayout:
    in_qubits: tuple[int, ...]
    out_qubits: tuple[int, ...]

    def __post_init__(self):
        ins, outs = tuple(self.in_qubits), tuple(self.out_qubits)
        if set(ins) & set(outs):
            raise ValueError("IN and OUT registers overlap")
        if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
            raise ValueError("repeated qubit index in layout")
        if sorted(ins + outs) != list(range(len(ins) + len(outs))):
            raise ValueError("layout must cover qubits 0..k-1 exactly")
        object.__setattr__(self, "in_qubits", ins)
        object.__setattr__(self, "out_qubits", outs)

    @classmethod
    def contiguous(cls, n_in: int, n_out: int) -> RegisterLayout:
        return cls(tuple(range(n_in)), tuple(range(n_in, n_in + n_out)))

    @property
    def n_qubits(self) -> int:
        return len(self.in_qubits) + len(self.out_qubits)


@dataclass(frozen=True, order=True)
class MeasurementRecord:
    in_bits: str
    out_bits: str


def _check_qubits(s: Statevector, qubits) -> None:
    for q in qubits:
        if not 0 <= q < s.n_qubits:
            raise IndexError(f"qubit {q} out of range for {s.n_qubits} qubits")
    if len(set(qubits)) != len(qubits):
        raise ValueError("qubit indices must be distinct")


def apply_unitary(s: Statevector, u: np.ndarray, qubits) -> Statevector:
    """Apply a ``2^k x 2^k`` matrix to the listed qubits (first = MSB of u)."""
    qubits = list(qubits)
    _check_qubits(s, qubits)
    k, n = len(qubits), s.n_qubits
    if u.shape != (1 << k, 1 << k):
        raise ValueError(f"matrix shape {u.shape} does not act on {k} qubits")
    psi = s.amplitudes.reshape([2] * n)
    psi = np.moveaxis(psi, qubits, range(k)).reshape(1 << k, -1)
    psi = (u @ psi).reshape([2] * n)
    psi = np.moveaxis(psi, range(k), qubits)
    return Statevector(psi.reshape(-1), n, check=False)


def apply_hadamard(s: Statevector, q: int) -> Statevector:
    return apply_unitary(s, HADAMARD, [q])


def controlled_phase_matrix(theta: int) -> np.ndarray:
    """``|0><0| (x) I + |1><1| (x) R_2^theta`` with ``R_2^theta = diag(1, e^{i theta pi/2})``."""
    return np.diag([1, 1, 1, np.exp(1j * theta * pi / 2)])


def apply_controlled_phase(s: Statevector, control: int, target: int, theta: int) -> Statevector:
    if theta not in (0, 1):
        raise ValueError("theta is a discrete switch in {0, 1}")
    if control == target:
        raise ValueError("control and target must differ")
    return apply_unitary(s, controlled_phase_matrix(theta), [control, target])


def g_matrix(theta: float) -> np.ndarray:
    """Real reflection ``[[cos 2t, sin 2t], [sin 2t, -cos 2t]]``; Hadamard at t = pi/8."""
    c, sn = np.cos(2 * theta), np.sin(2 * theta)
    return np.array([[c, sn], [sn, -c]], dtype=complex)


def apply_g_gate(s: Statevector, q: int, theta: float) -> Statevector:
    return apply_unitary(s, g_matrix(theta), [q])


def _value_of(bits: np.ndarray, positions) -> np.ndarray:
    out = np.zeros(bits.shape[0], dtype=np.int64)
    for q in positions:
        out = (out << 1) | bits[:, q]
    return out


@lru_cache(maxsize=256)
def _oracle_permutation(layout: RegisterLayout, f: FunctionTable) -> np.ndarray:
    n = layout.n_qubits
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> (n - 1 - np.arange(n))) & 1
    x = _value_of(bits, layout.in_qubits)
    fx = np.asarray(f.entries, dtype=np.int64)[x]
    new_bits = bits.copy()
    for j, q in enumerate(layout.out_qubits):
        new_bits[:, q] ^= (fx >> (f.m - 1 - j)) & 1
    return _value_of(new_bits, range(n))


def apply_oracle(s: Statevector, layout: RegisterLayout, f: FunctionTable) -> Statevector:
    """``|x>|y> -> |x>|y XOR f(x)>`` on the given registers."""
    if len(layout.in_qubits) != f.n or len(layout.out_qubits) != f.m:
        raise ValueError(
            f"layout ({len(layout.in_qubits)}, {len(layout.out_qubits)}) "
            f"does not match table ({f.n}, {f.m})"
        )
    if layout.n_qubits != s.n_qubits:
        raise ValueError("layout does not match statevector size")
    target = _oracle_permutation(layout, f)
    amps = np.empty_like(s.amplitudes)
    amps[target] = s.amplitudes
    return Statevector(amps, s.n_qubits, check=False)


@lru_cache(maxsize=32)
def dft_matrix(dim: int) -> np.ndarray:
    """``F[k, j] = omega^(jk) / sqrt(N)`` with ``omega = exp(2 pi i / N)``."""
    j = np.arange(dim)
    return np.exp(2j * pi * np.outer(j, j) / dim) / sqrt(dim)


def apply_qft(s: Statevector, qubits, inverse: bool = False) -> Statevector:
    """Exact QFT on a sub-register, output in standard (non bit-reversed) order."""
    f = dft_matrix(1 << len(qubits))
    return apply_unitary(s, f.conj().T if inverse else f, qubits)


def apply_qft_circuit(s: Statevector, qubits) -> Statevector:
    """QFT from Hadamards and controlled ``R_k`` phases, then the qubit reversal."""
    qubits = list(qubits)
    k = len(qubits)
    for i, q in enumerate(qubits):
        s = apply_hadamard(s, q)
        for j in range(i + 1, k):
            phase = np.diag([1, 1, 1, np.exp(2j * pi / (1 << (j - i + 1)))])
            s = apply_unitary(s, phase, [qubits[j], q])
    for i in range(k // 2):
        swap = np.eye(4)[[0, 2, 1, 3]]
        s = apply_unitary(s, swap, [qubits[i], qubits[k - 1 - i]])
    return s


def register_distribution(s: Statevector, layout: RegisterLayout) -> np.ndarray:
    """Joint Born probabilities as a ``(2^n_in, 2^n_out)`` array."""
    n = s.n_qubits
    p = s.probabilities().reshape([2] * n)
    order = list(layout.in_qubits) + list(layout.out_qubits)
    p = np.transpose(p, order)
    return p.reshape(1 << len(layout.in_qubits), 1 << len(layout.out_qubits))


def sample_counts(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial counts over a flattened probability table."""
    p = np.asarray(probs, dtype=float).reshape(-1)
    total = p.sum()
    if total <= 0:
        raise ValueError("cannot sample from a zero-norm state")
    p = np.clip(p / total, 0.0, None)
    return rng.multinomial(shots, p / p.sum()).reshape(np.shape(probs))


def sample_measurement(
    s: Statevector, layout: RegisterLayout, shots: int, seed: int
) -> list[MeasurementRecord]:
    """Draw ``shots`` i.i.d. joint (IN, OUT) outcomes from the Born rule."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if s.norm() == 0:
        raise ValueError("cannot sample from a zero-norm state")
    rng = np.random.default_rng(seed)
    probs = register_distribution(s, layout).reshape(-1)
    idx = rng.choice(probs.size, size=shots, p=probs / probs.sum())
    n_out = len(layout.out_qubits)
    n_in = len(layout.in_qubits)
    return [
        MeasurementRecord(to_bits(int(i) >> n_out, n_in), to_bits(int(i) & ((1 << n_out) - 1), n_out))
        for i in idx
    ]
