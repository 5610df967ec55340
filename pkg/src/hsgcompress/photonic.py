"""Single-photon Jones-calculus simulation over path x polarization x time bin.

An :class:`OpticalState` holds amplitudes in an array indexed
``[path, polarization, time_bin]`` with polarization 0 = H, 1 = V. Path 0
is the bottom path in the setup drawings. IN-register labels live in the
path, the OUT bit in the time bin (early = 0), and polarization is scratch
space used while a path qubit is being rotated.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import cos, radians, sin, sqrt

import numpy as np

from .groups import TOY_TABLE, FunctionTable, to_bits
from .qsim import MeasurementRecord

H_POL, V_POL = 0, 1
N_PATHS, N_BINS = 4, 2
WAVEPLATES = ("HWP", "QWP", "E-HWP", "E-QWP")
KINDS = WAVEPLATES + ("BD", "PBS", "DELAY")
PROB_TOL = 1e-12
# amplitudes below this count as empty modes (waveplate round-off is ~1e-16)
OCCUPIED_TOL = 1e-12


class OpticalState:
    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, *, check: bool = True):
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.ndim != 3 or amps.shape[1] != 2:
            raise ValueError("amplitudes must have shape (paths, 2, bins)")
        if check and abs(np.sum(np.abs(amps) ** 2) - 1.0) > PROB_TOL:
            raise ValueError("optical state is not normalized")
        self.amplitudes = amps

    @classmethod
    def single(cls, path=0, pol=V_POL, time_bin=0, n_paths=N_PATHS, n_bins=N_BINS):
        amps = np.zeros((n_paths, 2, n_bins), dtype=complex)
        amps[path, pol, time_bin] = 1.0
        return cls(amps)

    @property
    def n_paths(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_bins(self) -> int:
        return self.amplitudes.shape[2]

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def path_bin_probabilities(self) -> np.ndarray:
        """Detector statistics: ``|amp|^2`` summed over polarization."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


@dataclass(frozen=True)
class OpticalElement:
    kind: str
    paths: tuple[int, ...] = ()
    angle: float | None = None
    mapping: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        if self.kind in WAVEPLATES and self.angle is None:
            raise ValueError(f"{self.kind} needs an angle")
        object.__setattr__(self, "paths", tuple(int(p) for p in self.paths))
        object.__setattr__(self, "mapping", tuple((int(a), int(b)) for a, b in self.mapping))

    def to_line(self) -> str:
        if self.kind == "BD":
            return "BD map=" + ",".join(f"{a}>{b}" for a, b in self.mapping)
        line = f"{self.kind} paths={','.join(map(str, self.paths))}"
        if self.angle is not None:
            line += f" angle={self.angle!r}"
        return line

    @classmethod
    def from_line(cls, line: str) -> OpticalElement:
        kind, *opts = line.split()
        kw = dict(o.split("=", 1) for o in opts)
        paths = tuple(int(p) for p in kw.get("paths", "").split(",") if p)
        angle = float(kw["angle"]) if "angle" in kw else None
        mapping = tuple(
            tuple(int(v) for v in pair.split(">")) for pair in kw.get("map", "").split(",") if pair
        )
        return cls(kind, paths, angle, mapping)


def setup_to_text(elements) -> str:
    return "".join(el.to_line() + "\n" for el in elements)


def setup_from_text(text: str) -> list[OpticalElement]:
    return [OpticalElement.from_line(l) for l in text.splitlines() if l.strip() and not l.startswith("#")]


def _rotation(phi: float) -> np.ndarray:
    c, s = cos(phi), sin(phi)
    return np.array([[c, s], [-s, c]])


def jones_matrix(kind: str, angle_deg: float) -> np.ndarray:
    """Jones matrix in the (H, V) basis for a plate with fast axis at ``angle_deg``.

    HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
    QWP(t) = R(-t) diag(1, i) R(t): diag(1, i) at 0 deg, diag(i, 1) at 90 deg,
    so V picks up i at 0 deg and passes unchanged at 90 deg.
    """
    t = radians(angle_deg)
    if kind in ("HWP", "E-HWP"):
        return np.array([[cos(2 * t), sin(2 * t)], [sin(2 * t), -cos(2 * t)]], dtype=complex)
    if kind in ("QWP", "E-QWP"):
        return _rotation(-t) @ np.diag([1, 1j]) @ _rotation(t)
    raise ValueError(f"{kind} is not a waveplate")


def _check_paths(state: OpticalState, paths) -> None:
    for p in paths:
        if not 0 <= p < state.n_paths:
            raise IndexError(f"path {p} does not exist")


def apply_waveplate(state: OpticalState, kind: str, paths, angle_deg: float) -> OpticalState:
    paths = list(paths)
    _check_paths(state, paths)
    j = jones_matrix(kind, angle_deg)
    amps = state.amplitudes.copy()
    for p in paths:
        amps[p] = j @ amps[p]
    return OpticalState(amps, check=False)


def _occupied(amps: np.ndarray, path: int, pol: int) -> bool:
    return bool(np.any(np.abs(amps[path, pol]) > OCCUPIED_TOL))


def _complete_permutation(targets: dict[int, int], size: int) -> list[int]:
    """Extend a partial injective map to a permutation of ``range(size)``."""
    perm = [targets.get(i) for i in range(size)]
    free = sorted(set(range(size)) - {t for t in perm if t is not None})
    for i in range(size):
        if perm[i] is None:
            perm[i] = i if i in free else free[0]
            free.remove(perm[i])
    return perm


def bd_permutation(mapping, n_paths: int, amps: np.ndarray | None = None) -> list[int]:
    """Where each path's H component goes.

    Unlisted paths keep their H component in place unless that slot is
    taken; then, if the displaced component is non-zero, the two would
    collide, which is not a physical beam displacer.
    """
    explicit = dict(mapping)
    if len(set(explicit.values())) != len(explicit):
        raise ValueError("beam displacer maps two paths onto one")
    taken = set(explicit.values())
    targets = dict(explicit)
    for p in range(n_paths):
        if p in explicit:
            continue
        if p in taken:
            if amps is not None and _occupied(amps, p, H_POL):
                raise ValueError(f"H light in path {p} would collide with displaced light")
        else:
            targets[p] = p
    return _complete_permutation(targets, n_paths)


def apply_bd(state: OpticalState, mapping) -> OpticalState:
    """Move H-polarized light along ``mapping`` (path -> path); V is untouched."""
    mapping = dict(mapping)
    _check_paths(state, list(mapping) + list(mapping.values()))
    perm = bd_permutation(mapping.items(), state.n_paths, state.amplitudes)
    amps = state.amplitudes.copy()
    amps[perm, H_POL] = state.amplitudes[:, H_POL]
    return OpticalState(amps, check=False)


def apply_time_delay(state: OpticalState, paths) -> OpticalState:
    """Push light on ``paths`` one time bin later."""
    paths = list(paths)
    _check_paths(state, paths)
    amps = state.amplitudes.copy()
    for p in paths:
        if np.any(np.abs(amps[p, :, -1]) > OCCUPIED_TOL):
            raise ValueError(f"path {p} already occupies the last time bin")
        amps[p] = np.roll(amps[p], 1, axis=-1)
    return OpticalState(amps, check=False)


def splitter_matrix(k: int) -> np.ndarray:
    h = np.array([[1.0]])
    for _ in range(k):
        h = np.kron(h, np.array([[1, 1], [1, -1]]) / sqrt(2))
    return h


def apply_splitter(state: OpticalState, paths) -> OpticalState:
    """Ideal equal-amplitude fan-out: light entering ``paths[0]`` leaves all listed paths in phase."""
    paths = list(paths)
    _check_paths(state, paths)
    k = len(paths).bit_length() - 1
    if len(paths) != 1 << k:
        raise ValueError("splitter needs a power-of-two number of paths")
    amps = state.amplitudes.copy()
    amps[paths] = np.einsum("ij,jpt->ipt", splitter_matrix(k), state.amplitudes[paths])
    return OpticalState(amps, check=False)


def apply_element(state: OpticalState, el: OpticalElement) -> OpticalState:
    if el.kind in WAVEPLATES:
        return apply_waveplate(state, el.kind, el.paths, el.angle)
    if el.kind == "BD":
        return apply_bd(state, el.mapping)
    if el.kind == "DELAY":
        return apply_time_delay(state, el.paths)
    return apply_splitter(state, el.paths)


def run_setup(elements, state: OpticalState | None = None) -> OpticalState:
    state = OpticalState.single() if state is None else state
    for el in elements:
        state = apply_element(state, el)
    return state


def element_matrix(el: OpticalElement, n_paths: int = N_PATHS, n_bins: int = N_BINS) -> np.ndarray:
    """The element's action on the whole mode space, as a square matrix.

    Permutation-type elements (BD, DELAY) are completed to full
    permutations, so the matrix is defined even where ``apply_element``
    would refuse an occupied collision.
    """
    dim = n_paths * 2 * n_bins
    u = np.zeros((dim, dim), dtype=complex)
    shape = (n_paths, 2, n_bins)
    if el.kind == "BD":
        perm = bd_permutation(el.mapping, n_paths)
        for p, pol, t in np.ndindex(*shape):
            dest = (perm[p], pol, t) if pol == H_POL else (p, pol, t)
            u[np.ravel_multi_index(dest, shape), np.ravel_multi_index((p, pol, t), shape)] = 1
        return u
    if el.kind == "DELAY":
        for p, pol, t in np.ndindex(*shape):
            dest = (p, pol, (t + 1) % n_bins) if p in el.paths else (p, pol, t)
            u[np.ravel_multi_index(dest, shape), np.ravel_multi_index((p, pol, t), shape)] = 1
        return u
    for col in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[col] = 1
        out = apply_element(OpticalState(amps.reshape(shape), check=False), el)
        u[:, col] = out.amplitudes.reshape(-1)
    return u


@dataclass(frozen=True)
class PathEncoding:
    """``labels[path]`` is the IN-register basis state carried by that path."""

    name: str
    labels: tuple[int, ...]
    n_bits: int = 2

    def __post_init__(self):
        if sorted(self.labels) != list(range(1 << self.n_bits)):
            raise ValueError("encoding must be a bijection onto the IN labels")

    def path_of(self, label: int) -> int:
        return self.labels.index(label)

    def pairs(self, qubit: int) -> list[tuple[int, int]]:
        """Path pairs (bit 0, bit 1) that differ only in IN ``qubit`` (0 = MSB)."""
        mask = 1 << (self.n_bits - 1 - qubit)
        return [
            (self.path_of(lab), self.path_of(lab | mask))
            for lab in sorted(self.labels) if not lab & mask
        ]


ENCODINGS = {
    "fig2b": PathEncoding("fig2b", (0b10, 0b00, 0b11, 0b01)),
    "s01": PathEncoding("s01", (0b00, 0b01, 0b10, 0b11)),
    "s10": PathEncoding("s10", (0b00, 0b10, 0b01, 0b11)),
}
SETUPS = ("gft_fig2b", "simon_fig2d")
SWAP_ANGLE = 45.0
HADAMARD_ANGLE = 22.5
QWP_OFF, QWP_ON = 90.0, 0.0

S01_TABLE = FunctionTable(2, 1, (0, 0, 1, 1))
S10_TABLE = FunctionTable(2, 1, (0, 1, 0, 1))


def qubit_rotation(encoding: PathEncoding, qubit: int, kind: str, angle_deg: float):
    """Rotate one path-encoded IN qubit by routing it through polarization.

    Bit-0 light is flipped to H and displaced onto its bit-1 partner, the
    shared path carries the qubit in polarization (H = 0, V = 1) through the
    plate, and the mirror sequence restores path encoding with V light only.
    """
    pairs = encoding.pairs(qubit)
    zeros = tuple(a for a, _ in pairs)
    ones = tuple(b for _, b in pairs)
    return [
        OpticalElement("HWP", zeros, SWAP_ANGLE),
        OpticalElement("BD", mapping=tuple(pairs)),
        OpticalElement(kind, ones, angle_deg),
        OpticalElement("BD", mapping=tuple((b, a) for a, b in pairs)),
        OpticalElement("HWP", zeros, SWAP_ANGLE),
    ]


def oracle_delay(encoding: PathEncoding, f: FunctionTable) -> OpticalElement:
    if f.n != encoding.n_bits or f.m != 1:
        raise ValueError("time-bin oracle needs a 2-bit input, 1-bit output table")
    return OpticalElement("DELAY", tuple(p for p, lab in enumerate(encoding.labels) if f[lab]))


def build_setup(which: str, params, encoding: PathEncoding | str, f: FunctionTable | None = None):
    """Element list for the switched-QFT table (``gft_fig2b``) or the Simon table (``simon_fig2d``).

    ``params`` is the E-QWP angle in degrees for ``gft_fig2b`` and the two
    E-HWP angles in degrees for ``simon_fig2d``.
    """
    if isinstance(encoding, str):
        encoding = ENCODINGS[encoding]
    fan_out = OpticalElement("PBS", tuple(range(len(encoding.labels))))
    if which == "gft_fig2b":
        f = default_table(which, encoding) if f is None else f
        (qwp,) = np.atleast_1d(params)
        return [
            fan_out,
            oracle_delay(encoding, f),
            *qubit_rotation(encoding, 0, "HWP", HADAMARD_ANGLE),
            OpticalElement("E-QWP", (encoding.path_of(0b11),), float(qwp)),
            *qubit_rotation(encoding, 1, "HWP", HADAMARD_ANGLE),
        ]
    if which == "simon_fig2d":
        f = default_table(which, encoding) if f is None else f
        a1, a2 = params
        return [
            fan_out,
            oracle_delay(encoding, f),
            *qubit_rotation(encoding, 0, "E-HWP", float(a1)),
            *qubit_rotation(encoding, 1, "E-HWP", float(a2)),
        ]
    raise ValueError(f"unsupported setup {which!r}; choose from {SETUPS}")


def optical_distribution(state: OpticalState, encoding: PathEncoding) -> np.ndarray:
    """Exact ``p[in_label, out_bit]`` read through ``encoding``."""
    pb = state.path_bin_probabilities()
    out = np.zeros((len(encoding.labels), state.n_bins))
    for path, label in enumerate(encoding.labels):
        out[label] = pb[path]
    return out


def measure_optical(
    state: OpticalState, encoding: PathEncoding, shots: int, seed: int
) -> list[MeasurementRecord]:
    """Which-path and which-bin clicks, relabelled as (IN, OUT) records."""
    rng = np.random.default_rng(seed)
    p = optical_distribution(state, encoding)
    flat = p.reshape(-1)
    idx = rng.choice(flat.size, size=shots, p=flat / flat.sum())
    n_bins = p.shape[1]
    out_width = max(1, (n_bins - 1).bit_length())
    return [
        MeasurementRecord(to_bits(int(i) // n_bins, encoding.n_bits), to_bits(int(i) % n_bins, out_width))
        for i in idx
    ]


def distribution_to_csv(p: np.ndarray, n_bits: int = 2) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["in_bits", "out_bit", "probability"])
    for label in range(p.shape[0]):
        for t in range(p.shape[1]):
            w.writerow([to_bits(label, n_bits), t, repr(float(p[label, t]))])
    return buf.getvalue()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def qwp_switch(angle_deg: float) -> int:
    """Controlled-phase setting realized by the E-QWP angle."""
    if np.isclose(angle_deg % 180.0, QWP_OFF):
        return 0
    if np.isclose(angle_deg % 180.0, QWP_ON):
        return 1
    raise ValueError("the E-QWP switch is only defined at 0 and 90 degrees")


def abstract_distribution(which: str, params, f: FunctionTable) -> np.ndarray:
    """Born distribution over (IN, OUT) of the gate-level circuit the setup realizes.

    For the switched-QFT setup no outcome relabelling is applied; the
    optical table measures the circuit before the classical bit reversal.
    """
    from .autoenc import gft_circuit_state, simon_distribution
    from .qsim import RegisterLayout, register_distribution

    if which == "gft_fig2b":
        (qwp,) = np.atleast_1d(params)
        s = gft_circuit_state(f, qwp_switch(float(qwp)))
        return register_distribution(s, RegisterLayout.contiguous(f.n, f.m))
    if which == "simon_fig2d":
        return np.array(simon_distribution(f, tuple(radians(float(a)) for a in params)))
    raise ValueError(f"unsupported setup {which!r}; choose from {SETUPS}")


def default_table(which: str, encoding: PathEncoding) -> FunctionTable:
    if which == "gft_fig2b":
        return TOY_TABLE
    return FunctionTable(2, 1, tuple(int(encoding.path_of(x) >= 2) for x in range(4)))


def equivalence_distance(
    which: str,
    params,
    f: FunctionTable | None = None,
    encoding: PathEncoding | str = "fig2b",
    readout: PathEncoding | str | None = None,
) -> float:
    """Total variation between the optical table and the abstract circuit.

    ``readout`` reinterprets the detector paths with another encoding; a
    mismatch with the build ``encoding`` models mislabelled paths.
    """
    if isinstance(encoding, str):
        encoding = ENCODINGS[encoding]
    if isinstance(readout, str):
        readout = ENCODINGS[readout]
    f = default_table(which, encoding) if f is None else f
    state = run_setup(build_setup(which, params, encoding, f))
    p_opt = optical_distribution(state, readout or encoding)
    return total_variation(p_opt, abstract_distribution(which, params, f))
