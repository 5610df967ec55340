"""Hidden-subgroup sampling circuits and classical period inference.

The encoder prepares ``sum_x |x>|f(x)>``, applies the generalized QFT of the
hypothesized group to the IN register and samples. Inference keeps the
group elements that every observed outcome annihilates.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .groups import FunctionTable, GroupSpec, to_bits
from .qsim import (
    MeasurementRecord,
    RegisterLayout,
    Statevector,
    apply_hadamard,
    apply_oracle,
    apply_qft,
    register_distribution,
    sample_counts,
)


@dataclass(frozen=True)
class HsgSampleSet:
    """Measurement outcomes stored as a multiset ``{record: count}``."""

    group: GroupSpec
    counts: dict[MeasurementRecord, int]
    shots: int

    def __post_init__(self):
        widths = {(len(r.in_bits), len(r.out_bits)) for r in self.counts}
        if len(widths) > 1:
            raise ValueError("inconsistent record widths")
        if widths and next(iter(widths))[0] != self.group.n_bits:
            raise ValueError("IN width does not match the group")
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not add up to shots")

    @classmethod
    def from_records(cls, group: GroupSpec, records) -> HsgSampleSet:
        counts = Counter(records)
        return cls(group, dict(counts), sum(counts.values()))

    @property
    def records(self) -> list[MeasurementRecord]:
        return [r for r in sorted(self.counts) for _ in range(self.counts[r])]

    def in_counts(self) -> dict[int, int]:
        """IN-register marginal as ``{outcome int: count}``."""
        out: dict[int, int] = {}
        for rec, c in self.counts.items():
            y = int(rec.in_bits, 2)
            out[y] = out.get(y, 0) + c
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["in_bits", "out_bits", "count"])
        for rec in sorted(self.counts):
            w.writerow([rec.in_bits, rec.out_bits, self.counts[rec]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, group: GroupSpec, text: str) -> HsgSampleSet:
        counts = {}
        for row in csv.DictReader(io.StringIO(text)):
            counts[MeasurementRecord(row["in_bits"], row["out_bits"])] = int(row["count"])
        return cls(group, counts, sum(counts.values()))


@dataclass(frozen=True)
class SymmetryHypothesis:
    group: GroupSpec
    period: str | None
    confidence: float
    exact: bool = True
    under_determined: bool = False
    candidates: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")
        if self.period is not None and (
            len(self.period) != self.group.n_bits or int(self.period, 2) == 0
        ):
            raise ValueError(f"period {self.period!r} is not a non-identity element")


def check_supported(f: FunctionTable, g: GroupSpec) -> None:
    if f.n != g.n_bits:
        raise ValueError(f"table has n={f.n} but group {g} needs {g.n_bits} bits")


def apply_generalized_qft(s: Statevector, g: GroupSpec, in_qubits, inverse: bool = False):
    """Tensor product of one QFT per cyclic factor, on consecutive qubit blocks."""
    pos = 0
    for w in g.widths:
        s = apply_qft(s, in_qubits[pos:pos + w], inverse=inverse)
        pos += w
    return s


def data_table_state(f: FunctionTable) -> tuple[Statevector, RegisterLayout]:
    """``2^{-n/2} sum_x |x>_IN |f(x)>_OUT``."""
    layout = RegisterLayout.contiguous(f.n, f.m)
    s = Statevector.basis(layout.n_qubits)
    for q in layout.in_qubits:
        s = apply_hadamard(s, q)
    return apply_oracle(s, layout, f), layout


@lru_cache(maxsize=1024)
def hsg_distribution(f: FunctionTable, g: GroupSpec) -> np.ndarray:
    """Exact joint distribution over (IN, OUT) after the generalized QFT."""
    check_supported(f, g)
    s, layout = data_table_state(f)
    s = apply_generalized_qft(s, g, layout.in_qubits)
    p = register_distribution(s, layout)
    p.setflags(write=False)
    return p


def _counts_to_samples(g: GroupSpec, f: FunctionTable, counts: np.ndarray, shots: int):
    records = {}
    for y, v in zip(*np.nonzero(counts)):
        records[MeasurementRecord(to_bits(int(y), f.n), to_bits(int(v), f.m))] = int(counts[y, v])
    return HsgSampleSet(g, records, shots)


def run_hsg_circuit(
    f: FunctionTable,
    g: GroupSpec,
    shots: int,
    seed: int,
    measure_out_first: bool = False,
) -> HsgSampleSet:
    """Sample the hidden-subgroup circuit for table ``f`` under group ``g``.

    With ``measure_out_first`` the OUT register is measured right after the
    oracle, each collapsed coset state is Fourier transformed separately,
    and IN is sampled from it. Otherwise OUT is sampled jointly at the end.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    check_supported(f, g)
    rng = np.random.default_rng(seed)
    if not measure_out_first:
        return _counts_to_samples(g, f, sample_counts(hsg_distribution(f, g), shots, rng), shots)

    s, layout = data_table_state(f)
    p_out = register_distribution(s, layout).sum(axis=0)
    out_counts = sample_counts(p_out, shots, rng)
    counts = np.zeros((1 << f.n, 1 << f.m), dtype=np.int64)
    amps = s.amplitudes.reshape(1 << f.n, 1 << f.m)
    for v in np.nonzero(out_counts)[0]:
        branch = np.zeros_like(amps)
        branch[:, v] = amps[:, v]
        collapsed = Statevector(branch / np.linalg.norm(branch), layout.n_qubits)
        collapsed = apply_generalized_qft(collapsed, g, layout.in_qubits)
        p_in = register_distribution(collapsed, layout)[:, v]
        counts[:, v] = sample_counts(p_in, int(out_counts[v]), rng)
    return _counts_to_samples(g, f, counts, shots)


def gf2_nullspace(vectors, n: int) -> list[int]:
    """All ``r`` with ``popcount(y & r)`` even for every ``y`` (basis via elimination)."""
    pivots: dict[int, int] = {}
    for y in vectors:
        for bit in reversed(range(n)):
            if not (y >> bit) & 1:
                continue
            if bit in pivots:
                y ^= pivots[bit]
            else:
                pivots[bit] = y
                break
    # reduce to row echelon with unique pivots, then read off free columns
    for bit in sorted(pivots):
        for other in pivots:
            if other != bit and (pivots[other] >> bit) & 1:
                pivots[other] ^= pivots[bit]
    free = [b for b in range(n) if b not in pivots]
    basis = []
    for fb in free:
        r = 1 << fb
        for pb, row in pivots.items():
            if (row >> fb) & 1:
                r |= 1 << pb
        basis.append(r)
    span = {0}
    for b in basis:
        span |= {v ^ b for v in span}
    return sorted(span)


def annihilated(g: GroupSpec, outcomes) -> list[int]:
    """Group elements paired to zero with every outcome, ascending."""
    if g.is_elementary:
        return gf2_nullspace(outcomes, g.n_bits)
    return [r for r in range(g.order) if all(g.pairing(y, r) == 0 for y in outcomes)]


def infer_period(samples: HsgSampleSet) -> SymmetryHypothesis:
    """Turn IN-register outcomes into a generalized-period hypothesis."""
    g = samples.group
    if samples.shots < 1:
        raise ValueError("no samples")
    counts = samples.in_counts()
    observed = sorted(counts)
    consistent = annihilated(g, observed)
    nontrivial = [r for r in consistent if r]
    if nontrivial:
        r = nontrivial[0]
        under = len(consistent) > len(g.cyclic(r))
        return SymmetryHypothesis(
            g, g.bits(r), 1.0, exact=True, under_determined=under,
            candidates=tuple(g.bits(c) for c in nontrivial),
        )
    best, best_mass = None, -1
    for r in range(1, g.order):
        mass = sum(c for y, c in counts.items() if g.pairing(y, r) == 0)
        if mass > best_mass:
            best, best_mass = r, mass
    if best is None:
        return SymmetryHypothesis(g, None, 0.0, exact=False)
    return SymmetryHypothesis(g, g.bits(best), best_mass / samples.shots, exact=False)
