"""Variational hidden-subgroup autoencoder.

The quantum encoder samples the IN register; the classical decoder infers a
period from the samples, de-duplicates the database along it and rebuilds
the table. The cost is the squared reconstruction error, and training runs
plain gradient descent on central finite differences of its sample mean.
"""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from math import pi
from pathlib import Path

import numpy as np

from .compress import compress, reconstruct, reconstruction_cost
from .groups import FunctionTable, GroupSpec
from .hsg import (
    HsgSampleSet,
    SymmetryHypothesis,
    _counts_to_samples,
    data_table_state,
    infer_period,
    run_hsg_circuit,
)
from .qsim import (
    Statevector,
    apply_controlled_phase,
    apply_g_gate,
    apply_hadamard,
    register_distribution,
    sample_counts,
)

log = logging.getLogger(__name__)

ANSATZES = ("gft", "simon")
DEFAULT_LR = {"gft": 0.3, "simon": 0.1}
PARAM_NAMES = {"gft": ("gamma",), "simon": ("theta1", "theta2")}
DEFAULT_GAMMA0 = 0.7


def clamp_probability(gamma: float) -> float:
    """``p(theta = 1) = max(0, min(gamma, 1))``."""
    if not np.isfinite(gamma):
        raise ValueError("gamma must be finite")
    return max(0.0, min(float(gamma), 1.0))


@dataclass(frozen=True)
class GftAnsatzParams:
    gamma: float = DEFAULT_GAMMA0


@dataclass(frozen=True)
class SimonAnsatzParams:
    theta1: float
    theta2: float


def gft_group(n: int, theta: int) -> GroupSpec:
    """``theta = 0``: one QFT per qubit (``Z2^n``); ``theta = 1``: one ``2^n``-point QFT."""
    return GroupSpec((2,) * n) if theta == 0 else GroupSpec((1 << n,))


def gft_circuit_state(f: FunctionTable, theta: int) -> Statevector:
    """Two-qubit encoder as gates: H on q0, switched CR_2, H on q1.

    Its IN outcomes still need a bit reversal when ``theta = 1`` to match
    the standard-order 4-point QFT.
    """
    if f.n != 2:
        raise ValueError("the switched-phase circuit is defined for n = 2")
    s, layout = data_table_state(f)
    q0, q1 = layout.in_qubits
    s = apply_hadamard(s, q0)
    s = apply_controlled_phase(s, q0, q1, theta)
    return apply_hadamard(s, q1)


def gft_circuit_distribution(f: FunctionTable, theta: int) -> np.ndarray:
    """Joint (IN, OUT) distribution of the gate circuit, outcomes relabelled."""
    s = gft_circuit_state(f, theta)
    p = register_distribution(s, data_table_state(f)[1])
    if theta == 1:
        p = p[[0, 2, 1, 3]]
    return p


def _derive_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2**63))


def decode(f: FunctionTable, samples: HsgSampleSet) -> tuple[SymmetryHypothesis, FunctionTable]:
    """Classical decoder: infer a period, compress along it, rebuild."""
    hyp = infer_period(samples)
    if hyp.period is None:
        return hyp, f
    return hyp, reconstruct(compress(f, hyp))


def evaluate_cost_gft(f: FunctionTable, gamma: float, shots: int, seed: int) -> int:
    """One sampled cost of the switched-QFT ansatz.

    The switch is drawn first from the seeded stream, so two calls that
    share a seed at nearby gammas share their random numbers.
    """
    rng = np.random.default_rng(seed)
    theta = int(rng.random() < clamp_probability(gamma))
    samples = run_hsg_circuit(f, gft_group(f.n, theta), shots, _derive_seed(rng))
    return reconstruction_cost(f, decode(f, samples)[1])


@lru_cache(maxsize=4096)
def simon_distribution(f: FunctionTable, thetas: tuple[float, ...]) -> np.ndarray:
    """Joint (IN, OUT) distribution with G(theta_k) on IN qubit k after the oracle."""
    if len(thetas) != f.n:
        raise ValueError(f"need {f.n} angles, got {len(thetas)}")
    s, layout = data_table_state(f)
    for q, t in zip(layout.in_qubits, thetas):
        s = apply_g_gate(s, q, t)
    p = register_distribution(s, layout)
    p.setflags(write=False)
    return p


def run_simon_circuit(f: FunctionTable, thetas, shots: int, seed: int) -> HsgSampleSet:
    rng = np.random.default_rng(seed)
    counts = sample_counts(simon_distribution(f, tuple(float(t) for t in thetas)), shots, rng)
    return _counts_to_samples(GroupSpec((2,) * f.n), f, counts, shots)


def evaluate_cost_simon(
    f: FunctionTable, theta1: float, theta2: float, shots: int, seed: int
) -> int:
    samples = run_simon_circuit(f, (theta1, theta2), shots, seed)
    return reconstruction_cost(f, decode(f, samples)[1])


@dataclass(frozen=True)
class TrainingConfig:
    iterations: int = 40
    shots_per_eval: int = 512
    repeats_per_iteration: int = 10
    learning_rate: float | None = None
    fd_step: float = 0.1
    seed: int = 0

    def __post_init__(self):
        for name in ("iterations", "shots_per_eval", "repeats_per_iteration"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.learning_rate is not None and not self.learning_rate >= 0:
            raise ValueError("learning_rate must be non-negative")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def lr_for(self, ansatz: str) -> float:
        return DEFAULT_LR[ansatz] if self.learning_rate is None else self.learning_rate

    @classmethod
    def from_text(cls, text: str) -> TrainingConfig:
        """Parse flat ``key=value`` lines; ``#`` starts a comment."""
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (t.strip() for t in line.partition("="))
            if not sep or key not in types:
                raise ValueError(f"bad config line: {raw!r}")
            kwargs[key] = float(value) if key in ("learning_rate", "fd_step") else int(value)
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> TrainingConfig:
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in asdict(self).items() if v is not None)


@dataclass
class TrainingTrace:
    ansatz: str
    iterations: list[int]
    params: list[tuple[float, ...]]
    cost_mean: list[float]
    cost_std: list[float]

    def __len__(self):
        return len(self.iterations)

    @property
    def final_params(self) -> tuple[float, ...]:
        return self.params[-1]

    @property
    def final_cost(self) -> float:
        return self.cost_mean[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", *PARAM_NAMES[self.ansatz], "cost_mean", "cost_std"])
        for it, p, m, s in zip(self.iterations, self.params, self.cost_mean, self.cost_std):
            w.writerow([it, *(repr(float(v)) for v in p), repr(float(m)), repr(float(s))])
        return buf.getvalue()


def _seed_for(base: int, *keys: int) -> int:
    return int(np.random.SeedSequence([base, *keys]).generate_state(1, np.uint64)[0] >> 1)


def initial_params(ansatz: str, cfg: TrainingConfig) -> tuple[float, ...]:
    if ansatz == "gft":
        return (DEFAULT_GAMMA0,)
    rng = np.random.default_rng(_seed_for(cfg.seed, 0xA11CE))
    return tuple(float(t) for t in rng.uniform(0.0, pi / 4, size=2))


def cost_function(f: FunctionTable, ansatz: str):
    if ansatz == "gft":
        return lambda p, shots, seed: evaluate_cost_gft(f, p[0], shots, seed)
    if ansatz == "simon":
        return lambda p, shots, seed: evaluate_cost_simon(f, p[0], p[1], shots, seed)
    raise ValueError(f"unknown ansatz {ansatz!r}; choose from {ANSATZES}")


def train(
    f: FunctionTable, ansatz: str, cfg: TrainingConfig, init=None
) -> TrainingTrace:
    """Gradient descent on the mean sampled cost.

    Each iteration draws ``repeats_per_iteration`` seeds; the cost at the
    current point and both finite-difference probes reuse them.
    """
    cost = cost_function(f, ansatz)
    params = np.array(initial_params(ansatz, cfg) if init is None else init, dtype=float)
    if params.size != len(PARAM_NAMES[ansatz]):
        raise ValueError(f"{ansatz} ansatz takes {len(PARAM_NAMES[ansatz])} parameters")
    lr, h = cfg.lr_for(ansatz), cfg.fd_step
    trace = TrainingTrace(ansatz, [], [], [], [])

    def mean_cost(p, seeds):
        return float(np.mean([cost(p, cfg.shots_per_eval, s) for s in seeds]))

    for it in range(cfg.iterations):
        seeds = [_seed_for(cfg.seed, it, j) for j in range(cfg.repeats_per_iteration)]
        values = np.array([cost(params, cfg.shots_per_eval, s) for s in seeds], dtype=float)
        trace.iterations.append(it)
        trace.params.append(tuple(float(v) for v in params))
        trace.cost_mean.append(float(values.mean()))
        trace.cost_std.append(float(values.std()))
        grad = np.zeros_like(params)
        for k in range(params.size):
            step = np.zeros_like(params)
            step[k] = h
            grad[k] = (mean_cost(params + step, seeds) - mean_cost(params - step, seeds)) / (2 * h)
        params = params - lr * grad
        log.debug("iteration %d params=%s cost=%.3f", it, params, values.mean())
    return trace


def learned_hypothesis(
    f: FunctionTable, ansatz: str, params, shots: int, seed: int
) -> SymmetryHypothesis:
    """Run the encoder once at the most likely setting and decode its samples."""
    if ansatz == "gft":
        theta = int(clamp_probability(params[0]) > 0.5)
        samples = run_hsg_circuit(f, gft_group(f.n, theta), shots, seed)
    else:
        samples = run_simon_circuit(f, params, shots, seed)
    return infer_period(samples)
