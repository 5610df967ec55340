"""Finite abelian groups on bit strings and the classical period oracle.

Elements are n-bit strings. A group is a product of cyclic factors whose
orders are powers of two; the bit string is read as mixed-radix digits,
most-significant factor first, so under ``[4]`` the string ``10`` is 2.

Internally every element is an ``int`` in ``[0, 2**n)`` whose binary
expansion (MSB first) is the bit string.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

MAX_ORACLE_BITS = 8


def to_bits(x: int, width: int) -> str:
    return format(x, f"0{width}b") if width else ""


def from_bits(bits: str) -> int:
    if bits and set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    return int(bits, 2) if bits else 0


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(k) for k in self.factors)
        if not factors:
            raise ValueError("group needs at least one factor")
        for k in factors:
            if k < 2 or k & (k - 1):
                raise ValueError(f"factor {k} is not a power of two >= 2")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def parse(cls, text: str) -> GroupSpec:
        """Parse ``"2,2"`` or ``"4"``."""
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",")))
        except ValueError as exc:
            raise ValueError(f"bad group {text!r}: {exc}") from None

    def __str__(self):
        return ",".join(str(k) for k in self.factors)

    @cached_property
    def widths(self) -> tuple[int, ...]:
        return tuple(k.bit_length() - 1 for k in self.factors)

    @property
    def n_bits(self) -> int:
        return sum(self.widths)

    @property
    def order(self) -> int:
        return 1 << self.n_bits

    @cached_property
    def shifts(self) -> tuple[int, ...]:
        out, pos = [], self.n_bits
        for w in self.widths:
            pos -= w
            out.append(pos)
        return tuple(out)

    @property
    def is_elementary(self) -> bool:
        """True for ``Z2 x ... x Z2``, where addition is XOR."""
        return all(k == 2 for k in self.factors)

    # int-level arithmetic

    def digits(self, x: int) -> tuple[int, ...]:
        return tuple((x >> s) & (k - 1) for s, k in zip(self.shifts, self.factors))

    def from_digits(self, digits) -> int:
        x = 0
        for d, s, k in zip(digits, self.shifts, self.factors):
            x |= (d % k) << s
        return x

    def add(self, a: int, b: int) -> int:
        if self.is_elementary:
            return a ^ b
        out = 0
        for s, k in zip(self.shifts, self.factors):
            out |= ((((a >> s) & (k - 1)) + ((b >> s) & (k - 1))) & (k - 1)) << s
        return out

    def neg(self, a: int) -> int:
        return self.from_digits(-d for d in self.digits(a))

    def pairing(self, y: int, r: int) -> int:
        """Character pairing as an integer mod ``max(factors)``.

        Zero iff the outcome ``y`` annihilates ``r``, i.e.
        ``sum_j y_j r_j / N_j`` is an integer.
        """
        big = max(self.factors)
        total = 0
        for yd, rd, k in zip(self.digits(y), self.digits(r), self.factors):
            total += yd * rd * (big // k)
        return total % big

    def cyclic(self, r: int) -> list[int]:
        """Elements ``0, r, 2r, ...`` until the identity recurs."""
        out, x = [0], r
        while x != 0:
            out.append(x)
            x = self.add(x, r)
        return out

    def check(self, x: int) -> int:
        if not 0 <= x < self.order:
            raise ValueError(f"element {x} outside group of order {self.order}")
        return x

    def element(self, bits: str | int) -> int:
        """Validate a bit string (or int) and return it as an int."""
        if isinstance(bits, str):
            if len(bits) != self.n_bits:
                raise ValueError(
                    f"element {bits!r} has width {len(bits)}, group needs {self.n_bits}"
                )
            return from_bits(bits)
        return self.check(int(bits))

    def bits(self, x: int) -> str:
        return to_bits(x, self.n_bits)


@dataclass(frozen=True)
class FunctionTable:
    """Explicit map from n-bit inputs to m-bit outputs; ``entries[x] = f(x)``."""

    n: int
    m: int
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        if len(entries) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} entries, got {len(entries)}")
        if any(not 0 <= v < 1 << self.m for v in entries):
            raise ValueError(f"entry does not fit in {self.m} bits")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> FunctionTable:
        """Build from ``{"00": "1", ...}``."""
        n = len(next(iter(mapping)))
        m = len(next(iter(mapping.values())))
        if len(mapping) != 1 << n:
            raise ValueError("mapping must cover every input")
        entries = [0] * (1 << n)
        for x, v in mapping.items():
            if len(x) != n or len(v) != m:
                raise ValueError(f"inconsistent widths at {x!r}")
            entries[from_bits(x)] = from_bits(v)
        return cls(n, m, tuple(entries))

    def __getitem__(self, x: int) -> int:
        return self.entries[x]

    def __len__(self):
        return len(self.entries)

    def to_text(self) -> str:
        return "".join(
            f"{to_bits(x, self.n)},{to_bits(v, self.m)}\n" for x, v in enumerate(self.entries)
        )

    @classmethod
    def from_text(cls, text: str) -> FunctionTable:
        rows = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                x, v = (t.strip() for t in line.split(","))
            except ValueError:
                raise ValueError(f"line {lineno}: expected '<x bits>,<f bits>'") from None
            rows.append((x, v))
        if not rows:
            raise ValueError("empty function table")
        xs = [x for x, _ in rows]
        if xs != sorted(xs, key=from_bits) or len(set(xs)) != len(xs):
            raise ValueError("rows must be sorted by x and unique")
        return cls.from_mapping(dict(rows))

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> FunctionTable:
        return cls.from_text(Path(path).read_text())


TOY_TABLE = FunctionTable(2, 1, (1, 1, 0, 0))


def group_add(g: GroupSpec, a: str, b: str) -> str:
    return g.bits(g.add(g.element(a), g.element(b)))


def subgroup_generated(g: GroupSpec, r: str) -> set[str]:
    return {g.bits(x) for x in g.cyclic(g.element(r))}


def element_order(g: GroupSpec, r: str) -> int:
    return len(g.cyclic(g.element(r)))


def is_period(g: GroupSpec, f: FunctionTable, r: int) -> bool:
    return all(f[x] == f[g.add(x, r)] for x in range(g.order))


def all_periods(g: GroupSpec, f: FunctionTable) -> list[int]:
    """Every non-identity r with ``f(x) = f(x + r)`` for all x, ascending."""
    if f.n != g.n_bits:
        raise ValueError(f"table has n={f.n}, group needs {g.n_bits}")
    if f.n > MAX_ORACLE_BITS:
        raise ValueError(f"brute-force oracle limited to n <= {MAX_ORACLE_BITS}")
    return [r for r in range(1, g.order) if is_period(g, f, r)]


def brute_force_period(g: GroupSpec, f: FunctionTable) -> str | None:
    """Smallest non-identity period by exhaustive check, or None."""
    periods = all_periods(g, f)
    return g.bits(periods[0]) if periods else None


def planted_table(g: GroupSpec, period: str | None, m: int, seed: int) -> FunctionTable:
    """Random table constant on the cosets of ``<period>`` (random non-identity if None)."""
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, g.order)) if period is None else g.element(period)
    if r == 0:
        raise ValueError("planted period must be non-identity")
    entries = [None] * g.order
    for x in range(g.order):
        if entries[x] is None:
            v = int(rng.integers(1 << m))
            for h in g.cyclic(r):
                entries[g.add(x, h)] = v
    return FunctionTable(g.n_bits, m, tuple(entries))
