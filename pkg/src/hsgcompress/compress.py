"""De-duplication of a database along the cosets of a learned period."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .groups import FunctionTable, GroupSpec, from_bits, to_bits
from .hsg import SymmetryHypothesis

Database = FunctionTable


@dataclass(frozen=True)
class CompressedDatabase:
    group: GroupSpec
    period: str
    n: int
    m: int
    representatives: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n != self.group.n_bits:
            raise ValueError("n does not match the group")
        r = self.group.element(self.period)
        if r == 0:
            raise ValueError("period must be a non-identity element")
        reps = tuple(sorted((int(x), int(v)) for x, v in self.representatives))
        object.__setattr__(self, "representatives", reps)
        size = len(self.group.cyclic(r))
        if len(reps) * size != 1 << self.n:
            raise ValueError(
                f"{len(reps)} representatives x subgroup order {size} != {1 << self.n}"
            )
        for x, v in reps:
            if coset_representative(self.group, r, x) != x:
                raise ValueError(f"{to_bits(x, self.n)} is not a coset representative")
            if not 0 <= v < 1 << self.m:
                raise ValueError(f"value {v} does not fit in {self.m} bits")

    def __len__(self):
        return len(self.representatives)

    def to_text(self) -> str:
        lines = [f"group={self.group}", f"period={self.period}", f"n={self.n}", f"m={self.m}"]
        lines += [f"{to_bits(x, self.n)},{to_bits(v, self.m)}" for x, v in self.representatives]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CompressedDatabase:
        header, rows = {}, []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, value = line.split("=", 1)
                header[key.strip()] = value.strip()
            else:
                x, v = line.split(",")
                rows.append((from_bits(x), from_bits(v)))
        missing = {"group", "period", "n", "m"} - header.keys()
        if missing:
            raise ValueError(f"missing header fields: {sorted(missing)}")
        return cls(
            GroupSpec.parse(header["group"]), header["period"],
            int(header["n"]), int(header["m"]), tuple(rows),
        )

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> CompressedDatabase:
        return cls.from_text(Path(path).read_text())


def coset(g: GroupSpec, r: int, x: int) -> list[int]:
    return [g.add(x, h) for h in g.cyclic(r)]


def coset_representative(g: GroupSpec, r: int, x: int) -> int:
    return min(coset(g, r, x))


def compress(db: Database, hyp: SymmetryHypothesis) -> CompressedDatabase:
    """Keep one (smallest member, value) pair per coset of ``<period>``.

    A wrong period is not an error: the kept value is that of the smallest
    coset member and the loss shows up on reconstruction.
    """
    g = hyp.group
    if hyp.period is None:
        raise ValueError("no period to de-duplicate along")
    if db.n != g.n_bits:
        raise ValueError(f"database has n={db.n}, group needs {g.n_bits}")
    r = g.element(hyp.period)
    if r == 0:
        raise ValueError("identity period removes nothing")
    reps = {}
    for x in range(g.order):
        rep = coset_representative(g, r, x)
        if rep == x:
            reps[x] = db[x]
    return CompressedDatabase(g, hyp.period, db.n, db.m, tuple(reps.items()))


def lookup(cdb: CompressedDatabase, x: str | int) -> int:
    """Value at ``x`` via its coset representative, without expanding the table."""
    g = cdb.group
    x = g.element(x)
    rep = coset_representative(g, g.element(cdb.period), x)
    table = dict(cdb.representatives)
    return table[rep]


def reconstruct(cdb: CompressedDatabase) -> Database:
    g = cdb.group
    r = g.element(cdb.period)
    entries = [None] * (1 << cdb.n)
    for rep, v in cdb.representatives:
        for x in coset(g, r, rep):
            if entries[x] is not None:
                raise ValueError("representatives do not form a coset partition")
            entries[x] = v
    if any(e is None for e in entries):
        raise ValueError("representatives leave inputs uncovered")
    return FunctionTable(cdb.n, cdb.m, tuple(entries))


def reconstruction_cost(db: Database, rec: Database) -> int:
    """Sum of squared differences between entries, read as unsigned ints."""
    if len(db) != len(rec):
        raise ValueError("tables differ in length")
    return sum((a - b) ** 2 for a, b in zip(db.entries, rec.entries))
