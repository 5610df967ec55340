"""Command-line entry point.

Exit status: 0 success, 1 domain failure (verification mismatch or a
``--require-converged`` run that did not converge), 2 usage or config error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import autoenc, photonic
from .compress import CompressedDatabase, compress, lookup, reconstruct, reconstruction_cost
from .groups import FunctionTable, GroupSpec, brute_force_period, planted_table, to_bits
from .hsg import SymmetryHypothesis, run_hsg_circuit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PHOTONIC_TOL = 1e-10

log = logging.getLogger("hsgcompress")


class UsageError(Exception):
    pass


def _load_db(path) -> FunctionTable:
    if path is None:
        raise UsageError("--db is required")
    try:
        return FunctionTable.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read database {path}: {exc.strerror}") from None


def _read_summary(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        key, sep, value = line.partition("=")
        if sep:
            out[key.strip()] = value.strip()
    return out


def _training_config(args) -> autoenc.TrainingConfig:
    base = autoenc.TrainingConfig.load(args.config) if args.config else autoenc.TrainingConfig()
    overrides = {
        "iterations": args.iterations,
        "shots_per_eval": args.shots,
        "repeats_per_iteration": args.repeats,
        "learning_rate": args.lr,
        "fd_step": args.fd_step,
        "seed": args.seed,
    }
    kwargs = {k: v for k, v in vars(base).items()}
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return autoenc.TrainingConfig(**kwargs)


def cmd_train(args) -> int:
    f = _load_db(args.db)
    cfg = _training_config(args)
    init = None
    if args.init:
        init = tuple(float(t) for t in args.init.split(","))
    trace = autoenc.train(f, args.ansatz, cfg, init=init)
    hyp = autoenc.learned_hypothesis(f, args.ansatz, trace.final_params, cfg.shots_per_eval, cfg.seed)
    if args.out:
        Path(args.out).write_text(trace.to_csv())
    names = autoenc.PARAM_NAMES[args.ansatz]
    params = " ".join(f"{k}={v:.6g}" for k, v in zip(names, trace.final_params))
    print(
        f"final {params} cost={trace.final_cost:g} "
        f"group={hyp.group} period={hyp.period} confidence={hyp.confidence:g}"
    )
    if args.summary:
        lines = [
            f"ansatz={args.ansatz}",
            *(f"{k}={v!r}" for k, v in zip(names, trace.final_params)),
            f"final_cost={trace.final_cost!r}",
            f"group={hyp.group}",
            f"period={hyp.period}",
            f"confidence={hyp.confidence!r}",
        ]
        Path(args.summary).write_text("\n".join(lines) + "\n")
    if args.require_converged and trace.final_cost != 0:
        print("training did not converge to zero cost", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _hypothesis(args) -> SymmetryHypothesis:
    if args.summary:
        info = _read_summary(args.summary)
        if info.get("period") in (None, "None"):
            raise UsageError(f"summary {args.summary} holds no period")
        return SymmetryHypothesis(GroupSpec.parse(info["group"]), info["period"], 1.0)
    if not (args.group and args.period):
        raise UsageError("give --group and --period, or --summary")
    return SymmetryHypothesis(GroupSpec.parse(args.group), args.period, 1.0)


def cmd_compress(args) -> int:
    db = _load_db(args.db)
    cdb = compress(db, _hypothesis(args))
    if args.out:
        cdb.save(args.out)
    print(f"entries in: {len(db)} out: {len(cdb)}")
    if args.verify:
        mismatched = sum(a != b for a, b in zip(db.entries, reconstruct(cdb).entries))
        if mismatched:
            print(
                f"verification failed: {mismatched} mismatched entries "
                f"(cost {reconstruction_cost(db, reconstruct(cdb))})",
                file=sys.stderr,
            )
            return EXIT_FAIL
        print("verified: lossless")
    return EXIT_OK


def _load_compressed(path) -> CompressedDatabase:
    if path is None:
        raise UsageError("--db is required")
    try:
        return CompressedDatabase.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def cmd_decompress(args) -> int:
    db = reconstruct(_load_compressed(args.db))
    if args.out:
        db.save(args.out)
    else:
        sys.stdout.write(db.to_text())
    return EXIT_OK


def cmd_lookup(args) -> int:
    cdb = _load_compressed(args.db)
    print(to_bits(lookup(cdb, args.x), cdb.m))
    return EXIT_OK


def cmd_hsg_sample(args) -> int:
    f = _load_db(args.db)
    if not args.group:
        raise UsageError("--group is required")
    samples = run_hsg_circuit(
        f, GroupSpec.parse(args.group), args.shots or 1024, args.seed or 0,
        measure_out_first=args.measure_out_first,
    )
    text = samples.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _simon_encoding(f: FunctionTable) -> str:
    period = brute_force_period(GroupSpec((2, 2)), f)
    return "s10" if period == "10" else "s01"


def cmd_verify_photonic(args) -> int:
    which = {"gft": "gft_fig2b", "simon": "simon_fig2d"}[args.setup]
    f = _load_db(args.db) if args.db else None
    rows = []
    if which == "gft_fig2b":
        for qwp in (photonic.QWP_OFF, photonic.QWP_ON):
            d = photonic.equivalence_distance(which, qwp, f, "fig2b", args.encoding)
            rows.append(("fig2b", qwp, None, d))
    else:
        builds = [_simon_encoding(f)] if f is not None else ["s01", "s10"]
        grid = np.linspace(0.0, 45.0, args.grid)
        for enc in builds:
            for a1 in grid:
                for a2 in grid:
                    d = photonic.equivalence_distance(which, (a1, a2), f, enc, args.encoding)
                    rows.append((enc, a1, a2, d))
    worst = max(r[-1] for r in rows)
    if args.out:
        lines = ["encoding,param_1,param_2,total_variation"]
        lines += [f"{e},{p1!r},{'' if p2 is None else repr(p2)},{d!r}" for e, p1, p2, d in rows]
        Path(args.out).write_text("\n".join(lines) + "\n")
    ok = worst < PHOTONIC_TOL
    print(f"{which}: {len(rows)} settings, max total variation {worst:.3e} -> {'pass' if ok else 'fail'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gen_db(args) -> int:
    if not args.group:
        raise UsageError("--group is required")
    g = GroupSpec.parse(args.group)
    f = planted_table(g, args.period, args.m, args.seed or 0)
    if args.out:
        f.save(args.out)
    else:
        sys.stdout.write(f.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsgc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def positive_int(text):
        value = int(text)
        if value < 1:
            raise argparse.ArgumentTypeError("must be >= 1")
        return value

    p = sub.add_parser("train", help="train an encoder ansatz on a database")
    p.add_argument("--db")
    p.add_argument("--ansatz", choices=autoenc.ANSATZES, default="gft")
    p.add_argument("--config", help="flat key=value training config")
    p.add_argument("--iterations", type=positive_int)
    p.add_argument("--shots", type=positive_int)
    p.add_argument("--repeats", type=positive_int)
    p.add_argument("--lr", type=float)
    p.add_argument("--fd-step", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--init", help="comma-separated initial parameters")
    p.add_argument("--out", help="trace CSV path")
    p.add_argument("--summary", help="write a key=value summary here")
    p.add_argument("--require-converged", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("compress", help="de-duplicate a database along a period")
    p.add_argument("--db")
    p.add_argument("--group")
    p.add_argument("--period")
    p.add_argument("--summary", help="take group and period from a training summary")
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="expand a compressed database")
    p.add_argument("--db")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("lookup", help="read one entry from a compressed database")
    p.add_argument("--db")
    p.add_argument("--x", required=True)
    p.set_defaults(func=cmd_lookup)

    p = sub.add_parser("hsg-sample", help="sample the hidden-subgroup circuit")
    p.add_argument("--db")
    p.add_argument("--group")
    p.add_argument("--shots", type=positive_int)
    p.add_argument("--seed", type=int)
    p.add_argument("--measure-out-first", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hsg_sample)

    p = sub.add_parser("verify-photonic", help="compare optical tables with the abstract circuits")
    p.add_argument("setup", choices=("gft", "simon"))
    p.add_argument("--db")
    p.add_argument("--encoding", choices=sorted(photonic.ENCODINGS), help="detector readout encoding")
    p.add_argument("--grid", type=positive_int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_photonic)

    p = sub.add_parser("gen-db", help="random database with a planted period")
    p.add_argument("--group")
    p.add_argument("--period")
    p.add_argument("--m", type=positive_int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_db)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
